"""Terminal summary: one verdict line per acceptance criterion."""

ACCEPTANCE_CRITERIA = [
    (
        "test_criterion_softmax_contract",
        "softmax contract: 1000 vectors sum to 1 within 1e-6, ordering matches independent sort, < 1 s",
    ),
    (
        "test_criterion_oracle_equivalence",
        "oracle equivalence: engine pipeline equals from-scratch reimplementation exactly (50 glosses, 5 multi-word labels)",
    ),
    (
        "test_criterion_descriptor_identity",
        "descriptor identity: single-descriptor spaces byte-identical with descriptors on/off",
    ),
    (
        "test_criterion_metric_correctness",
        "metric correctness: worked fixture P=0.875 R=0.70 F1=7/9 within 1e-9; confusion rows sum to 1; curve non-decreasing to 1.0",
    ),
    (
        "test_criterion_sweep_properties",
        "sweep properties: recall non-increasing over {0,0.05,...,0.95}; threshold-0 point has P=R=F1",
    ),
    (
        "test_criterion_random_baseline",
        "random baseline: uniform backend, 32 labels, 5000 glosses: top-k within 0.02 of k/32 for k in {1,3,5}",
    ),
    (
        "test_criterion_cli_determinism",
        "determinism: every CLI command with --backend mock --seed 13 byte-identical across two runs",
    ),
    (
        "test_criterion_resume_safety",
        "resume safety: interrupted and resumed annotation equals an uninterrupted run (50-gloss pool)",
    ),
    (
        "test_criterion_integration_patterns",
        "integration (optional): served NLI backend reproduces published pattern accuracies within 1.0",
    ),
    (
        "test_criterion_integration_descriptors_threshold",
        "integration (optional): descriptors F1 and threshold direction reproduce published results",
    ),
]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[str, str] = {}
    rank = {"failed": 3, "error": 3, "skipped": 2, "passed": 1}
    for outcome in ("passed", "skipped", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if rank.get(outcome, 0) > rank.get(outcomes.get(name), 0):
                outcomes[name] = outcome

    if not outcomes:
        return
    verdict = {"passed": "PASS", "failed": "FAIL", "error": "FAIL", "skipped": "SKIP"}
    terminalreporter.write_sep("-", "acceptance criteria")
    for test_name, description in ACCEPTANCE_CRITERIA:
        if test_name in outcomes:
            terminalreporter.write_line(f"{verdict[outcomes[test_name]]:<5} {description}")
        else:
            terminalreporter.write_line(f"{'-':<5} {description} (not run)")
