"""Session fixtures: tiny base encoder, mock-annotated silver set, one trained run.

Everything is built on the fly so the suite runs with no network access.
The silver files come from the engine's own command line (`annotate` then
`export`), which is the only path this package consumes it through.
"""

import json
import time
from types import SimpleNamespace

import pytest

from studenthelpers import (
    NAMES,
    build_base_model,
    gen_rows,
    make_manifest,
    run_glossdom,
    write_gold_tsv,
    write_pool_tsv,
)


@pytest.fixture(scope="session")
def workspace(tmp_path_factory):
    return tmp_path_factory.mktemp("student")


@pytest.fixture(scope="session")
def base_model(workspace):
    return build_base_model(workspace / "base")


@pytest.fixture(scope="session")
def silver(workspace):
    """200 mock-annotated glosses exported into train/dev/labels files."""
    labels_json = workspace / "labels.json"
    labels_json.write_text(json.dumps({"name": "toy", "labels": NAMES}), encoding="utf-8")
    pool = workspace / "pool.tsv"
    write_pool_tsv(pool, gen_rows(200, seed=11, prefix="g"))
    silver_path = workspace / "silver.jsonl"
    run_glossdom("annotate", pool, "--backend", "mock", "--labels", labels_json,
                 "--out", silver_path)
    export_dir = workspace / "export"
    run_glossdom("export", silver_path, "--labels", labels_json,
                 "--out", export_dir, "--seed", "13")
    return SimpleNamespace(
        labels_json=labels_json,
        pool=pool,
        silver=silver_path,
        train=export_dir / "train.jsonl",
        dev=export_dir / "dev.jsonl",
        labels=export_dir / "labels.txt",
    )


@pytest.fixture(scope="session")
def trained(workspace, silver, base_model):
    """One full training run, shared by the training/predict/pipeline tests."""
    from student_trainer import load_manifest, train_student

    manifest_path = make_manifest(
        workspace / "manifest.json", silver, base_model, workspace / "model"
    )
    started = time.perf_counter()
    result = train_student(load_manifest(manifest_path))
    elapsed = time.perf_counter() - started
    return SimpleNamespace(result=result, elapsed=elapsed, manifest_path=manifest_path)


@pytest.fixture(scope="session")
def heldout(workspace, silver):
    """100 fresh glosses with the teacher's labels as gold."""
    pool = workspace / "heldout_pool.tsv"
    write_pool_tsv(pool, gen_rows(100, seed=41, prefix="h"))
    teacher_silver = workspace / "heldout_silver.jsonl"
    run_glossdom("annotate", pool, "--backend", "mock", "--labels", silver.labels_json,
                 "--out", teacher_silver)
    records = [
        json.loads(line)
        for line in teacher_silver.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    gold = workspace / "heldout_gold.tsv"
    write_gold_tsv(gold, [(r["id"], r["gloss"], r["label"]) for r in records])
    return SimpleNamespace(
        gold=gold, teacher_labels={r["id"]: r["label"] for r in records}
    )


STUDENT_CRITERIA = [
    (
        "test_criterion_student_pipeline",
        "student pipeline: 200-record mock silver set trains on CPU within "
        "budget, dev teacher-agreement >= 0.8, dump scored by the engine CLI "
        "with no adapter",
    ),
    (
        "test_criterion_full_scale_student",
        "optional integration: full-scale student micro-F1 within 1.5 points "
        "of 91.42 on the gold corpus",
    ),
]


def pytest_terminal_summary(terminalreporter):
    """Print one verdict line per pipeline criterion after the run."""
    outcomes = {}
    priority = {"passed": 1, "skipped": 2, "failed": 3, "error": 3}
    for status in ("passed", "skipped", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_student_pipeline.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if priority[status] > priority.get(outcomes.get(name), 0):
                outcomes[name] = status
    if not outcomes:
        return
    verdicts = {"passed": "PASS", "skipped": "SKIP", "failed": "FAIL", "error": "FAIL"}
    terminalreporter.write_sep("-", "student pipeline criteria")
    for test_name, description in STUDENT_CRITERIA:
        status = outcomes.get(test_name)
        verdict = verdicts.get(status, "-") if status else "-"
        suffix = "" if status else " (not run)"
        terminalreporter.write_line(f"{verdict:<5} {description}{suffix}")
