"""Rank domain labels for a single gloss.

Runs entirely offline against the built-in mock backend, whose scores track
lexical overlap between the gloss and each candidate hypothesis.  Swap in a
RemoteBackend pointed at a served NLI model for real zero-shot quality.
"""

from glossdom import EngineConfig, GlossRecord, LabelSpace, MockBackend, classify

LABELS = LabelSpace.from_names(
    [
        "Health and medicine",
        "Food and drink",
        "Sport and recreation",
        "Music",
        "Computing",
    ],
    name="demo",
)

GLOSSES = [
    "a facility where patients receive medicine and medical treatment",
    "a fermented drink brewed from barley and hops",
    "a red card shown to a football player during sport",
]


def main():
    backend = MockBackend()
    cfg = EngineConfig(formulation="nli", use_descriptors=True, threshold=0.3)
    print(f"label space: {', '.join(LABELS.names)}\n")

    for i, text in enumerate(GLOSSES):
        record = GlossRecord(id=f"demo-{i}", gloss=text)
        scored = classify(record, LABELS, cfg, backend)
        print(f"gloss: {text!r}")
        for label, p in scored.entries:
            marker = " <-" if label == scored.top_label else ""
            print(f"  {label:<24} {p:.4f}{marker}")
        if scored.abstained:
            print(f"  (abstained: top probability below {cfg.threshold})")
        print()


if __name__ == "__main__":
    main()
