"""Compare the nine built-in sentence-pair patterns on a toy gold corpus.

Different textual scaffolds around the same label give measurably different
accuracy; this is the experiment that picked "The domain of the sentence is
about [label]" as the default.  The mock backend stands in for a model here,
so the spread between rows is driven by token overlap with each template.
"""

from glossdom import (
    Corpus,
    EngineConfig,
    GlossRecord,
    LabelSpace,
    MockBackend,
    builtin_registry,
    run_comparison,
)

LABELS = LabelSpace.from_names(["Football", "Music", "Cooking"], name="demo")

ROWS = [
    ("f1", "a red card shown in football", "Football"),
    ("f2", "a football match between two teams", "Football"),
    ("m1", "a melody of music played on piano", "Music"),
    ("m2", "music performed by an orchestra", "Music"),
    ("c1", "cooking meat in a hot oven", "Cooking"),
    ("c2", "a cooking recipe for fresh bread", "Cooking"),
]


def main():
    corpus = Corpus(
        records=tuple(GlossRecord(id=i, gloss=g, gold_label=l) for i, g, l in ROWS),
        name="demo",
    )
    backend = MockBackend()
    configs = [
        (t.id, EngineConfig(formulation="nli", pattern_id=t.id), backend)
        for t in builtin_registry()
        if t.formulation != "mlm"
    ]
    rows = run_comparison(corpus, LABELS, configs, ks=(1, 3))

    width = max(len(r.name) for r in rows)
    print(f"{'pattern':<{width}}  top-1   top-3   f1")
    for row in rows:
        r = row.report
        print(f"{row.name:<{width}}  {r.top_k[1]:.4f}  {r.top_k[3]:.4f}  {r.f1:.4f}")


if __name__ == "__main__":
    main()
