"""Trade recall for precision with an abstention threshold.

Predictions whose top probability falls below the threshold are withheld:
precision is measured over answered records only, recall over all gold
records.  Raising the threshold can only shrink recall; precision usually
climbs because the weakest answers drop out first.
"""

import random

from glossdom import (
    Corpus,
    EngineConfig,
    GlossRecord,
    LabelSpace,
    MockBackend,
    classify_batch,
    threshold_sweep,
)

LABELS = LabelSpace.from_names(
    ["Association football", "Classical music", "Home cooking", "Marine geology"],
    name="demo",
)

KEYWORDS = {
    "Association football": ["association", "football"],
    "Classical music": ["classical", "music"],
    "Home cooking": ["home", "cooking"],
    "Marine geology": ["marine", "geology"],
}

FILLER = ["small", "old", "common", "typical", "process", "object", "device", "thing"]


def build_corpus(n=80, seed=13):
    """Glosses with 0, 1, or 2 label words, so confidence varies."""
    rng = random.Random(seed)
    records = []
    for i in range(n):
        label = LABELS.names[i % len(LABELS)]
        strength = rng.choice([0, 1, 1, 2, 2])
        words = rng.sample(KEYWORDS[label], k=strength)
        if rng.random() < 0.3:
            wrong = rng.choice([l for l in LABELS.names if l != label])
            words.append(rng.choice(KEYWORDS[wrong]))
        words += rng.sample(FILLER, k=6 - len(words))
        rng.shuffle(words)
        records.append(GlossRecord(id=f"g{i}", gloss="a " + " ".join(words), gold_label=label))
    return Corpus(records=tuple(records), name="demo")


def main():
    corpus = build_corpus()
    # A cool temperature sharpens the probabilities so the sweep has range.
    config = EngineConfig("nli", softmax_temperature=0.1)
    scored = classify_batch(corpus, LABELS, config, MockBackend())
    points = threshold_sweep(scored, corpus, [i * 0.05 for i in range(16)])

    print("threshold  precision  recall  f1      answered")
    for pt in points:
        answered = sum(1 for s in scored if not s.top_probability < pt.threshold)
        print(
            f"{pt.threshold:>9.2f}  {pt.precision:>9.4f}  {pt.recall:>6.4f}  {pt.f1:.4f}  {answered:>8d}"
        )


if __name__ == "__main__":
    main()
