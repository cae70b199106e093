"""Probe open-ended topics for a gloss without any candidate label set.

The gloss is wrapped into the masked sequence "Context: <gloss> Topic: [MASK]"
and the backend ranks fillings of the mask.  With a real masked language
model this surfaces free-form topic words; the mock backend ranks the gloss's
own content words, which is enough to see the mechanics.  The clean flag
strips sub-word markers and special tokens and folds case duplicates.
"""

from glossdom import GlossRecord, MockBackend, predict_open_topics

GLOSSES = [
    "a red card shown to a football player",
    "an infection of the lungs treated with antibiotics",
    "a sonata for piano and violin",
]


def main():
    backend = MockBackend()
    for i, text in enumerate(GLOSSES):
        record = GlossRecord(id=f"probe-{i}", gloss=text)
        predictions = predict_open_topics(record, k=5, backend=backend, clean=True)
        print(f"gloss: {text!r}")
        for pred in predictions:
            print(f"  #{pred.rank} {pred.token:<12} {pred.score:.4f}")
        print()


if __name__ == "__main__":
    main()
