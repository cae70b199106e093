"""Annotate an unlabelled pool into silver records and export training files.

The zero-shot classifier acts as a teacher: confident predictions become
silver labels, abstentions are dropped, and the survivors are shuffled into
train/dev JSONL files plus a label vocabulary for training a small student
classifier.  The run writes a checkpoint after every gloss, so an interrupted
job resumes with annotate_pool(..., resume=True) without re-querying.
"""

import tempfile
from pathlib import Path

from glossdom import (
    Corpus,
    EngineConfig,
    GlossRecord,
    LabelSpace,
    MockBackend,
    annotate_pool,
    export_training_set,
    read_silver,
)

LABELS = LabelSpace.from_names(["Football", "Music", "Cooking"], name="demo")

POOL = [
    "a red card shown in football",
    "a football stadium full of fans",
    "a melody of music played on piano",
    "music performed by a street band",
    "cooking meat in a hot oven",
    "a cooking recipe for fresh bread",
    "a tale of nothing in particular",
    "an object of unclear purpose",
]


def main():
    pool = Corpus(
        records=tuple(GlossRecord(id=f"g{i}", gloss=g) for i, g in enumerate(POOL)),
        name="pool",
    )
    cfg = EngineConfig(formulation="nli", threshold=0.35)

    with tempfile.TemporaryDirectory() as tmp:
        silver_path = Path(tmp) / "silver.jsonl"
        job = annotate_pool(pool, LABELS, cfg, MockBackend(), silver_path)
        print(
            f"annotated {len(job.completed)} glosses: {job.written} silver, "
            f"{job.abstained} abstained, {job.queries_issued} backend queries"
        )

        silver = read_silver(silver_path)
        for rec in silver:
            print(f"  {rec.id}: {rec.silver_label:<10} confidence {rec.confidence:.3f}")

        paths = export_training_set(silver, Path(tmp) / "training", split=(0.75, 0.25), seed=13)
        for name, path in paths.items():
            lines = path.read_text(encoding="utf-8").strip().split("\n")
            print(f"{name}: {len(lines)} lines -> {path.name}")


if __name__ == "__main__":
    main()
