"""Bulk silver annotation of an unlabelled gloss pool, with resume support,
plus export of the train/dev files a student classifier consumes.

Checkpointing is deliberately primitive: the silver output is append-only
JSONL and a sidecar ledger lists the ids already processed, one per line.
A record is committed (written, flushed, ledgered) before the next gloss is
queried, so an interruption loses at most the gloss in flight and resuming
never re-queries a completed id.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .dataset import Corpus
from .engine import EngineConfig, classify
from .errors import ConfigError
from .labelspace import LabelSpace
from .patterns import PatternTemplate
from .scorer import ScoringBackend


@dataclass(frozen=True)
class SilverRecord:
    """One automatically labelled gloss destined for student training."""

    id: str
    gloss: str
    silver_label: str
    confidence: float
    teacher_config: str

    def __post_init__(self):
        if not 0.0 < self.confidence <= 1.0:
            raise ValueError(
                f"record {self.id!r}: confidence must be in (0, 1], got {self.confidence}"
            )


@dataclass
class AnnotationJob:
    """Progress and cost accounting for one annotation run."""

    output_path: Path
    checkpoint_path: Path
    completed: set[str] = field(default_factory=set)
    queries_issued: int = 0
    written: int = 0
    abstained: int = 0


def _checkpoint_path_for(output_path: Path) -> Path:
    return output_path.with_name(output_path.name + ".done")


def _queries_per_gloss(labels: LabelSpace, cfg: EngineConfig) -> int:
    if cfg.formulation == "mlm-constrained":
        return 1
    return labels.descriptor_count if cfg.use_descriptors else len(labels)


def annotate_pool(
    pool: Corpus,
    labels: LabelSpace,
    cfg: EngineConfig,
    backend: ScoringBackend,
    output_path: str | Path,
    resume: bool = False,
    checkpoint_path: str | Path | None = None,
    extra_patterns: list[PatternTemplate] | None = None,
) -> AnnotationJob:
    """Annotate every not-yet-completed gloss of the pool, in corpus order.

    Each non-abstained gloss appends one silver record to ``output_path``;
    abstained glosses are recorded as completed but produce no silver record.
    With ``resume`` the existing checkpoint is honored, otherwise both files
    are started fresh.  Backend failures propagate after the checkpoint has
    been flushed, so the job can be resumed.
    """
    output_path = Path(output_path)
    ckpt_path = Path(checkpoint_path) if checkpoint_path else _checkpoint_path_for(output_path)
    completed: set[str] = set()
    if resume and ckpt_path.exists():
        completed = {
            line.strip() for line in ckpt_path.read_text(encoding="utf-8").splitlines() if line.strip()
        }
        unknown = completed - {rec.id for rec in pool}
        if unknown:
            raise ConfigError(
                f"checkpoint {ckpt_path} lists {len(unknown)} id(s) not in the pool, "
                f"first: {sorted(unknown)[0]!r}"
            )
    else:
        output_path.write_text("", encoding="utf-8")
        ckpt_path.write_text("", encoding="utf-8")

    job = AnnotationJob(output_path=output_path, checkpoint_path=ckpt_path, completed=set(completed))
    per_gloss = _queries_per_gloss(labels, cfg)
    fingerprint = cfg.fingerprint()

    with output_path.open("a", encoding="utf-8") as out_fh, ckpt_path.open("a", encoding="utf-8") as ckpt_fh:
        for record in pool:
            if record.id in job.completed:
                continue
            scored = classify(record, labels, cfg, backend, extra_patterns)
            job.queries_issued += per_gloss
            if scored.abstained:
                job.abstained += 1
            else:
                silver = SilverRecord(
                    id=record.id,
                    gloss=record.gloss,
                    silver_label=scored.top_label,
                    confidence=scored.top_probability,
                    teacher_config=fingerprint,
                )
                out_fh.write(_silver_line(silver))
                out_fh.flush()
                job.written += 1
            ckpt_fh.write(record.id + "\n")
            ckpt_fh.flush()
            job.completed.add(record.id)
    return job


def _silver_line(record: SilverRecord) -> str:
    obj = {
        "id": record.id,
        "gloss": record.gloss,
        "label": record.silver_label,
        "confidence": record.confidence,
        "teacher": record.teacher_config,
    }
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def read_silver(path: str | Path) -> list[SilverRecord]:
    """Load silver records written by :func:`annotate_pool`."""
    records: list[SilverRecord] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                records.append(
                    SilverRecord(
                        id=obj["id"],
                        gloss=obj["gloss"],
                        silver_label=obj["label"],
                        confidence=float(obj["confidence"]),
                        teacher_config=obj.get("teacher", ""),
                    )
                )
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise ConfigError(f"{path}: line {lineno}: bad silver record: {exc}") from exc
    return records


def iter_silver(path: str | Path) -> Iterator[SilverRecord]:
    yield from read_silver(path)


def export_training_set(
    silver: Iterable[SilverRecord],
    out_dir: str | Path,
    split: tuple[float, float] = (0.9, 0.1),
    seed: int = 13,
    labels: LabelSpace | None = None,
) -> dict[str, Path]:
    """Shuffle silver records by seed and write train/dev JSONL plus labels.txt.

    The training files carry ``{"text": gloss, "label": name}`` objects; the
    vocabulary file lists exactly the labels present, in label-space
    declaration order when a space is given, else in order of first
    appearance.  Fractions must be positive and sum to at most 1; the
    remainder, if any, is dropped.
    """
    train_frac, dev_frac = split
    if train_frac <= 0 or dev_frac <= 0:
        raise ConfigError(f"split fractions must be positive, got {split}")
    if train_frac + dev_frac > 1.0 + 1e-9:
        raise ConfigError(f"split fractions sum to more than 1: {split}")
    records = list(silver)
    if not records:
        raise ConfigError("no silver records to export")

    present: list[str] = []
    seen: set[str] = set()
    for rec in records:
        if labels is not None and rec.silver_label not in labels:
            raise ConfigError(
                f"silver label {rec.silver_label!r} (record {rec.id!r}) is not in "
                f"label space {labels.name!r}"
            )
        if rec.silver_label not in seen:
            seen.add(rec.silver_label)
            present.append(rec.silver_label)
    if labels is not None:
        vocabulary = [name for name in labels.names if name in seen]
    else:
        vocabulary = present

    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    n = len(shuffled)
    n_train = math.floor(n * train_frac + 0.5)
    if abs(train_frac + dev_frac - 1.0) < 1e-9:
        n_dev = n - n_train
    else:
        n_dev = min(n - n_train, math.floor(n * dev_frac + 0.5))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "train": out / "train.jsonl",
        "dev": out / "dev.jsonl",
        "labels": out / "labels.txt",
    }
    _write_split(paths["train"], shuffled[:n_train])
    _write_split(paths["dev"], shuffled[n_train : n_train + n_dev])
    paths["labels"].write_text("\n".join(vocabulary) + "\n", encoding="utf-8")
    return paths


def _write_split(path: Path, records: list[SilverRecord]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps({"text": rec.gloss, "label": rec.silver_label}, ensure_ascii=False)
                + "\n"
            )
