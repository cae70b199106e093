"""Training manifests: one JSON file describing a complete training run.

A manifest names the input files (train/dev silver JSONL and the labels
file), the base encoder to fine-tune, the output directory and the
optimization hyperparameters.  Relative paths are resolved against the
manifest's own directory, so a manifest can travel with its data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ManifestError

REQUIRED_KEYS = ("train", "dev", "labels", "base_model", "output_dir")
OPTIONAL_KEYS = (
    "epochs",
    "learning_rate",
    "seed",
    "batch_size",
    "max_length",
    "warmup_fraction",
)


@dataclass(frozen=True)
class TrainManifest:
    """Everything needed to reproduce one training run."""

    train: Path
    dev: Path
    labels: Path
    base_model: str
    output_dir: Path
    epochs: int = 3
    learning_rate: float = 2e-5
    seed: int = 13
    batch_size: int = 16
    max_length: int = 128
    warmup_fraction: float = 0.06

    def __post_init__(self):
        if self.epochs < 0:
            raise ManifestError(f"epochs must be >= 0, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ManifestError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ManifestError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_length < 8:
            raise ManifestError(f"max_length must be >= 8, got {self.max_length}")
        if not 0 <= self.warmup_fraction < 1:
            raise ManifestError(
                f"warmup_fraction must be in [0, 1), got {self.warmup_fraction}"
            )


def _require_int(doc: dict, key: str, default: int) -> int:
    value = doc.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ManifestError(f"{key} must be an integer, got {value!r}")
    return value


def _require_number(doc: dict, key: str, default: float) -> float:
    value = doc.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ManifestError(f"{key} must be a number, got {value!r}")
    return float(value)


def load_manifest(path: str | Path) -> TrainManifest:
    """Read and validate a manifest JSON file.

    Path values are resolved relative to the manifest's directory.  The
    ``base_model`` value is resolved the same way when it names an existing
    local directory and is otherwise passed through untouched, so it can
    also be a model-hub identifier.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")

    missing = [key for key in REQUIRED_KEYS if key not in doc]
    if missing:
        raise ManifestError(f"{path}: missing required keys: {', '.join(missing)}")
    allowed = set(REQUIRED_KEYS) | set(OPTIONAL_KEYS)
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ManifestError(
            f"{path}: unknown keys: {', '.join(unknown)} "
            f"(allowed: {', '.join(sorted(allowed))})"
        )
    for key in REQUIRED_KEYS:
        if not isinstance(doc[key], str) or not doc[key].strip():
            raise ManifestError(f"{path}: {key} must be a non-empty string")

    base_dir = path.parent

    def resolve(value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else base_dir / p

    base_model = doc["base_model"]
    if resolve(base_model).is_dir():
        base_model = str(resolve(base_model))

    return TrainManifest(
        train=resolve(doc["train"]),
        dev=resolve(doc["dev"]),
        labels=resolve(doc["labels"]),
        base_model=base_model,
        output_dir=resolve(doc["output_dir"]),
        epochs=_require_int(doc, "epochs", 3),
        learning_rate=_require_number(doc, "learning_rate", 2e-5),
        seed=_require_int(doc, "seed", 13),
        batch_size=_require_int(doc, "batch_size", 16),
        max_length=_require_int(doc, "max_length", 128),
        warmup_fraction=_require_number(doc, "warmup_fraction", 0.06),
    )
