"""Run a trained student over a gloss corpus and dump predictions.

The dump is line-delimited JSON in the same shape the zero-shot engine
writes: ``{"id", "top": [{"label", "p"}], "abstained", "config"}`` with one
top-1 entry per gloss, so the engine's evaluation command scores student
output directly.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .data import read_corpus_file, read_labels_file
from .errors import DataError, ManifestError
from .training import _quiet_hf


def _head_labels(config) -> tuple[str, ...]:
    """Class names in head order, recovered from the saved model config."""
    mapping = {int(k): v for k, v in (config.id2label or {}).items()}
    try:
        return tuple(mapping[i] for i in range(config.num_labels))
    except KeyError as exc:
        raise DataError(f"model config lacks an id2label entry for class {exc}") from exc


def predict_student(
    model_dir: str | Path,
    corpus: str | Path,
    out: str | Path,
    labels: str | Path | None = None,
    batch_size: int = 32,
    max_length: int = 128,
) -> Path:
    """Write one top-1 prediction with probability per gloss.

    When ``labels`` is given, the file must list exactly the model head's
    classes in head order; a mismatch aborts before any prediction.
    """
    _quiet_hf()
    model_dir = Path(model_dir)
    try:
        tokenizer = AutoTokenizer.from_pretrained(model_dir)
        model = AutoModelForSequenceClassification.from_pretrained(model_dir)
    except (OSError, ValueError, RuntimeError) as exc:
        raise ManifestError(f"cannot load student model from {model_dir}: {exc}") from exc
    names = _head_labels(model.config)

    if labels is not None:
        expected = read_labels_file(labels)
        if expected != names:
            for i, (want, have) in enumerate(zip(expected, names)):
                if want != have:
                    detail = f"first difference at index {i}: {want!r} vs {have!r}"
                    break
            else:
                detail = f"file lists {len(expected)} labels, head has {len(names)}"
            raise DataError(f"{labels}: labels file does not match the model head ({detail})")

    rows = read_corpus_file(corpus)
    out = Path(out)
    model.eval()
    with out.open("w", encoding="utf-8") as fh, torch.no_grad():
        for start in range(0, len(rows), batch_size):
            chunk = rows[start : start + batch_size]
            enc = tokenizer(
                [gloss for _, gloss in chunk],
                padding=True,
                truncation=True,
                max_length=max_length,
                return_tensors="pt",
            )
            probs = torch.softmax(model(**enc).logits, dim=-1)
            top_p, top_i = probs.max(dim=-1)
            for (gloss_id, _), p, i in zip(chunk, top_p.tolist(), top_i.tolist()):
                obj = {
                    "id": gloss_id,
                    "top": [{"label": names[i], "p": float(p)}],
                    "abstained": False,
                    "config": {"kind": "student"},
                }
                fh.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")
    return out
