"""Fine-tune a compact classifier on silver-labelled glosses.

The trainer is deliberately plain: one process, AdamW with linear warmup
and decay, a seeded shuffle per epoch.  Everything that varies between
runs lives in the :class:`~student_trainer.manifest.TrainManifest`, so a
manifest plus a seed reproduces a run.
"""

from __future__ import annotations

import json
import math
import os
import random
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer
from transformers.utils import logging as hf_logging

from .data import check_silver_labels, read_labels_file, read_silver_file
from .errors import ManifestError
from .manifest import TrainManifest


@dataclass(frozen=True)
class TrainResult:
    """Where a finished run put its model and what it measured."""

    model_dir: Path
    metrics_path: Path
    metrics: dict


def _quiet_hf() -> None:
    """Silence model-loading chatter so library output stays parseable."""
    os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")
    hf_logging.set_verbosity_error()
    hf_logging.disable_progress_bar()


def _load_base(base_model: str, labels: tuple[str, ...]):
    id2label = {i: name for i, name in enumerate(labels)}
    label2id = {name: i for i, name in enumerate(labels)}
    try:
        tokenizer = AutoTokenizer.from_pretrained(base_model)
        model = AutoModelForSequenceClassification.from_pretrained(
            base_model,
            num_labels=len(labels),
            id2label=id2label,
            label2id=label2id,
        )
    except (OSError, ValueError, RuntimeError) as exc:
        raise ManifestError(f"cannot load base model {base_model!r}: {exc}") from exc
    if model.config.num_labels != len(labels):
        raise ManifestError(
            f"base model head has {model.config.num_labels} classes, "
            f"labels file lists {len(labels)}"
        )
    return tokenizer, model


def _encode(tokenizer, examples, label_to_id, max_length):
    if not examples:
        return None, torch.empty(0, dtype=torch.long)
    enc = tokenizer(
        [ex.text for ex in examples],
        padding=True,
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    )
    gold = torch.tensor([label_to_id[ex.label] for ex in examples], dtype=torch.long)
    return enc, gold


def _linear_schedule(total_steps: int, warmup_steps: int):
    """Learning-rate factor: ramp up over the warmup, then decay to zero."""

    def factor(step: int) -> float:
        if step < warmup_steps:
            return step / max(1, warmup_steps)
        return max(0.0, (total_steps - step) / max(1, total_steps - warmup_steps))

    return factor


def _accuracy(model, enc, gold: torch.Tensor, batch_size: int) -> float:
    if enc is None or len(gold) == 0:
        return 0.0
    model.eval()
    hits = 0
    with torch.no_grad():
        for start in range(0, len(gold), batch_size):
            batch = {k: v[start : start + batch_size] for k, v in enc.items()}
            logits = model(**batch).logits
            hits += int((logits.argmax(dim=-1) == gold[start : start + batch_size]).sum())
    return hits / len(gold)


def train_student(manifest: TrainManifest) -> TrainResult:
    """Fine-tune the manifest's base model on its silver files.

    Inputs are validated before any model is loaded or any file written,
    so a label outside the labels file aborts the run cleanly.  Dev labels
    come from the zero-shot teacher that produced the silver data, so
    accuracy on dev and agreement with the teacher are the same
    measurement; the metrics file reports it under both keys.
    """
    _quiet_hf()
    labels = read_labels_file(manifest.labels)
    train = read_silver_file(manifest.train)
    dev = read_silver_file(manifest.dev)
    check_silver_labels(train, labels, str(manifest.train))
    check_silver_labels(dev, labels, str(manifest.dev))

    torch.manual_seed(manifest.seed)
    tokenizer, model = _load_base(manifest.base_model, labels)
    label_to_id = {name: i for i, name in enumerate(labels)}
    enc_train, y_train = _encode(tokenizer, train, label_to_id, manifest.max_length)
    enc_dev, y_dev = _encode(tokenizer, dev, label_to_id, manifest.max_length)

    n = len(train)
    steps_per_epoch = math.ceil(n / manifest.batch_size) if n else 0
    total_steps = manifest.epochs * steps_per_epoch
    if total_steps:
        optimizer = torch.optim.AdamW(model.parameters(), lr=manifest.learning_rate)
        warmup_steps = int(manifest.warmup_fraction * total_steps)
        scheduler = torch.optim.lr_scheduler.LambdaLR(
            optimizer, _linear_schedule(total_steps, warmup_steps)
        )
        shuffle_rng = random.Random(manifest.seed)
        model.train()
        for _ in range(manifest.epochs):
            order = list(range(n))
            shuffle_rng.shuffle(order)
            for start in range(0, n, manifest.batch_size):
                idx = order[start : start + manifest.batch_size]
                batch = {k: v[idx] for k, v in enc_train.items()}
                out = model(**batch, labels=y_train[idx])
                out.loss.backward()
                torch.nn.utils.clip_grad_norm_(model.parameters(), 1.0)
                optimizer.step()
                scheduler.step()
                optimizer.zero_grad()

    agreement = _accuracy(model, enc_dev, y_dev, manifest.batch_size)

    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(manifest.output_dir)
    tokenizer.save_pretrained(manifest.output_dir)
    metrics = {
        "dev_accuracy": agreement,
        "teacher_agreement": agreement,
        "n_train": len(train),
        "n_dev": len(dev),
    }
    metrics_path = manifest.output_dir / "metrics.json"
    metrics_path.write_text(
        json.dumps(metrics, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return TrainResult(model_dir=manifest.output_dir, metrics_path=metrics_path, metrics=metrics)
