"""Readers for the files the student trains on and predicts over.

Three formats cross the package boundary, all produced or consumed by the
annotation engine and deliberately mirrored here instead of imported:

* silver JSONL: one ``{"text": str, "label": str}`` object per line;
* labels file: one label name per line, order defines the classifier head;
* gloss corpora: TSV with an ``id<TAB>gloss<TAB>label`` header row (empty
  label column means unlabelled) or JSONL ``{"id", "gloss", "label"?}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError


@dataclass(frozen=True)
class SilverExample:
    """One automatically labelled training example."""

    text: str
    label: str


def read_labels_file(path: str | Path) -> tuple[str, ...]:
    """Read the labels file; line order defines the head's class order."""
    path = Path(path)
    labels: list[str] = []
    seen: set[str] = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        name = line.rstrip("\r")
        if not name.strip():
            raise DataError(f"{path}: line {lineno}: empty label")
        if name in seen:
            raise DataError(f"{path}: line {lineno}: duplicate label {name!r}")
        seen.add(name)
        labels.append(name)
    if not labels:
        raise DataError(f"{path}: labels file is empty")
    return tuple(labels)


def read_silver_file(path: str | Path) -> list[SilverExample]:
    """Read silver JSONL; blank lines are skipped, bad lines name their number."""
    path = Path(path)
    examples: list[SilverExample] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: line {lineno}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise DataError(f"{path}: line {lineno}: expected an object")
        for key in ("text", "label"):
            if key not in obj or not isinstance(obj[key], str):
                raise DataError(f"{path}: line {lineno}: missing or non-string {key!r}")
        if not obj["text"].strip():
            raise DataError(f"{path}: line {lineno}: empty text")
        examples.append(SilverExample(text=obj["text"], label=obj["label"]))
    return examples


def check_silver_labels(
    examples: list[SilverExample], labels: tuple[str, ...], source: str
) -> None:
    """Reject silver examples whose label is outside the labels file."""
    known = set(labels)
    for idx, example in enumerate(examples):
        if example.label not in known:
            raise DataError(
                f"{source}: example {idx}: label {example.label!r} "
                f"is not in the labels file"
            )


def _infer_format(path: Path) -> str:
    suffix = path.suffix.lower().lstrip(".")
    if suffix in ("tsv", "txt"):
        return "tsv"
    if suffix in ("jsonl", "json", "ndjson"):
        return "jsonl"
    raise DataError(f"cannot infer corpus format from {path}")


def read_corpus_file(path: str | Path) -> list[tuple[str, str]]:
    """Read ``(id, gloss)`` pairs from a corpus file; gold labels are ignored."""
    path = Path(path)
    fmt = _infer_format(path)
    text = path.read_text(encoding="utf-8")
    rows = _parse_corpus_tsv(path, text) if fmt == "tsv" else _parse_corpus_jsonl(path, text)
    seen: set[str] = set()
    for gloss_id, gloss in rows:
        if gloss_id in seen:
            raise DataError(f"{path}: duplicate record id {gloss_id!r}")
        seen.add(gloss_id)
        if not gloss.strip():
            raise DataError(f"{path}: record {gloss_id!r}: gloss is empty")
    return rows


def _parse_corpus_tsv(path: Path, text: str) -> list[tuple[str, str]]:
    lines = [ln.rstrip("\r") for ln in text.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or all(not ln.strip() for ln in lines):
        return []
    if tuple(lines[0].split("\t")) != ("id", "gloss", "label"):
        raise DataError(f"{path}: line 1: expected header 'id\\tgloss\\tlabel'")
    rows: list[tuple[str, str]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 3:
            raise DataError(f"{path}: line {lineno}: expected 3 fields, got {len(fields)}")
        rows.append((fields[0], fields[1]))
    return rows


def _parse_corpus_jsonl(path: Path, text: str) -> list[tuple[str, str]]:
    rows: list[tuple[str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: line {lineno}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise DataError(f"{path}: line {lineno}: expected an object")
        for key in ("id", "gloss"):
            if key not in obj or not isinstance(obj[key], str):
                raise DataError(f"{path}: line {lineno}: missing or non-string {key!r}")
        rows.append((obj["id"], obj["gloss"]))
    return rows
