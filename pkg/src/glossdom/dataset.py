"""Gloss corpora: loading, writing and label statistics.

A corpus is a flat list of sense definitions ("glosses"), each with an opaque
id and an optional gold domain label.  Two interchange formats are supported:

* TSV with a mandatory header row ``id<TAB>gloss<TAB>label`` (empty label
  column means unlabelled).  Glosses containing tabs or newlines cannot be
  represented in TSV and are rejected on write; use JSONL for those.
* JSONL with one object per line: ``{"id": str, "gloss": str, "label": str|null}``
  (the ``label`` key may be omitted).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterator

from .errors import CorpusFormatError

if TYPE_CHECKING:
    from .labelspace import LabelSpace

TSV_HEADER = ("id", "gloss", "label")

FORMATS = ("tsv", "jsonl")


@dataclass(frozen=True)
class GlossRecord:
    """One sense definition with an optional gold domain label."""

    id: str
    gloss: str
    gold_label: str | None = None
    lemmas: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.gloss.strip():
            raise ValueError(f"record {self.id!r}: gloss is empty")


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of gloss records with unique ids."""

    records: tuple[GlossRecord, ...]
    name: str = ""

    def __post_init__(self):
        seen: set[str] = set()
        for rec in self.records:
            if rec.id in seen:
                raise ValueError(f"duplicate record id {rec.id!r}")
            seen.add(rec.id)

    def __iter__(self) -> Iterator[GlossRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def labelled(self) -> tuple[GlossRecord, ...]:
        return tuple(r for r in self.records if r.gold_label is not None)


@dataclass(frozen=True)
class LabelDistribution:
    """Gold-label counts over a corpus; zero-count labels are kept."""

    counts: dict[str, int] = field(default_factory=dict)
    total: int = 0


def _infer_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in ("tsv", "txt"):
        return "tsv"
    if suffix in ("jsonl", "json", "ndjson"):
        return "jsonl"
    raise CorpusFormatError(
        f"cannot infer corpus format from {path!r}; pass format='tsv' or 'jsonl'"
    )


def load_corpus(path: str | Path, format: str | None = None, name: str | None = None) -> Corpus:
    """Read a corpus file into an immutable :class:`Corpus`.

    Rows without a label yield ``gold_label=None``.  Malformed rows raise
    :class:`CorpusFormatError` naming the line number and offending field;
    duplicate ids raise naming the id.  An empty file is a valid empty corpus.
    """
    path = Path(path)
    fmt = format or _infer_format(path)
    if fmt not in FORMATS:
        raise CorpusFormatError(f"unknown corpus format {fmt!r}; expected one of {FORMATS}")
    text = path.read_text(encoding="utf-8")
    corpus_name = name if name is not None else path.name
    if fmt == "tsv":
        records = _parse_tsv(text)
    else:
        records = _parse_jsonl(text)
    return Corpus(records=tuple(records), name=corpus_name)


def _parse_tsv(text: str) -> list[GlossRecord]:
    lines = text.split("\n")
    # Trailing newline produces one empty tail entry; drop it.
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or all(not ln.strip() for ln in lines):
        return []
    header = tuple(lines[0].rstrip("\r").split("\t"))
    if header != TSV_HEADER:
        expected = "\t".join(TSV_HEADER)
        raise CorpusFormatError(f"line 1: expected header {expected!r}, got {lines[0]!r}")
    records: list[GlossRecord] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\r")
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusFormatError(
                f"line {lineno}: expected 3 tab-separated fields, got {len(cols)}"
            )
        rec_id, gloss, label = cols
        if not rec_id:
            raise CorpusFormatError(f"line {lineno}: field 'id' is empty")
        if not gloss.strip():
            raise CorpusFormatError(f"line {lineno}: field 'gloss' is empty")
        if rec_id in seen:
            raise CorpusFormatError(f"line {lineno}: duplicate id {rec_id!r}")
        seen.add(rec_id)
        records.append(GlossRecord(id=rec_id, gloss=gloss, gold_label=label or None))
    return records


def _parse_jsonl(text: str) -> list[GlossRecord]:
    records: list[GlossRecord] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {lineno}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise CorpusFormatError(f"line {lineno}: expected an object, got {type(obj).__name__}")
        for key in ("id", "gloss"):
            if key not in obj:
                raise CorpusFormatError(f"line {lineno}: missing field {key!r}")
            if not isinstance(obj[key], str):
                raise CorpusFormatError(f"line {lineno}: field {key!r} must be a string")
        label = obj.get("label")
        if label is not None and not isinstance(label, str):
            raise CorpusFormatError(f"line {lineno}: field 'label' must be a string or null")
        if not obj["gloss"].strip():
            raise CorpusFormatError(f"line {lineno}: field 'gloss' is empty")
        if obj["id"] in seen:
            raise CorpusFormatError(f"line {lineno}: duplicate id {obj['id']!r}")
        seen.add(obj["id"])
        records.append(GlossRecord(id=obj["id"], gloss=obj["gloss"], gold_label=label or None))
    return records


def write_corpus(corpus: Corpus, path: str | Path, format: str | None = None) -> None:
    """Write a corpus back to disk; inverse of :func:`load_corpus`."""
    path = Path(path)
    fmt = format or _infer_format(path)
    if fmt == "tsv":
        lines = ["\t".join(TSV_HEADER)]
        for rec in corpus:
            if "\t" in rec.gloss or "\n" in rec.gloss:
                raise CorpusFormatError(
                    f"record {rec.id!r}: gloss contains tab or newline; write as JSONL instead"
                )
            lines.append(f"{rec.id}\t{rec.gloss}\t{rec.gold_label or ''}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif fmt == "jsonl":
        with path.open("w", encoding="utf-8") as fh:
            for rec in corpus:
                obj = {"id": rec.id, "gloss": rec.gloss, "label": rec.gold_label}
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    else:
        raise CorpusFormatError(f"unknown corpus format {fmt!r}; expected one of {FORMATS}")


def label_distribution(corpus: Corpus, labels: "LabelSpace") -> LabelDistribution:
    """Count gold labels against a label space.

    Unlabelled records do not contribute to the total; labels with no gold
    example stay in the map with count zero.  A gold label outside the space
    is an error (it would silently corrupt any downstream comparison).
    """
    counts = {label.name: 0 for label in labels}
    total = 0
    for rec in corpus:
        if rec.gold_label is None:
            continue
        if rec.gold_label not in counts:
            raise CorpusFormatError(
                f"record {rec.id!r}: gold label {rec.gold_label!r} is not in "
                f"label space {labels.name!r}"
            )
        counts[rec.gold_label] += 1
        total += 1
    return LabelDistribution(counts=counts, total=total)
