"""Candidate domain labels and their descriptor decompositions.

Composed labels like ``"Art, architecture and archaeology"`` are split into
single-domain descriptors (``Art``, ``Architecture``, ``Archaeology``) that
can be scored individually; a label's score is then the maximum over its
descriptors.  Single-word labels are their own sole descriptor.

Label files are JSON documents::

    {"name": "babeldomains",
     "labels": [{"name": "Music"},
                {"name": "Media", "descriptors": ["Media", "Press"]}]}

The ``descriptors`` key is optional; when absent the label name is
auto-decomposed with :func:`decompose_label`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping

from .errors import LabelSpaceError

# Component separators: literal commas and the standalone word "and".
_SEPARATOR = re.compile(r",|\band\b")


def decompose_label(name: str) -> list[str]:
    """Split a composed label into its single-domain descriptors.

    Splits on ``,`` and the standalone word ``and``, trims whitespace and
    capitalizes the first letter of each component.  A label without
    separators decomposes to itself.

    >>> decompose_label("Art, architecture and archaeology")
    ['Art', 'Architecture', 'Archaeology']
    >>> decompose_label("Music")
    ['Music']
    """
    if not name.strip():
        raise LabelSpaceError("cannot decompose an empty label")
    parts = [part.strip() for part in _SEPARATOR.split(name)]
    descriptors = [part[0].upper() + part[1:] for part in parts if part]
    if not descriptors:
        raise LabelSpaceError(f"label {name!r} decomposes to zero descriptors")
    return descriptors


@dataclass(frozen=True)
class DomainLabel:
    """A candidate domain label with its ordered descriptor set."""

    name: str
    descriptors: tuple[str, ...]

    def __post_init__(self):
        if not self.name.strip():
            raise LabelSpaceError("label name is empty")
        if not self.descriptors:
            raise LabelSpaceError(f"label {self.name!r} has no descriptors")
        if any(not d.strip() for d in self.descriptors):
            raise LabelSpaceError(f"label {self.name!r} has an empty descriptor")
        if len(set(self.descriptors)) != len(self.descriptors):
            raise LabelSpaceError(f"label {self.name!r} has duplicate descriptors")

    @classmethod
    def from_name(cls, name: str) -> "DomainLabel":
        return cls(name=name, descriptors=tuple(decompose_label(name)))


@dataclass(frozen=True)
class LabelSpace:
    """Ordered set of domain labels; declaration order breaks ties downstream."""

    labels: tuple[DomainLabel, ...]
    name: str = ""
    allow_shared_descriptors: bool = False

    def __post_init__(self):
        if not self.labels:
            raise LabelSpaceError(f"label space {self.name!r} is empty")
        names = [label.name for label in self.labels]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise LabelSpaceError(f"duplicate label names: {', '.join(dupes)}")
        if not self.allow_shared_descriptors:
            owner: dict[str, str] = {}
            for label in self.labels:
                for desc in label.descriptors:
                    if desc in owner and owner[desc] != label.name:
                        raise LabelSpaceError(
                            f"descriptor {desc!r} is shared by {owner[desc]!r} and "
                            f"{label.name!r}; set allow_shared_descriptors to permit this"
                        )
                    owner[desc] = label.name

    def __iter__(self) -> Iterator[DomainLabel]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, name: str) -> DomainLabel:
        for label in self.labels:
            if label.name == name:
                return label
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(label.name == name for label in self.labels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(label.name for label in self.labels)

    @property
    def descriptor_count(self) -> int:
        return sum(len(label.descriptors) for label in self.labels)

    @classmethod
    def from_names(cls, names: list[str] | tuple[str, ...], name: str = "") -> "LabelSpace":
        return cls(labels=tuple(DomainLabel.from_name(n) for n in names), name=name)


def map_descriptor_scores(per_descriptor: Mapping[str, float], label: DomainLabel) -> float:
    """Aggregate descriptor scores to a label score by taking the maximum."""
    missing = [d for d in label.descriptors if d not in per_descriptor]
    if missing:
        raise LabelSpaceError(
            f"label {label.name!r}: missing score for descriptor(s) {', '.join(missing)}"
        )
    return max(per_descriptor[d] for d in label.descriptors)


def load_labelspace(path: str | Path) -> LabelSpace:
    """Load a label space from its JSON file format."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LabelSpaceError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "labels" not in doc:
        raise LabelSpaceError(f"{path}: expected an object with a 'labels' list")
    entries = doc["labels"]
    if not isinstance(entries, list) or not entries:
        raise LabelSpaceError(f"{path}: 'labels' must be a non-empty list")
    labels: list[DomainLabel] = []
    for idx, entry in enumerate(entries):
        if isinstance(entry, str):
            labels.append(DomainLabel.from_name(entry))
            continue
        if not isinstance(entry, dict) or "name" not in entry:
            raise LabelSpaceError(f"{path}: labels[{idx}] must be a string or an object with 'name'")
        if "descriptors" in entry and entry["descriptors"] is not None:
            descs = entry["descriptors"]
            if not isinstance(descs, list) or not all(isinstance(d, str) for d in descs):
                raise LabelSpaceError(f"{path}: labels[{idx}].descriptors must be a list of strings")
            labels.append(DomainLabel(name=entry["name"], descriptors=tuple(descs)))
        else:
            labels.append(DomainLabel.from_name(entry["name"]))
    return LabelSpace(
        labels=tuple(labels),
        name=doc.get("name", path.stem),
        allow_shared_descriptors=bool(doc.get("allow_shared_descriptors", False)),
    )


def builtin_labelspace_path() -> Path:
    """Path of the bundled 32-domain default label file."""
    return Path(__file__).parent / "data" / "babeldomains.json"
