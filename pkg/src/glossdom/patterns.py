"""Textual patterns that turn a gloss and a candidate label into scorer input.

Three query shapes exist, one per scoring formulation:

* ``mlm``  -- a single masked sequence, e.g. ``Context: <gloss> Topic: [MASK]``.
  The mask stays the symbolic token ``[MASK]``; backends substitute their own
  model-specific mask spelling.
* ``nsp`` / ``nli`` -- a sentence pair: the first side is always the raw
  gloss, the second side is the template with ``[label]`` substituted.

Label strings are lower-cased before substitution by default (each template
can opt out for proper-noun descriptor sets).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import PatternError

FORMULATIONS = ("mlm", "nsp", "nli")

CONTEXT_PLACEHOLDER = "[context]"
LABEL_PLACEHOLDER = "[label]"
MASK_PLACEHOLDER = "[MASK]"

#: Formulations that render as a (first, second) sentence pair.
PAIR_FORMULATIONS = ("nsp", "nli")


@dataclass(frozen=True)
class PatternTemplate:
    """A fixed textual scaffold with placeholder tokens."""

    id: str
    formulation: str
    template: str
    lowercase_label: bool = True

    def __post_init__(self):
        if self.formulation not in FORMULATIONS:
            raise PatternError(
                f"pattern {self.id!r}: unknown formulation {self.formulation!r}"
            )
        if self.formulation == "mlm":
            if self.template.count(CONTEXT_PLACEHOLDER) != 1:
                raise PatternError(
                    f"pattern {self.id!r}: mlm template must contain {CONTEXT_PLACEHOLDER} exactly once"
                )
            if self.template.count(MASK_PLACEHOLDER) != 1:
                raise PatternError(
                    f"pattern {self.id!r}: mlm template must contain {MASK_PLACEHOLDER} exactly once"
                )
            if LABEL_PLACEHOLDER in self.template:
                raise PatternError(
                    f"pattern {self.id!r}: mlm template must not contain {LABEL_PLACEHOLDER}"
                )
        else:
            if self.template.count(LABEL_PLACEHOLDER) != 1:
                raise PatternError(
                    f"pattern {self.id!r}: {self.formulation} template must contain "
                    f"{LABEL_PLACEHOLDER} exactly once"
                )

    def as_formulation(self, formulation: str) -> "PatternTemplate":
        """Re-tag a sentence-pair template for the sibling pair formulation.

        nsp and nli templates are structurally identical (the pair is rendered
        the same way; only the backend task differs), so they may be re-tagged
        freely.  Switching to or from mlm is rejected.
        """
        if formulation == self.formulation:
            return self
        if self.formulation == "mlm" or formulation == "mlm":
            raise PatternError(
                f"pattern {self.id!r}: cannot re-tag {self.formulation} template as {formulation}"
            )
        if formulation not in FORMULATIONS:
            raise PatternError(f"unknown formulation {formulation!r}")
        return replace(self, formulation=formulation)


@dataclass(frozen=True)
class RenderedQuery:
    """A scorer-ready query produced from one template, gloss and label."""

    formulation: str
    first: str
    second: str | None = None
    label: str | None = None


def render(template: PatternTemplate, gloss: str, label: str | None = None) -> RenderedQuery:
    """Substitute gloss (and label) into a template.

    Placeholders are replaced verbatim; no other text is altered.  For
    sentence-pair formulations the first side is the raw gloss and the label
    is required; for mlm the label must be omitted.
    """
    if not gloss.strip():
        raise PatternError("cannot render an empty gloss")
    if template.formulation == "mlm":
        if label is not None:
            raise PatternError(f"pattern {template.id!r}: mlm takes no label")
        sequence = template.template.replace(CONTEXT_PLACEHOLDER, gloss)
        return RenderedQuery(formulation="mlm", first=sequence)
    if label is None:
        raise PatternError(f"pattern {template.id!r}: {template.formulation} requires a label")
    rendered_label = label.lower() if template.lowercase_label else label
    second = template.template.replace(LABEL_PLACEHOLDER, rendered_label)
    return RenderedQuery(
        formulation=template.formulation, first=gloss, second=second, label=rendered_label
    )


#: The masked-sequence probe pattern.
MLM_PATTERN_ID = "context-topic-mask"

#: Best-performing sentence-pair pattern; default for classification runs.
DEFAULT_PATTERN_ID = "domain-of-sentence"

_BUILTIN_PAIR_PATTERNS = (
    ("topic", "Topic: [label]"),
    ("domain", "Domain: [label]"),
    ("theme", "Theme: [label]"),
    ("subject", "Subject: [label]"),
    ("is-about", "Is about [label]"),
    ("topic-or-domain", "Topic or domain about [label]"),
    ("topic-of-sentence", "The topic of the sentence is about [label]"),
    ("domain-of-sentence", "The domain of the sentence is about [label]"),
    ("topic-or-domain-of-sentence", "The topic or domain of the sentence is about [label]"),
)


def builtin_registry() -> list[PatternTemplate]:
    """All built-in patterns: nine sentence-pair templates plus the mlm probe.

    Sentence-pair templates are registered under the nli formulation; use
    :meth:`PatternTemplate.as_formulation` to run them under nsp.
    """
    registry = [
        PatternTemplate(id=pid, formulation="nli", template=tpl)
        for pid, tpl in _BUILTIN_PAIR_PATTERNS
    ]
    registry.append(
        PatternTemplate(
            id=MLM_PATTERN_ID,
            formulation="mlm",
            template="Context: [context] Topic: [MASK]",
        )
    )
    return registry


def get_pattern(pattern_id: str, extra: list[PatternTemplate] | None = None) -> PatternTemplate:
    """Look up a pattern by id in the builtin registry plus optional extras."""
    pool = builtin_registry() + list(extra or [])
    for template in pool:
        if template.id == pattern_id:
            return template
    known = ", ".join(t.id for t in pool)
    raise PatternError(f"unknown pattern id {pattern_id!r}; known ids: {known}")


def load_patterns(path: str | Path) -> list[PatternTemplate]:
    """Load custom patterns from a JSON list of objects."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PatternError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise PatternError(f"{path}: expected a JSON list of pattern objects")
    templates: list[PatternTemplate] = []
    for idx, entry in enumerate(doc):
        if not isinstance(entry, dict):
            raise PatternError(f"{path}: patterns[{idx}] must be an object")
        for key in ("id", "formulation", "template"):
            if key not in entry:
                raise PatternError(f"{path}: patterns[{idx}] is missing {key!r}")
        templates.append(
            PatternTemplate(
                id=entry["id"],
                formulation=entry["formulation"],
                template=entry["template"],
                lowercase_label=bool(entry.get("lowercase_label", True)),
            )
        )
    ids = [t.id for t in templates]
    if len(set(ids)) != len(ids):
        raise PatternError(f"{path}: duplicate pattern ids")
    return templates
