"""Core zero-shot classification over a label space.

One gloss is fanned out into one scorer query per candidate label (or per
descriptor when descriptor scoring is on), the positive-class outputs are
max-mapped back to labels and pushed through a softmax, and the top
probability is optionally gated by an abstention threshold.  A free-form
mode probes the masked-sequence pattern without any label set.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

from .dataset import Corpus, GlossRecord
from .errors import BackendError, ConfigError
from .labelspace import LabelSpace, map_descriptor_scores
from .patterns import MLM_PATTERN_ID, DEFAULT_PATTERN_ID, PatternTemplate, get_pattern, render
from .scorer import MaskPrediction, ScoringBackend, supports

log = logging.getLogger(__name__)

ENGINE_FORMULATIONS = ("nli", "nsp", "mlm-constrained")

#: Depth of the mask-prediction request used to look up label tokens in the
#: constrained mlm mode; tokens outside the returned list score 0.
MLM_CONSTRAINED_TOP_K = 1000


@dataclass(frozen=True)
class EngineConfig:
    """Resolved settings for one classification run."""

    formulation: str
    pattern_id: str = DEFAULT_PATTERN_ID
    use_descriptors: bool = False
    threshold: float | None = None
    softmax_temperature: float = 1.0

    def __post_init__(self):
        if self.formulation not in ENGINE_FORMULATIONS:
            raise ConfigError(
                f"unknown formulation {self.formulation!r}; expected one of {ENGINE_FORMULATIONS}"
            )
        if self.threshold is not None and not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must be in [0, 1], got {self.threshold}")
        if self.softmax_temperature <= 0:
            raise ConfigError(f"softmax temperature must be positive, got {self.softmax_temperature}")

    def to_dict(self) -> dict:
        return {
            "formulation": self.formulation,
            "pattern_id": self.pattern_id,
            "use_descriptors": self.use_descriptors,
            "threshold": self.threshold,
            "softmax_temperature": self.softmax_temperature,
        }

    def fingerprint(self) -> str:
        """Stable short digest identifying this configuration."""
        blob = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class ScoredLabels:
    """Ranked probability distribution over the label space for one gloss."""

    gloss_id: str
    entries: tuple[tuple[str, float], ...]
    abstained: bool
    raw: dict[str, float] | None = None

    @property
    def top_label(self) -> str:
        return self.entries[0][0]

    @property
    def top_probability(self) -> float:
        return self.entries[0][1]


def softmax(scores: list[float], temperature: float = 1.0) -> list[float]:
    """Numerically stable softmax; shift-invariant in its inputs."""
    if temperature <= 0:
        raise ConfigError(f"softmax temperature must be positive, got {temperature}")
    scaled = [s / temperature for s in scores]
    peak = max(scaled)
    exps = [math.exp(s - peak) for s in scaled]
    total = sum(exps)
    return [e / total for e in exps]


def _resolve_template(cfg: EngineConfig, extra: list[PatternTemplate] | None) -> PatternTemplate:
    template = get_pattern(cfg.pattern_id, extra)
    if cfg.formulation == "mlm-constrained":
        if template.formulation != "mlm":
            raise ConfigError(
                f"pattern {template.id!r} is a {template.formulation} template; "
                f"mlm-constrained needs an mlm pattern"
            )
        return template
    if template.formulation == "mlm":
        raise ConfigError(
            f"pattern {template.id!r} is an mlm template; not usable with {cfg.formulation}"
        )
    return template.as_formulation(cfg.formulation)


def _positive_scores(
    cfg: EngineConfig,
    template: PatternTemplate,
    gloss_text: str,
    queries: list[str],
    backend: ScoringBackend,
) -> list[float]:
    """Score each candidate string and return its positive-class output."""
    if cfg.formulation == "nli":
        batch = [(q.first, q.second) for q in (render(template, gloss_text, c) for c in queries)]
        return [s.entailment for s in backend.score_nli(batch)]
    if cfg.formulation == "nsp":
        batch = [(q.first, q.second) for q in (render(template, gloss_text, c) for c in queries)]
        return [s.is_next for s in backend.score_nsp(batch)]
    # mlm-constrained: one deep mask query, then a per-token lookup.
    for candidate in queries:
        if len(candidate.split()) != 1:
            raise ConfigError(
                f"mlm-constrained needs single-token candidates; {candidate!r} is not one. "
                f"Use descriptor overrides or a sentence-pair formulation."
            )
    sequence = render(template, gloss_text).first
    table = {p.token.lower(): p.score for p in backend.fill_mask(sequence, MLM_CONSTRAINED_TOP_K)}
    return [table.get(candidate.lower(), 0.0) for candidate in queries]


def classify(
    gloss: GlossRecord,
    labels: LabelSpace,
    cfg: EngineConfig,
    backend: ScoringBackend,
    extra_patterns: list[PatternTemplate] | None = None,
) -> ScoredLabels:
    """Assign a ranked label distribution to one gloss.

    Each label contributes one query (its descriptors each contribute one
    when ``cfg.use_descriptors`` is set, max-mapped back to the label before
    normalization).  Positive scores go through a softmax at the configured
    temperature; ties break by label declaration order.  The result is
    flagged abstained when a threshold is set and the top probability falls
    below it.
    """
    if len(labels) == 0:
        raise ConfigError("label space is empty")
    if not supports(backend, cfg.formulation):
        raise ConfigError(
            f"backend {backend.descriptor.model_name!r} does not support {cfg.formulation}"
        )
    template = _resolve_template(cfg, extra_patterns)

    try:
        if cfg.use_descriptors:
            flat: list[str] = [d for label in labels for d in label.descriptors]
            scores = _positive_scores(cfg, template, gloss.gloss, flat, backend)
            label_scores = []
            cursor = 0
            for label in labels:
                per_descriptor = {
                    d: scores[cursor + i] for i, d in enumerate(label.descriptors)
                }
                cursor += len(label.descriptors)
                label_scores.append(map_descriptor_scores(per_descriptor, label))
        else:
            names = [label.name for label in labels]
            label_scores = _positive_scores(cfg, template, gloss.gloss, names, backend)
    except BackendError as exc:
        exc.args = (f"gloss {gloss.id!r}: {exc}",) + exc.args[1:]
        raise

    probabilities = softmax(label_scores, cfg.softmax_temperature)
    order = sorted(range(len(labels)), key=lambda i: (-probabilities[i], i))
    entries = tuple((labels.labels[i].name, probabilities[i]) for i in order)
    abstained = cfg.threshold is not None and entries[0][1] < cfg.threshold
    raw = {labels.labels[i].name: label_scores[i] for i in range(len(labels))}
    return ScoredLabels(gloss_id=gloss.id, entries=entries, abstained=abstained, raw=raw)


def classify_batch(
    corpus: Corpus,
    labels: LabelSpace,
    cfg: EngineConfig,
    backend: ScoringBackend,
    extra_patterns: list[PatternTemplate] | None = None,
    on_error: str = "raise",
) -> list[ScoredLabels]:
    """Classify every record of a corpus in order.

    ``on_error='skip'`` drops failing records with a logged warning instead
    of aborting the run.
    """
    if on_error not in ("raise", "skip"):
        raise ConfigError(f"on_error must be 'raise' or 'skip', got {on_error!r}")
    results: list[ScoredLabels] = []
    for record in corpus:
        try:
            results.append(classify(record, labels, cfg, backend, extra_patterns))
        except BackendError:
            if on_error == "raise":
                raise
            log.warning("skipping record %r after backend failure", record.id)
    return results


#: Token strings that are model plumbing rather than predictions.
_ARTIFACT_TOKENS = frozenset(
    ("eos", "bos", "<s>", "</s>", "<pad>", "<unk>", "<mask>",
     "[cls]", "[sep]", "[pad]", "[unk]", "[mask]")
)

_SUBWORD_MARKERS = ("Ġ", "▁", "##")


def _clean_token(token: str) -> str | None:
    text = token
    for marker in _SUBWORD_MARKERS:
        if text.startswith(marker):
            text = text[len(marker):]
    text = text.strip()
    if not text or text.lower() in _ARTIFACT_TOKENS:
        return None
    return text


def predict_open_topics(
    gloss: GlossRecord,
    k: int,
    backend: ScoringBackend,
    clean: bool = False,
) -> list[MaskPrediction]:
    """Free-form topic probing: top-k fillings of the masked topic slot.

    With ``clean`` set, sub-word markers are stripped, end-of-sequence
    artifacts dropped, and case-variant duplicates folded onto their
    highest-ranked spelling; survivors are re-ranked 1..n.
    """
    if k < 1:
        raise ConfigError(f"k must be positive, got {k}")
    if not supports(backend, "mlm"):
        raise ConfigError(f"backend {backend.descriptor.model_name!r} does not support mlm")
    template = get_pattern(MLM_PATTERN_ID)
    sequence = render(template, gloss.gloss).first
    predictions = backend.fill_mask(sequence, k)
    if not clean:
        return predictions
    cleaned: list[MaskPrediction] = []
    seen: set[str] = set()
    for pred in predictions:
        token = _clean_token(pred.token)
        if token is None or token.casefold() in seen:
            continue
        seen.add(token.casefold())
        cleaned.append(MaskPrediction(token=token, score=pred.score, rank=len(cleaned) + 1))
    return cleaned


# ---------------------------------------------------------------------------
# Prediction dump (JSONL)
# ---------------------------------------------------------------------------


def write_predictions(
    predictions: list[ScoredLabels],
    path: str | Path,
    config: dict | None = None,
) -> None:
    """Write predictions as JSONL, one object per gloss, config echoed per line."""
    config = config or {}
    with Path(path).open("w", encoding="utf-8") as fh:
        for pred in predictions:
            obj = {
                "id": pred.gloss_id,
                "top": [{"label": label, "p": p} for label, p in pred.entries],
                "abstained": pred.abstained,
                "config": config,
            }
            fh.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


def load_predictions(path: str | Path) -> list[ScoredLabels]:
    """Read a prediction dump back; accepts truncated entry lists (top-1 dumps)."""
    results: list[ScoredLabels] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                entries = tuple((e["label"], float(e["p"])) for e in obj["top"])
                results.append(
                    ScoredLabels(
                        gloss_id=obj["id"],
                        entries=entries,
                        abstained=bool(obj["abstained"]),
                    )
                )
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise ConfigError(f"{path}: line {lineno}: bad prediction record: {exc}") from exc
    return results
