"""Metrics and reports: top-k accuracy, micro P/R/F1 under abstention,
row-normalized confusion matrices, threshold sweeps and multi-config
comparison runs.

Selective-prediction convention: an abstained prediction counts against
recall (its gold goes unanswered) but not against precision (no answer was
issued).  With no abstentions precision, recall and F1 coincide.  Top-k
accuracy ignores abstention flags entirely; the ranking always counts.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import Corpus
from .engine import EngineConfig, ScoredLabels, classify_batch
from .errors import EvalError, GlossdomError
from .labelspace import LabelSpace
from .scorer import ScoringBackend


@dataclass(frozen=True)
class PrfResult:
    """Micro-averaged precision/recall/F1 with the underlying tallies."""

    precision: float
    recall: float
    f1: float
    hits: int
    n_predicted: int
    n_gold: int
    precision_defined: bool = True


@dataclass(frozen=True)
class SweepPoint:
    threshold: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    """Aggregate evaluation result for one prediction set."""

    top_k: dict[int, float]
    curve: tuple[float, ...]
    precision: float
    recall: float
    f1: float
    n_evaluated: int
    n_abstained: int
    labels: tuple[str, ...]
    confusion: tuple[tuple[float, ...], ...]
    per_label: dict[str, tuple[int, float]]
    precision_defined: bool = True


def _gold_map(golds: Corpus) -> dict[str, str]:
    return {rec.id: rec.gold_label for rec in golds if rec.gold_label is not None}


def _require_gold(predictions: Sequence[ScoredLabels], golds: Corpus) -> dict[str, str]:
    gold = _gold_map(golds)
    missing = [p.gloss_id for p in predictions if p.gloss_id not in gold]
    if missing:
        raise EvalError(
            f"{len(missing)} prediction(s) have no gold label, first: {missing[0]!r}"
        )
    return gold


def topk_accuracy(
    predictions: Sequence[ScoredLabels],
    golds: Corpus,
    ks: Sequence[int],
) -> dict[int, float]:
    """Fraction of records whose gold label sits among the k best-ranked.

    Abstention flags are ignored; every prediction's ranking counts.
    """
    if not predictions:
        raise EvalError("no predictions to evaluate")
    gold = _require_gold(predictions, golds)
    depth = min(len(p.entries) for p in predictions)
    for k in ks:
        if k < 1 or k > depth:
            raise EvalError(f"k={k} out of range 1..{depth}")
    out: dict[int, float] = {}
    for k in ks:
        hits = sum(
            1 for p in predictions if gold[p.gloss_id] in {label for label, _ in p.entries[:k]}
        )
        out[k] = hits / len(predictions)
    return out


def topk_curve(predictions: Sequence[ScoredLabels], golds: Corpus) -> tuple[float, ...]:
    """Accuracy at every k from 1 up to the shallowest prediction's depth."""
    depth = min(len(p.entries) for p in predictions)
    accs = topk_accuracy(predictions, golds, list(range(1, depth + 1)))
    return tuple(accs[k] for k in range(1, depth + 1))


def _micro_core(outcomes: Sequence[tuple[str, str, bool]]) -> PrfResult:
    """outcomes: (gold, predicted-top-1, abstained) per record."""
    n_gold = len(outcomes)
    answered = [(g, p) for g, p, abstained in outcomes if not abstained]
    hits = sum(1 for g, p in answered if g == p)
    n_predicted = len(answered)
    if n_predicted == 0:
        precision, defined = 0.0, False
    else:
        precision, defined = hits / n_predicted, True
    recall = hits / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return PrfResult(
        precision=precision,
        recall=recall,
        f1=f1,
        hits=hits,
        n_predicted=n_predicted,
        n_gold=n_gold,
        precision_defined=defined,
    )


def micro_prf(predictions: Sequence[ScoredLabels], golds: Corpus) -> PrfResult:
    """Micro precision over answered records, recall over all gold records."""
    if not predictions:
        raise EvalError("no predictions to evaluate")
    gold = _require_gold(predictions, golds)
    outcomes = [(gold[p.gloss_id], p.top_label, p.abstained) for p in predictions]
    return _micro_core(outcomes)


def confusion_counts(
    predictions: Sequence[ScoredLabels],
    golds: Corpus,
    labels: LabelSpace,
) -> np.ndarray:
    """Raw gold-by-predicted tallies over top-1 answers; abstentions excluded."""
    gold = _require_gold(predictions, golds)
    index = {name: i for i, name in enumerate(labels.names)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for pred in predictions:
        if pred.abstained:
            continue
        g = gold[pred.gloss_id]
        p = pred.top_label
        if g not in index:
            raise EvalError(f"gold label {g!r} is outside label space {labels.name!r}")
        if p not in index:
            raise EvalError(f"predicted label {p!r} is outside label space {labels.name!r}")
        counts[index[g], index[p]] += 1
    return counts


def confusion_matrix(
    predictions: Sequence[ScoredLabels],
    golds: Corpus,
    labels: LabelSpace,
) -> np.ndarray:
    """Row-normalized confusion rates (rows with zero support stay zero)."""
    counts = confusion_counts(predictions, golds, labels).astype(np.float64)
    support = counts.sum(axis=1, keepdims=True)
    return np.divide(counts, support, out=np.zeros_like(counts), where=support > 0)


def threshold_sweep(
    predictions: Sequence[ScoredLabels],
    golds: Corpus,
    thresholds: Sequence[float],
) -> list[SweepPoint]:
    """Re-gate abstention from stored probabilities at each threshold.

    Thresholds are sorted and deduplicated; original abstention flags are
    ignored because gating is recomputed here.  A threshold of 0 reproduces
    the no-threshold metrics.
    """
    if not predictions:
        raise EvalError("no predictions to sweep")
    gold = _require_gold(predictions, golds)
    points = []
    for t in sorted(set(thresholds)):
        outcomes = [
            (gold[p.gloss_id], p.top_label, p.top_probability < t) for p in predictions
        ]
        prf = _micro_core(outcomes)
        points.append(
            SweepPoint(threshold=t, precision=prf.precision, recall=prf.recall, f1=prf.f1)
        )
    return points


def build_report(
    predictions: Sequence[ScoredLabels],
    golds: Corpus,
    labels: LabelSpace,
    ks: Sequence[int] = (1, 3, 5),
) -> EvalReport:
    """Assemble the full report: top-k, curve, micro metrics, confusion, per-label."""
    gold = _require_gold(predictions, golds)
    depth = min(len(p.entries) for p in predictions)
    usable_ks = [k for k in ks if 1 <= k <= depth]
    accs = topk_accuracy(predictions, golds, usable_ks) if usable_ks else {}
    curve = topk_curve(predictions, golds)
    prf = micro_prf(predictions, golds)
    counts = confusion_counts(predictions, golds, labels)
    normalized = confusion_matrix(predictions, golds, labels)
    per_label: dict[str, tuple[int, float]] = {}
    for i, name in enumerate(labels.names):
        support = int(counts[i].sum())
        hit_rate = float(normalized[i, i]) if support else 0.0
        per_label[name] = (support, hit_rate)
    return EvalReport(
        top_k=accs,
        curve=curve,
        precision=prf.precision,
        recall=prf.recall,
        f1=prf.f1,
        n_evaluated=len(predictions),
        n_abstained=sum(1 for p in predictions if p.abstained),
        labels=labels.names,
        confusion=tuple(tuple(float(x) for x in row) for row in normalized),
        per_label=per_label,
        precision_defined=prf.precision_defined,
    )


@dataclass(frozen=True)
class ComparisonRow:
    """One evaluated configuration inside a comparison run."""

    name: str
    config: dict
    report: EvalReport | None = None
    error: str | None = None


def run_comparison(
    corpus: Corpus,
    labels: LabelSpace,
    configs: Sequence[tuple[str, EngineConfig, ScoringBackend]],
    ks: Sequence[int] = (1, 3, 5),
) -> list[ComparisonRow]:
    """Evaluate several (config, backend) pairs; failures become error rows."""
    rows: list[ComparisonRow] = []
    for name, cfg, backend in configs:
        summary = dict(cfg.to_dict(), backend=backend.descriptor.model_name)
        try:
            predictions = classify_batch(corpus, labels, cfg, backend)
            report = build_report(predictions, corpus, labels, ks=ks)
            rows.append(ComparisonRow(name=name, config=summary, report=report))
        except GlossdomError as exc:
            rows.append(ComparisonRow(name=name, config=summary, error=str(exc)))
    return rows


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def report_to_dict(report: EvalReport) -> dict:
    return {
        "top_k": {str(k): v for k, v in sorted(report.top_k.items())},
        "curve": list(report.curve),
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "n_evaluated": report.n_evaluated,
        "n_abstained": report.n_abstained,
        "precision_defined": report.precision_defined,
        "labels": list(report.labels),
        "confusion": [list(row) for row in report.confusion],
        "per_label": {
            name: {"support": support, "hit_rate": hit_rate}
            for name, (support, hit_rate) in report.per_label.items()
        },
    }


def format_report_text(report: EvalReport, provenance: dict | None = None) -> str:
    """Human-readable aligned rendering of a report."""
    lines: list[str] = []
    if provenance:
        for key in sorted(provenance):
            lines.append(f"{key}: {provenance[key]}")
        lines.append("")
    lines.append("top-k accuracy")
    for k, acc in sorted(report.top_k.items()):
        lines.append(f"  k={k:<3d} {acc:.4f}")
    lines.append("")
    lines.append("micro metrics")
    lines.append(f"  precision {report.precision:.4f}" + ("" if report.precision_defined else "  (undefined: nothing answered)"))
    lines.append(f"  recall    {report.recall:.4f}")
    lines.append(f"  f1        {report.f1:.4f}")
    lines.append(f"  evaluated {report.n_evaluated}, abstained {report.n_abstained}")
    supported = [(name, s, h) for name, (s, h) in report.per_label.items() if s > 0]
    if supported:
        lines.append("")
        lines.append("per-label hit rate (top-1, answered records)")
        width = max(len(name) for name, _, _ in supported)
        for name, support, hit_rate in supported:
            lines.append(f"  {name:<{width}}  support {support:>5d}  hit-rate {hit_rate:.4f}")
    return "\n".join(lines) + "\n"


def write_report(
    report: EvalReport,
    out_dir: str | Path,
    provenance: dict | None = None,
    stem: str = "report",
) -> dict[str, Path]:
    """Emit text + JSON reports plus curve and confusion data files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "text": out / f"{stem}.txt",
        "json": out / f"{stem}.json",
        "curve": out / "topk_curve.csv",
        "confusion": out / "confusion.csv",
    }
    paths["text"].write_text(format_report_text(report, provenance), encoding="utf-8")
    payload = report_to_dict(report)
    if provenance:
        payload["provenance"] = provenance
    paths["json"].write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    with paths["curve"].open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "accuracy"])
        for k, acc in enumerate(report.curve, start=1):
            writer.writerow([k, f"{acc:.6f}"])
    with paths["confusion"].open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gold\\predicted", *report.labels])
        for name, row in zip(report.labels, report.confusion):
            writer.writerow([name, *(f"{x:.6f}" for x in row)])
    return paths


def write_sweep_csv(points: Sequence[SweepPoint], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "precision", "recall", "f1"])
        for point in points:
            writer.writerow(
                [point.threshold, f"{point.precision:.6f}", f"{point.recall:.6f}", f"{point.f1:.6f}"]
            )


def write_comparison(rows: Sequence[ComparisonRow], out_dir: str | Path) -> dict[str, Path]:
    """Emit the comparison table as aligned text, JSON and CSV."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "text": out / "comparison.txt",
        "json": out / "comparison.json",
        "csv": out / "comparison.csv",
    }
    name_width = max((len(r.name) for r in rows), default=4)
    text_lines = [f"{'name':<{name_width}}  {'top-1':>7} {'top-3':>7} {'top-5':>7} {'f1':>7}"]
    for row in rows:
        if row.report is None:
            text_lines.append(f"{row.name:<{name_width}}  error: {row.error}")
            continue
        acc = row.report.top_k
        cells = [acc.get(1), acc.get(3), acc.get(5), row.report.f1]
        rendered = " ".join(f"{c:>7.4f}" if c is not None else f"{'-':>7}" for c in cells)
        text_lines.append(f"{row.name:<{name_width}}  {rendered}")
    paths["text"].write_text("\n".join(text_lines) + "\n", encoding="utf-8")
    payload = [
        {
            "name": row.name,
            "config": row.config,
            "report": report_to_dict(row.report) if row.report else None,
            "error": row.error,
        }
        for row in rows
    ]
    paths["json"].write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    with paths["csv"].open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "top1", "top3", "top5", "precision", "recall", "f1", "error"])
        for row in rows:
            if row.report is None:
                writer.writerow([row.name, "", "", "", "", "", "", row.error])
            else:
                acc = row.report.top_k
                writer.writerow(
                    [
                        row.name,
                        *(f"{acc[k]:.6f}" if k in acc else "" for k in (1, 3, 5)),
                        f"{row.report.precision:.6f}",
                        f"{row.report.recall:.6f}",
                        f"{row.report.f1:.6f}",
                        "",
                    ]
                )
    return paths
