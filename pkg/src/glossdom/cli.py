"""Command-line front door: label texts, evaluate corpora, sweep patterns
and thresholds, run bulk annotation, export student training data.

One binary with subcommands ``label | evaluate | sweep | annotate | export``.
Settings resolve with precedence flags > environment > config file > defaults;
the config file is flat ``key = value`` lines with ``#`` comments.  Exit
codes: 0 success, 2 configuration error, 3 backend error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .annotate import annotate_pool, export_training_set, read_silver
from .dataset import Corpus, GlossRecord, load_corpus
from .engine import (
    EngineConfig,
    classify,
    classify_batch,
    load_predictions,
    write_predictions,
)
from .errors import BackendError, ConfigError, GlossdomError
from .evaluation import (
    build_report,
    format_report_text,
    run_comparison,
    threshold_sweep,
    write_comparison,
    write_report,
    write_sweep_csv,
)
from .labelspace import LabelSpace, builtin_labelspace_path, load_labelspace
from .patterns import DEFAULT_PATTERN_ID, builtin_registry, load_patterns
from .scorer import ENV_BACKEND_TIMEOUT_MS, ENV_BACKEND_URL, MockBackend, RemoteBackend

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}: line {lineno}: expected key = value")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip().strip('"')
    return values


class Settings:
    """Merged view over flags, environment, config file and defaults."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file: dict[str, str] = {}
        if getattr(args, "config", None):
            self.file = _read_config_file(args.config)

    def get(self, key: str, default=None, cast=str, env: str | None = None):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if env is not None and env in os.environ:
            return cast(os.environ[env])
        if key in self.file:
            raw = self.file[key]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return cast(raw)
        return default

    def provenance(self, cfg: EngineConfig, backend) -> dict:
        return {
            "backend": backend.descriptor.kind,
            "model": backend.descriptor.model_name,
            "config": json.dumps(cfg.to_dict(), sort_keys=True),
        }


def _build_backend(settings: Settings):
    kind = settings.get("backend", default="remote")
    if kind == "mock":
        return MockBackend()
    if kind == "remote":
        url = settings.get("backend_url", env=ENV_BACKEND_URL)
        if not url:
            raise ConfigError(
                f"remote backend needs a URL: pass --backend-url, set {ENV_BACKEND_URL}, "
                f"or use --backend mock"
            )
        timeout = settings.get("timeout_ms", cast=int, env=ENV_BACKEND_TIMEOUT_MS)
        model = settings.get("model", default="default")
        return RemoteBackend(base_url=url, model_name=model, timeout_ms=timeout)
    raise ConfigError(f"unknown backend {kind!r}; expected 'remote' or 'mock'")


def _load_labels(settings: Settings) -> LabelSpace:
    path = settings.get("labels")
    if path is None:
        path = builtin_labelspace_path()
    return load_labelspace(path)


def _extra_patterns(settings: Settings):
    path = settings.get("patterns_file")
    return load_patterns(path) if path else None


def _engine_config(settings: Settings) -> EngineConfig:
    return EngineConfig(
        formulation=settings.get("formulation", default="nli"),
        pattern_id=settings.get("pattern", default=DEFAULT_PATTERN_ID),
        use_descriptors=bool(settings.get("descriptors", cast=bool, default=False)),
        threshold=settings.get("threshold", cast=float),
        softmax_temperature=settings.get("temperature", cast=float, default=1.0),
    )


def _parse_int_list(raw: str, what: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {what} list {raw!r}: {exc}") from exc


def _parse_float_list(raw: str, what: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {what} list {raw!r}: {exc}") from exc


def _dump_config(cfg: EngineConfig, backend) -> dict:
    return {
        "engine": cfg.to_dict(),
        "backend": {
            "kind": backend.descriptor.kind,
            "model": backend.descriptor.model_name,
        },
        "scores_normalized": backend.normalized,
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_label(args: argparse.Namespace) -> int:
    settings = Settings(args)
    if (args.text is None) == (args.file is None):
        raise ConfigError("pass exactly one of --text or --file")
    if args.text is not None and not args.text.strip():
        raise ConfigError("empty gloss")
    backend = _build_backend(settings)
    labels = _load_labels(settings)
    cfg = _engine_config(settings)
    extra = _extra_patterns(settings)

    if args.text is not None:
        record = GlossRecord(id="query", gloss=args.text)
        scored = classify(record, labels, cfg, backend, extra)
        top = args.top or len(scored.entries)
        width = max(len(label) for label, _ in scored.entries[:top])
        for label, p in scored.entries[:top]:
            print(f"{label:<{width}}  {p:.4f}")
        if scored.abstained:
            print(f"(abstained: top probability below threshold {cfg.threshold})")
        return EXIT_OK

    corpus = load_corpus(args.file)
    predictions = classify_batch(corpus, labels, cfg, backend, extra)
    dump_cfg = _dump_config(cfg, backend)
    if args.output:
        write_predictions(predictions, args.output, dump_cfg)
    else:
        for pred in predictions:
            obj = {
                "id": pred.gloss_id,
                "top": [{"label": label, "p": p} for label, p in pred.entries],
                "abstained": pred.abstained,
                "config": dump_cfg,
            }
            print(json.dumps(obj, sort_keys=True, ensure_ascii=False))
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    settings = Settings(args)
    corpus = load_corpus(args.corpus)
    labels = _load_labels(settings)
    cfg = _engine_config(settings)
    ks = _parse_int_list(settings.get("topk", default="1,3,5"), "topk")

    if args.predictions:
        predictions = load_predictions(args.predictions)
        provenance = {"predictions": str(args.predictions)}
        depth = min((len(p.entries) for p in predictions), default=0)
        ks = [k for k in ks if k <= depth]
    else:
        backend = _build_backend(settings)
        extra = _extra_patterns(settings)
        predictions = classify_batch(corpus, labels, cfg, backend, extra)
        provenance = settings.provenance(cfg, backend)
        if args.dump:
            write_predictions(predictions, args.dump, _dump_config(cfg, backend))

    report = build_report(predictions, corpus, labels, ks=ks)
    sys.stdout.write(format_report_text(report, provenance))
    if args.out:
        write_report(report, args.out, provenance)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    settings = Settings(args)
    if not args.patterns and not args.thresholds:
        raise ConfigError("pass --patterns and/or --thresholds")
    corpus = load_corpus(args.corpus)
    labels = _load_labels(settings)
    backend = _build_backend(settings)
    extra = _extra_patterns(settings)
    base_cfg = _engine_config(settings)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.patterns:
        if args.patterns == "all":
            pattern_ids = [
                t.id for t in builtin_registry() if t.formulation != "mlm"
            ] + [t.id for t in (extra or []) if t.formulation != "mlm"]
        else:
            pattern_ids = [p.strip() for p in args.patterns.split(",") if p.strip()]
        configs = []
        for pid in pattern_ids:
            cfg = EngineConfig(
                formulation=base_cfg.formulation,
                pattern_id=pid,
                use_descriptors=base_cfg.use_descriptors,
                threshold=base_cfg.threshold,
                softmax_temperature=base_cfg.softmax_temperature,
            )
            configs.append((pid, cfg, backend))
        rows = run_comparison(corpus, labels, configs)
        paths = write_comparison(rows, out_dir)
        sys.stdout.write(paths["text"].read_text(encoding="utf-8"))

    if args.thresholds:
        thresholds = _parse_float_list(args.thresholds, "threshold")
        predictions = classify_batch(corpus, labels, base_cfg, backend, extra)
        points = threshold_sweep(predictions, corpus, thresholds)
        sweep_path = out_dir / "sweep.csv"
        write_sweep_csv(points, sweep_path)
        for point in points:
            print(
                f"threshold {point.threshold:.3f}  precision {point.precision:.4f}  "
                f"recall {point.recall:.4f}  f1 {point.f1:.4f}"
            )
    return EXIT_OK


def cmd_annotate(args: argparse.Namespace) -> int:
    settings = Settings(args)
    pool = load_corpus(args.pool)
    labels = _load_labels(settings)
    backend = _build_backend(settings)
    cfg = _engine_config(settings)
    extra = _extra_patterns(settings)
    job = annotate_pool(
        pool,
        labels,
        cfg,
        backend,
        output_path=args.out,
        resume=bool(args.resume),
        checkpoint_path=args.checkpoint,
        extra_patterns=extra,
    )
    print(
        f"completed {len(job.completed)}/{len(pool)} glosses: "
        f"{job.written} silver records written, {job.abstained} abstained, "
        f"{job.queries_issued} backend queries this run"
    )
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    settings = Settings(args)
    silver = read_silver(args.silver)
    fractions = _parse_float_list(settings.get("split", default="0.9,0.1"), "split")
    if len(fractions) != 2:
        raise ConfigError(f"split needs exactly two fractions, got {fractions}")
    labels = None
    if settings.get("labels"):
        labels = _load_labels(settings)
    seed = settings.get("seed", cast=int, default=13)
    paths = export_training_set(
        silver,
        out_dir=args.out,
        split=(fractions[0], fractions[1]),
        seed=seed,
        labels=labels,
    )
    n_train = sum(1 for _ in paths["train"].open(encoding="utf-8"))
    n_dev = sum(1 for _ in paths["dev"].open(encoding="utf-8"))
    print(f"exported {n_train} train / {n_dev} dev records (seed {seed})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=("remote", "mock"), default=None,
                        help="scoring backend (default: remote)")
    common.add_argument("--backend-url", dest="backend_url", default=None,
                        help=f"remote endpoint base URL (env {ENV_BACKEND_URL})")
    common.add_argument("--model", default=None, help="remote model name")
    common.add_argument("--timeout-ms", dest="timeout_ms", type=int, default=None,
                        help=f"per-request timeout (env {ENV_BACKEND_TIMEOUT_MS})")
    common.add_argument("--config", default=None, help="key = value settings file")
    common.add_argument("--labels", default=None,
                        help="label space JSON file (default: bundled 32-domain set)")
    common.add_argument("--pattern", default=None,
                        help=f"pattern id (default: {DEFAULT_PATTERN_ID})")
    common.add_argument("--patterns-file", dest="patterns_file", default=None,
                        help="JSON file with additional pattern templates")
    common.add_argument("--formulation", choices=("nli", "nsp", "mlm-constrained"),
                        default=None, help="scoring formulation (default: nli)")
    common.add_argument("--descriptors", action=argparse.BooleanOptionalAction,
                        default=None, help="score descriptors and max-map per label")
    common.add_argument("--threshold", type=float, default=None,
                        help="abstention threshold on the top probability")
    common.add_argument("--temperature", type=float, default=None,
                        help="softmax temperature (default: 1.0)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized steps (default: 13)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glossdom",
        description="Zero-shot domain labelling of lexical glosses.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()

    p_label = sub.add_parser("label", parents=[common],
                             help="rank domain labels for a text or corpus")
    p_label.add_argument("--text", default=None, help="single gloss to label")
    p_label.add_argument("--file", default=None, help="corpus file to label")
    p_label.add_argument("--top", type=int, default=None, help="show only the best N labels")
    p_label.add_argument("--output", default=None, help="prediction dump path (JSONL)")
    p_label.set_defaults(func=cmd_label)

    p_eval = sub.add_parser("evaluate", parents=[common],
                            help="score a gold corpus and report metrics")
    p_eval.add_argument("corpus", help="gold corpus (TSV or JSONL)")
    p_eval.add_argument("--topk", default=None, help="comma-separated k values (default 1,3,5)")
    p_eval.add_argument("--out", default=None, help="directory for report files")
    p_eval.add_argument("--dump", default=None, help="also write the prediction dump here")
    p_eval.add_argument("--predictions", default=None,
                        help="evaluate an existing prediction dump instead of classifying")
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="compare patterns and/or sweep thresholds")
    p_sweep.add_argument("corpus", help="gold corpus (TSV or JSONL)")
    p_sweep.add_argument("--patterns", default=None,
                         help="'all' or comma-separated pattern ids to compare")
    p_sweep.add_argument("--thresholds", default=None,
                         help="comma-separated thresholds to sweep")
    p_sweep.add_argument("--out", required=True, help="directory for result files")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ann = sub.add_parser("annotate", parents=[common],
                           help="bulk-annotate an unlabelled pool into silver records")
    p_ann.add_argument("pool", help="unlabelled corpus (TSV or JSONL)")
    p_ann.add_argument("--out", required=True, help="silver output file (JSONL)")
    p_ann.add_argument("--resume", action="store_true", help="continue from the checkpoint")
    p_ann.add_argument("--checkpoint", default=None,
                       help="checkpoint path (default: <out>.done)")
    p_ann.set_defaults(func=cmd_annotate)

    p_exp = sub.add_parser("export", parents=[common],
                           help="split silver records into student training files")
    p_exp.add_argument("silver", help="silver JSONL from 'annotate'")
    p_exp.add_argument("--out", required=True, help="directory for train/dev/labels files")
    p_exp.add_argument("--split", default=None, help="train,dev fractions (default 0.9,0.1)")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except GlossdomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
