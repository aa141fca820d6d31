"""Command-line interface.

    ladids train --labeled train.csv [--unlabeled pool.csv] --model model.json
    ladids label --labeled train.csv --unlabeled pool.csv --out labeled.csv
    ladids evaluate --model model.json --test test.csv
    ladids classify --model model.json --input traffic.csv
    ladids inspect --model model.json

Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .data import NSL_KDD, Dataset, FeatureSchema, iter_csv, load_csv, split_random, write_csv
from .errors import ConfigError, DataError, ModelError
from .evaluate import evaluate_all, report_json, report_table, time_classification
from .model import LadModel
from .pipeline import PipelineConfig, self_label, train_offline, with_overrides
from .rules import EPSILON_POLICIES, MODES, balance_score, resolve

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MODEL = 0, 1, 2, 3

log = logging.getLogger("ladids")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pipeline configuration (defaults from --config, then built-in)")
    g.add_argument("--config", type=Path, help="JSON file with pipeline settings")
    g.add_argument("--k", type=int, help="minimum pattern support for the final model (default 100)")
    g.add_argument("--max-degree", type=int, help="maximum pattern degree (default 4)")
    g.add_argument("--label-k", type=int, help="minimum pattern support for the labeling model (default 1)")
    g.add_argument("--tau0", type=float, help="lower abstention threshold (default -0.021)")
    g.add_argument("--tau1", type=float, help="upper abstention threshold (default 0.24)")
    g.add_argument("--prune-full", type=int, help="cut-point count at which a feature is ignored (default 175)")
    g.add_argument("--prune-partial", type=int, help="cut-point count at which a feature keeps levels only (default 75)")
    g.add_argument("--seed", type=int, help="seed for --split (default 0)")
    g.add_argument("--conflict-policy", choices=("error", "drop"), help="identical rows with opposite labels")
    g.add_argument("--mode", choices=MODES, help="classifier mode of the final model (default simple)")


def _add_schema_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--schema", type=Path, help="JSON feature schema (default: the 41 NSL-KDD features)")


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig()
    if args.config is not None:
        if not args.config.is_file():
            raise FileNotFoundError(f"file not found: {args.config}")
        try:
            cfg = PipelineConfig.from_dict(json.loads(args.config.read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: not valid JSON: {exc}") from exc
    return with_overrides(cfg, k=args.k, max_degree=args.max_degree, label_k=args.label_k, tau0=args.tau0,
                          tau1=args.tau1, prune_full=args.prune_full, prune_partial=args.prune_partial,
                          seed=args.seed, conflict_policy=args.conflict_policy, mode=args.mode)


def _schema(args) -> FeatureSchema:
    if getattr(args, "schema", None) is None:
        return NSL_KDD
    if not args.schema.is_file():
        raise FileNotFoundError(f"file not found: {args.schema}")
    try:
        return FeatureSchema.from_json(json.loads(args.schema.read_text()))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{args.schema}: invalid schema: {exc}") from exc


def _inputs(args, cfg: PipelineConfig) -> tuple[Dataset, Dataset | None]:
    schema = _schema(args)
    d_l = load_csv(args.labeled, True, schema)
    d_ul = None
    if args.unlabeled is not None:
        # Labels in the pool file, if present, are kept only for the labeling report.
        try:
            d_ul = load_csv(args.unlabeled, True, schema)
        except DataError:
            d_ul = Dataset(schema, tuple(iter_csv(args.unlabeled, False, schema)))
    elif args.split is not None:
        d_l, d_ul = split_random(d_l, args.split, cfg.seed)
    return d_l, d_ul


def cmd_train(args) -> int:
    cfg = _config(args)
    d_l, d_ul = _inputs(args, cfg)
    model, report, stats = train_offline(d_l, d_ul, cfg)
    model.save(args.model)
    doc = {"config": cfg.to_dict(), "training": stats.to_dict(),
           "labeling": report.to_dict() if report is not None else None}
    if args.report is not None:
        args.report.write_text(json.dumps(doc, indent=2) + "\n")
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_label(args) -> int:
    cfg = _config(args)
    d_l, d_ul = _inputs(args, cfg)
    if d_ul is None:
        raise ConfigError("label needs --unlabeled or --split")
    labeled, report = self_label(d_l, d_ul, cfg)
    write_csv(labeled, args.out)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model = LadModel.load(args.model)
    rules = model.rules if args.mode is None else model.rules.with_mode(args.mode)
    test = load_csv(args.test, True, model.schema)
    metrics = evaluate_all(rules, test)
    latency = time_classification(rules, test) if args.timing else None
    text = report_json(metrics, latency) if args.json else report_table(metrics, latency)
    print(text)
    if args.report is not None:
        args.report.write_text(report_json(metrics, latency) + "\n")
    return EXIT_OK


def cmd_classify(args) -> int:
    model = LadModel.load(args.model)
    rules = model.rules if args.mode is None else model.rules.with_mode(args.mode)
    out = sys.stdout if args.output is None else open(args.output, "w", newline="")
    try:
        w = csv.writer(out, lineterminator="\n")
        for i, obs in enumerate(iter_csv(args.input, False, model.schema)):
            verdict = resolve(rules.classify(obs), args.epsilon_policy)
            record = [i, "e" if verdict is None else verdict]
            if rules.mode != "simple":
                record.append(str(balance_score(rules, obs)))
            w.writerow(record)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_inspect(args) -> int:
    model = LadModel.load(args.model)
    if args.json:
        print(json.dumps(model.to_json(), indent=1, ensure_ascii=False))
        return EXIT_OK
    print(f"features: {len(model.schema)}  binary variables: {len(model.descriptors)}  "
          f"support set: {len(model.support_set)}  k={model.k}  max degree={model.max_degree}")
    print(f"patterns: {len(model.positive_patterns)} positive, {len(model.negative_patterns)} negative")
    print("support set:")
    for i in model.support_set:
        d = model.descriptors[i]
        print(f"  b{i + 1}: {d.describe(model.schema[d.feature].name)}")
    print("rules:")
    print(model.rules.describe(model.schema))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ladids", description="Semi-supervised LAD rule learner for intrusion detection")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="build a rule file from labeled (and optionally unlabeled) rows")
    p.add_argument("--labeled", type=Path, required=True)
    pool = p.add_mutually_exclusive_group()
    pool.add_argument("--unlabeled", type=Path, help="pool of rows to self-label")
    pool.add_argument("--split", type=int, help="draw this many labeled rows at random; the rest become the pool")
    p.add_argument("--model", type=Path, required=True, help="output rule file")
    p.add_argument("--report", type=Path, help="also write the training report here")
    _add_schema_flag(p)
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("label", help="self-label a pool of rows and write the confident ones")
    p.add_argument("--labeled", type=Path, required=True)
    pool = p.add_mutually_exclusive_group()
    pool.add_argument("--unlabeled", type=Path)
    pool.add_argument("--split", type=int)
    p.add_argument("--out", type=Path, required=True)
    _add_schema_flag(p)
    _add_config_flags(p)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("evaluate", help="score a rule file on a labeled test set")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--test", type=Path, required=True)
    p.add_argument("--mode", choices=MODES, help="override the classifier mode stored in the model")
    p.add_argument("--timing", action="store_true", help="also measure per-row classification latency")
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    p.add_argument("--report", type=Path, help="also write the JSON report here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("classify", help="classify rows, streaming one verdict per line")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--epsilon-policy", choices=EPSILON_POLICIES, default="attack",
                   help="how to report an unclassified row (default attack)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("inspect", help="print the rules of a model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"ladids: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, DataError) as exc:
        print(f"ladids: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelError as exc:
        print(f"ladids: model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
