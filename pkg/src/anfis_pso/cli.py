"""Command-line front end.

Subcommands::

    anfis-pso train    --config CFG --data CSV --out-model M --out-report R [--series-dir DIR]
    anfis-pso predict  --model M (--data CSV | --input v1,v2,...)
    anfis-pso evaluate --model M --data CSV
    anfis-pso gen-data --spec SPEC --rows N --seed S --out CSV

Failures print one JSON line ``{"error": kind, "key": ..., "message": ...}``
to stderr. Exit codes: 0 ok, 1 usage/config error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .data import DEFAULT_SCHEMA, Dataset, generate_synthetic, load_csv, load_generator_config, save_csv
from .errors import AnfisError, ConfigError, DataError, NumericError, ShapeError
from .fuzzy import AnfisModel, evaluate_batch
from .metrics import compute
from .persistence import (
    load_model,
    model_provenance,
    report_to_dict,
    save_model,
    save_report,
    write_series_csv,
)
from .trainer import TrainConfig, train

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

BUNDLED_DATA = "synthetic_mercury.csv"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def bundled_data_path() -> Path:
    return Path(str(resources.files("anfis_pso") / "resources" / BUNDLED_DATA))


def load_config(path: Optional[str]) -> TrainConfig:
    if path is None:
        return TrainConfig()
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}", "config") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg} (line {exc.lineno})", "config") from exc
    return TrainConfig.from_dict(raw)


def _features_for(model: AnfisModel, names: Sequence[str], ds: Dataset) -> np.ndarray:
    """Pick the model's feature columns from ``ds`` by name, else by position."""
    if set(names) <= set(ds.feature_names):
        cols = [ds.feature_names.index(n) for n in names]
        return ds.X[:, cols]
    if ds.n_features != model.n_inputs:
        raise ShapeError(f"dimension mismatch: model expects {model.n_inputs} features, found {ds.n_features}")
    return ds.X


def _read_unlabeled(path: str, model: AnfisModel, names: Sequence[str]) -> np.ndarray:
    """Rows to predict: a CSV with or without a trailing target column."""
    ds = load_csv(path)
    if set(names) <= set(ds.feature_names) or set(names) <= set(ds.feature_names) | {ds.target_name}:
        full = {n: ds.X[:, i] for i, n in enumerate(ds.feature_names)}
        full[ds.target_name] = ds.y
        return np.column_stack([full[n] for n in names])
    n_cols = ds.n_features + 1
    if n_cols == model.n_inputs:
        return np.column_stack([ds.X, ds.y])
    if ds.n_features == model.n_inputs:
        return ds.X
    raise ShapeError(f"dimension mismatch: model expects {model.n_inputs} features, found {n_cols} columns")


def cmd_train(args) -> int:
    config = load_config(args.config)
    data_path = args.data or bundled_data_path()
    ds = load_csv(data_path, target=args.target)
    report = train(ds, config)
    prov = model_provenance(report)
    save_model(args.out_model, report.model, ds.feature_names, ds.target_name, prov)
    doc = report_to_dict(report, ds.feature_names, ds.target_name, prov["trained_at"])
    save_report(args.out_report, doc)
    if args.series_dir:
        write_series_csv(doc, args.series_dir)
    tm = report.test_metrics
    print(
        f"trained {report.model.n_rules} rules; n_tunable={report.n_tunable}; "
        f"train rmse={report.train_metrics.rmse:.6g} test rmse={tm.rmse:.6g} test r2={tm.r2:.6g}"
    )
    return EXIT_OK


def cmd_predict(args) -> int:
    model, names, _ = load_model(args.model)
    if args.input is not None:
        try:
            values = [float(v) for v in args.input.split(",")]
        except ValueError:
            raise DataError(f"--input must be comma-separated numbers, got {args.input!r}") from None
        if len(values) != model.n_inputs:
            raise ShapeError(f"dimension mismatch: model expects {model.n_inputs} features, found {len(values)}")
        X = np.array([values])
    else:
        X = _read_unlabeled(args.data, model, names)
    for v in evaluate_batch(model, X):
        print(repr(float(v)))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model, names, _ = load_model(args.model)
    ds = load_csv(args.data, target=args.target)
    X = _features_for(model, names, ds)
    metrics = compute(ds.y, evaluate_batch(model, X))
    print(json.dumps(metrics.to_dict()))
    return EXIT_OK


def cmd_gen_data(args) -> int:
    if args.spec:
        schema, teacher, noise = load_generator_config(args.spec)
    else:
        schema, teacher, noise = DEFAULT_SCHEMA, "smooth_emission", 0.0
    ds = generate_synthetic(schema, args.rows, teacher, noise, args.seed)
    save_csv(ds, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="anfis-pso", description="Gaussian Sugeno ANFIS trained by PSO + least squares")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    t = sub.add_parser("train", help="train a model and write model + report files")
    t.add_argument("--config", help="JSON training config (defaults if omitted)")
    t.add_argument("--data", help="CSV with header; last column is the target (bundled data if omitted)")
    t.add_argument("--target", help="name of the target column")
    t.add_argument("--out-model", required=True)
    t.add_argument("--out-report", required=True)
    t.add_argument("--series-dir", help="also write each plot series as CSV into this directory")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="predict one value per input row")
    pr.add_argument("--model", required=True)
    g = pr.add_mutually_exclusive_group(required=True)
    g.add_argument("--data")
    g.add_argument("--input", help="single comma-separated feature vector")
    pr.set_defaults(func=cmd_predict)

    e = sub.add_parser("evaluate", help="metrics of a model on labeled data (JSON)")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--target")
    e.set_defaults(func=cmd_evaluate)

    gd = sub.add_parser("gen-data", help="write a synthetic dataset")
    gd.add_argument("--spec", help="JSON generator spec (default schema if omitted)")
    gd.add_argument("--rows", type=int, default=82)
    gd.add_argument("--seed", type=int, default=0)
    gd.add_argument("--out", required=True)
    gd.set_defaults(func=cmd_gen_data)
    return p


def _fail(kind: str, message: str, key: Optional[str] = None) -> None:
    payload = {"error": kind, "message": message}
    if key is not None:
        payload["key"] = key
    print(json.dumps(payload), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _fail("usage", str(exc))
        return EXIT_USAGE
    except ConfigError as exc:
        _fail("config", str(exc), exc.key)
        return EXIT_USAGE
    except (DataError, ShapeError) as exc:
        _fail("data", str(exc))
        return EXIT_DATA
    except (NumericError, ArithmeticError) as exc:
        _fail("numeric", str(exc))
        return EXIT_NUMERIC
    except AnfisError as exc:
        _fail("data", str(exc))
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
