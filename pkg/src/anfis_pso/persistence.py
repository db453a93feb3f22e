"""Versioned JSON files for trained models and training reports.

Floats are written with ``repr`` precision by :mod:`json`, so a model read
back from disk predicts bit-for-bit what the in-memory model predicts.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .errors import DataError
from .fuzzy import AnfisModel, Normalization
from .trainer import TrainConfig, TrainReport

MODEL_FORMAT = "anfis-pso-model"
REPORT_FORMAT = "anfis-pso-report"
FORMAT_VERSION = 1


def config_digest(config: TrainConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def model_to_dict(
    model: AnfisModel,
    feature_names=None,
    target_name: str = "target",
    provenance: Optional[dict] = None,
) -> dict:
    names = list(feature_names) if feature_names is not None else [f"x{j}" for j in range(model.n_inputs)]
    norm = model.normalization
    return {
        "format": MODEL_FORMAT,
        "format_version": FORMAT_VERSION,
        "n_inputs": model.n_inputs,
        "feature_names": names,
        "target_name": target_name,
        "normalization": {
            "input_mean": norm.input_mean.tolist(),
            "input_scale": norm.input_scale.tolist(),
            "target_mean": norm.target_mean,
            "target_scale": norm.target_scale,
        },
        "rules": [
            {
                "centers": model.centers[i].tolist(),
                "widths": model.widths[i].tolist(),
                "consequent": model.consequents[i].tolist(),
            }
            for i in range(model.n_rules)
        ],
        "provenance": provenance or {},
    }


def model_from_dict(d: Any) -> tuple[AnfisModel, list[str], str]:
    """Parse a model document; returns ``(model, feature_names, target_name)``."""
    if not isinstance(d, dict) or d.get("format") != MODEL_FORMAT:
        raise DataError("not an anfis-pso model file")
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise DataError(f"unsupported model format version {version!r}")
    try:
        n = int(d["n_inputs"])
        nd = d["normalization"]
        norm = Normalization(
            np.array(nd["input_mean"], dtype=float),
            np.array(nd["input_scale"], dtype=float),
            float(nd["target_mean"]),
            float(nd["target_scale"]),
        )
        rules = d["rules"]
        model = AnfisModel(
            np.array([r["centers"] for r in rules], dtype=float),
            np.array([r["widths"] for r in rules], dtype=float),
            np.array([r["consequent"] for r in rules], dtype=float),
            norm,
        )
        names = [str(s) for s in d["feature_names"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed model file: {exc}") from exc
    if model.n_inputs != n or len(names) != n:
        raise DataError("model file is inconsistent: n_inputs does not match rules/feature names")
    return model, names, str(d.get("target_name", "target"))


def save_model(path, model: AnfisModel, feature_names=None, target_name: str = "target", provenance=None) -> None:
    doc = model_to_dict(model, feature_names, target_name, provenance)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_model(path) -> tuple[AnfisModel, list[str], str]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DataError(f"cannot read model {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"model {path} is not valid JSON: {exc.msg}") from exc
    return model_from_dict(doc)


def model_provenance(report: TrainReport, timestamp: Optional[str] = None) -> dict:
    return {
        "config_sha256": config_digest(report.config),
        "seed": report.config.seed,
        "trained_at": timestamp or _utc_now(),
        "n_tunable": report.n_tunable,
        "n_premise_parameters": report.n_premise_parameters,
        "initializer": "kmeans++",
    }


# ---------------------------------------------------------------- reports


def _series(columns, rows) -> dict:
    return {"columns": list(columns), "rows": rows}


def report_to_dict(report: TrainReport, feature_names, target_name: str, timestamp: Optional[str] = None) -> dict:
    """Self-describing report: config, schema, metrics and plot-ready series.

    Series:

    - ``rmse_history``: gbest training RMSE (z-scored target units) per PSO iteration;
    - ``train_predictions`` / ``test_predictions``: actual vs predicted per row;
    - ``relative_deviations``: signed percent deviation per row and split.
    """

    def pred_rows(index, actual, predicted):
        return [[int(i), float(a), float(p)] for i, a, p in zip(index, actual, predicted)]

    def dev_rows(split_name, index, metrics):
        return [
            [split_name, int(i), None if not np.isfinite(d) else float(d)]
            for i, d in zip(index, metrics.relative_deviations)
        ]

    return {
        "format": REPORT_FORMAT,
        "format_version": FORMAT_VERSION,
        "config": report.config.to_dict(),
        "schema": {"feature_names": list(feature_names), "target_name": target_name},
        "data": {
            "rows": int(len(report.train_index) + len(report.test_index)),
            "train_rows": int(len(report.train_index)),
            "test_rows": int(len(report.test_index)),
        },
        "n_tunable": report.n_tunable,
        "n_premise_parameters": report.n_premise_parameters,
        "initial_rmse": report.initial_rmse,
        "final_rmse": report.final_rmse,
        "metrics": {"train": report.train_metrics.to_dict(), "test": report.test_metrics.to_dict()},
        "series": {
            "rmse_history": _series(["iteration", "rmse"], [[k, v] for k, v in report.rmse_history]),
            "train_predictions": _series(
                ["row", "actual", "predicted"],
                pred_rows(report.train_index, report.train_actual, report.train_predicted),
            ),
            "test_predictions": _series(
                ["row", "actual", "predicted"],
                pred_rows(report.test_index, report.test_actual, report.test_predicted),
            ),
            "relative_deviations": _series(
                ["split", "row", "deviation_pct"],
                dev_rows("train", report.train_index, report.train_metrics)
                + dev_rows("test", report.test_index, report.test_metrics),
            ),
        },
        "provenance": {"config_sha256": config_digest(report.config), "generated_at": timestamp or _utc_now()},
    }


def save_report(path, report_doc: dict) -> None:
    Path(path).write_text(json.dumps(report_doc, indent=1) + "\n")


SERIES_FILES = {
    "rmse_history": "rmse_history.csv",
    "train_predictions": "train_predictions.csv",
    "test_predictions": "test_predictions.csv",
    "relative_deviations": "relative_deviations.csv",
}


def write_series_csv(report_doc: dict, directory) -> list[Path]:
    """Dump each report series as a standalone CSV for plotting tools."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for key, fname in SERIES_FILES.items():
        s = report_doc["series"][key]
        path = out / fname
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(s["columns"])
            for row in s["rows"]:
                w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
        written.append(path)
    return written
