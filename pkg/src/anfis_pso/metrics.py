"""Regression statistics: RMSE, MSE, MARE%, MRE%, R^2 and relative deviations."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidArgumentError, ShapeError


@dataclass(frozen=True)
class Metrics:
    """Evaluation bundle.

    Relative measures are ``nan`` and ``relative_defined`` is False when any
    actual value is zero; ``r2`` is ``nan`` with ``r2_defined`` False when the
    actual values have zero variance.
    """

    rmse: float
    mse: float
    mare_pct: float
    mre_pct: float
    r2: float
    relative_deviations: np.ndarray
    relative_defined: bool = True
    r2_defined: bool = True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["relative_deviations"] = [_json_float(v) for v in self.relative_deviations]
        for key in ("mare_pct", "mre_pct", "r2"):
            d[key] = _json_float(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Metrics:
        def f(v):
            return math.nan if v is None else float(v)

        return cls(
            rmse=float(d["rmse"]),
            mse=float(d["mse"]),
            mare_pct=f(d["mare_pct"]),
            mre_pct=f(d["mre_pct"]),
            r2=f(d["r2"]),
            relative_deviations=np.array([f(v) for v in d["relative_deviations"]]),
            relative_defined=bool(d.get("relative_defined", True)),
            r2_defined=bool(d.get("r2_defined", True)),
        )


def _json_float(v):
    v = float(v)
    return v if math.isfinite(v) else None


def mse(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    return float(np.mean((a - p) ** 2))


def rmse(actual, predicted) -> float:
    return math.sqrt(mse(actual, predicted))


def relative_deviations(actual, predicted) -> np.ndarray:
    """Signed ``100 * (predicted - actual) / actual``; ``nan`` where actual is 0."""
    a, p = _pair(actual, predicted)
    out = np.full(a.shape, np.nan)
    nz = a != 0
    out[nz] = 100.0 * (p[nz] - a[nz]) / a[nz]
    return out


def _pair(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.shape != p.shape:
        raise ShapeError(f"actual has {a.size} values, predicted has {p.size}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(p))):
        raise InvalidArgumentError("metrics require finite values")
    return a, p


def compute(actual, predicted) -> Metrics:
    a, p = _pair(actual, predicted)
    if a.size < 2:
        raise InvalidArgumentError(f"metrics need at least 2 samples, got {a.size}")
    resid = a - p
    mse_ = float(np.mean(resid**2))

    relative_defined = bool(np.all(a != 0))
    if relative_defined:
        rel = resid / a
        mare = 100.0 * float(np.mean(np.abs(rel)))
        mre = 100.0 * float(np.mean(rel))
    else:
        mare = mre = math.nan
    deviations = relative_deviations(a, p)

    ss_tot = float(np.sum((a - a.mean()) ** 2))
    r2_defined = ss_tot > 0
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if r2_defined else math.nan

    return Metrics(
        rmse=math.sqrt(mse_),
        mse=mse_,
        mare_pct=mare,
        mre_pct=mre,
        r2=r2,
        relative_deviations=deviations,
        relative_defined=relative_defined,
        r2_defined=r2_defined,
    )
