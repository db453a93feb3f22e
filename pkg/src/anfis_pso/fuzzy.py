"""Takagi-Sugeno fuzzy inference with Gaussian premises.

The five network layers are:

1. fuzzification: one Gaussian membership grade per (rule, input);
2. rule firing strength: product of a rule's membership grades;
3. normalization: each strength divided by the sum over all rules;
4. consequents: normalized strength times the rule's linear output;
5. summation: the model output is the sum of layer-4 outputs.

Premise parameters and consequents live in z-scored coordinates. Public
functions take inputs in original units and apply the model's
:class:`Normalization` themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateFiringError, InvalidArgumentError, ShapeError

#: Smallest admissible Gaussian width, in z-scored feature units.
WIDTH_FLOOR = 1e-6


@dataclass(frozen=True)
class GaussianMF:
    """Gaussian membership function ``exp(-(x - center)**2 / (2 * width**2))``."""

    center: float
    width: float

    def __post_init__(self):
        if not math.isfinite(self.center):
            raise InvalidArgumentError(f"center must be finite, got {self.center!r}")
        if not (math.isfinite(self.width) and self.width > 0):
            raise InvalidArgumentError(f"width must be finite and > 0, got {self.width!r}")

    def __call__(self, x: float) -> float:
        return membership(self, x)


@dataclass(frozen=True)
class Rule:
    """One fuzzy if-then rule.

    ``consequent`` holds one linear coefficient per input followed by the bias.
    """

    premise: tuple[GaussianMF, ...]
    consequent: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "premise", tuple(self.premise))
        object.__setattr__(self, "consequent", tuple(float(c) for c in self.consequent))
        if not self.premise:
            raise ShapeError("rule premise must not be empty")
        if len(self.consequent) != len(self.premise) + 1:
            raise ShapeError(
                f"consequent length {len(self.consequent)} != n_inputs + 1 = {len(self.premise) + 1}"
            )


@dataclass(frozen=True)
class Normalization:
    """Per-feature z-score statistics for the inputs and the target."""

    input_mean: np.ndarray
    input_scale: np.ndarray
    target_mean: float = 0.0
    target_scale: float = 1.0

    def __post_init__(self):
        mean = _frozen(self.input_mean)
        scale = _frozen(self.input_scale)
        if mean.ndim != 1 or mean.shape != scale.shape:
            raise ShapeError("input_mean and input_scale must be 1-D of equal length")
        if not (np.all(np.isfinite(scale)) and np.all(scale > 0)):
            raise InvalidArgumentError("input scales must be finite and > 0")
        if not np.all(np.isfinite(mean)):
            raise InvalidArgumentError("input means must be finite")
        if not (math.isfinite(self.target_scale) and self.target_scale > 0):
            raise InvalidArgumentError("target_scale must be finite and > 0")
        if not math.isfinite(self.target_mean):
            raise InvalidArgumentError("target_mean must be finite")
        object.__setattr__(self, "input_mean", mean)
        object.__setattr__(self, "input_scale", scale)
        object.__setattr__(self, "target_mean", float(self.target_mean))
        object.__setattr__(self, "target_scale", float(self.target_scale))

    @classmethod
    def identity(cls, n_inputs: int) -> Normalization:
        return cls(np.zeros(n_inputs), np.ones(n_inputs), 0.0, 1.0)

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray | None = None) -> Normalization:
        """Estimate statistics from data. Constant columns get scale 1."""
        X = np.asarray(X, dtype=float)
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        if y is None:
            return cls(mean, scale)
        y = np.asarray(y, dtype=float)
        y_scale = float(y.std())
        return cls(mean, scale, float(y.mean()), y_scale if y_scale > 0 else 1.0)

    @property
    def n_inputs(self) -> int:
        return self.input_mean.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.input_mean) / self.input_scale

    def transform_target(self, y: np.ndarray) -> np.ndarray:
        return (y - self.target_mean) / self.target_scale

    def inverse_target(self, z: np.ndarray) -> np.ndarray:
        return z * self.target_scale + self.target_mean

    def __eq__(self, other):
        if not isinstance(other, Normalization):
            return NotImplemented
        return (
            np.array_equal(self.input_mean, other.input_mean)
            and np.array_equal(self.input_scale, other.input_scale)
            and self.target_mean == other.target_mean
            and self.target_scale == other.target_scale
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class AnfisModel:
    """Immutable first-order Sugeno model with Gaussian premises.

    Parameters are held as arrays for vectorized evaluation:

    - ``centers``, ``widths``: shape ``(n_rules, n_inputs)``
    - ``consequents``: shape ``(n_rules, n_inputs + 1)``, bias last
    """

    centers: np.ndarray
    widths: np.ndarray
    consequents: np.ndarray
    normalization: Normalization = field(default=None)

    def __post_init__(self):
        centers = _frozen(self.centers)
        widths = _frozen(self.widths)
        consequents = _frozen(self.consequents)
        if centers.ndim != 2 or centers.shape[0] == 0 or centers.shape[1] == 0:
            raise ShapeError(f"centers must be a non-empty 2-D array, got shape {centers.shape}")
        n_rules, n_inputs = centers.shape
        if widths.shape != centers.shape:
            raise ShapeError(f"widths shape {widths.shape} != centers shape {centers.shape}")
        if consequents.shape != (n_rules, n_inputs + 1):
            raise ShapeError(
                f"consequents shape {consequents.shape} != {(n_rules, n_inputs + 1)}"
            )
        if not (np.all(np.isfinite(centers)) and np.all(np.isfinite(consequents))):
            raise InvalidArgumentError("centers and consequents must be finite")
        if not (np.all(np.isfinite(widths)) and np.all(widths > 0)):
            raise InvalidArgumentError("widths must be finite and > 0")
        norm = self.normalization
        if norm is None:
            norm = Normalization.identity(n_inputs)
        elif norm.n_inputs != n_inputs:
            raise ShapeError(f"normalization has {norm.n_inputs} inputs, model has {n_inputs}")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "consequents", consequents)
        object.__setattr__(self, "normalization", norm)

    @classmethod
    def from_rules(cls, rules: Sequence[Rule], normalization: Normalization | None = None) -> AnfisModel:
        if not rules:
            raise ShapeError("a model needs at least one rule")
        n_inputs = len(rules[0].premise)
        for i, rule in enumerate(rules):
            if len(rule.premise) != n_inputs:
                raise ShapeError(f"rule {i} has {len(rule.premise)} premise MFs, expected {n_inputs}")
        centers = np.array([[mf.center for mf in r.premise] for r in rules], dtype=float)
        widths = np.array([[mf.width for mf in r.premise] for r in rules], dtype=float)
        consequents = np.array([r.consequent for r in rules], dtype=float)
        return cls(centers, widths, consequents, normalization)

    @property
    def n_rules(self) -> int:
        return self.centers.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.centers.shape[1]

    @property
    def rules(self) -> tuple[Rule, ...]:
        return tuple(
            Rule(
                tuple(GaussianMF(float(c), float(s)) for c, s in zip(self.centers[i], self.widths[i])),
                tuple(float(v) for v in self.consequents[i]),
            )
            for i in range(self.n_rules)
        )

    def with_consequents(self, consequents: np.ndarray) -> AnfisModel:
        consequents = np.asarray(consequents, dtype=float).reshape(self.n_rules, self.n_inputs + 1)
        return AnfisModel(self.centers, self.widths, consequents, self.normalization)

    def with_premises(self, centers: np.ndarray, widths: np.ndarray) -> AnfisModel:
        return AnfisModel(centers, widths, self.consequents, self.normalization)

    def with_normalization(self, normalization: Normalization) -> AnfisModel:
        return AnfisModel(self.centers, self.widths, self.consequents, normalization)

    def __eq__(self, other):
        if not isinstance(other, AnfisModel):
            return NotImplemented
        return (
            np.array_equal(self.centers, other.centers)
            and np.array_equal(self.widths, other.widths)
            and np.array_equal(self.consequents, other.consequents)
            and self.normalization == other.normalization
        )

    __hash__ = None

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            return evaluate(self, X)
        return evaluate_batch(self, X)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def membership(mf: GaussianMF, x: float) -> float:
    """Membership grade of ``x`` in ``mf``; lies in (0, 1] for finite ``x``."""
    if not math.isfinite(x):
        raise InvalidArgumentError(f"membership input must be finite, got {x!r}")
    if not mf.width > 0:
        raise InvalidArgumentError(f"width must be > 0, got {mf.width!r}")
    d = x - mf.center
    return math.exp(-(d * d) / (2.0 * mf.width * mf.width))


def _as_matrix(model: AnfisModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeError(f"expected a 2-D input matrix, got {X.ndim}-D")
    if X.shape[1] != model.n_inputs:
        raise ShapeError(f"expected {model.n_inputs} input columns, found {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("inputs must be finite")
    return X


def _as_vector(model: AnfisModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ShapeError(f"expected a 1-D input vector, got {x.ndim}-D")
    if x.shape[0] != model.n_inputs:
        raise ShapeError(f"expected {model.n_inputs} inputs, found {x.shape[0]}")
    return x


def log_firing_strengths(model: AnfisModel, Z: np.ndarray) -> np.ndarray:
    """Log of layer-2 outputs for already z-scored rows ``Z``; shape ``(m, n_rules)``."""
    u = (Z[:, None, :] - model.centers[None, :, :]) / model.widths[None, :, :]
    return -0.5 * np.sum(u * u, axis=-1)


def normalized_strengths_z(model: AnfisModel, Z: np.ndarray) -> np.ndarray:
    """Layer-3 outputs for z-scored rows.

    Computed as a shifted softmax over log strengths, which equals
    ``W / sum(W)`` but stays defined when every ``W`` underflows.
    """
    logw = log_firing_strengths(model, Z)
    e = np.exp(logw - logw.max(axis=1, keepdims=True))
    return e / np.sum(e, axis=1, keepdims=True)


def firing_strengths(model: AnfisModel, x) -> np.ndarray:
    """Layer-2 product of premise memberships for one input vector."""
    x = _as_vector(model, x)
    X = _as_matrix(model, x[None, :])
    return np.exp(log_firing_strengths(model, model.normalization.transform(X))[0])


def normalize_strengths(w) -> np.ndarray:
    """Divide firing strengths by their sum (layer 3)."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ShapeError("firing strengths must be a non-empty 1-D vector")
    if not np.all(np.isfinite(w)):
        raise DegenerateFiringError("firing strengths contain non-finite values")
    if np.any(w < 0):
        raise DegenerateFiringError("firing strengths must be non-negative")
    total = float(np.sum(w))
    if total <= 0.0:
        raise DegenerateFiringError("no rule fires (sum of firing strengths is zero)")
    return w / total


def normalized_strengths(model: AnfisModel, X) -> np.ndarray:
    """Layer-3 outputs for each row of ``X`` (original units)."""
    X = _as_matrix(model, X)
    return normalized_strengths_z(model, model.normalization.transform(X))


def rule_outputs_z(model: AnfisModel, Z: np.ndarray) -> np.ndarray:
    """Each rule's linear output for z-scored rows; shape ``(m, n_rules)``."""
    n = model.n_inputs
    coef = model.consequents[:, :n]
    return np.sum(Z[:, None, :] * coef[None, :, :], axis=-1) + model.consequents[:, n]


def evaluate_batch(model: AnfisModel, X) -> np.ndarray:
    """Model output for every row of ``X``, in original target units."""
    X = _as_matrix(model, X)
    if X.shape[0] == 0:
        return np.empty(0)
    Z = model.normalization.transform(X)
    wbar = normalized_strengths_z(model, Z)
    f = rule_outputs_z(model, Z)
    out = np.sum(wbar * f, axis=1)
    return model.normalization.inverse_target(out)


def evaluate(model: AnfisModel, x) -> float:
    """Model output for one input vector."""
    x = _as_vector(model, x)
    return float(evaluate_batch(model, x[None, :])[0])
