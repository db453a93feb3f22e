"""Least-squares estimation of rule consequents for fixed premises.

With premises frozen, the model output is linear in the stacked consequent
vector, so all rules' coefficients are fitted in one global solve.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import InvalidArgumentError, NumericError
from .fuzzy import AnfisModel, _as_matrix, normalized_strengths_z


class LsqSolution(NamedTuple):
    theta: np.ndarray
    rank: int
    rank_deficient: bool
    residual_norm: float


def design_z(model: AnfisModel, Z: np.ndarray) -> np.ndarray:
    """Design matrix for z-scored rows ``Z``.

    Block ``i`` of row ``k`` is ``wbar_i(x_k) * [x_k, 1]``.
    """
    wbar = normalized_strengths_z(model, Z)
    m = Z.shape[0]
    ext = np.hstack([Z, np.ones((m, 1))])
    return (wbar[:, :, None] * ext[:, None, :]).reshape(m, -1)


def assemble_design(model: AnfisModel, X) -> np.ndarray:
    """Design matrix for rows of ``X`` in original units.

    ``assemble_design(model, X) @ model.consequents.ravel()`` is the model
    output in z-scored target units.
    """
    X = _as_matrix(model, X)
    if X.shape[0] < 1:
        raise InvalidArgumentError("design needs at least one row")
    return design_z(model, model.normalization.transform(X))


def solve_consequents(design: np.ndarray, y, ridge: float = 0.0) -> LsqSolution:
    """Minimum-norm least-squares solution of ``design @ theta ~= y``.

    Uses a complete orthogonal factorization (LAPACK ``gelsy``). ``ridge > 0`` adds Tikhonov damping
    ``ridge * ||theta||**2``. Rank deficiency is reported, not raised.
    """
    A = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    if A.ndim != 2 or y.ndim != 1 or A.shape[0] != y.shape[0]:
        raise InvalidArgumentError(f"incompatible shapes: design {A.shape}, target {y.shape}")
    if A.shape[0] < 1:
        raise InvalidArgumentError("need at least one sample")
    if ridge < 0:
        raise InvalidArgumentError(f"ridge must be >= 0, got {ridge}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise NumericError("design matrix or target contains non-finite values")
    n = A.shape[1]
    if ridge > 0:
        A_solve = np.vstack([A, np.sqrt(ridge) * np.eye(n)])
        y_solve = np.concatenate([y, np.zeros(n)])
    else:
        A_solve, y_solve = A, y
    try:
        theta, _, rank, _ = scipy.linalg.lstsq(A_solve, y_solve, lapack_driver="gelsy", check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"least-squares solve failed: {exc}") from exc
    if not np.all(np.isfinite(theta)):
        raise NumericError("least-squares solution is not finite")
    residual = float(np.linalg.norm(A @ theta - y))
    return LsqSolution(theta, int(rank), int(rank) < n, residual)


def fit_consequents(model: AnfisModel, X, y, ridge: float = 0.0) -> AnfisModel:
    """Return ``model`` with consequents refitted to ``(X, y)`` (original units)."""
    design = assemble_design(model, X)
    target = model.normalization.transform_target(np.asarray(y, dtype=float))
    sol = solve_consequents(design, target, ridge)
    return model.with_consequents(sol.theta)
