"""Hybrid training: k-means rule seeding, PSO over premises, least squares for consequents.

Every fitness evaluation decodes a premise vector, fits all consequents by
least squares on the training split and returns the training RMSE in
z-scored target units. The swarm starts with one particle on the clustered
initialization, so the final model is never worse on the training split
than the seeded one.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np

from . import lsq
from .clustering import SPREAD_FLOOR_FRACTION, check_coverage, cluster, seed_model
from .data import Dataset, split_indices
from .errors import ConfigError, InsufficientDataError, NumericError, ShapeError
from .fuzzy import WIDTH_FLOOR, AnfisModel, Normalization, evaluate_batch
from .metrics import Metrics, compute
from .pso import SwarmConfig, optimize

#: Parameters per Gaussian membership function (center and width).
PARAMS_PER_MF = 2


@dataclass
class PsoParams:
    """Swarm settings that do not depend on the data (bounds are derived at train time)."""

    n_particles: int = 60
    iterations: int = 1000
    c1: float = 2.0
    c2: float = 2.0
    inertia: float = 1.0
    v_max_fraction: float = 0.2


@dataclass
class TrainConfig:
    n_clusters: int = 10
    split_fraction: float = 0.75
    seed: int = 0
    premise_bounds_scale: float = 3.0
    ridge: float = 0.0
    workers: int = 1
    pso: PsoParams = field(default_factory=PsoParams)

    def __post_init__(self):
        _check_int(self.n_clusters, "n_clusters", 1)
        _check_int(self.seed, "seed", None)
        _check_int(self.workers, "workers", 1)
        _check_real(self.split_fraction, "split_fraction")
        if not 0.0 < self.split_fraction < 1.0:
            raise ConfigError("split_fraction must be in (0, 1)", "split_fraction")
        _check_real(self.premise_bounds_scale, "premise_bounds_scale")
        if self.premise_bounds_scale <= 0:
            raise ConfigError("premise_bounds_scale must be > 0", "premise_bounds_scale")
        _check_real(self.ridge, "ridge")
        if self.ridge < 0:
            raise ConfigError("ridge must be >= 0", "ridge")
        if isinstance(self.pso, dict):
            self.pso = _pso_from_dict(self.pso)
        p = self.pso
        _check_int(p.n_particles, "pso.n_particles", 1)
        _check_int(p.iterations, "pso.iterations", 1)
        for key in ("c1", "c2", "v_max_fraction"):
            _check_real(getattr(p, key), f"pso.{key}")
            if getattr(p, key) <= 0:
                raise ConfigError(f"pso.{key} must be > 0", f"pso.{key}")
        _check_real(p.inertia, "pso.inertia")
        if p.inertia < 0:
            raise ConfigError("pso.inertia must be >= 0", "pso.inertia")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: Any) -> TrainConfig:
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        for key in raw:
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}", key)
        return cls(**raw)


def _pso_from_dict(raw: Any) -> PsoParams:
    if not isinstance(raw, dict):
        raise ConfigError("pso must be an object", "pso")
    known = set(PsoParams.__dataclass_fields__)
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown config key 'pso.{key}'", f"pso.{key}")
    return PsoParams(**raw)


def _check_int(value, key, minimum):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(f"{key} must be an integer, got {value!r}", key)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value!r}", key)


def _check_real(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{key} must be a finite number, got {value!r}", key)


# ---------------------------------------------------------------- parameter packing


def count_tunable(n_clusters: int, n_inputs: int) -> int:
    """Clusters x variables x parameters-per-MF, counting the output as a variable."""
    return n_clusters * (n_inputs + 1) * PARAMS_PER_MF


def pack_parameters(model: AnfisModel) -> np.ndarray:
    """Flatten premises as ``[all centers (rule-major), all widths (rule-major)]``."""
    return np.concatenate([model.centers.ravel(), model.widths.ravel()])


def unpack_parameters(vector, template: AnfisModel) -> AnfisModel:
    """Inverse of :func:`pack_parameters`; widths below the floor are clamped up to it."""
    v = np.asarray(vector, dtype=float)
    R, n = template.n_rules, template.n_inputs
    if v.shape != (2 * R * n,):
        raise ShapeError(f"premise vector has shape {v.shape}, expected ({2 * R * n},)")
    centers = v[: R * n].reshape(R, n)
    widths = np.maximum(v[R * n :].reshape(R, n), WIDTH_FLOOR)
    return template.with_premises(centers, widths)


def premise_bounds(template: AnfisModel, scale: float) -> tuple[np.ndarray, np.ndarray]:
    """Search box around the seeded premises, in z-scored units.

    Centers may move ``scale`` feature deviations either way. Widths range
    from the clustering spread floor up to ``scale`` (or the seed width if larger).
    """
    c, w = template.centers, template.widths
    w_lo = np.minimum(np.full_like(w, SPREAD_FLOOR_FRACTION), w)
    w_hi = np.maximum(np.full_like(w, scale), w)
    lower = np.concatenate([(c - scale).ravel(), w_lo.ravel()])
    upper = np.concatenate([(c + scale).ravel(), w_hi.ravel()])
    return lower, upper


class PremiseFitness:
    """Training RMSE (z-scored) of the model decoded from a premise vector.

    Consequents are refitted by least squares for each candidate.
    """

    def __init__(self, template: AnfisModel, Z: np.ndarray, y_z: np.ndarray, ridge: float = 0.0):
        self.template = template
        self.Z = np.asarray(Z, dtype=float)
        self.y_z = np.asarray(y_z, dtype=float)
        self.ridge = ridge

    def fit(self, vector) -> tuple[AnfisModel, float]:
        model = unpack_parameters(vector, self.template)
        design = lsq.design_z(model, self.Z)
        sol = lsq.solve_consequents(design, self.y_z, self.ridge)
        rmse = math.sqrt(float(np.mean((design @ sol.theta - self.y_z) ** 2)))
        return model.with_consequents(sol.theta), rmse

    def __call__(self, vector) -> float:
        try:
            return self.fit(vector)[1]
        except (NumericError, FloatingPointError):
            return math.inf


def fitness(premise_vector, template: AnfisModel, train_X, train_y, ridge: float = 0.0) -> float:
    """Training RMSE (z-scored target units) after a least-squares consequent fit.

    ``train_X`` and ``train_y`` are in original units; ``template`` supplies
    the rule count and normalization.
    """
    norm = template.normalization
    Z = norm.transform(np.asarray(train_X, dtype=float))
    y_z = norm.transform_target(np.asarray(train_y, dtype=float))
    return PremiseFitness(template, Z, y_z, ridge)(premise_vector)


# ---------------------------------------------------------------- training


@dataclass
class TrainReport:
    model: AnfisModel
    rmse_history: list  # (iteration, gbest RMSE in z-scored target units)
    train_metrics: Metrics
    test_metrics: Metrics
    n_tunable: int
    n_premise_parameters: int
    initial_rmse: float
    final_rmse: float
    train_index: np.ndarray
    test_index: np.ndarray
    train_actual: np.ndarray
    train_predicted: np.ndarray
    test_actual: np.ndarray
    test_predicted: np.ndarray
    config: TrainConfig
    initial_model: Optional[AnfisModel] = None


def derive_seeds(seed: int) -> tuple[int, int, int]:
    """Independent seeds for splitting, clustering and the swarm."""
    a, b, c = np.random.SeedSequence(seed).generate_state(3)
    return int(a), int(b), int(c)


def train(dataset: Dataset, config: Optional[TrainConfig] = None) -> TrainReport:
    config = config or TrainConfig()
    split_seed, cluster_seed, swarm_seed = derive_seeds(config.seed)

    train_idx, test_idx = split_indices(len(dataset), config.split_fraction, split_seed)
    train_set, test_set = dataset.subset(train_idx), dataset.subset(test_idx)
    if len(train_set) < config.n_clusters:
        raise InsufficientDataError(
            f"{len(train_set)} training rows cannot seed {config.n_clusters} clusters"
        )

    norm = Normalization.fit(train_set.X, train_set.y)
    Z = norm.transform(train_set.X)
    y_z = norm.transform_target(train_set.y)

    seeds = cluster(Z, config.n_clusters, cluster_seed)
    template = seed_model(seeds, dataset.n_features, norm)
    check_coverage(template, Z)

    objective = PremiseFitness(template, Z, y_z, config.ridge)
    init = pack_parameters(template)
    lower, upper = premise_bounds(template, config.premise_bounds_scale)
    p = config.pso
    swarm = SwarmConfig(
        lower,
        upper,
        n_particles=p.n_particles,
        iterations=p.iterations,
        c1=p.c1,
        c2=p.c2,
        inertia=p.inertia,
        v_max=p.v_max_fraction * (upper - lower),
        seed=swarm_seed,
    )

    initial_model, initial_rmse = objective.fit(init)
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            result = optimize(swarm, objective, init, mapper=pool.map)
    else:
        result = optimize(swarm, objective, init)

    model, final_rmse = objective.fit(result.best_position)

    train_pred = evaluate_batch(model, train_set.X)
    test_pred = evaluate_batch(model, test_set.X)
    return TrainReport(
        model=model,
        rmse_history=[(int(k), float(v)) for k, v in result.history],
        train_metrics=compute(train_set.y, train_pred),
        test_metrics=compute(test_set.y, test_pred),
        n_tunable=count_tunable(config.n_clusters, dataset.n_features),
        n_premise_parameters=init.size,
        initial_rmse=initial_rmse,
        final_rmse=final_rmse,
        train_index=train_idx,
        test_index=test_idx,
        train_actual=train_set.y,
        train_predicted=train_pred,
        test_actual=test_set.y,
        test_predicted=test_pred,
        config=config,
        initial_model=initial_model,
    )
