"""Particle swarm minimization over a bounded box.

Velocity update, per particle and dimension::

    v <- inertia * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)
    x <- x + v

with ``r1, r2 ~ U(0, 1)`` drawn independently for every particle, dimension
and term. ``inertia = 1`` gives the plain update with no damping. Velocities are
clamped to ``+-v_max``; positions leaving the box are clamped to it and the
offending velocity component is zeroed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import ConfigError, ShapeError

Fitness = Callable[[np.ndarray], float]
Mapper = Callable[[Fitness, Iterable[np.ndarray]], Iterable[float]]


@dataclass
class SwarmConfig:
    lower: np.ndarray
    upper: np.ndarray
    n_particles: int = 60
    iterations: int = 1000
    c1: float = 2.0
    c2: float = 2.0
    inertia: float = 1.0
    v_max: Optional[np.ndarray] = None
    seed: int = 0

    def __post_init__(self):
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape or self.lower.size == 0:
            raise ConfigError("bounds must be non-empty 1-D arrays of equal length", "bounds")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ConfigError("bounds must be finite", "bounds")
        if np.any(self.lower >= self.upper):
            raise ConfigError("every lower bound must be < its upper bound", "bounds")
        if not (isinstance(self.n_particles, (int, np.integer)) and self.n_particles >= 1):
            raise ConfigError(f"n_particles must be a positive integer, got {self.n_particles!r}", "n_particles")
        if not (isinstance(self.iterations, (int, np.integer)) and self.iterations >= 1):
            raise ConfigError(f"iterations must be a positive integer, got {self.iterations!r}", "iterations")
        for key in ("c1", "c2"):
            val = getattr(self, key)
            if not (math.isfinite(val) and val > 0):
                raise ConfigError(f"{key} must be > 0, got {val!r}", key)
        if not (math.isfinite(self.inertia) and self.inertia >= 0):
            raise ConfigError(f"inertia must be >= 0, got {self.inertia!r}", "inertia")
        if self.v_max is None:
            self.v_max = 0.2 * (self.upper - self.lower)
        else:
            v = np.asarray(self.v_max, dtype=float)
            self.v_max = np.broadcast_to(v, self.lower.shape).copy()
        if not (np.all(np.isfinite(self.v_max)) and np.all(self.v_max > 0)):
            raise ConfigError("v_max must be > 0 in every dimension", "v_max")

    @property
    def dim(self) -> int:
        return self.lower.shape[0]


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float


@dataclass
class SwarmState:
    """Whole-swarm state, stored row-per-particle."""

    positions: np.ndarray
    velocities: np.ndarray
    fitness: np.ndarray
    pbest_positions: np.ndarray
    pbest_fitness: np.ndarray
    gbest_position: np.ndarray
    gbest_fitness: float
    iteration: int = 0
    history: list = field(default_factory=list)

    @property
    def particles(self) -> list[Particle]:
        return [
            Particle(self.positions[i], self.velocities[i], self.pbest_positions[i], float(self.pbest_fitness[i]))
            for i in range(self.positions.shape[0])
        ]


@dataclass
class PsoResult:
    best_position: np.ndarray
    best_fitness: float
    history: list  # (iteration, gbest_fitness) pairs, one per step


def _evaluate(fitness: Fitness, positions: np.ndarray, mapper: Mapper) -> np.ndarray:
    values = np.fromiter((float(v) for v in mapper(fitness, list(positions))), dtype=float, count=positions.shape[0])
    values[~np.isfinite(values)] = np.inf
    return values


def initialize(
    config: SwarmConfig,
    fitness: Fitness,
    rng: np.random.Generator,
    init: Optional[np.ndarray] = None,
    mapper: Mapper = map,
) -> SwarmState:
    """Scatter particles uniformly in the box; particle 0 starts at ``init`` if given."""
    P, D = config.n_particles, config.dim
    span = config.upper - config.lower
    positions = config.lower + rng.random((P, D)) * span
    velocities = rng.uniform(-config.v_max, config.v_max, size=(P, D))
    if init is not None:
        init = np.asarray(init, dtype=float)
        if init.shape != (D,):
            raise ShapeError(f"init has shape {init.shape}, expected ({D},)")
        positions[0] = np.clip(init, config.lower, config.upper)
    values = _evaluate(fitness, positions, mapper)
    best = int(np.argmin(values))
    return SwarmState(
        positions=positions,
        velocities=velocities,
        fitness=values,
        pbest_positions=positions.copy(),
        pbest_fitness=values.copy(),
        gbest_position=positions[best].copy(),
        gbest_fitness=float(values[best]),
    )


def step(
    state: SwarmState,
    config: SwarmConfig,
    fitness: Fitness,
    rng: np.random.Generator,
    mapper: Mapper = map,
) -> SwarmState:
    """Advance the swarm by one iteration and return the new state."""
    P, D = state.positions.shape
    if D != config.dim:
        raise ShapeError(f"state has dimension {D}, config has {config.dim}")
    # drawn up front so a parallel mapper cannot change the random stream
    r1 = rng.random((P, D))
    r2 = rng.random((P, D))
    x = state.positions
    v = (
        config.inertia * state.velocities
        + config.c1 * r1 * (state.pbest_positions - x)
        + config.c2 * r2 * (state.gbest_position - x)
    )
    v = np.clip(v, -config.v_max, config.v_max)
    x = x + v
    out = (x < config.lower) | (x > config.upper)
    x = np.clip(x, config.lower, config.upper)
    v[out] = 0.0

    values = _evaluate(fitness, x, mapper)
    improved = values < state.pbest_fitness
    pbest_positions = state.pbest_positions.copy()
    pbest_positions[improved] = x[improved]
    pbest_fitness = np.where(improved, values, state.pbest_fitness)

    gbest_position, gbest_fitness = state.gbest_position, state.gbest_fitness
    best = int(np.argmin(pbest_fitness))
    if pbest_fitness[best] < gbest_fitness:
        gbest_position = pbest_positions[best].copy()
        gbest_fitness = float(pbest_fitness[best])

    iteration = state.iteration + 1
    return SwarmState(
        positions=x,
        velocities=v,
        fitness=values,
        pbest_positions=pbest_positions,
        pbest_fitness=pbest_fitness,
        gbest_position=gbest_position,
        gbest_fitness=gbest_fitness,
        iteration=iteration,
        history=state.history + [(iteration, gbest_fitness)],
    )


def optimize(
    config: SwarmConfig,
    fitness: Fitness,
    init: Optional[np.ndarray] = None,
    mapper: Mapper = map,
    callback: Optional[Callable[[SwarmState], None]] = None,
) -> PsoResult:
    """Minimize ``fitness`` over the configured box.

    ``mapper`` evaluates a batch of positions (``map`` by default; an
    executor's ``map`` parallelizes without changing results).
    """
    rng = np.random.default_rng(config.seed)
    state = initialize(config, fitness, rng, init, mapper)
    for _ in range(config.iterations):
        state = step(state, config, fitness, rng, mapper)
        if callback is not None:
            callback(state)
    return PsoResult(state.gbest_position.copy(), state.gbest_fitness, list(state.history))
