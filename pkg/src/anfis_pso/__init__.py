"""Gaussian Takagi-Sugeno ANFIS with hybrid PSO / least-squares training."""

from .clustering import ClusterSeed, CoverageWarning, cluster, kmeans, seed_model
from .data import (
    DEFAULT_SCHEMA,
    Dataset,
    SchemaSpec,
    VariableSpec,
    generate_synthetic,
    load_csv,
    random_teacher,
    save_csv,
    split,
)
from .errors import (
    AnfisError,
    ConfigError,
    DataError,
    DegenerateFiringError,
    InsufficientDataError,
    InvalidArgumentError,
    NumericError,
    ShapeError,
    SplitError,
)
from .fuzzy import (
    AnfisModel,
    GaussianMF,
    Normalization,
    Rule,
    evaluate,
    evaluate_batch,
    firing_strengths,
    membership,
    normalize_strengths,
    normalized_strengths,
)
from .lsq import LsqSolution, assemble_design, fit_consequents, solve_consequents
from .metrics import Metrics, compute
from .persistence import load_model, save_model
from .pso import PsoResult, SwarmConfig, optimize
from .trainer import PsoParams, TrainConfig, TrainReport, count_tunable, fitness, train

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
