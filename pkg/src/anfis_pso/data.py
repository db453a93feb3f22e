"""Tabular datasets: CSV I/O, seeded splitting and a synthetic generator.

The synthetic generator stands in for the unpublished boiler measurements.
Its default schema lists the six coal/boiler inputs used for elemental
mercury modelling with plausible, literature-style ranges. The ranges carry
no ground-truth claim.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, DataError, InvalidArgumentError, SplitError
from .fuzzy import AnfisModel, Normalization, evaluate_batch


@dataclass(frozen=True, eq=False)
class Dataset:
    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    target_name: str = "target"
    index: Optional[np.ndarray] = None  # row numbers in the source table

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        y = np.array(self.y, dtype=float).ravel()
        names = tuple(self.feature_names)
        if X.ndim != 2:
            raise DataError(f"feature matrix must be 2-D, got {X.ndim}-D")
        if X.shape[0] < 1:
            raise DataError("dataset has no rows")
        if X.shape[1] != len(names):
            raise DataError(f"{X.shape[1]} feature columns but {len(names)} feature names")
        if y.shape[0] != X.shape[0]:
            raise DataError(f"{X.shape[0]} feature rows but {y.shape[0]} targets")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("dataset contains non-finite values")
        index = np.arange(X.shape[0]) if self.index is None else np.array(self.index, dtype=int)
        if index.shape != (X.shape[0],):
            raise DataError("index length does not match row count")
        for a in (X, y, index):
            a.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, rows) -> Dataset:
        rows = np.asarray(rows, dtype=int)
        return Dataset(self.feature_names, self.X[rows], self.y[rows], self.target_name, self.index[rows])

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and self.target_name == other.target_name
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.index, other.index)
        )

    __hash__ = None


# ---------------------------------------------------------------- CSV


def load_csv(path, target: Optional[str] = None) -> Dataset:
    """Read a comma-separated file with a header row.

    The last column is the target unless ``target`` names another column.
    Row numbers in error messages count the header as row 1.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows:
        raise DataError(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2:
        raise DataError(f"{path}: need at least one feature column and a target column")
    if target is None:
        t_col = len(header) - 1
    elif target in header:
        t_col = header.index(target)
    else:
        raise DataError(f"{path}: target column {target!r} not found")

    body = []
    for rownum, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DataError(f"{path}: row {rownum} has {len(row)} fields, expected {len(header)}")
        values = []
        for col, cell in zip(header, row):
            cell = cell.strip()
            if not cell:
                raise DataError(f"{path}: row {rownum}, column {col!r} is blank")
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {rownum}, column {col!r}: not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}: row {rownum}, column {col!r}: non-finite value {cell!r}")
            values.append(v)
        body.append(values)
    if not body:
        raise DataError(f"{path}: no data rows")
    table = np.array(body)
    f_cols = [i for i in range(len(header)) if i != t_col]
    return Dataset(tuple(header[i] for i in f_cols), table[:, f_cols], table[:, t_col], header[t_col])


def save_csv(dataset: Dataset, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*dataset.feature_names, dataset.target_name])
        for xrow, yv in zip(dataset.X, dataset.y):
            w.writerow([repr(float(v)) for v in xrow] + [repr(float(yv))])


# ---------------------------------------------------------------- splitting


def split_indices(m: int, fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle of ``range(m)``; the first ``ceil(fraction * m)`` go to training."""
    if not 0.0 < fraction < 1.0:
        raise SplitError(f"split fraction must be in (0, 1), got {fraction}")
    n_train = math.ceil(fraction * m)
    if n_train < 1 or n_train >= m:
        raise SplitError(f"fraction {fraction} of {m} rows leaves one split empty")
    perm = np.random.default_rng(seed).permutation(m)
    return perm[:n_train], perm[n_train:]


def split(dataset: Dataset, fraction: float = 0.75, seed: int = 0) -> tuple[Dataset, Dataset]:
    train_idx, test_idx = split_indices(len(dataset), fraction, seed)
    return dataset.subset(train_idx), dataset.subset(test_idx)


# ---------------------------------------------------------------- synthetic data


@dataclass(frozen=True)
class VariableSpec:
    name: str
    unit: str
    low: float
    high: float

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise ConfigError(f"range of {self.name!r} must be finite", self.name)
        if not self.low < self.high:
            raise ConfigError(f"range of {self.name!r} needs low < high", self.name)


@dataclass(frozen=True)
class SchemaSpec:
    features: tuple[VariableSpec, ...]
    target: VariableSpec

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        if not self.features:
            raise ConfigError("schema needs at least one feature", "features")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def lows(self) -> np.ndarray:
        return np.array([f.low for f in self.features])

    @property
    def highs(self) -> np.ndarray:
        return np.array([f.high for f in self.features])

    def to_dict(self) -> dict:
        def v(s):
            return {"name": s.name, "unit": s.unit, "low": s.low, "high": s.high}

        return {"features": [v(f) for f in self.features], "target": v(self.target)}

    @classmethod
    def from_dict(cls, d: dict) -> SchemaSpec:
        def v(entry, where):
            if not isinstance(entry, dict):
                raise ConfigError(f"{where} must be an object", where)
            for key in ("name", "low", "high"):
                if key not in entry:
                    raise ConfigError(f"{where} is missing {key!r}", f"{where}.{key}")
            try:
                low, high = float(entry["low"]), float(entry["high"])
            except (TypeError, ValueError):
                raise ConfigError(f"{where}: low/high must be numbers", where) from None
            return VariableSpec(str(entry["name"]), str(entry.get("unit", "")), low, high)

        if "features" not in d:
            raise ConfigError("schema is missing 'features'", "features")
        if "target" not in d:
            raise ConfigError("schema is missing 'target'", "target")
        feats = tuple(v(e, f"features[{i}]") for i, e in enumerate(d["features"]))
        return cls(feats, v(d["target"], "target"))


DEFAULT_SCHEMA = SchemaSpec(
    features=(
        VariableSpec("hg_in_coal", "ppm", 0.02, 0.35),
        VariableSpec("ash", "wt%", 5.0, 30.0),
        VariableSpec("chlorine", "ppm", 50.0, 2500.0),
        VariableSpec("heating_value", "MJ/kg", 18.0, 32.0),
        VariableSpec("sulfur", "wt%", 0.3, 4.5),
        VariableSpec("temperature", "degC", 120.0, 400.0),
    ),
    target=VariableSpec("hg0_emission", "ug/Nm3", 2.0, 14.0),
)


def schema_normalization(schema: SchemaSpec) -> Normalization:
    """Statistics of the uniform input box; target scaled so its range spans 12 units of scale."""
    lo, hi = schema.lows, schema.highs
    t = schema.target
    return Normalization(
        (lo + hi) / 2.0,
        (hi - lo) / math.sqrt(12.0),
        (t.low + t.high) / 2.0,
        (t.high - t.low) / 12.0,
    )


def random_teacher(
    schema: SchemaSpec = DEFAULT_SCHEMA,
    n_rules: int = 10,
    seed: int = 0,
    width_range: tuple[float, float] = (1.5, 3.0),
    rule_spread: float = 0.1,
) -> AnfisModel:
    """A random Sugeno model over ``schema``'s input box, usable as a planted teacher.

    All rules share one random linear trend (unit-norm slope in z units);
    each rule adds its own deviation with standard deviation ``rule_spread``
    on every coefficient and on the bias. Centers fall inside the z-scored
    box and widths are drawn from ``width_range`` (z units).
    """
    rng = np.random.default_rng(seed)
    n = len(schema.features)
    half = math.sqrt(3.0)  # uniform data spans +-sqrt(3) in z units
    centers = rng.uniform(-half, half, size=(n_rules, n))
    widths = rng.uniform(*width_range, size=(n_rules, n))
    trend = rng.normal(size=n)
    trend = np.append(trend / np.linalg.norm(trend), 0.0)
    consequents = trend + rng.normal(0.0, rule_spread, size=(n_rules, n + 1))
    return AnfisModel(centers, widths, consequents, schema_normalization(schema))


def _smooth_emission(X: np.ndarray, schema: SchemaSpec) -> np.ndarray:
    # monotone in coal Hg, damped by chlorine (oxidation) and sulfur; mild thermal term
    u = (X - schema.lows) / (schema.highs - schema.lows)
    base = 0.4 + 1.2 * u[:, 0] * (1.0 - 0.6 * u[:, 2]) * np.exp(-0.5 * u[:, 4])
    base = base + 0.15 * np.sin(np.pi * u[:, 5]) - 0.1 * u[:, 1] + 0.05 * u[:, 3]
    t = schema.target
    return t.low + (t.high - t.low) * np.clip(base / 1.8, 0.0, 1.0)


ANALYTIC_TEACHERS: dict[str, Callable[[np.ndarray, SchemaSpec], np.ndarray]] = {
    "smooth_emission": _smooth_emission,
}

Teacher = Union[AnfisModel, str, Callable[[np.ndarray], np.ndarray]]


def generate_synthetic(
    spec: SchemaSpec = DEFAULT_SCHEMA,
    m: int = 82,
    teacher: Teacher = "smooth_emission",
    noise_level: float = 0.0,
    seed: int = 0,
) -> Dataset:
    """Draw ``m`` rows uniformly from the schema box and label them with ``teacher``.

    Noise is Gaussian with standard deviation ``noise_level`` times the
    standard deviation of the clean targets.
    """
    if not isinstance(spec, SchemaSpec):
        raise ConfigError("spec must be a SchemaSpec")
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise InvalidArgumentError(f"row count must be a positive integer, got {m!r}")
    if not (math.isfinite(noise_level) and noise_level >= 0):
        raise InvalidArgumentError(f"noise_level must be >= 0, got {noise_level!r}")
    rng = np.random.default_rng(seed)
    X = spec.lows + rng.random((m, len(spec.features))) * (spec.highs - spec.lows)
    if isinstance(teacher, AnfisModel):
        if teacher.n_inputs != len(spec.features):
            raise ConfigError(f"teacher has {teacher.n_inputs} inputs, schema has {len(spec.features)}", "teacher")
        y = evaluate_batch(teacher, X)
    elif isinstance(teacher, str):
        if teacher not in ANALYTIC_TEACHERS:
            raise ConfigError(f"unknown teacher function {teacher!r}", "teacher")
        y = ANALYTIC_TEACHERS[teacher](X, spec)
    else:
        y = np.asarray(teacher(X), dtype=float)
    if noise_level > 0:
        y = y + noise_level * float(np.std(y)) * rng.standard_normal(m)
    return Dataset(spec.feature_names, X, y, spec.target.name)


# ---------------------------------------------------------------- generator config files

_GENERATOR_KEYS = {"features", "target", "teacher", "noise_level"}


def load_generator_config(path) -> tuple[SchemaSpec, Teacher, float]:
    """Read a JSON generator file: schema plus ``teacher`` and ``noise_level``.

    ``teacher`` is either ``{"kind": "function", "name": ...}`` or
    ``{"kind": "anfis", "n_rules": N, "seed": S, "rule_spread": r}``. Missing schema keys fall
    back to :data:`DEFAULT_SCHEMA`.
    """
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    return parse_generator_config(raw)


def parse_generator_config(raw: dict) -> tuple[SchemaSpec, Teacher, float]:
    if not isinstance(raw, dict):
        raise ConfigError("generator config must be a JSON object")
    unknown = sorted(set(raw) - _GENERATOR_KEYS)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r}", unknown[0])
    base = DEFAULT_SCHEMA.to_dict()
    base.update({k: raw[k] for k in ("features", "target") if k in raw})
    schema = SchemaSpec.from_dict(base)

    t = raw.get("teacher", {"kind": "function", "name": "smooth_emission"})
    if isinstance(t, str):
        t = {"kind": "function", "name": t}
    if not isinstance(t, dict):
        raise ConfigError("teacher must be an object or a function name", "teacher")
    kind = t.get("kind", "function")
    if kind == "function":
        name = t.get("name", "smooth_emission")
        if name not in ANALYTIC_TEACHERS:
            raise ConfigError(f"unknown teacher function {name!r}", "teacher.name")
        teacher: Teacher = name
    elif kind == "anfis":
        n_rules = t.get("n_rules", 10)
        if not (isinstance(n_rules, int) and n_rules >= 1):
            raise ConfigError("teacher.n_rules must be a positive integer", "teacher.n_rules")
        tseed = t.get("seed", 0)
        if not isinstance(tseed, int):
            raise ConfigError("teacher.seed must be an integer", "teacher.seed")
        spread = t.get("rule_spread", 0.1)
        if isinstance(spread, bool) or not isinstance(spread, (int, float)) or spread < 0:
            raise ConfigError("teacher.rule_spread must be a number >= 0", "teacher.rule_spread")
        teacher = random_teacher(schema, n_rules, tseed, rule_spread=float(spread))
    else:
        raise ConfigError(f"unknown teacher kind {kind!r}", "teacher.kind")

    noise = raw.get("noise_level", 0.0)
    if not isinstance(noise, (int, float)) or isinstance(noise, bool) or noise < 0:
        raise ConfigError("noise_level must be a number >= 0", "noise_level")
    return schema, teacher, float(noise)
