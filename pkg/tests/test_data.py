import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anfis_pso.data import (
    DEFAULT_SCHEMA,
    Dataset,
    generate_synthetic,
    load_csv,
    load_generator_config,
    random_teacher,
    save_csv,
    split,
    split_indices,
)
from anfis_pso.errors import ConfigError, DataError, SplitError
from anfis_pso.fuzzy import Normalization, evaluate_batch


def test_load_toy_file(tmp_path):
    p = tmp_path / "toy.csv"
    p.write_text("a,b,y\n1.5,2,3\n-4,5e-1,6.25\n")
    ds = load_csv(p)
    assert ds.feature_names == ("a", "b") and ds.target_name == "y"
    np.testing.assert_array_equal(ds.X, [[1.5, 2.0], [-4.0, 0.5]])
    np.testing.assert_array_equal(ds.y, [3.0, 6.25])


def test_target_override(tmp_path):
    p = tmp_path / "toy.csv"
    p.write_text("y,a,b\n1,2,3\n4,5,6\n")
    ds = load_csv(p, target="y")
    assert ds.feature_names == ("a", "b")
    np.testing.assert_array_equal(ds.y, [1.0, 4.0])


@pytest.mark.parametrize(
    "body, fragment",
    [
        ("a,y\n1,2\n3,\n", "row 3, column 'y' is blank"),
        ("a,y\n1,2\n3,4,5\n", "row 3 has 3 fields"),
        ("a,y\n1,x\n", "not a number"),
        ("a,y\n1,nan\n", "non-finite"),
        ("a,y\n", "no data rows"),
        ("", "empty"),
    ],
)
def test_malformed_files(tmp_path, body, fragment):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(DataError, match=fragment):
        load_csv(p)


def test_missing_file(tmp_path):
    with pytest.raises(DataError):
        load_csv(tmp_path / "nope.csv")


def test_save_load_round_trip(tmp_path):
    ds = generate_synthetic(DEFAULT_SCHEMA, 15, seed=3)
    save_csv(ds, tmp_path / "d.csv")
    assert load_csv(tmp_path / "d.csv") == ds


def test_split_sizes_study_protocol():
    tr, te = split_indices(82, 0.75, seed=0)
    assert (len(tr), len(te)) == (62, 20)


def test_split_minimal():
    ds = Dataset(("a",), [[1.0], [2.0]], [1.0, 2.0])
    tr, te = split(ds, 0.5, seed=1)
    assert len(tr) == 1 and len(te) == 1


def test_split_deterministic():
    a = split_indices(50, 0.7, seed=4)
    b = split_indices(50, 0.7, seed=4)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


@pytest.mark.parametrize("m, fraction", [(1, 0.5), (4, 0.99), (10, 0.0), (10, 1.0)])
def test_split_errors(m, fraction):
    with pytest.raises(SplitError):
        split_indices(m, fraction, 0)


@given(st.integers(2, 200), st.floats(0.05, 0.95), st.integers(0, 2**31))
def test_split_partitions(m, fraction, seed):
    try:
        tr, te = split_indices(m, fraction, seed)
    except SplitError:
        return
    assert sorted(np.concatenate([tr, te]).tolist()) == list(range(m))
    assert len(tr) == int(np.ceil(fraction * m))


def test_normalization_stats_from_train_only():
    ds = generate_synthetic(DEFAULT_SCHEMA, 82, seed=1)
    tr, _ = split(ds, 0.75, 0)
    norm = Normalization.fit(tr.X, tr.y)
    Z = norm.transform(tr.X)
    np.testing.assert_allclose(Z.mean(axis=0), 0.0, atol=1e-10)
    np.testing.assert_allclose(Z.std(axis=0), 1.0, atol=1e-10)


def test_generator_zero_noise_matches_teacher():
    teacher = random_teacher(DEFAULT_SCHEMA, 10, seed=2)
    ds = generate_synthetic(DEFAULT_SCHEMA, 40, teacher, 0.0, seed=5)
    np.testing.assert_array_equal(ds.y, evaluate_batch(teacher, ds.X))


def test_generator_default_shape_and_ranges():
    ds = generate_synthetic(DEFAULT_SCHEMA, 82, seed=0)
    assert ds.X.shape == (82, 6) and ds.y.shape == (82,)
    assert np.all(ds.X >= DEFAULT_SCHEMA.lows) and np.all(ds.X <= DEFAULT_SCHEMA.highs)
    assert np.all(ds.y > 0)


def test_generator_seeding():
    a = generate_synthetic(DEFAULT_SCHEMA, 20, seed=1, noise_level=0.1)
    b = generate_synthetic(DEFAULT_SCHEMA, 20, seed=1, noise_level=0.1)
    c = generate_synthetic(DEFAULT_SCHEMA, 20, seed=2, noise_level=0.1)
    assert a == b and a != c


def test_generator_noise_level():
    clean = generate_synthetic(DEFAULT_SCHEMA, 2000, seed=3)
    noisy = generate_synthetic(DEFAULT_SCHEMA, 2000, seed=3, noise_level=0.1)
    np.testing.assert_array_equal(clean.X, noisy.X)
    ratio = np.std(noisy.y - clean.y) / np.std(clean.y)
    assert 0.08 < ratio < 0.12


def test_generator_config_file(tmp_path):
    p = tmp_path / "gen.json"
    p.write_text(json.dumps({"teacher": {"kind": "anfis", "n_rules": 3, "seed": 1}, "noise_level": 0.0}))
    schema, teacher, noise = load_generator_config(p)
    assert schema == DEFAULT_SCHEMA and teacher.n_rules == 3 and noise == 0.0
    p.write_text(json.dumps({"teachr": {}}))
    with pytest.raises(ConfigError, match="teachr"):
        load_generator_config(p)
    p.write_text(json.dumps({"features": [{"name": "a", "low": 2, "high": 1}]}))
    with pytest.raises(ConfigError):
        load_generator_config(p)


def test_dataset_validation():
    with pytest.raises(DataError):
        Dataset(("a",), [[np.inf]], [1.0])
    with pytest.raises(DataError):
        Dataset(("a", "b"), [[1.0]], [1.0])
    with pytest.raises(DataError):
        Dataset(("a",), np.empty((0, 1)), [])
