import math

import numpy as np
import pytest

from anfis_pso.clustering import cluster, seed_model
from anfis_pso.data import DEFAULT_SCHEMA, Dataset, generate_synthetic, random_teacher
from anfis_pso.errors import ConfigError, InsufficientDataError, ShapeError
from anfis_pso.fuzzy import WIDTH_FLOOR, AnfisModel, Normalization, evaluate_batch
from anfis_pso.trainer import (
    PremiseFitness,
    PsoParams,
    TrainConfig,
    count_tunable,
    fitness,
    pack_parameters,
    premise_bounds,
    train,
    unpack_parameters,
)


def quick(**kw):
    pso = kw.pop("pso", PsoParams(n_particles=10, iterations=15))
    return TrainConfig(pso=pso, **kw)


@pytest.fixture(scope="module")
def small_dataset():
    return generate_synthetic(DEFAULT_SCHEMA, 40, random_teacher(DEFAULT_SCHEMA, 3, seed=1), seed=2)


def test_parameter_counts_match_study():
    assert count_tunable(10, 6) == 140
    rng = np.random.default_rng(0)
    m = AnfisModel(rng.normal(size=(10, 6)), rng.uniform(0.5, 2, (10, 6)), np.zeros((10, 7)))
    assert pack_parameters(m).size == 120


def test_pack_unpack_round_trip():
    rng = np.random.default_rng(3)
    m = AnfisModel(rng.normal(size=(4, 3)), rng.uniform(0.2, 2, (4, 3)), rng.normal(size=(4, 4)))
    back = unpack_parameters(pack_parameters(m), m)
    np.testing.assert_array_equal(back.centers, m.centers)
    np.testing.assert_array_equal(back.widths, m.widths)
    np.testing.assert_array_equal(back.consequents, m.consequents)


def test_negative_width_slot_is_floored():
    m = AnfisModel(np.zeros((2, 2)), np.ones((2, 2)), np.zeros((2, 3)))
    v = pack_parameters(m)
    v[4] = -3.0
    out = unpack_parameters(v, m)
    assert out.widths[0, 0] == WIDTH_FLOOR


def test_unpack_length_mismatch():
    m = AnfisModel(np.zeros((2, 2)), np.ones((2, 2)), np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        unpack_parameters(np.zeros(7), m)


def test_fitness_recovers_two_rule_teacher():
    # two well separated operating regions, each dominated by one rule
    rng = np.random.default_rng(11)
    centers = np.array([[-3.0, -3.0], [3.0, 3.0]])
    teacher = AnfisModel(centers, np.full((2, 2), 0.5), rng.normal(size=(2, 3)))
    X = np.concatenate([c + 0.3 * rng.standard_normal((30, 2)) for c in centers])
    y = evaluate_batch(teacher, X)
    norm = Normalization.fit(X, y)
    template = seed_model(cluster(norm.transform(X), 2, seed=0), 2, norm)
    assert fitness(pack_parameters(template), template, X, y) < 1e-6


def test_constant_target_fits_exactly():
    rng = np.random.default_rng(5)
    X = rng.uniform(0, 1, size=(30, 3))
    y = np.full(30, 4.2)
    norm = Normalization.fit(X, y)
    template = seed_model(cluster(norm.transform(X), 3, seed=1), 3, norm)
    assert fitness(pack_parameters(template), template, X, y) == pytest.approx(0.0, abs=1e-12)


def test_fitness_nonnegative_for_random_vectors():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(25, 2))
    y = np.sin(X[:, 0]) + X[:, 1]
    norm = Normalization.fit(X, y)
    template = seed_model(cluster(norm.transform(X), 3, seed=0), 2, norm)
    obj = PremiseFitness(template, norm.transform(X), norm.transform_target(y))
    for _ in range(50):
        v = rng.normal(0, 3, size=12)
        f = obj(v)
        assert f >= 0 or f == math.inf


def test_bounds_contain_seed():
    rng = np.random.default_rng(2)
    m = AnfisModel(rng.normal(size=(3, 2)), rng.uniform(0.01, 4, (3, 2)), np.zeros((3, 3)))
    lo, hi = premise_bounds(m, 3.0)
    v = pack_parameters(m)
    assert np.all(lo <= v) and np.all(v <= hi)


def test_single_iteration_report(small_dataset):
    r = train(small_dataset, quick(n_clusters=3, pso=PsoParams(n_particles=5, iterations=1)))
    assert len(r.rmse_history) == 1 and r.rmse_history[0][0] == 1
    assert len(r.train_predicted) == 30 and len(r.test_predicted) == 10
    assert r.n_tunable == count_tunable(3, 6)


def test_history_monotone_and_dominance(small_dataset):
    r = train(small_dataset, quick(n_clusters=3))
    h = [v for _, v in r.rmse_history]
    assert all(b <= a for a, b in zip(h, h[1:]))
    assert r.final_rmse <= r.initial_rmse
    assert r.final_rmse == h[-1]


def test_split_integrity(small_dataset):
    r = train(small_dataset, quick(n_clusters=3))
    both = np.concatenate([r.train_index, r.test_index])
    assert len(np.intersect1d(r.train_index, r.test_index)) == 0
    assert sorted(both.tolist()) == list(range(len(small_dataset)))


def test_determinism(small_dataset):
    a = train(small_dataset, quick(n_clusters=3, seed=4))
    b = train(small_dataset, quick(n_clusters=3, seed=4))
    assert a.model == b.model and a.rmse_history == b.rmse_history
    np.testing.assert_array_equal(a.test_predicted, b.test_predicted)
    c = train(small_dataset, quick(n_clusters=3, seed=5))
    assert c.rmse_history != a.rmse_history


def test_worker_pool_matches_serial(small_dataset):
    a = train(small_dataset, quick(n_clusters=3, workers=1))
    b = train(small_dataset, quick(n_clusters=3, workers=3))
    assert a.model == b.model


def test_normalization_round_trip(small_dataset):
    r = train(small_dataset, quick(n_clusters=3))
    m = r.model
    norm = m.normalization
    Z = norm.transform(small_dataset.X)
    raw = m.with_normalization(Normalization.identity(6))
    via_z = norm.inverse_target(evaluate_batch(raw, Z))
    np.testing.assert_allclose(via_z, evaluate_batch(m, small_dataset.X), rtol=1e-10, atol=1e-10)


def test_insufficient_rows():
    ds = Dataset(("a",), [[float(i)] for i in range(8)], np.arange(8.0))
    with pytest.raises(InsufficientDataError):
        train(ds, quick(n_clusters=7))


@pytest.mark.parametrize(
    "raw, key",
    [
        ({"n_clusters": 0}, "n_clusters"),
        ({"split_fraction": 1.5}, "split_fraction"),
        ({"ridge": -1}, "ridge"),
        ({"pso": {"iterations": 0}}, "pso.iterations"),
        ({"pso": {"speed": 1}}, "pso.speed"),
        ({"clusters": 3}, "clusters"),
        ({"seed": "x"}, "seed"),
    ],
)
def test_config_errors_name_key(raw, key):
    with pytest.raises(ConfigError) as info:
        TrainConfig.from_dict(raw)
    assert info.value.key == key


def test_config_dict_round_trip():
    cfg = TrainConfig(n_clusters=4, ridge=0.1, pso=PsoParams(iterations=7))
    assert TrainConfig.from_dict(cfg.to_dict()) == cfg


def test_defaults_match_study_setup():
    cfg = TrainConfig()
    assert (cfg.n_clusters, cfg.split_fraction, cfg.pso.iterations) == (10, 0.75, 1000)
