import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anfis_pso.errors import InvalidArgumentError
from anfis_pso.metrics import Metrics, compute


def test_perfect_fit():
    a = np.array([1.0, 2.5, 4.0])
    m = compute(a, a)
    assert (m.rmse, m.mse, m.mare_pct, m.mre_pct, m.r2) == (0.0, 0.0, 0.0, 0.0, 1.0)
    np.testing.assert_array_equal(m.relative_deviations, 0.0)


def test_hand_computed_case():
    m = compute([1.0, 2.0, 3.0], [1.1, 1.9, 3.0])
    assert m.mse == pytest.approx(0.02 / 3, rel=1e-12)
    assert m.rmse == pytest.approx(math.sqrt(0.02 / 3), rel=1e-12)
    assert m.mare_pct == pytest.approx(5.0, rel=1e-12)
    # (1-1.1)/1 + (2-1.9)/2 + 0 = -0.05 -> mean -1/60
    assert m.mre_pct == pytest.approx(100 * (-0.1 + 0.05) / 3, rel=1e-12)
    # ss_res = 0.02, ss_tot = 2
    assert m.r2 == pytest.approx(0.99, rel=1e-12)
    np.testing.assert_allclose(m.relative_deviations, [10.0, -5.0, 0.0], rtol=1e-12, atol=1e-12)


def test_mean_prediction_gives_zero_r2():
    a = np.array([2.0, 4.0, 9.0, 1.0])
    assert compute(a, np.full_like(a, a.mean())).r2 == pytest.approx(0.0, abs=1e-15)


def test_zero_actual_flags_relative_measures():
    m = compute([0.0, 2.0, 3.0], [0.1, 2.0, 3.3])
    assert not m.relative_defined
    assert math.isnan(m.mare_pct) and math.isnan(m.mre_pct)
    assert math.isnan(m.relative_deviations[0])
    assert m.relative_deviations[2] == pytest.approx(10.0)
    assert m.mse == pytest.approx(0.1 / 3)


def test_constant_actual_flags_r2():
    m = compute([2.0, 2.0], [2.0, 2.1])
    assert not m.r2_defined and math.isnan(m.r2)


def test_needs_two_samples():
    with pytest.raises(InvalidArgumentError):
        compute([1.0], [1.0])


def test_dict_round_trip():
    m = compute([0.0, 2.0, 3.0], [0.1, 2.0, 3.3])
    back = Metrics.from_dict(m.to_dict())
    assert back.mse == m.mse and back.relative_defined == m.relative_defined
    np.testing.assert_array_equal(back.relative_deviations, m.relative_deviations)


pairs = st.integers(0, 2**31).map(
    lambda s: (np.random.default_rng(s).uniform(0.5, 5.0, 12), np.random.default_rng(s + 1).uniform(0.5, 5.0, 12))
)


@given(pairs, st.floats(1e-3, 1e3))
def test_scale_behaviour(pair, k):
    a, p = pair
    m, s = compute(a, p), compute(k * a, k * p)
    for name in ("mare_pct", "mre_pct", "r2"):
        assert getattr(s, name) == pytest.approx(getattr(m, name), rel=1e-12, abs=1e-12)
    np.testing.assert_allclose(s.relative_deviations, m.relative_deviations, rtol=1e-12, atol=1e-12)
    assert s.rmse == pytest.approx(k * m.rmse, rel=1e-12)
    assert s.mse == pytest.approx(k * k * m.mse, rel=1e-12)


@given(pairs, st.floats(-100, 100))
def test_translation_keeps_absolute_errors(pair, c):
    a, p = pair
    m, s = compute(a, p), compute(a + c, p + c)
    assert s.mse == pytest.approx(m.mse, rel=1e-12, abs=1e-12)
    assert s.rmse == pytest.approx(m.rmse, rel=1e-12, abs=1e-12)


@given(pairs)
def test_r2_bounded_and_sign_convention(pair):
    a, p = pair
    m = compute(a, p)
    assert m.r2 <= 1.0
    assert m.rmse**2 == pytest.approx(m.mse, rel=1e-12)
    assert float(np.mean(m.relative_deviations)) == pytest.approx(-m.mre_pct, rel=1e-12, abs=1e-12)
