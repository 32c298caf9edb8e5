import math

import numpy as np
import pytest

import critlab as cl
from critlab.poly_field import (RootSample, SearchSettings, eval_log_abs_P,
                                eval_L, scaled_log_abs_L, sup_on_circle,
                                abs_L_many, log_abs_P_many)


def roots_of(*vals):
    return RootSample(np.array(vals, dtype=complex))


def test_log_abs_P_simple():
    assert eval_log_abs_P(roots_of(0), math.e) == pytest.approx(1.0, abs=1e-14)


def test_log_abs_P_multiplicity():
    assert eval_log_abs_P(roots_of(0, 0), math.e) == pytest.approx(2.0, abs=1e-14)


def test_log_abs_P_on_circle_roots():
    pts = np.exp(1j * np.random.default_rng(0).uniform(0, 2 * np.pi, 100))
    val = eval_log_abs_P(RootSample(pts), 0j)
    assert val == pytest.approx(0.0, abs=1e-12)


def test_log_abs_P_at_root():
    assert eval_log_abs_P(roots_of(2), 2 + 0j) == -math.inf


def test_eval_L_simple():
    assert eval_L(roots_of(0), 1 + 0j).value == 1 + 0j


def test_eval_L_symmetry_cancellation():
    fv = eval_L(roots_of(-1, 1), 0j)
    assert fv.value == 0
    assert fv.at_zero


def test_eval_L_pole():
    assert eval_L(roots_of(0), 0j).at_pole


def test_eval_L_matches_numeric_gradient_of_log_P():
    # d/dx log|P| = Re L, -d/dy log|P| ... combined: L = 2 d(log|P|)/dzbar*;
    # check via central differences of log|P| in both axes
    rng = np.random.default_rng(5)
    roots = RootSample(rng.normal(size=12) + 1j * rng.normal(size=12))
    z = 0.37 + 0.21j
    h = 1e-6
    dx = (eval_log_abs_P(roots, z + h) - eval_log_abs_P(roots, z - h)) / (2 * h)
    dy = (eval_log_abs_P(roots, z + 1j * h) - eval_log_abs_P(roots, z - 1j * h)) / (2 * h)
    L = eval_L(roots, z).value
    assert dx == pytest.approx(L.real, abs=1e-7)
    assert dy == pytest.approx(-L.imag, abs=1e-7)


def test_eval_L_conjugation_symmetry():
    rng = np.random.default_rng(6)
    pts = rng.normal(size=9) + 1j * rng.normal(size=9)
    z = 1.1 - 0.4j
    a = eval_L(RootSample(pts), z).value
    b = eval_L(RootSample(np.conj(pts)), np.conj(z)).value
    assert a == pytest.approx(np.conj(b), abs=1e-14)


def test_eval_L_translation_equivariance():
    rng = np.random.default_rng(7)
    pts = rng.normal(size=8) + 1j * rng.normal(size=8)
    z = 0.3 + 0.9j
    a = 2.5 - 1.5j
    lhs = eval_L(RootSample(pts + a), z + a).value
    rhs = eval_L(RootSample(pts), z).value
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_scaled_log_abs_L_point_mass_closed_form():
    # L_n = n/(z - c): for n copies of 0 at z = 2, value is log(n/2)/n
    for n in (2, 10, 100):
        val = scaled_log_abs_L(RootSample(np.zeros(n, complex)), 2 + 0j)
        assert val == pytest.approx(math.log(n / 2) / n, abs=1e-13)
    assert scaled_log_abs_L(RootSample(np.zeros(2, complex)), 2 + 0j) == pytest.approx(0.0)


def test_scaled_log_abs_L_signs():
    assert scaled_log_abs_L(roots_of(-1, 1), 0j) == -math.inf
    assert scaled_log_abs_L(roots_of(0), 0j) == math.inf


def test_scaled_log_abs_L_monte_carlo_desk_scale():
    # pilot-calibrated: at z away from the unit disk the statistic sits well
    # inside (-0.05, 0.05) with very high probability at n = 1000
    spec = cl.uniform_disk(0, 1)
    z = 2 + 2j
    inside = 0
    for t in range(200):
        pts = cl.sample(spec, 1000, cl.Seed(1234, t))
        if abs(scaled_log_abs_L(RootSample(pts), z)) < 0.05:
            inside += 1
    assert inside >= 190


def test_sup_on_circle_single_root_at_origin():
    assert sup_on_circle(roots_of(0), 2.0) == pytest.approx(0.5, rel=1e-12)


def test_sup_on_circle_offset_root():
    assert sup_on_circle(roots_of(1), 2.0) == pytest.approx(1.0, rel=1e-10)


def test_sup_on_circle_root_on_circle():
    assert sup_on_circle(roots_of(2), 2.0) == math.inf


def test_sup_on_circle_brute_force_oracle():
    rng = np.random.default_rng(11)
    roots = RootSample(rng.normal(size=50) + 1j * rng.normal(size=50))
    R = 20.0
    theta = np.linspace(0, 2 * np.pi, 10 ** 6, endpoint=False)
    brute = float(np.max(abs_L_many(roots, R * np.exp(1j * theta))))
    val = sup_on_circle(roots, R)
    assert val >= brute * (1 - 1e-6)
    assert val == pytest.approx(brute, rel=1e-6)


def test_sup_dominates_sampled_values():
    rng = np.random.default_rng(12)
    roots = RootSample(rng.normal(size=20) + 1j * rng.normal(size=20))
    R = 5.0
    sup = sup_on_circle(roots, R)
    zs = R * np.exp(1j * rng.uniform(0, 2 * np.pi, 200))
    assert np.all(abs_L_many(roots, zs) <= sup * (1 + 1e-12))


def test_vectorized_matches_pointwise():
    rng = np.random.default_rng(13)
    roots = RootSample(rng.normal(size=30) + 1j * rng.normal(size=30))
    zs = rng.normal(size=40) + 1j * rng.normal(size=40)
    many = log_abs_P_many(roots, zs)
    for z, v in zip(zs, many):
        assert v == pytest.approx(eval_log_abs_P(roots, z), rel=1e-12)


def test_roots_json_roundtrip():
    r = roots_of(0, 1 + 2j, -0.5)
    again = RootSample.from_json(r.to_json())
    assert np.array_equal(r.points, again.points)
