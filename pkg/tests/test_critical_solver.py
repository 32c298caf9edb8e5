import numpy as np
import pytest

import critlab as cl
from critlab.poly_field import RootSample
from critlab.critical_solver import (SolverSettings, distinct_reduce,
                                     critical_points, coefficient_oracle,
                                     verify_gauss_lucas, pairing_distance,
                                     vieta_gap)


def roots_of(*vals):
    return RootSample(np.array(vals, dtype=complex))


# -- distinct_reduce -------------------------------------------------------

def test_distinct_reduce_exact():
    d = distinct_reduce(roots_of(0, 0, 1), tol=0.0)
    got = sorted(zip(d.centers.tolist(), d.multiplicities.tolist()),
                 key=lambda t: abs(t[0]))
    assert got == [(0j, 2), (1 + 0j, 1)]
    assert d.total == 3


def test_distinct_reduce_tolerance():
    d = distinct_reduce(roots_of(0, 1e-16, 1), tol=1e-12)
    assert sorted(d.multiplicities.tolist()) == [1, 2]


def test_distinct_reduce_continuous_all_simple():
    pts = cl.sample(cl.gaussian(0, 1), 1000, cl.Seed(21))
    d = distinct_reduce(RootSample(pts), tol=0.0)
    assert np.all(d.multiplicities == 1)


# -- critical_points -------------------------------------------------------

def test_midpoint_of_two_roots():
    c = critical_points(roots_of(0, 1))
    assert c.points.size == 1
    assert c.points[0] == pytest.approx(0.5, abs=1e-14)
    assert c.converged


def test_repeated_root_hand_computed():
    # P = z^2 (z - 1), P' = z (3z - 2)
    c = critical_points(roots_of(0, 0, 1))
    pts = sorted(c.points, key=abs)
    assert pts[0] == 0j  # bit-exact copy of the repeated root
    assert pts[1] == pytest.approx(2 / 3, abs=1e-12)


def test_repeated_root_exact_copies():
    c = critical_points(roots_of(2 + 1j, 2 + 1j, 2 + 1j, 2 + 1j, -1))
    exact = [z for z in c.points if z == 2 + 1j]
    assert len(exact) == 3


def test_all_equal_roots():
    c = critical_points(roots_of(*([1.5 - 0.5j] * 7)))
    assert np.all(c.points == 1.5 - 0.5j)
    assert c.points.size == 6 and c.converged


def test_count_always_n_minus_1():
    for seed in range(5):
        pts = cl.sample(cl.uniform_disk(0, 1), 50 + seed, cl.Seed(seed))
        c = critical_points(RootSample(pts))
        assert c.points.size == 49 + seed


def test_oracle_agreement_gaussian():
    pts = cl.sample(cl.gaussian(0, 1), 30, cl.Seed(30))
    r = RootSample(pts)
    assert pairing_distance(critical_points(r).points,
                            coefficient_oracle(r).points) < 1e-6


def test_oracle_agreement_with_repeated_atoms():
    pts = cl.sample(cl.finite_atoms([0, 1], [0.5, 0.5]), 25, cl.Seed(31))
    r = RootSample(pts)
    assert pairing_distance(critical_points(r).points,
                            coefficient_oracle(r).points) < 1e-6


def test_vieta_mean_identity():
    for seed in range(5):
        pts = cl.sample(cl.radial_cauchy(0, 1), 200, cl.Seed(40 + seed))
        r = RootSample(pts)
        c = critical_points(r)
        assert vieta_gap(r, c) <= 1e-9 * (1 + np.abs(pts).max())


def test_permutation_invariance():
    pts = cl.sample(cl.uniform_disk(0, 1), 40, cl.Seed(50))
    r1 = RootSample(pts)
    r2 = RootSample(pts[::-1].copy())
    a = np.sort_complex(critical_points(r1).points)
    b = np.sort_complex(critical_points(r2).points)
    assert np.max(np.abs(a - b)) < 1e-9


def test_residuals_below_tolerance():
    pts = cl.sample(cl.gaussian(0, 2), 300, cl.Seed(51))
    c = critical_points(RootSample(pts))
    assert c.converged
    assert c.residuals.max() <= 1e-12 * (1 + np.abs(pts).max())


def test_nonconvergence_is_reported_not_truncated():
    pts = cl.sample(cl.gaussian(0, 1), 60, cl.Seed(52))
    c = critical_points(RootSample(pts), SolverSettings(max_sweeps=1))
    assert c.points.size == 59  # full output even when the cap is hit
    assert not c.converged


# -- coefficient oracle ----------------------------------------------------

def test_oracle_two_roots():
    o = coefficient_oracle(roots_of(0, 1))
    assert o.points[0] == pytest.approx(0.5, abs=1e-12)


def test_oracle_conjugate_pair():
    o = coefficient_oracle(roots_of(1j, -1j))
    assert abs(o.points[0]) < 1e-12


def test_oracle_roots_of_unity_multiplicity_cluster():
    # P = z^8 - 1, P' = 8 z^7: one critical point of multiplicity 7 at 0.
    # The companion route smears a multiplicity-7 zero into a cluster of
    # radius ~eps^(1/7); the cluster mean recovers the point sharply.
    r = RootSample(np.exp(2j * np.pi * np.arange(8) / 8))
    o = coefficient_oracle(r)
    assert o.points.size == 7
    assert np.max(np.abs(o.points)) < 0.05
    assert abs(o.points.mean()) < 1e-9


def test_oracle_rejects_large_n():
    pts = cl.sample(cl.gaussian(0, 1), 65, cl.Seed(60))
    with pytest.raises(ValueError):
        coefficient_oracle(RootSample(pts))


# -- Gauss-Lucas -----------------------------------------------------------

def test_gauss_lucas_pass():
    r = roots_of(0, 1)
    c = critical_points(r)
    assert verify_gauss_lucas(r, c).passed


def test_gauss_lucas_flags_outside_point():
    from critlab.critical_solver import CriticalSet
    r = roots_of(0, 1)
    fake = CriticalSet(np.array([2 + 0j]), np.array([0.0]), 0, True)
    rep = verify_gauss_lucas(r, fake)
    assert not rep.passed
    assert rep.violators.tolist() == [2 + 0j]


def test_gauss_lucas_property_over_seeds():
    for seed in range(8):
        pts = cl.sample(cl.uniform_disk(0, 1), 500, cl.Seed(70 + seed))
        r = RootSample(pts)
        c = critical_points(r)
        assert verify_gauss_lucas(r, c, tol=1e-8).passed
