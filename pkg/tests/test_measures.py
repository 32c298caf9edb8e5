import json
import math

import numpy as np
import pytest
from scipy import integrate

import critlab as cl
from critlab import measures
from critlab.measures import (Seed, SpecError, disk_log_minus_mass,
                              line_log_minus_mass, distance_cdf)


def test_point_mass_sampling():
    pts = cl.sample(cl.point_mass(3 + 0j), 5, Seed(42))
    assert np.all(pts == 3 + 0j)


def test_uniform_circle_support():
    pts = cl.sample(cl.uniform_circle(0, 1), 4, Seed(7))
    assert np.all(np.abs(np.abs(pts) - 1.0) < 1e-12)


def test_uniform_disk_support():
    pts = cl.sample(cl.uniform_disk(1 + 2j, 0.5), 1000, Seed(8))
    assert np.all(np.abs(pts - (1 + 2j)) <= 0.5 + 1e-12)


def test_finite_atoms_frequency():
    # binomial: p = 0.5, n = 1e5, +-0.01 is about six standard deviations
    pts = cl.sample(cl.finite_atoms([0, 1], [0.5, 0.5]), 10 ** 5, Seed(3))
    frac = np.mean(pts == 0)
    assert 0.49 <= frac <= 0.51


def test_sampling_deterministic():
    spec = cl.mixture([cl.gaussian(0, 1), cl.uniform_disk(2, 1)], [0.3, 0.7])
    a = cl.sample(spec, 500, Seed(9, 4))
    b = cl.sample(spec, 500, Seed(9, 4))
    assert np.array_equal(a, b)
    c = cl.sample(spec, 500, Seed(9, 5))
    assert not np.array_equal(a, c)


def test_shift_applied_post_sampling():
    base = cl.uniform_circle(0, 1)
    shifted = cl.uniform_circle(0, 1, shift=2 + 1j)
    a = cl.sample(base, 50, Seed(1))
    b = cl.sample(shifted, 50, Seed(1))
    assert np.allclose(b, a + (2 + 1j))


@pytest.mark.parametrize("bad", [
    lambda: cl.uniform_disk(0, 0.0),
    lambda: cl.gaussian(0, -1.0),
    lambda: cl.finite_atoms([0, 1], [0.7, 0.7]),
    lambda: cl.finite_atoms([0, 1], [-0.5, 1.5]),
])
def test_invalid_specs_rejected(bad):
    with pytest.raises(SpecError):
        bad()


def test_sample_rejects_n_zero():
    with pytest.raises(SpecError):
        cl.sample(cl.gaussian(0), 0, Seed(0))


def test_spec_json_roundtrip():
    spec = cl.mixture(
        [cl.finite_atoms([1j, -1j], [0.25, 0.75]), cl.radial_cauchy(1, 2.0)],
        [0.4, 0.6], shift=0.5 - 0.5j)
    again = measures.DistributionSpec.from_json(spec.to_json())
    assert again == spec
    # documented wire schema
    d = json.loads(spec.to_json())
    assert set(d) == {"family", "params", "shift"}


# -- distance cdf ----------------------------------------------------------

def test_distance_cdf_against_sampling():
    rng_seed = Seed(100)
    for spec, z0, s in [
        (cl.uniform_disk(0, 1), 0.5 + 0j, 0.7),
        (cl.uniform_circle(0, 1), 0.9 + 0j, 0.5),
        (cl.gaussian(1j, 0.8), 0.3 + 0.3j, 1.1),
        (cl.radial_cauchy(0, 1), 1.0 + 0j, 0.8),
        (cl.radial_cauchy(0.5, 1), 1.0 + 1j, 1.3),
    ]:
        pts = cl.sample(spec, 200_000, rng_seed)
        emp = np.mean(np.abs(pts - z0) <= s)
        assert distance_cdf(spec, z0, s) == pytest.approx(emp, abs=5e-3)


# -- log_- energies --------------------------------------------------------

def test_energy_atom_is_infinite():
    assert cl.log_minus_energy(cl.point_mass(1), 1 + 0j) == math.inf


def test_energy_distant_point_mass_is_zero():
    assert cl.log_minus_energy(cl.point_mass(0), 5 + 0j) == 0.0


def test_energy_uniform_disk_center():
    # (1/pi) * integral over D_1 of log(1/|y|) = (1/pi) * (pi/2)
    assert cl.log_minus_energy(cl.uniform_disk(0, 1), 0j) == pytest.approx(0.5, abs=1e-6)


def test_energy_continuous_family_never_infinite():
    # even on the support of the measure the log_- energy is finite
    val = cl.log_minus_energy(cl.uniform_circle(0, 1), 1 + 0j)
    assert math.isfinite(val) and val > 0


def test_energy_finite_atoms_closed_form():
    spec = cl.finite_atoms([0, 0.5], [0.5, 0.5])
    expected = 0.5 * math.log(1 / 0.5)
    assert cl.log_minus_energy(spec, 0 + 0j) == math.inf
    assert cl.log_minus_energy(spec, 1 + 0j) == pytest.approx(expected, abs=1e-9)


def test_energy_translation_consistent():
    spec = cl.uniform_disk(0.5, 1.2)
    a = 1.3 - 0.7j
    z = 0.2 + 0.4j
    e0 = cl.log_minus_energy(spec, z)
    e1 = cl.log_minus_energy(spec.shifted(a), z + a)
    assert e1 == pytest.approx(e0, abs=1e-7)


def test_energy_nonnegative():
    for spec in [cl.gaussian(0, 1), cl.radial_cauchy(0, 1), cl.uniform_disk(0, 2)]:
        for z in [0j, 1 + 1j, -3 + 0.2j]:
            assert cl.log_minus_energy(spec, z) >= 0


# -- radial energies -------------------------------------------------------

def test_radial_energy_circle_atom():
    assert cl.radial_log_energy(cl.uniform_circle(0, 1), 1.0) == math.inf


def test_radial_energy_point_mass_far():
    assert cl.radial_log_energy(cl.point_mass(0), 2.0) == 0.0


def test_radial_energy_uniform_disk_oracle():
    # radial part of the unit disk has cdf s^2, density 2s: brute-force 1-D
    R = 0.5
    oracle, _ = integrate.quad(
        lambda x: -math.log(abs(x - R)) * 2 * x if abs(x - R) < 1 else 0.0,
        0, 1, points=[R])
    val = cl.radial_log_energy(cl.uniform_disk(0, 1), R)
    assert math.isfinite(val) and val > 0
    assert val == pytest.approx(oracle, abs=1e-6)


def test_radial_energy_offcenter_circle_is_finite():
    # circle not centered at the origin has a continuous radial part
    val = cl.radial_log_energy(cl.uniform_circle(0.5, 1), 1.0)
    assert math.isfinite(val)


# -- quadrature sanity constants ------------------------------------------

def test_disk_log_minus_constant():
    assert disk_log_minus_mass(1024) == pytest.approx(math.pi / 2, abs=1e-3)
    assert disk_log_minus_mass(1024, center=2 - 1j) == pytest.approx(math.pi / 2, abs=1e-3)


def test_line_log_minus_constant():
    assert line_log_minus_mass(0.0) == pytest.approx(2.0, abs=1e-6)
    assert line_log_minus_mass(7.3) == pytest.approx(2.0, abs=1e-6)


# -- reference discretization ---------------------------------------------

def test_reference_discretization_atoms_exact():
    pts, w = measures.reference_discretization(cl.finite_atoms([0, 1], [0.5, 0.5]))
    assert np.sort_complex(pts).tolist() == [0j, 1 + 0j]
    assert np.allclose(w, 0.5)


def test_reference_discretization_moments():
    pts, w = measures.reference_discretization(cl.uniform_disk(1 + 1j, 1), 4096)
    assert abs(np.sum(w * pts) - (1 + 1j)) < 0.01
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
