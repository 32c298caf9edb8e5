import numpy as np
import pytest

from critlab.testfunctions import smooth_bump, cosine_cap


@pytest.mark.parametrize("phi", [smooth_bump(0j, 1.0), cosine_cap(0j, 1.0),
                                 smooth_bump(1 - 2j, 0.7), cosine_cap(-1j, 2.5)])
def test_compact_support(phi):
    rng = np.random.default_rng(0)
    z = phi.center + phi.radius * (1 + rng.uniform(0.01, 3, 100)) * np.exp(
        1j * rng.uniform(0, 2 * np.pi, 100))
    assert np.all(phi.value(z) == 0)
    assert np.all(phi.laplacian(z) == 0)


@pytest.mark.parametrize("phi", [smooth_bump(0j, 1.0), cosine_cap(0.5j, 1.3)])
def test_unit_peak_at_center(phi):
    assert phi.value(np.array([phi.center]))[0] == pytest.approx(1.0)


@pytest.mark.parametrize("phi", [smooth_bump(0j, 1.0), cosine_cap(0j, 1.0),
                                 smooth_bump(0.3 - 0.2j, 1.7)])
def test_laplacian_matches_finite_difference(phi):
    # 5-point stencil; O(h^2) accuracy on interior points of the support
    rng = np.random.default_rng(1)
    pts = phi.center + 0.85 * phi.radius * np.sqrt(rng.uniform(0, 1, 50)) * np.exp(
        1j * rng.uniform(0, 2 * np.pi, 50))
    for h in (1e-4, 5e-5):
        fd = (phi.value(pts + h) + phi.value(pts - h)
              + phi.value(pts + 1j * h) + phi.value(pts - 1j * h)
              - 4 * phi.value(pts)) / h ** 2
        # the 2e-6 floor absorbs roundoff amplified by the 1/h^2 stencil
        assert np.max(np.abs(fd - phi.laplacian(pts))) < 200 * h ** 2 + 2e-6


def test_laplacian_integrates_to_zero():
    # divergence theorem: the Laplacian of a compactly supported function has
    # zero total integral
    phi = smooth_bump(0j, 1.0)
    n = 801
    h = 2.2 / n
    ax = (np.arange(n) + 0.5) * h - 1.1
    X, Y = np.meshgrid(ax, ax)
    total = np.sum(phi.laplacian(X + 1j * Y)) * h * h
    assert abs(total) < 1e-6


def test_invalid_kind_rejected():
    from critlab.testfunctions import TestFunction
    with pytest.raises(ValueError):
        TestFunction("triangle", 0j, 1.0)
    with pytest.raises(ValueError):
        smooth_bump(0j, -1.0)
