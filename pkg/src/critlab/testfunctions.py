"""Compactly supported radial test functions with analytic Laplacians.

Both kinds are radial, phi(z) = f(|z - center| / radius), so the planar
Laplacian is f''(rho) + f'(rho)/rho (scaled by 1/radius^2), with the usual
removable singularity at the center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KINDS = ("smooth_bump", "cosine_cap")


@dataclass(frozen=True)
class TestFunction:
    kind: str
    center: complex
    radius: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.radius <= 0:
            raise ValueError("radius must be > 0")

    def value(self, z) -> np.ndarray:
        t2 = self._t2(z)
        if self.kind == "smooth_bump":
            return _bump_value(t2)
        return _cap_value(t2)

    def laplacian(self, z) -> np.ndarray:
        t2 = self._t2(z)
        if self.kind == "smooth_bump":
            return _bump_laplacian(t2) / self.radius ** 2
        return _cap_laplacian(t2) / self.radius ** 2

    def _t2(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.abs(z - self.center) ** 2 / self.radius ** 2


def smooth_bump(center: complex = 0j, radius: float = 1.0) -> TestFunction:
    """phi = exp(1 - 1/(1 - t^2)) inside |z-c| < r, zero outside; C^infinity."""
    return TestFunction("smooth_bump", complex(center), float(radius))


def cosine_cap(center: complex = 0j, radius: float = 1.0) -> TestFunction:
    """phi = ((1 + cos(pi t)) / 2)^2 inside; C^2 across the support boundary."""
    return TestFunction("cosine_cap", complex(center), float(radius))


# In the formulas below u = t^2 = |z - c|^2 / r^2.  For a radial function
# f(u) the planar Laplacian is (4 / r^2) * (u f''(u) + f'(u)).

def _bump_value(u):
    out = np.zeros_like(u, dtype=float)
    inside = u < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui))
    return out


def _bump_laplacian(u):
    out = np.zeros_like(u, dtype=float)
    inside = u < 1.0 - 1e-12
    ui = u[inside]
    g = 1.0 / (1.0 - ui)
    f = np.exp(1.0 - g)
    fu = -f * g ** 2
    fuu = f * g ** 4 - 2.0 * f * g ** 3
    out[inside] = 4.0 * (ui * fuu + fu)
    return out


def _cap_value(u):
    out = np.zeros_like(u, dtype=float)
    inside = u < 1.0
    t = np.sqrt(u[inside])
    out[inside] = ((1.0 + np.cos(np.pi * t)) / 2.0) ** 2
    return out


def _cap_laplacian(u):
    # f(t) = ((1 + cos(pi t))/2)^2 as a function of rho = t*r; Laplacian is
    # f'' + f'/rho, with f'(t)/t continuous at t = 0.
    out = np.zeros_like(u, dtype=float)
    inside = u < 1.0
    t = np.sqrt(u[inside])
    c = np.cos(np.pi * t)
    s = np.sin(np.pi * t)
    fpp = (np.pi ** 2 / 2.0) * (s ** 2 - c * (1.0 + c))
    with np.errstate(divide="ignore", invalid="ignore"):
        fp_over_t = np.where(
            t > 1e-8,
            -(np.pi / 2.0) * (1.0 + c) * s / t,
            -(np.pi ** 2 / 2.0) * (1.0 + c),  # limit of sin(pi t)/t = pi
        )
    out[inside] = fpp + fp_over_t
    return out
