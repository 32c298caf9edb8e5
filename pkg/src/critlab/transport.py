"""Weak-convergence gauges between finite atomic measures on the plane.

Exact Wasserstein-1 is a min-cost-flow (network simplex) solve on the
bipartite transport graph with integerized weights, so unequal supports
(n-1 critical points vs n roots) need no padding.  The sliced variant
averages 1-D transport costs over random directions; each projection is a
contraction, so sliced <= exact always.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import Seed
from .testfunctions import TestFunction

_WEIGHT_SCALE = 10 ** 12
_COST_SCALE = 10 ** 12
EXACT_SIZE_CAP = 4_000_000  # max product of support sizes for the exact solver


class TransportError(ValueError):
    pass


@dataclass(frozen=True)
class EmpiricalMeasure:
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=complex)
        w = np.asarray(self.weights, dtype=float)
        if a.size == 0:
            raise TransportError("empty measure")
        if a.shape != w.shape:
            raise TransportError("atoms/weights mismatch")
        if not np.all(np.isfinite(a)):
            raise TransportError("atoms must be finite")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise TransportError("weights must be nonnegative and sum to 1")
        a.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "atoms", a)
        object.__setattr__(self, "weights", w)

    def translated(self, a: complex) -> "EmpiricalMeasure":
        return EmpiricalMeasure(self.atoms + a, self.weights)

    def scaled(self, c: complex) -> "EmpiricalMeasure":
        return EmpiricalMeasure(self.atoms * c, self.weights)


def from_points(points) -> EmpiricalMeasure:
    pts = np.asarray(points, dtype=complex)
    if pts.size == 0:
        raise TransportError("empty point set")
    return EmpiricalMeasure(pts, np.full(pts.size, 1.0 / pts.size))


def _integer_weights(w: np.ndarray) -> np.ndarray:
    iw = np.round(w * _WEIGHT_SCALE).astype(np.int64)
    iw[np.argmax(iw)] += _WEIGHT_SCALE - iw.sum()  # absorb rounding drift
    if np.any(iw < 0):
        raise TransportError("weights below integerization resolution")
    return iw


def wasserstein1(mu: EmpiricalMeasure, nu: EmpiricalMeasure,
                 method: str = "exact", projections: int = 64,
                 seed: Seed = Seed(0)) -> float:
    """W1 between atomic measures.

    method="exact": optimal transport cost via network simplex.
    method="sliced": mean of 1-D costs over random directions; a lower-bound
    approximation, not the metric itself.
    """
    if method == "exact":
        return _w1_exact(mu, nu)
    if method == "sliced":
        return _w1_sliced(mu, nu, projections, seed)
    raise TransportError(f"unknown method {method!r}")


def _w1_exact(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> float:
    import networkx as nx

    m, n = mu.atoms.size, nu.atoms.size
    if m * n > EXACT_SIZE_CAP:
        raise TransportError(
            f"exact solver capped at {EXACT_SIZE_CAP} atom pairs; use sliced")
    wi = _integer_weights(mu.weights)
    vi = _integer_weights(nu.weights)
    cost = np.abs(mu.atoms[:, None] - nu.atoms[None, :])
    ic = np.round(cost * _COST_SCALE).astype(np.int64)
    G = nx.DiGraph()
    for i in range(m):
        G.add_node(("s", i), demand=-int(wi[i]))
    for j in range(n):
        G.add_node(("t", j), demand=int(vi[j]))
    for i in range(m):
        for j in range(n):
            G.add_edge(("s", i), ("t", j), weight=int(ic[i, j]))
    flow_cost, _ = nx.network_simplex(G)
    return flow_cost / (_WEIGHT_SCALE * _COST_SCALE)


def w1_1d(x: np.ndarray, wx: np.ndarray, y: np.ndarray, wy: np.ndarray) -> float:
    """Exact 1-D W1 between weighted samples: integral of |F_x - F_y|."""
    pts = np.concatenate([x, y])
    sgn = np.concatenate([wx, -wy])
    order = np.argsort(pts, kind="stable")
    pts = pts[order]
    cdf_diff = np.cumsum(sgn[order])[:-1]
    return float(np.sum(np.abs(cdf_diff) * np.diff(pts)))


def _w1_sliced(mu: EmpiricalMeasure, nu: EmpiricalMeasure,
               projections: int, seed: Seed) -> float:
    if projections < 1:
        raise TransportError("need at least one projection")
    rng = seed.rng()
    theta = rng.uniform(0.0, math.pi, projections)
    total = 0.0
    for t in theta:
        u = complex(math.cos(t), math.sin(t))
        x = (mu.atoms * u.conjugate()).real
        y = (nu.atoms * u.conjugate()).real
        total += w1_1d(x, mu.weights, y, nu.weights)
    return total / projections


def bounded_lipschitz(mu: EmpiricalMeasure, nu: EmpiricalMeasure,
                      projections: int = 16, grid: int = 32) -> float:
    """Lower bound on the bounded-Lipschitz distance from a fixed dictionary
    of 1-Lipschitz functions bounded by 1 (clipped ramps and tent functions)."""
    best = 0.0
    all_atoms = np.concatenate([mu.atoms, nu.atoms])
    for j in range(max(projections, 1)):
        t = math.pi * j / max(projections, 1)
        u = complex(math.cos(t), math.sin(t))
        px = (mu.atoms * u.conjugate()).real
        py = (nu.atoms * u.conjugate()).real
        lo = min(px.min(), py.min())
        hi = max(px.max(), py.max())
        for b in np.linspace(lo, hi, grid):
            gap = abs(np.sum(mu.weights * np.clip(px - b, -0.5, 0.5))
                      - np.sum(nu.weights * np.clip(py - b, -0.5, 0.5)))
            best = max(best, float(gap))
    xs = np.linspace(all_atoms.real.min(), all_atoms.real.max(), max(2, grid // 4))
    ys = np.linspace(all_atoms.imag.min(), all_atoms.imag.max(), max(2, grid // 4))
    for ax in xs:
        for ay in ys:
            a = complex(ax, ay)
            gap = abs(np.sum(mu.weights * np.maximum(0.0, 1.0 - np.abs(mu.atoms - a)))
                      - np.sum(nu.weights * np.maximum(0.0, 1.0 - np.abs(nu.atoms - a))))
            best = max(best, float(gap))
    return best


def integrate_test_function(measure: EmpiricalMeasure, phi: TestFunction) -> float:
    """Exact weighted sum of phi over the atoms."""
    return float(np.sum(measure.weights * phi.value(measure.atoms)))
