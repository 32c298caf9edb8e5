"""Evaluation of P_n, log|P_n|, the logarithmic derivative L_n, and circle suprema.

Everything works directly from the roots; monomial coefficients are never
formed (at degree ~10^3 they overflow and lose all accuracy).  Point
evaluators use exact compensated summation (math.fsum) because the
diagnostics divide by n and need the absolute error to stay o(n).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

# |z - root| below POLE_RTOL * (1 + |z|) counts as hitting a pole
POLE_RTOL = 1e-14


@dataclass(frozen=True)
class RootSample:
    """The multiset {X_1, ..., X_n} in sample order; P_n(z) = prod (z - X_i)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim != 1 or pts.size < 1:
            raise ValueError("need at least one root")
        if not np.all(np.isfinite(pts)):
            raise ValueError("roots must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.size

    def to_json(self) -> str:
        return json.dumps([[z.real, z.imag] for z in self.points])

    @staticmethod
    def from_json(s: str) -> "RootSample":
        arr = json.loads(s)
        return RootSample(np.array([complex(p[0], p[1]) for p in arr]))


@dataclass(frozen=True)
class FieldValue:
    value: complex
    at_pole: bool = False
    at_zero: bool = False


@dataclass(frozen=True)
class SearchSettings:
    """Controls for the circle supremum: dense angular scan + local refinement."""

    samples_per_root: int = 4
    min_samples: int = 512
    refine_candidates: int = 5
    xatol: float = 1e-12


def _pole_distance(roots: RootSample, z: complex) -> float:
    return float(np.min(np.abs(z - roots.points)))


def is_pole(roots: RootSample, z: complex) -> bool:
    return _pole_distance(roots, z) < POLE_RTOL * (1 + abs(z))


def eval_log_abs_P(roots: RootSample, z: complex) -> float:
    """log|P_n(z)| = sum log|z - X_i|; -inf when z hits a root."""
    d = np.abs(z - roots.points)
    if np.min(d) < POLE_RTOL * (1 + abs(z)):
        return -math.inf
    return math.fsum(map(math.log, d))


def eval_L(roots: RootSample, z: complex) -> FieldValue:
    """L_n(z) = sum 1/(z - X_i), compensated; at_pole set when z hits a root."""
    if is_pole(roots, z):
        return FieldValue(complex(math.inf, math.inf), at_pole=True)
    terms = 1.0 / (z - roots.points)
    val = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return FieldValue(val, at_zero=(val == 0))


def scaled_log_abs_L(roots: RootSample, z: complex) -> float:
    """(1/n) log|L_n(z)|; +inf at poles, -inf at exact zeros of L_n."""
    fv = eval_L(roots, z)
    if fv.at_pole:
        return math.inf
    a = abs(fv.value)
    if a == 0.0:
        return -math.inf
    return math.log(a) / roots.n


def sup_on_circle(roots: RootSample, R: float,
                  refine: SearchSettings = SearchSettings()) -> float:
    """Lower bound on M_n(R) = sup_{|z|=R} |L_n(z)|.

    Dense angular sampling (>= 4n points) followed by golden-section
    refinement around the leading local maxima.  Returns +inf when a root
    lies on the circle within the pole tolerance.
    """
    if R <= 0:
        raise ValueError("R must be > 0")
    pts = roots.points
    if np.min(np.abs(np.abs(pts) - R)) < POLE_RTOL * (1 + R):
        return math.inf

    m = max(refine.min_samples, refine.samples_per_root * roots.n)
    theta = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
    vals = abs_L_many(roots, R * np.exp(1j * theta))

    def neg_abs_L(t):
        fv = eval_L(roots, R * np.exp(1j * t))
        return -abs(fv.value) if not fv.at_pole else -math.inf

    # refine the top local maxima; bracket each by its grid neighbours
    order = np.argsort(vals)[::-1][: refine.refine_candidates]
    best = float(np.max(vals))
    h = 2 * np.pi / m
    for idx in order:
        t0 = theta[idx]
        res = minimize_scalar(neg_abs_L, bounds=(t0 - h, t0 + h),
                              method="bounded",
                              options={"xatol": refine.xatol})
        best = max(best, -float(res.fun))
    return best


# -- vectorized field evaluation (for grids and scans) --------------------

_CHUNK = 1 << 21  # complex entries per broadcast block


def log_abs_P_many(roots: RootSample, z: np.ndarray) -> np.ndarray:
    """log|P_n| on an array of points; -inf at pole hits.  Plain numpy sums."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.empty(flat.size, dtype=float)
    step = max(1, _CHUNK // roots.n)
    for i in range(0, flat.size, step):
        blk = flat[i:i + step, None] - roots.points[None, :]
        d = np.abs(blk)
        hit = np.any(d < POLE_RTOL * (1 + np.abs(flat[i:i + step, None])), axis=1)
        with np.errstate(divide="ignore"):
            vals = np.sum(np.log(d), axis=1)
        vals[hit] = -np.inf
        out[i:i + step] = vals
    return out.reshape(z.shape)


def L_many(roots: RootSample, z: np.ndarray) -> np.ndarray:
    """L_n on an array of points; inf+infj at pole hits."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.empty(flat.size, dtype=complex)
    step = max(1, _CHUNK // roots.n)
    for i in range(0, flat.size, step):
        blk = flat[i:i + step, None] - roots.points[None, :]
        hit = np.any(np.abs(blk) < POLE_RTOL * (1 + np.abs(flat[i:i + step, None])), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.sum(1.0 / blk, axis=1)
        vals[hit] = complex(np.inf, np.inf)
        out[i:i + step] = vals
    return out.reshape(z.shape)


def abs_L_many(roots: RootSample, z: np.ndarray) -> np.ndarray:
    return np.abs(L_many(roots, z))


def log_abs_L_many(roots: RootSample, z: np.ndarray) -> np.ndarray:
    """log|L_n| on an array of points; +inf at poles, -inf at exact zeros."""
    a = abs_L_many(roots, z)
    out = np.full(a.shape, -np.inf)
    pos = a > 0
    with np.errstate(divide="ignore"):
        out[pos] = np.log(a[pos])
    return out
