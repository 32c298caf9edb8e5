"""Critical points of P_n: zeros of the logarithmic derivative plus repeated roots.

For n beyond ~64 the monomial basis is hopeless, so the solver works on the
rational function R(z) = sum_j m_j / (z - w_j) over the distinct roots w_j.
Its k-1 simple zeros are found by simultaneous Aberth-Ehrlich iteration whose
Newton corrections are evaluated from sums only.  Each repeated root w_j
contributes exactly m_j - 1 bit-identical copies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .poly_field import RootSample, POLE_RTOL

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*a, **k):
        if a and callable(a[0]):
            return a[0]
        return lambda f: f


@dataclass(frozen=True)
class DistinctRoots:
    centers: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=complex)
        m = np.asarray(self.multiplicities, dtype=np.int64)
        if c.size != m.size or np.any(m < 1):
            raise ValueError("inconsistent multiplicity structure")
        c.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "multiplicities", m)

    @property
    def total(self) -> int:
        return int(self.multiplicities.sum())


@dataclass(frozen=True)
class CriticalSet:
    points: np.ndarray          # length n-1, with multiplicity
    residuals: np.ndarray       # |R(z)| * min_j |z - w_j| per point; 0 for exact copies
    iterations: int
    converged: bool

    def __post_init__(self):
        p = np.asarray(self.points, dtype=complex)
        r = np.asarray(self.residuals, dtype=float)
        p.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "residuals", r)

    def to_json(self) -> str:
        return json.dumps({
            "points": [[z.real, z.imag] for z in self.points],
            "meta": {
                "iterations": self.iterations,
                "max_residual": float(self.residuals.max()) if self.residuals.size else 0.0,
                "converged": self.converged,
            },
        })


@dataclass(frozen=True)
class SolverSettings:
    tol: float | None = None      # residual tolerance; default 1e-12 * (1 + max|w|)
    max_sweeps: int = 200
    perturbation: float = 1e-3    # initial-guess rotation, in units of diameter


@dataclass(frozen=True)
class GaussLucasReport:
    passed: bool
    violators: np.ndarray
    max_excess: float


def distinct_reduce(roots: RootSample, tol: float = 0.0) -> DistinctRoots:
    """Cluster roots within relative distance tol; tol=0 groups bit-identical values."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    pts = roots.points
    if tol == 0.0:
        seen: dict[complex, int] = {}
        centers, mults = [], []
        for z in pts:
            z = complex(z)
            if z in seen:
                mults[seen[z]] += 1
            else:
                seen[z] = len(centers)
                centers.append(z)
                mults.append(1)
        return DistinctRoots(np.array(centers, complex), np.array(mults))
    centers: list[complex] = []
    members: list[list[complex]] = []
    for z in pts:
        z = complex(z)
        placed = False
        for i, c in enumerate(centers):
            if abs(z - c) <= tol * (1 + abs(c)):
                members[i].append(z)
                centers[i] = sum(members[i]) / len(members[i])
                placed = True
                break
        if not placed:
            centers.append(z)
            members.append([z])
    return DistinctRoots(np.array(centers, complex),
                         np.array([len(m) for m in members]))


@njit(cache=True)
def _aberth_sweeps(w, m, z, tol_step, max_sweeps):  # pragma: no cover - jitted
    k = z.size
    active = np.ones(k, np.bool_)
    sweeps = 0
    for sweep in range(max_sweeps):
        # freezing settled points pays for itself, but a frozen point can be
        # nudged off its zero while neighbors move: once nothing moves, run a
        # full verification sweep and only stop if that one is also quiet
        full = True
        for i in range(k):
            if not active[i]:
                full = False
                break
        znew = z.copy()
        moved = False
        for i in range(k):
            if not active[i]:
                continue
            zi = z[i]
            s1 = 0j   # R(zi)
            s2 = 0j   # sum m_j/(zi-w_j)^2 = -R'(zi)
            a = 0j    # sum 1/(zi-w_j)
            clash = False
            for j in range(w.size):
                dz = zi - w[j]
                if abs(dz) < 1e-300:
                    clash = True
                    break
                inv = 1.0 / dz
                s1 += m[j] * inv
                s2 += m[j] * inv * inv
                a += inv
            if clash:
                znew[i] = zi + (1e-6 + 1e-6j) * (1.0 + abs(zi))
                moved = True
                continue
            if s1 == 0j:
                continue
            qlog = a - s2 / s1  # Q'/Q for Q = R * prod (z - w_j)
            if qlog == 0j:
                continue
            newton = 1.0 / qlog
            rep = 0j
            for j in range(k):
                if j != i:
                    dz = zi - z[j]
                    if abs(dz) > 1e-300:
                        rep += 1.0 / dz
            denom = 1.0 - newton * rep
            step = newton if denom == 0j else newton / denom
            znew[i] = zi - step
            if abs(step) > tol_step * (1.0 + abs(zi)):
                moved = True
            else:
                active[i] = False
        z = znew
        sweeps = sweep + 1
        if not moved:
            if full:
                break
            for i in range(k):
                active[i] = True
    return z, sweeps


def _secular_residuals(distinct: DistinctRoots, z: np.ndarray) -> np.ndarray:
    """Newton-correction magnitude |R(z)| / |R'(z)| per iterate.

    This estimates the distance to the true zero and stays meaningful when a
    zero sits close to a pole, where |R(z)| alone is conditioning-inflated.
    """
    d = z[:, None] - distinct.centers[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.abs(np.sum(distinct.multiplicities / d, axis=1))
        rp = np.abs(np.sum(distinct.multiplicities / d ** 2, axis=1))
    out = np.where(rp > 0, r / np.where(rp > 0, rp, 1.0), r)
    out[np.abs(d).min(axis=1) == 0.0] = 0.0
    return np.nan_to_num(out, nan=0.0)


def _pairing_init(centers: np.ndarray, mults: np.ndarray) -> np.ndarray:
    """First-order root-adjacent starts: near each center w_j the zero of
    R sits at about w_j - m_j / sum_{i != j} m_i/(w_j - w_i).  One candidate
    (the most isolated center, smallest field magnitude) is dropped to leave
    k - 1 iterates."""
    d = centers[:, None] - centers[None, :]
    np.fill_diagonal(d, np.inf)
    s = np.sum(mults[None, :] / d, axis=1)
    delta = np.where(s != 0, -mults / np.where(s == 0, 1, s), 1e-3)
    cand = centers + delta
    drop = int(np.argmin(np.abs(s)))
    return np.delete(cand, drop)


def _midpoint_init(centers: np.ndarray, perturbation: float) -> np.ndarray:
    order = np.lexsort((centers.imag, centers.real))
    w = centers[order]
    mid = 0.5 * (w[:-1] + w[1:])
    diam = float(np.max(np.abs(w[:, None] - w[None, :])))
    rng = np.random.Generator(np.random.PCG64(12345))
    theta = rng.uniform(0.0, 2 * np.pi, mid.size)
    return mid + perturbation * diam * np.exp(1j * theta)


def _circle_init(centers: np.ndarray, k: int) -> np.ndarray:
    centroid = centers.mean()
    radius = 1.5 * float(np.max(np.abs(centers - centroid)))
    angles = 2 * np.pi * np.arange(k) / k + 0.4
    return centroid + radius * np.exp(1j * angles)


def _solve_secular(distinct: DistinctRoots, opts: SolverSettings):
    centers = distinct.centers
    mults = distinct.multiplicities.astype(np.float64)
    k = centers.size
    tol = opts.tol
    if tol is None:
        tol = 1e-12 * (1 + float(np.max(np.abs(centers))))
    best = None
    for init in (_pairing_init(centers, mults),
                 _midpoint_init(centers, opts.perturbation),
                 _circle_init(centers, k - 1)):
        z, sweeps = _aberth_sweeps(centers, mults, init.astype(complex),
                                   1e-15, opts.max_sweeps)
        res = _secular_residuals(distinct, z)
        ok = bool(np.all(res <= tol)) and sweeps < opts.max_sweeps
        cand = (z, res, sweeps, ok)
        if ok:
            return cand
        if best is None or res.max() < best[1].max():
            best = cand
    return best


def critical_points(roots: RootSample, opts: SolverSettings = SolverSettings(),
                    multiplicity_tol: float = 0.0) -> CriticalSet:
    """All n-1 zeros of P_n' (with multiplicity), from the roots alone."""
    if roots.n < 2:
        raise ValueError("need n >= 2 roots")
    distinct = distinct_reduce(roots, multiplicity_tol)
    centers = distinct.centers
    mults = distinct.multiplicities
    rep_pts = np.repeat(centers, mults - 1)  # exact copies at repeated roots
    if centers.size == 1:
        return CriticalSet(rep_pts, np.zeros(rep_pts.size), 0, True)
    z, res, sweeps, ok = _solve_secular(distinct, opts)
    pts = np.concatenate([rep_pts, z])
    resid = np.concatenate([np.zeros(rep_pts.size), res])
    assert pts.size == roots.n - 1
    return CriticalSet(pts, resid, sweeps, ok)


def coefficient_oracle(roots: RootSample, max_degree: int = 64) -> CriticalSet:
    """Independent small-n oracle via coefficient expansion.

    With distinct roots w_j of multiplicity m_j,
    P' = prod_j (z - w_j)^(m_j - 1) * sum_j m_j prod_{l != j} (z - w_l),
    so the repeated-root factor is divided out exactly and the simple critical
    points come from companion eigenvalues of the remaining degree-(k-1)
    polynomial, then a guarded Newton polish on L_n.

    Rejects n > 64: the monomial basis is too ill-conditioned beyond that.
    """
    n = roots.n
    if n > max_degree:
        raise ValueError(f"coefficient oracle limited to n <= {max_degree}")
    if n < 2:
        raise ValueError("need n >= 2 roots")
    pts = roots.points
    distinct = distinct_reduce(roots, 0.0)
    rep_pts = np.repeat(distinct.centers, distinct.multiplicities - 1)
    w = distinct.centers
    if w.size == 1:
        return CriticalSet(rep_pts, np.zeros(rep_pts.size), 0, True)
    # rescale before expansion: |root|^n overflows for heavy-tailed samples,
    # and critical points are scale-equivariant.  The geometric mean keeps the
    # bulk near unit size even when one sample is a far Cauchy outlier,
    # whereas dividing by max|X| squashes everything else to ~0
    mags = np.abs(w)
    nz = mags[mags > 0]
    s = float(np.exp(np.mean(np.log(nz)))) if nz.size else 1.0
    if not math.isfinite(s) or s == 0.0:
        s = 1.0
    ws = w / s
    coeffs = np.zeros(w.size, dtype=complex)
    for j in range(w.size):
        coeffs += distinct.multiplicities[j] * np.poly(np.delete(ws, j))
    crit = s * np.asarray(np.roots(coeffs), dtype=complex)
    polished = np.empty(crit.size, dtype=complex)
    for i, z in enumerate(crit):
        z1 = _newton_on_L(pts, z)
        # a polish that wanders off is worse than no polish at all
        polished[i] = z1 if _point_residual(pts, z1) <= _point_residual(pts, z) else z
    polished = np.concatenate([rep_pts, polished])
    resid = np.array([_point_residual(pts, z) for z in polished])
    return CriticalSet(polished, resid, 0, True)


def _point_residual(pts: np.ndarray, z: complex) -> float:
    d = np.abs(z - pts)
    if d.min() == 0.0:
        return 0.0
    return abs(np.sum(1.0 / (z - pts))) * float(d.min())


def _newton_on_L(pts: np.ndarray, z: complex, steps: int = 256) -> complex:
    # the step cap is generous on purpose: at a zero of L with multiplicity m
    # Newton contracts only linearly at rate (m-1)/m, so clustered candidates
    # from the companion matrix need ~100 steps to settle
    for _ in range(steps):
        dz = z - pts
        dmin = float(np.abs(dz).min())
        if dmin < POLE_RTOL * (1 + abs(z)):
            break
        inv = 1.0 / dz
        L = np.sum(inv)
        if abs(L) <= 8e-16 * float(np.sum(np.abs(inv))):
            break  # L is pure cancellation noise; a further step is random
        Lp = -np.sum(inv ** 2)
        if Lp == 0:
            break
        step = L / Lp
        if abs(step) > 0.5 * dmin:  # keep iterates inside the current cell
            step *= 0.5 * dmin / abs(step)
        z = z - step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return z


def verify_gauss_lucas(roots: RootSample, crits: CriticalSet,
                       tol: float = 1e-8) -> GaussLucasReport:
    """Check every critical point against the convex hull of the roots,
    inflated outward by tol * diameter."""
    from shapely.geometry import MultiPoint, Point

    pts = roots.points
    hull = MultiPoint([(z.real, z.imag) for z in pts]).convex_hull
    diam = float(np.max(np.abs(pts[:, None] - pts[None, :]))) if pts.size > 1 else 0.0
    allowance = tol * max(diam, 1.0)
    excess = np.array([hull.distance(Point(z.real, z.imag)) for z in crits.points])
    bad = excess > allowance
    return GaussLucasReport(
        passed=not bool(bad.any()),
        violators=crits.points[bad],
        max_excess=float(excess.max()) if excess.size else 0.0,
    )


def pairing_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max matched distance under the optimal (Hungarian) bijection."""
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    if a.size != b.size:
        raise ValueError("point sets must have equal size")
    cost = np.abs(a[:, None] - b[None, :])
    ii, jj = linear_sum_assignment(cost)
    return float(cost[ii, jj].max()) if a.size else 0.0


def vieta_gap(roots: RootSample, crits: CriticalSet) -> float:
    """|mean(critical points) - mean(roots)|; analytically zero."""
    return float(abs(crits.points.mean() - roots.points.mean()))
