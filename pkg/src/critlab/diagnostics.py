"""Proof-level formulas as numerical diagnostics.

Poisson kernel and integral, the Poisson-Jensen residual, the two weak-form
Laplacian identities, the (1/n) log|L_n| field statistic, the concentration
function of sum Re 1/(z - X), and the second-moment tightness statistic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import measures
from .grids import GridSpec, GridField
from .measures import DistributionSpec, Seed
from .poly_field import (RootSample, eval_L, scaled_log_abs_L,
                         log_abs_P_many, log_abs_L_many, POLE_RTOL)
from .critical_solver import CriticalSet
from .testfunctions import TestFunction


class DiagnosticError(ValueError):
    pass


# -- Poisson kernel and integral ------------------------------------------

def poisson_kernel(R: float, rho: float, phi) -> float:
    """(R^2 - rho^2) / (R^2 + rho^2 - 2 R rho cos phi), for 0 <= rho < R."""
    if not 0 <= rho < R:
        raise DiagnosticError(f"need 0 <= rho < R, got rho={rho}, R={R}")
    phi = np.asarray(phi, dtype=float)
    val = (R * R - rho * rho) / (R * R + rho * rho - 2 * R * rho * np.cos(phi))
    return float(val) if val.ndim == 0 else val


CIRCLE_GUARD_RTOL = 1e-9


def poisson_integral(roots: RootSample, z: complex, R: float,
                     quad: measures.QuadratureSettings = measures.QuadratureSettings()):
    """I_n(z;R): Poisson-kernel average of log|L_n| over the circle |w| = R.

    Returns (value, error_estimate).  Rejects configurations with a root on
    (or numerically on) the circle; perturb R in that case.
    """
    rho = abs(z)
    if rho >= R:
        raise DiagnosticError("z must lie strictly inside the circle")
    radial_gap = np.abs(np.abs(roots.points) - R)
    if radial_gap.min() < CIRCLE_GUARD_RTOL * R:
        raise DiagnosticError(
            "a root lies on the integration circle; perturb R slightly")
    arg_z = cmath.phase(z) if rho > 0 else 0.0

    def integrand(theta):
        w = R * cmath.exp(1j * theta)
        fv = eval_L(roots, w)
        a = abs(fv.value)
        if a == 0.0 or fv.at_pole:
            return 0.0  # measure-zero set; adaptive rule never lingers here
        return math.log(a) * poisson_kernel(R, rho, theta - arg_z) / (2 * math.pi)

    # subdivide at angles of roots close to the circle: |L| varies fastest there
    near = roots.points[radial_gap < 0.25 * R]
    pts = sorted({float(np.angle(w)) % (2 * math.pi) for w in near})
    val, err = integrate.quad(integrand, 0.0, 2 * math.pi,
                              points=pts or None, limit=max(quad.limit, 100 + 10 * len(pts)),
                              epsabs=quad.epsabs, epsrel=quad.epsrel)
    return val, err


# -- Poisson-Jensen identity ----------------------------------------------

@dataclass(frozen=True)
class PoissonJensenReport:
    z: complex
    R: float
    lhs: float                    # log|L_n(z)|
    i_n: float                    # Poisson integral value
    i_n_error: float
    crit_sum: float               # Blaschke-log sum over in-disk zeros of L_n
    root_sum: float               # Blaschke-log sum over in-disk poles of L_n
    in_disk_roots: np.ndarray
    in_disk_crits: np.ndarray
    residual: float


def _blaschke_log_sum(points: np.ndarray, z: complex, R: float) -> float:
    if points.size == 0:
        return 0.0
    num = np.abs(R * (z - points))
    den = np.abs(R * R - np.conj(points) * z)
    return math.fsum(np.log(num / den))


def poisson_jensen_check(roots: RootSample, crits: CriticalSet, z: complex,
                         R: float,
                         quad: measures.QuadratureSettings = measures.QuadratureSettings()
                         ) -> PoissonJensenReport:
    """Reconstruct log|L_n(z)| from the boundary integral plus Blaschke sums."""
    if abs(z) >= R:
        raise DiagnosticError("z must lie strictly inside the disk")
    guard = 1e-8 * R
    if np.abs(z - roots.points).min() < guard:
        raise DiagnosticError("z is too close to a root")
    if crits.points.size and np.abs(z - crits.points).min() < guard:
        raise DiagnosticError("z is too close to a critical point")
    in_roots = roots.points[np.abs(roots.points) < R]
    in_crits = crits.points[np.abs(crits.points) < R]
    assert in_roots.size <= roots.n and in_crits.size < roots.n
    i_n, err = poisson_integral(roots, z, R, quad)
    crit_sum = _blaschke_log_sum(in_crits, z, R)
    root_sum = _blaschke_log_sum(in_roots, z, R)
    lhs = math.log(abs(eval_L(roots, z).value))
    return PoissonJensenReport(
        z=z, R=R, lhs=lhs, i_n=i_n, i_n_error=err,
        crit_sum=crit_sum, root_sum=root_sum,
        in_disk_roots=in_roots, in_disk_crits=in_crits,
        residual=lhs - (i_n + crit_sum - root_sum),
    )


# -- weak-form Laplacian identities ---------------------------------------

def green_identity_check(roots: RootSample, phi: TestFunction,
                         grid: GridSpec) -> float:
    """|(1/2pi) int log|P_n| Delta(phi) dlambda  -  sum phi(X_i)|."""
    _require_support_inside(phi, grid)
    z = grid.centers()
    lap = phi.laplacian(z)
    logp = log_abs_P_many(roots, z)
    good = np.isfinite(logp)
    lhs = float(np.sum(logp[good] * lap[good]) * grid.cell_area / (2 * math.pi))
    rhs = float(np.sum(phi.value(roots.points)))
    return abs(lhs - rhs)


def derivative_identity_check(roots: RootSample, crits: CriticalSet,
                              phi: TestFunction, grid: GridSpec) -> float:
    """|(1/2pi n) int log|L_n| Delta(phi) dlambda
       - (1/n)(sum_crits phi - sum_roots phi)|."""
    _require_support_inside(phi, grid)
    n = roots.n
    z = grid.centers()
    lap = phi.laplacian(z)
    logl = log_abs_L_many(roots, z)
    good = np.isfinite(logl)
    lhs = float(np.sum(logl[good] * lap[good]) * grid.cell_area / (2 * math.pi * n))
    rhs = (float(np.sum(phi.value(crits.points)))
           - float(np.sum(phi.value(roots.points)))) / n
    return abs(lhs - rhs)


def _require_support_inside(phi: TestFunction, grid: GridSpec) -> None:
    c, r = phi.center, phi.radius
    pad = max(grid.hx, grid.hy)
    if (c.real - r < grid.x_min + pad or c.real + r > grid.x_max - pad
            or c.imag - r < grid.y_min + pad or c.imag + r > grid.y_max - pad):
        raise DiagnosticError("test-function support must sit inside the grid")


# -- field statistic near Lebesgue-typical points --------------------------

@dataclass(frozen=True)
class FrequencyRow:
    n: int
    frequency: float


def lemma2_statistic(spec: DistributionSpec, z: complex, eps: float,
                     n_list, trials: int, seed: Seed):
    """Empirical P[ |(1/n) log|L_n(z)|| >= eps ] for each n.

    z must be certified off-atom: the field statistic genuinely diverges at
    atoms of mu, so the guard is part of the contract.
    """
    if eps <= 0:
        raise DiagnosticError("eps must be > 0")
    if measures.is_atom(spec, z):
        raise DiagnosticError("z is an atom of mu; the statistic diverges there")
    if not math.isfinite(measures.log_minus_energy(spec, z)):
        raise DiagnosticError("z has infinite log-energy; pick a typical point")
    rows = []
    for i, n in enumerate(n_list):
        hits = 0
        for t in range(trials):
            pts = measures.sample(spec, n, seed.child(i * trials + t))
            v = scaled_log_abs_L(RootSample(pts), z)
            if not math.isfinite(v) or abs(v) >= eps:
                hits += 1
        rows.append(FrequencyRow(n=int(n), frequency=hits / trials))
    return rows


# -- concentration function -----------------------------------------------

@dataclass(frozen=True)
class ConcentrationRow:
    n: int
    q: float
    q_scaled: float  # q * sqrt(n)


def empirical_concentration(values: np.ndarray, delta: float) -> float:
    """sup_t (fraction of values in [t, t + delta]) by a sorted sliding window."""
    v = np.sort(np.asarray(values, dtype=float))
    hi = np.searchsorted(v, v + delta, side="right")
    best = int(np.max(hi - np.arange(v.size)))
    return best / v.size


def concentration_estimate(spec: DistributionSpec, z: complex, n_list,
                           delta: float, trials: int, seed: Seed):
    """Concentration function of sum_k Re(1/(z - X_k)) (or Im if Re degenerate),
    estimated over Monte Carlo replicates, with the sqrt(n)-scaled column."""
    if delta <= 0:
        raise DiagnosticError("delta must be > 0")
    pilot = measures.sample(spec, 4096, seed.child(0))
    y = 1.0 / (z - pilot)
    use_im = False
    if np.var(y.real) <= 0:
        if np.var(y.imag) <= 0:
            raise DiagnosticError(
                "1/(z - X) is degenerate in both components; "
                "the concentration bound does not apply")
        use_im = True
    rows = []
    for i, n in enumerate(n_list):
        rng = seed.child(i + 1).rng()
        sums = np.zeros(trials)
        # one replicate per row; draw in blocks to bound memory
        block = max(1, (1 << 22) // max(n, 1))
        for t0 in range(0, trials, block):
            t1 = min(trials, t0 + block)
            pts = measures._sample(spec, (t1 - t0) * n, rng).reshape(t1 - t0, n)
            comp = (1.0 / (z - pts))
            vals = comp.imag if use_im else comp.real
            sums[t0:t1] = vals.sum(axis=1)
        q = empirical_concentration(sums, delta)
        rows.append(ConcentrationRow(n=int(n), q=q, q_scaled=q * math.sqrt(n)))
    return rows


# -- tightness statistic ---------------------------------------------------

def tightness_statistic(roots: RootSample, r: float, grid: GridSpec) -> float:
    """T_n = (1/n^2) int_{D_r} log^2|L_n| dlambda, on a midpoint grid.

    Cells whose midpoint hits a pole are replaced by the analytic integral of
    (log m - log|w|)^2 over the disk of equal area (L_n ~ m/(w - pole) there).
    """
    if not (grid.x_min <= -r and grid.x_max >= r
            and grid.y_min <= -r and grid.y_max >= r):
        raise DiagnosticError("grid must cover the disk of radius r")
    z = grid.centers()
    in_disk = np.abs(z) < r
    logl = log_abs_L_many(roots, z)
    n = roots.n
    total = 0.0
    good = in_disk & np.isfinite(logl)
    total += float(np.sum(logl[good] ** 2) * grid.cell_area)
    # masked cells: pole hits (+inf) and exact zeros (-inf)
    bad_cells = np.flatnonzero((in_disk & ~np.isfinite(logl)).ravel())
    if bad_cells.size:
        h = math.sqrt(grid.cell_area / math.pi)  # equal-area disk radius
        zf = z.ravel()
        for idx in bad_cells:
            d = np.abs(zf[idx] - roots.points)
            if d.min() < POLE_RTOL * (1 + abs(zf[idx])):
                m = int(np.sum(d == d.min()))
                total += _log_sq_disk_integral(h, math.log(m))
            else:
                # exact zero of L_n: log^2 is integrable and small; the
                # equal-area disk integral of log^2|w| bounds the cell mass
                total += _log_sq_disk_integral(h, 0.0)
    return total / (n * n)


def _log_sq_disk_integral(h: float, c: float) -> float:
    """int_{|w| < h} (c - log|w|)^2 dlambda(w), in closed form."""
    # int_0^h rho log^2 rho drho and friends
    lh = math.log(h)
    i0 = 0.5 * h * h
    i1 = 0.5 * h * h * lh - 0.25 * h * h
    i2 = 0.5 * h * h * lh * lh - 0.5 * h * h * lh + 0.25 * h * h
    return 2 * math.pi * (c * c * i0 - 2 * c * i1 + i2)
