"""Root distributions: parametric families, deterministic sampling, log-energies.

A distribution mu on the complex plane is described symbolically by a
DistributionSpec.  Everything downstream (sampling, atom bookkeeping,
negative-log energy integrals) is driven by that symbolic description, so
atoms are never guessed from floating-point coincidences.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.stats import ncx2

FAMILIES = (
    "point_mass",
    "finite_atoms",
    "uniform_circle",
    "uniform_disk",
    "gaussian",
    "radial_cauchy",
    "mixture",
)

# |z - a| below this (relative) counts as "z is the declared atom a"
_ATOM_RTOL = 1e-13

_WEIGHT_TOL = 1e-12


class SpecError(ValueError):
    """Invalid distribution specification."""


@dataclass(frozen=True)
class Seed:
    """Master seed plus a stream counter; distinct streams are disjoint."""

    master: int
    stream: int = 0

    def child(self, k: int) -> "Seed":
        return Seed(self.master, self.stream * 100003 + k + 1)

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class QuadratureSettings:
    epsabs: float = 1e-9
    epsrel: float = 1e-9
    limit: int = 200
    # nodes for the angular rule used by radial_cauchy disk masses
    angular_nodes: int = 256


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: dict = field(default_factory=dict)
    shift: complex = 0j

    def __post_init__(self):
        validate(self)

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": _params_to_jsonable(self.family, self.params),
            "shift": [self.shift.real, self.shift.imag],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @staticmethod
    def from_dict(d: dict) -> "DistributionSpec":
        try:
            family = d["family"]
            params = _params_from_jsonable(family, d.get("params", {}))
            sh = d.get("shift", [0.0, 0.0])
            shift = complex(sh[0], sh[1])
        except (KeyError, TypeError, IndexError) as e:
            raise SpecError(f"malformed spec object: {e}") from e
        return DistributionSpec(family, params, shift)

    @staticmethod
    def from_json(s: str) -> "DistributionSpec":
        return DistributionSpec.from_dict(json.loads(s))

    def shifted(self, a: complex) -> "DistributionSpec":
        return DistributionSpec(self.family, self.params, self.shift + a)


def _params_to_jsonable(family, params):
    out = {}
    for k, v in params.items():
        if k == "components":
            out[k] = [c.to_dict() for c in v]
        elif isinstance(v, complex):
            out[k] = [v.real, v.imag]
        elif k == "points":
            out[k] = [[p.real, p.imag] for p in v]
        elif k == "weights":
            out[k] = list(map(float, v))
        else:
            out[k] = v
    return out


def _params_from_jsonable(family, params):
    out = {}
    for k, v in params.items():
        if k == "components":
            out[k] = tuple(DistributionSpec.from_dict(c) for c in v)
        elif k in ("center",):
            out[k] = complex(v[0], v[1])
        elif k == "points":
            out[k] = tuple(complex(p[0], p[1]) for p in v)
        elif k == "weights":
            out[k] = tuple(map(float, v))
        else:
            out[k] = v
    return out


# -- constructors ---------------------------------------------------------

def point_mass(c: complex, shift: complex = 0j) -> DistributionSpec:
    return DistributionSpec("point_mass", {"center": complex(c)}, shift)


def finite_atoms(points, weights=None, shift: complex = 0j) -> DistributionSpec:
    pts = tuple(complex(p) for p in points)
    if weights is None:
        weights = tuple(1.0 / len(pts) for _ in pts)
    return DistributionSpec(
        "finite_atoms", {"points": pts, "weights": tuple(map(float, weights))}, shift
    )


def uniform_circle(center: complex, radius: float, shift: complex = 0j) -> DistributionSpec:
    return DistributionSpec(
        "uniform_circle", {"center": complex(center), "radius": float(radius)}, shift
    )


def uniform_disk(center: complex, radius: float, shift: complex = 0j) -> DistributionSpec:
    return DistributionSpec(
        "uniform_disk", {"center": complex(center), "radius": float(radius)}, shift
    )


def gaussian(center: complex, scale: float = 1.0, shift: complex = 0j) -> DistributionSpec:
    return DistributionSpec(
        "gaussian", {"center": complex(center), "scale": float(scale)}, shift
    )


def radial_cauchy(center: complex, scale: float = 1.0, shift: complex = 0j) -> DistributionSpec:
    """Heavy-tailed family: radius |scale * Cauchy|, angle uniform.  No moments."""
    return DistributionSpec(
        "radial_cauchy", {"center": complex(center), "scale": float(scale)}, shift
    )


def mixture(components, weights, shift: complex = 0j) -> DistributionSpec:
    return DistributionSpec(
        "mixture",
        {"components": tuple(components), "weights": tuple(map(float, weights))},
        shift,
    )


def validate(spec: DistributionSpec) -> None:
    if spec.family not in FAMILIES:
        raise SpecError(f"unknown family {spec.family!r}")
    p = spec.params
    if not (math.isfinite(spec.shift.real) and math.isfinite(spec.shift.imag)):
        raise SpecError("shift must be finite")
    if spec.family in ("uniform_circle", "uniform_disk"):
        if p["radius"] <= 0:
            raise SpecError("radius must be > 0")
    if spec.family in ("gaussian", "radial_cauchy"):
        if p["scale"] <= 0:
            raise SpecError("scale must be > 0")
    if spec.family in ("finite_atoms", "mixture"):
        w = np.asarray(p["weights"], dtype=float)
        if np.any(w < 0):
            raise SpecError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > _WEIGHT_TOL:
            raise SpecError(f"weights sum to {w.sum()}, not 1")
    if spec.family == "finite_atoms":
        if len(p["points"]) != len(p["weights"]):
            raise SpecError("points/weights length mismatch")
        for pt in p["points"]:
            if not (math.isfinite(pt.real) and math.isfinite(pt.imag)):
                raise SpecError("atoms must be finite")
    if spec.family == "mixture":
        if len(p["components"]) != len(p["weights"]):
            raise SpecError("components/weights length mismatch")


# -- sampling -------------------------------------------------------------

def sample(spec: DistributionSpec, n: int, seed: Seed) -> np.ndarray:
    """n i.i.d. draws from the distribution, bit-reproducible per (spec, n, seed)."""
    if n < 1:
        raise SpecError("n must be >= 1")
    validate(spec)
    return _sample(spec, n, seed.rng())


def _sample(spec: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    p = spec.params
    fam = spec.family
    if fam == "point_mass":
        out = np.full(n, p["center"], dtype=complex)
    elif fam == "finite_atoms":
        idx = rng.choice(len(p["points"]), size=n, p=np.asarray(p["weights"], float))
        out = np.asarray(p["points"], dtype=complex)[idx]
    elif fam == "uniform_circle":
        theta = rng.uniform(0.0, 2 * np.pi, n)
        out = p["center"] + p["radius"] * np.exp(1j * theta)
    elif fam == "uniform_disk":
        theta = rng.uniform(0.0, 2 * np.pi, n)
        r = p["radius"] * np.sqrt(rng.uniform(0.0, 1.0, n))
        out = p["center"] + r * np.exp(1j * theta)
    elif fam == "gaussian":
        out = p["center"] + p["scale"] * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    elif fam == "radial_cauchy":
        theta = rng.uniform(0.0, 2 * np.pi, n)
        r = p["scale"] * np.abs(rng.standard_cauchy(n))
        out = p["center"] + r * np.exp(1j * theta)
    elif fam == "mixture":
        idx = rng.choice(len(p["components"]), size=n, p=np.asarray(p["weights"], float))
        out = np.empty(n, dtype=complex)
        for j, comp in enumerate(p["components"]):
            where = np.flatnonzero(idx == j)
            if where.size:
                out[where] = _sample(comp, where.size, rng)
    else:  # pragma: no cover
        raise SpecError(fam)
    return out + spec.shift


# -- symbolic atom structure ----------------------------------------------

def atoms(spec: DistributionSpec):
    """Declared atoms of mu as a list of (location, weight); empty for continuous families."""
    fam = spec.family
    p = spec.params
    if fam == "point_mass":
        raw = [(p["center"] + spec.shift, 1.0)]
    elif fam == "finite_atoms":
        raw = [(pt + spec.shift, w) for pt, w in zip(p["points"], p["weights"])]
    elif fam == "mixture":
        raw = []
        for comp, w in zip(p["components"], p["weights"]):
            raw.extend((a + spec.shift, w * wa) for a, wa in atoms(comp))
    else:
        return []
    merged: dict[complex, float] = {}
    for a, w in raw:
        merged[a] = merged.get(a, 0.0) + w
    return [(a, w) for a, w in merged.items() if w > 0]


def is_atom(spec: DistributionSpec, z: complex) -> bool:
    return any(abs(z - a) <= _ATOM_RTOL * (1 + abs(a)) for a, _ in atoms(spec))


def radial_atoms(spec: DistributionSpec):
    """Atoms of the radial part mu_bar, as (radius, weight) pairs."""
    out = [(abs(a), w) for a, w in atoms(spec)]
    out.extend(_circle_radial_atoms(spec, spec.shift))
    merged: dict[float, float] = {}
    for r, w in out:
        merged[r] = merged.get(r, 0.0) + w
    return sorted(merged.items())


def _circle_radial_atoms(spec, shift):
    # a uniform circle whose effective center is the origin projects to a
    # single radius under z -> |z|
    fam = spec.family
    p = spec.params
    if fam == "uniform_circle":
        if abs(p["center"] + shift) <= _ATOM_RTOL * (1 + p["radius"]):
            return [(p["radius"], 1.0)]
        return []
    if fam == "mixture":
        out = []
        for comp, w in zip(p["components"], p["weights"]):
            out.extend((r, w * wr) for r, wr in _circle_radial_atoms(comp, shift + comp.shift))
        return out
    return []


def is_radial_atom(spec: DistributionSpec, R: float) -> bool:
    return any(abs(R - r) <= _ATOM_RTOL * (1 + r) for r, _ in radial_atoms(spec))


def spec_scale(spec: DistributionSpec) -> float:
    """Rough radius of a disk holding the bulk of mu; used for default windows."""
    p = spec.params
    fam = spec.family
    if fam == "point_mass":
        s = abs(p["center"])
    elif fam == "finite_atoms":
        s = max(abs(pt) for pt in p["points"])
    elif fam in ("uniform_circle", "uniform_disk"):
        s = abs(p["center"]) + p["radius"]
    elif fam == "gaussian":
        s = abs(p["center"]) + 2 * p["scale"]
    elif fam == "radial_cauchy":
        s = abs(p["center"]) + p["scale"]
    else:
        s = max(spec_scale(c) for c in p["components"])
    return max(s + abs(spec.shift), 1e-6)


# -- disk masses ----------------------------------------------------------

def distance_cdf(spec: DistributionSpec, z0: complex, s: float,
                 quad: QuadratureSettings = QuadratureSettings()) -> float:
    """mu({y : |y - z0| <= s}), the mass of the closed disk of radius s at z0."""
    if s < 0:
        return 0.0
    return _disk_mass(spec, z0 - spec.shift, s, quad)


def _disk_mass(spec, z0, s, quad):
    # z0 is expressed relative to the family (shift already removed)
    p = spec.params
    fam = spec.family
    if fam == "point_mass":
        return 1.0 if abs(z0 - p["center"]) <= s else 0.0
    if fam == "finite_atoms":
        return float(sum(w for pt, w in zip(p["points"], p["weights"])
                         if abs(z0 - pt) <= s))
    d = abs(z0 - p["center"]) if fam != "mixture" else None
    if fam == "uniform_circle":
        a = p["radius"]
        if d == 0.0:
            return 1.0 if a <= s else 0.0
        t = (a * a + d * d - s * s) / (2 * a * d)
        if t >= 1.0:
            return 0.0
        if t <= -1.0:
            return 1.0
        return math.acos(t) / math.pi
    if fam == "uniform_disk":
        a = p["radius"]
        return _lens_area(d, s, a) / (math.pi * a * a)
    if fam == "gaussian":
        sig = p["scale"]
        return float(ncx2.cdf((s / sig) ** 2, 2, (d / sig) ** 2))
    if fam == "radial_cauchy":
        return _radial_family_disk_mass(_halfcauchy_cdf(p["scale"]), d, s, quad)
    if fam == "mixture":
        return float(sum(w * _disk_mass(c, z0 - c.shift, s, quad)
                         for c, w in zip(p["components"], p["weights"])))
    raise SpecError(fam)  # pragma: no cover


def _lens_area(d, r1, r2):
    """Area of the intersection of disks of radii r1, r2 with centers d apart."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        r = min(r1, r2)
        return math.pi * r * r
    a1 = math.acos(np.clip((d * d + r1 * r1 - r2 * r2) / (2 * d * r1), -1, 1))
    a2 = math.acos(np.clip((d * d + r2 * r2 - r1 * r1) / (2 * d * r2), -1, 1))
    tri = 0.5 * math.sqrt(max(0.0, (-d + r1 + r2) * (d + r1 - r2)
                              * (d - r1 + r2) * (d + r1 + r2)))
    return r1 * r1 * a1 + r2 * r2 * a2 - tri


def _halfcauchy_cdf(scale):
    def F(r):
        return (2.0 / math.pi) * np.arctan(np.maximum(r, 0.0) / scale)
    return F


def _radial_family_disk_mass(F_radius, d, s, quad):
    """Disk mass for a family with uniform angle and radius-cdf F_radius.

    Along the ray at angle phi from the family center, the disk D_s(z0)
    (center distance d) is hit for radii in [r-, r+] with
    r_pm = d cos(phi) -++ sqrt(s^2 - d^2 sin^2 phi).
    """
    if d == 0.0:
        return float(F_radius(s))
    if s >= d:
        phi_max = math.pi
    else:
        phi_max = math.asin(s / d)
    nodes, weights = np.polynomial.legendre.leggauss(quad.angular_nodes)
    phi = 0.5 * phi_max * (nodes + 1.0)
    w = 0.5 * phi_max * weights
    disc = s * s - (d * np.sin(phi)) ** 2
    disc = np.maximum(disc, 0.0)
    root = np.sqrt(disc)
    hi = d * np.cos(phi) + root
    lo = d * np.cos(phi) - root
    mass = F_radius(np.maximum(hi, 0.0)) - F_radius(np.maximum(lo, 0.0))
    return float(np.sum(w * mass) / math.pi)


# -- log_- energies -------------------------------------------------------

def _cdf_kink_distances(spec, z0):
    """Radii where s -> mu(D_s(z0)) has kinks or jumps, for quadrature splitting."""
    out = []
    for a, _ in atoms(spec):
        out.append(abs(z0 - a))
    p = spec.params
    fam = spec.family
    if fam in ("uniform_circle", "uniform_disk"):
        d = abs(z0 - spec.shift - p["center"])
        out.extend([abs(d - p["radius"]), d + p["radius"]])
    if fam == "radial_cauchy":
        out.append(abs(z0 - spec.shift - p["center"]))
    if fam == "mixture":
        for c in p["components"]:
            out.extend(_cdf_kink_distances(c.shifted(spec.shift), z0))
    return out


def log_minus_energy(spec: DistributionSpec, z: complex,
                     quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Integral of log_-|y - z| over dmu(y); +inf exactly at declared atoms.

    Uses the layer-cake identity
        int log_-|y-z| dmu(y) = int_0^1 mu(D_s(z)) / s ds,
    which absorbs the logarithmic singularity analytically: every declared
    atom at distance dist < 1 contributes exactly weight * log(1/dist).
    """
    validate(spec)
    if is_atom(spec, z):
        return math.inf
    pts = sorted({float(d) for d in _cdf_kink_distances(spec, z) if 0 < d < 1})
    val, _ = integrate.quad(
        lambda s: distance_cdf(spec, z, s, quad) / s, 0.0, 1.0,
        points=pts or None, limit=quad.limit,
        epsabs=quad.epsabs, epsrel=quad.epsrel,
    )
    return max(val, 0.0)


def radial_log_energy(spec: DistributionSpec, R: float,
                      quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Integral of log_-|x - R| over the radial part mu_bar of mu.

    Same layer-cake identity with nu(s) = mu_bar((R-s, R+s)) = mass of the
    annulus { y : | |y| - R | < s }.  +inf exactly at declared radial atoms.
    """
    validate(spec)
    if R <= 0:
        raise SpecError("R must be > 0")
    if is_radial_atom(spec, R):
        return math.inf

    def modulus_cdf(t):
        return distance_cdf(spec, 0j, t, quad) if t > 0 else 0.0

    pts = set()
    for r, _ in radial_atoms(spec):
        d = abs(r - R)
        if 0 < d < 1:
            pts.add(d)
    for d in _cdf_kink_distances(spec, 0j):
        dd = abs(d - R)
        if 0 < dd < 1:
            pts.add(dd)

    val, _ = integrate.quad(
        lambda s: (modulus_cdf(R + s) - modulus_cdf(R - s)) / s, 0.0, 1.0,
        points=sorted(pts) or None,
        limit=quad.limit, epsabs=quad.epsabs, epsrel=quad.epsrel,
    )
    return max(val, 0.0)


# -- quadrature sanity constants ------------------------------------------

def disk_log_minus_mass(resolution: int = 1024, center: complex = 0j) -> float:
    """Midpoint-grid quadrature of int_{D_1(center)} log_-|z - center| dlambda(z).

    The exact value is pi/2 for every center.
    """
    h = 2.0 / resolution
    ax = center.real + (np.arange(resolution) + 0.5) * h - 1.0
    ay = center.imag + (np.arange(resolution) + 0.5) * h - 1.0
    X, Y = np.meshgrid(ax, ay)
    r = np.hypot(X - center.real, Y - center.imag)
    inside = (r < 1.0) & (r > 0.0)
    return float(np.sum(-np.log(r[inside])) * h * h)


def line_log_minus_mass(x: float = 0.0,
                        quad: QuadratureSettings = QuadratureSettings()) -> float:
    """1-D quadrature of int_R log_-|R - x| dR; the exact value is 2."""
    val, _ = integrate.quad(
        lambda t: -math.log(abs(t - x)), x - 1.0, x + 1.0,
        points=[x], limit=quad.limit, epsabs=min(quad.epsabs, 1e-10), epsrel=1e-10,
    )
    return val


def reference_discretization(spec: DistributionSpec, m: int = 4096):
    """Deterministic quasi-random m-point discretization of mu.

    Returns (points, weights).  Atomic families return their exact atoms.
    Used as the finite stand-in for continuous mu in transport distances.
    """
    validate(spec)
    ats = atoms(spec)
    if spec.family in ("point_mass", "finite_atoms"):
        pts = np.array([a for a, _ in ats], dtype=complex)
        w = np.array([w for _, w in ats], dtype=float)
        return pts, w / w.sum()
    from scipy.stats import qmc, norm

    u = qmc.Halton(d=2, scramble=False, seed=0).random(m + 1)[1:]  # drop (0,0)
    p = spec.params
    fam = spec.family
    if fam == "uniform_circle":
        pts = p["center"] + p["radius"] * np.exp(2j * np.pi * u[:, 0])
    elif fam == "uniform_disk":
        pts = p["center"] + p["radius"] * np.sqrt(u[:, 1]) * np.exp(2j * np.pi * u[:, 0])
    elif fam == "gaussian":
        pts = p["center"] + p["scale"] * (norm.ppf(u[:, 0]) + 1j * norm.ppf(u[:, 1]))
    elif fam == "radial_cauchy":
        r = p["scale"] * np.tan(0.5 * np.pi * u[:, 1])
        pts = p["center"] + r * np.exp(2j * np.pi * u[:, 0])
    elif fam == "mixture":
        parts_p, parts_w = [], []
        for comp, w in zip(p["components"], p["weights"]):
            if w <= 0:
                continue
            mc = max(1, int(round(m * w)))
            cp, cw = reference_discretization(comp, mc)
            parts_p.append(cp)
            parts_w.append(cw * w)
        pts = np.concatenate(parts_p)
        w = np.concatenate(parts_w)
        w = w / w.sum()
        return pts + spec.shift, w
    else:  # pragma: no cover
        raise SpecError(fam)
    pts = pts + spec.shift
    return pts, np.full(len(pts), 1.0 / len(pts))
