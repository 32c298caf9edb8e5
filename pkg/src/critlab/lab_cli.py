"""Experiment harness and command-line interface.

Subcommands: sample, crits, converge, diagnose <name>.  Runs are fully
deterministic given (config, seed): every CSV byte is fixed; wall-clock data
is quarantined to the manifest so reruns digest identically at any worker
count.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import measures
from .measures import DistributionSpec, Seed
from .poly_field import RootSample
from .critical_solver import (SolverSettings, critical_points, vieta_gap,
                              verify_gauss_lucas)
from .transport import EmpiricalMeasure, from_points, wasserstein1, EXACT_SIZE_CAP
from . import diagnostics as diag
from .grids import GridSpec
from .testfunctions import smooth_bump

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3

ALL_METRICS = ("w1_crit_root", "w1_crit_ref", "w1_root_ref",
               "vieta_gap", "hull_violations")
ALL_DIAGNOSTICS = ("lemma2", "poisson_jensen", "green",
                   "derivative_identity", "tightness", "concentration")

DEFAULT_N_LADDER = (64, 128, 256, 512, 1024, 2048)
REFERENCE_POINTS = 4096
SLICED_PROJECTIONS = 64


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    spec: DistributionSpec
    n_ladder: tuple = DEFAULT_N_LADDER
    trials: int = 50
    seed: Seed = Seed(0)
    metrics: tuple = ALL_METRICS
    diagnostics: tuple = ALL_DIAGNOSTICS
    output_dir: str = "runs"

    def __post_init__(self):
        lad = tuple(int(n) for n in self.n_ladder)
        if not lad or any(n < 2 for n in lad) or any(
                b <= a for a, b in zip(lad, lad[1:])):
            raise ConfigError("n_ladder must be strictly increasing, each >= 2")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        for m in self.metrics:
            if m not in ALL_METRICS:
                raise ConfigError(f"unknown metric {m!r}; valid: {ALL_METRICS}")
        for d in self.diagnostics:
            if d not in ALL_DIAGNOSTICS:
                raise ConfigError(f"unknown diagnostic {d!r}; valid: {ALL_DIAGNOSTICS}")
        object.__setattr__(self, "n_ladder", lad)

    def to_dict(self) -> dict:
        return {
            "dist": self.spec.to_dict(),
            "n_ladder": list(self.n_ladder),
            "trials": self.trials,
            "seed": {"master": self.seed.master, "stream": self.seed.stream},
            "metrics": list(self.metrics),
            "diagnostics": list(self.diagnostics),
            "output_dir": self.output_dir,
        }

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        try:
            spec = DistributionSpec.from_dict(d["dist"])
        except (KeyError, measures.SpecError) as e:
            raise ConfigError(f"bad 'dist' entry: {e}") from e
        sd = d.get("seed", {"master": 0, "stream": 0})
        return ExperimentConfig(
            spec=spec,
            n_ladder=tuple(d.get("n_ladder", DEFAULT_N_LADDER)),
            trials=int(d.get("trials", 50)),
            seed=Seed(int(sd.get("master", 0)), int(sd.get("stream", 0))),
            metrics=tuple(d.get("metrics", ALL_METRICS)),
            diagnostics=tuple(d.get("diagnostics", ALL_DIAGNOSTICS)),
            output_dir=d.get("output_dir", "runs"),
        )


def trial_seed(config: ExperimentConfig, task_index: int) -> Seed:
    return Seed(config.seed.master,
                config.seed.stream * 1_000_003 + task_index + 1)


def _fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


# -- convergence experiment -----------------------------------------------

_REF_CACHE: dict = {}


def _reference_measure(spec: DistributionSpec) -> EmpiricalMeasure:
    key = spec.to_json()
    if key not in _REF_CACHE:
        pts, w = measures.reference_discretization(spec, REFERENCE_POINTS)
        _REF_CACHE[key] = EmpiricalMeasure(pts, w / w.sum())
    return _REF_CACHE[key]


def _w1(mu: EmpiricalMeasure, nu: EmpiricalMeasure, seed: Seed) -> float:
    # the convergence harness always uses the sliced gauge: a ladder point at
    # n = 2048 exceeds the exact solver's pair cap and one method must be
    # used consistently across the ladder for trend comparisons
    return wasserstein1(mu, nu, method="sliced",
                        projections=SLICED_PROJECTIONS, seed=seed)


def run_trial(config_dict: dict, task_index: int) -> dict:
    """One (n, trial) cell of the convergence experiment.  Pure function of
    (config, task_index); safe to ship to worker processes."""
    config = ExperimentConfig.from_dict(config_dict)
    per_n = config.trials
    n = config.n_ladder[task_index // per_n]
    trial = task_index % per_n
    seed = trial_seed(config, task_index)
    t0 = time.perf_counter()
    roots = RootSample(measures.sample(config.spec, n, seed))
    mult_tol = 0.0  # atoms repeat bit-identically; continuous draws never do
    crits = critical_points(roots, SolverSettings(), multiplicity_tol=mult_tol)
    mu_n = from_points(crits.points)
    root_measure = from_points(roots.points)
    row = {
        "n": n,
        "trial": trial,
        "seed": seed.stream,
        "solver_converged": int(crits.converged),
    }
    w1_seed = Seed(config.seed.master, 777_000_000 + task_index)
    if "w1_crit_root" in config.metrics:
        row["w1_crit_root"] = _w1(mu_n, root_measure, w1_seed)
    if "w1_crit_ref" in config.metrics:
        row["w1_crit_ref"] = _w1(mu_n, _reference_measure(config.spec), w1_seed)
    if "w1_root_ref" in config.metrics:
        row["w1_root_ref"] = _w1(root_measure, _reference_measure(config.spec), w1_seed)
    if "vieta_gap" in config.metrics:
        row["vieta_gap"] = vieta_gap(roots, crits)
    if "hull_violations" in config.metrics:
        row["hull_violations"] = int(verify_gauss_lucas(roots, crits).violators.size)
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    return {"row": row, "runtime_ms": runtime_ms}


def _pool_trial(args):  # top-level for pickling
    return run_trial(*args)


def run_convergence(config: ExperimentConfig, workers: int = 1):
    """Run the full (n, trial) grid; write rows.csv, summary.csv, manifest.json.

    Rows appear in task order regardless of worker count, and per-row float
    formatting is shortest-round-trip, so outputs are byte-identical across
    reruns and worker counts.  Returns the manifest dict.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = config.to_dict()
    tasks = list(range(len(config.n_ladder) * config.trials))
    started = time.time()

    columns = ["n", "trial", "seed", "solver_converged"] + [
        m for m in ALL_METRICS if m in config.metrics]
    rows = []
    runtimes = []
    rows_path = out / "rows.csv"
    with open(rows_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        if workers <= 1:
            results = (run_trial(cfg, t) for t in tasks)
        else:
            import multiprocessing as mp
            pool = mp.get_context("spawn").Pool(workers)
            results = pool.imap(_pool_trial, [(cfg, t) for t in tasks])
        for res in results:
            row = res["row"]
            rows.append(row)
            runtimes.append(res["runtime_ms"])
            writer.writerow([_fmt(row.get(c, "")) for c in columns])
            fh.flush()  # crash safety: partial CSVs stay readable
        if workers > 1:
            pool.close()
            pool.join()

    summary_path = out / "summary.csv"
    _write_summary(summary_path, rows, config)

    manifest = {
        "config": cfg,
        "code_version": __version__,
        "started": started,
        "finished": time.time(),
        "complete": True,
        "trial_seeds": [trial_seed(config, t).stream for t in tasks],
        "runtimes_ms": runtimes,
        "digests": {
            "rows.csv": _sha256(rows_path),
            "summary.csv": _sha256(summary_path),
        },
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1))
    return manifest


def _write_summary(path: Path, rows, config: ExperimentConfig) -> None:
    metric_cols = [m for m in ALL_METRICS if m in config.metrics
                   and m != "hull_violations"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["n"]
        for m in metric_cols:
            header += [f"{m}_q25", f"{m}_median", f"{m}_q75"]
        header.append("nonconverged")
        writer.writerow(header)
        for n in config.n_ladder:
            sub = [r for r in rows if r["n"] == n]
            line = [str(n)]
            for m in metric_cols:
                vals = np.array([r[m] for r in sub], dtype=float)
                q25, med, q75 = np.percentile(vals, [25, 50, 75])
                line += [_fmt(float(q25)), _fmt(float(med)), _fmt(float(q75))]
            line.append(str(sum(1 - r["solver_converged"] for r in sub)))
            writer.writerow(line)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# -- diagnostics runners ---------------------------------------------------

def _offatom_point(spec: DistributionSpec) -> complex:
    """A point certified off-atom (finite log-energy), scaled to the spec."""
    s = measures.spec_scale(spec)
    for k in range(32):
        z = s * complex(0.731 + 0.07 * k, 0.389 - 0.03 * k)
        if not measures.is_atom(spec, z) and math.isfinite(
                measures.log_minus_energy(spec, z)):
            return z
    raise ConfigError("could not certify an off-atom evaluation point")


def run_diagnostic(name: str, config: ExperimentConfig, workers: int = 1):
    """Dispatch one diagnostic; writes <name>.csv plus a manifest."""
    if name not in ALL_DIAGNOSTICS:
        raise ConfigError(
            f"unknown diagnostic {name!r}; valid names: {', '.join(ALL_DIAGNOSTICS)}")
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    path = out / f"{name}.csv"
    runner = {
        "lemma2": _diag_lemma2,
        "poisson_jensen": _diag_poisson_jensen,
        "green": _diag_green,
        "derivative_identity": _diag_derivative,
        "tightness": _diag_tightness,
        "concentration": _diag_concentration,
    }[name]
    header, rows = runner(config)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
            fh.flush()
    manifest = {
        "config": config.to_dict(),
        "diagnostic": name,
        "code_version": __version__,
        "started": started,
        "finished": time.time(),
        "complete": True,
        "digests": {path.name: _sha256(path)},
    }
    (out / f"{name}_manifest.json").write_text(json.dumps(manifest, indent=1))
    return manifest


def _diag_lemma2(config: ExperimentConfig):
    z = _offatom_point(config.spec)
    rows = diag.lemma2_statistic(config.spec, z, eps=0.05,
                                 n_list=config.n_ladder,
                                 trials=config.trials, seed=config.seed)
    return (["n", "frequency"], [[r.n, r.frequency] for r in rows])


def _diag_poisson_jensen(config: ExperimentConfig):
    n = min(50, max(config.n_ladder[0], 10))
    roots = RootSample(measures.sample(config.spec, n, trial_seed(config, 0)))
    crits = critical_points(roots)
    scale = float(np.max(np.abs(roots.points)))
    R = 2.2 * max(scale, 1.0)
    rng = trial_seed(config, 1).rng()
    rows = []
    for i in range(20):
        for _ in range(64):
            z = complex(*rng.uniform(-0.4 * R, 0.4 * R, 2))
            try:
                rep = diag.poisson_jensen_check(roots, crits, z, R)
                break
            except diag.DiagnosticError:
                continue
        rows.append([i, z.real, z.imag, R, rep.lhs, rep.i_n,
                     rep.crit_sum, rep.root_sum, rep.residual, rep.i_n_error])
    return (["index", "z_re", "z_im", "R", "lhs", "poisson_integral",
             "crit_sum", "root_sum", "residual", "quad_error"], rows)


def _identity_rows(config: ExperimentConfig, which: str):
    n = min(50, max(config.n_ladder[0], 10))
    roots = RootSample(measures.sample(config.spec, n, trial_seed(config, 0)))
    scale = float(np.max(np.abs(roots.points)))
    phi = smooth_bump(0j, max(1.0, 0.8 * scale))
    half = phi.radius * 1.25
    rows = []
    for res in (256, 512, 1024):
        grid = GridSpec.square(half, res)
        if which == "green":
            d = diag.green_identity_check(roots, phi, grid)
        else:
            crits = critical_points(roots)
            d = diag.derivative_identity_check(roots, crits, phi, grid)
        rows.append([res, grid.hx, d])
    return (["resolution", "h", "discrepancy"], rows)


def _diag_green(config):
    return _identity_rows(config, "green")


def _diag_derivative(config):
    return _identity_rows(config, "derivative")


def _diag_tightness(config: ExperimentConfig):
    r = 1.5 * measures.spec_scale(config.spec)
    grid = GridSpec.square(r, 192)
    rows = []
    trials = min(config.trials, 10)
    for i, n in enumerate(config.n_ladder):
        for t in range(trials):
            roots = RootSample(measures.sample(config.spec, n,
                                               trial_seed(config, i * trials + t)))
            rows.append([n, t, diag.tightness_statistic(roots, r, grid)])
    return (["n", "trial", "T_n"], rows)


def _diag_concentration(config: ExperimentConfig):
    z = _offatom_point(config.spec)
    rows = diag.concentration_estimate(
        config.spec, z, n_list=config.n_ladder, delta=1.0,
        trials=max(config.trials, 500), seed=config.seed)
    return (["n", "q", "q_scaled"], [[r.n, r.q, r.q_scaled] for r in rows])


# -- command line ----------------------------------------------------------

def _load_spec_arg(arg: str) -> DistributionSpec:
    text = Path(arg[1:]).read_text() if arg.startswith("@") else arg
    try:
        return DistributionSpec.from_json(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON at line {e.lineno} col {e.colno}: {e.msg}")


def _config_from_args(args) -> ExperimentConfig:
    base: dict = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"malformed config JSON at line {e.lineno} col {e.colno}: {e.msg}")
        if "config" in base:  # accept a manifest as a config carrier
            base = base["config"]
    if args.dist:
        base["dist"] = _load_spec_arg(args.dist).to_dict()
    if args.n:
        base["n_ladder"] = [int(v) for v in args.n.split(",")]
    if args.trials is not None:
        base["trials"] = args.trials
    if args.seed is not None:
        parts = [int(v) for v in args.seed.split(",")]
        base["seed"] = {"master": parts[0],
                        "stream": parts[1] if len(parts) > 1 else 0}
    if args.out:
        base["output_dir"] = args.out
    if "dist" not in base:
        raise ConfigError("no distribution given (use --dist or --config)")
    return ExperimentConfig.from_dict(base)


def _add_common(p):
    p.add_argument("--config", help="JSON config file (or a manifest)")
    p.add_argument("--dist", help="distribution JSON, inline or @file")
    p.add_argument("--n", help="comma-separated n ladder")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", help="master[,stream]")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true",
                   help="exit 3 if any solve fails to converge")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lab_cli",
        description="critical points of random polynomials: experiment harness")
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", help="draw i.i.d. roots as JSON")
    ps.add_argument("--dist", required=True)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--seed", default="0")
    ps.add_argument("--out")

    pc = sub.add_parser("crits", help="critical points of roots read as JSON")
    pc.add_argument("--in", dest="infile", help="roots JSON file (default stdin)")
    pc.add_argument("--out")
    pc.add_argument("--strict", action="store_true")

    pv = sub.add_parser("converge", help="run the convergence experiment")
    _add_common(pv)

    pd = sub.add_parser("diagnose", help="run one diagnostic")
    pd.add_argument("name", help="|".join(n.replace("_", "-") for n in ALL_DIAGNOSTICS))
    _add_common(pd)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sample":
            spec = _load_spec_arg(args.dist)
            parts = [int(v) for v in args.seed.split(",")]
            seed = Seed(parts[0], parts[1] if len(parts) > 1 else 0)
            pts = measures.sample(spec, args.n, seed)
            text = json.dumps([[z.real, z.imag] for z in pts])
            _emit(text, args.out)
            return EXIT_OK
        if args.command == "crits":
            raw = Path(args.infile).read_text() if args.infile else sys.stdin.read()
            if not raw.strip():
                print("error: empty input; expected a JSON array of [re, im] pairs",
                      file=sys.stderr)
                return EXIT_CONFIG
            try:
                roots = RootSample.from_json(raw)
            except json.JSONDecodeError as e:
                print(f"error: malformed JSON at line {e.lineno} col {e.colno}: {e.msg}",
                      file=sys.stderr)
                return EXIT_CONFIG
            crits = critical_points(roots)
            _emit(crits.to_json(), args.out)
            if args.strict and not crits.converged:
                return EXIT_NONCONVERGED
            return EXIT_OK
        if args.command == "converge":
            config = _config_from_args(args)
            manifest = run_convergence(config, workers=args.workers)
            print(json.dumps(manifest["digests"]))
            if args.strict and any(
                    r > 0 for r in _nonconverged_counts(config)):
                return EXIT_NONCONVERGED
            return EXIT_OK
        if args.command == "diagnose":
            config = _config_from_args(args)
            name = args.name.replace("-", "_")
            manifest = run_diagnostic(name, config, workers=args.workers)
            print(json.dumps(manifest["digests"]))
            return EXIT_OK
    except (ConfigError, measures.SpecError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG  # pragma: no cover


def _nonconverged_counts(config: ExperimentConfig):
    path = Path(config.output_dir) / "rows.csv"
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [1 - int(r["solver_converged"]) for r in reader]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    raise SystemExit(main())
