"""The headline experiment: empirical measure of critical points converges to
the root distribution.

For each ladder point n we draw roots, solve for the n-1 critical points,
and measure the sliced W1 distance between the two empirical clouds.  The
harness writes byte-reproducible CSVs; this demo runs a scaled-down ladder
so it finishes in under a minute.
"""

import csv
from pathlib import Path

import critlab as cl
from critlab.measures import Seed
from critlab.lab_cli import ExperimentConfig, run_convergence

out = Path("runs/demo_convergence")
config = ExperimentConfig(
    spec=cl.uniform_circle(0, 1),
    n_ladder=(64, 128, 256, 512),
    trials=10,
    seed=Seed(2026),
    metrics=("w1_crit_root", "vieta_gap", "hull_violations"),
    output_dir=str(out),
)

manifest = run_convergence(config, workers=1)
print("digests:", manifest["digests"])

with open(out / "summary.csv", newline="") as fh:
    rows = list(csv.DictReader(fh))

print(f"\n{'n':>6} {'W1(crits, roots) median':>24} {'max vieta gap':>14}")
for r in rows:
    print(f"{r['n']:>6} {float(r['w1_crit_root_median']):>24.5f} "
          f"{float(r['vieta_gap_q75']):>14.2e}")

first = float(rows[0]["w1_crit_root_median"])
last = float(rows[-1]["w1_crit_root_median"])
print(f"\nmedian W1 shrank by a factor {first / last:.2f} from n=64 to n=512")
print("rerunning from the manifest (or with --workers 8) reproduces the CSVs "
      "byte for byte")
