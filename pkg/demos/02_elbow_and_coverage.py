"""Choosing k: elbow sweep and combination coverage curve.

Produces the two plots an analyst looks at before pinning the cluster
count: best cost per k, and how much of the data the top-m combinations
cover. Saves PNGs next to this script when matplotlib ships.
"""
from pathlib import Path

from incat import FeatureSchema, combination_stats, coverage_top_m, sweep_k
from incat.fixtures import synthetic_matrix

schema = FeatureSchema.default()
rows, _ = synthetic_matrix(seed=2018)

print("== Elbow sweep (k = 2..20, seeded, 2 restarts each) ==")
report = sweep_k(rows, 2, 20, method="HUANG", seed=7, restarts=2, schema=schema)
best = None
for entry in report.entries:
    best = entry.cost if best is None else min(best, entry.cost)
    bar = "#" * max(1, entry.cost // 400)
    print(f"k={entry.k:>2}  cost={entry.cost:>6}  running min={best:>6}  {bar}")
print("The bend around k=10 is the configuration the pipeline defaults to.")

print()
print("== Combination coverage ==")
stats = combination_stats(rows, schema=schema)
curve = [(m, coverage_top_m(stats, m)) for m in range(0, stats.observed() + 1)]
for m in (1, 2, 4, 8, 16, 32, stats.observed()):
    m = min(m, stats.observed())
    print(f"top {m:>3} combinations -> {coverage_top_m(stats, m):6.1%} of rows")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(__file__).parent / "output"
    out_dir.mkdir(exist_ok=True)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([e.k for e in report.entries], [e.cost for e in report.entries], marker="o")
    ax.set_xlabel("k")
    ax.set_ylabel("best cost")
    ax.set_title("k-modes elbow sweep")
    fig.tight_layout()
    fig.savefig(out_dir / "elbow.png", dpi=120)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([m for m, _ in curve], [f for _, f in curve])
    ax.set_xlabel("top-m combinations")
    ax.set_ylabel("coverage")
    ax.set_title("combination coverage curve")
    fig.tight_layout()
    fig.savefig(out_dir / "coverage.png", dpi=120)
    print(f"\nplots written to {out_dir}/")
except ImportError:
    print("\nmatplotlib not installed; skipping plot files")
