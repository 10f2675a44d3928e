"""Nearest-neighbour correlations in the three-spin interaction chain.

For 0 < g < 1 the adjacent pair is entangled (C > 0) yet never violates
the Bell-CHSH inequality -- quantum correlation in the form of
entanglement without nonlocality. For g < 0 the pair state is exactly
diagonal (classical), and the Bell-CHSH function reduces to the simple
diagonal-state expression B = 2 |1 + g| / (1 - g), which still detects
the transition at g = 0. The extra kink of B at g = -1 is an artifact
of the max function and is classified MATHEMATICAL.

Writes fig3_three_body_nearest.csv (and a PNG if matplotlib is there).
"""

import csv
from pathlib import Path

import numpy as np

from mpsbell import SweepSpec, find_singularities, run_sweep, three_body_family

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

family = three_body_family()
step = 0.01
gs = tuple(np.round(np.arange(-2.0, 2.0 + step / 2, step), 12))
result = run_sweep(SweepSpec(family=family, g_values=gs, r=1,
                             measures=("bcf", "concurrence")))

g = result.g
B = result.column("bcf")
C = result.column("concurrence")

inside = (g > 0) & (g < 1)
print(f"0 < g < 1: min C = {C[inside].min():.3e} (> 0, entangled), "
      f"max B = {B[inside].max():.6f} (<= 2, local)")
neg = g < 0
formula = 2.0 * np.abs(1.0 + g[neg]) / (1.0 - g[neg])
print(f"g < 0 classical branch: max |B - 2|1+g|/(1-g)| = "
      f"{np.max(np.abs(B[neg] - formula)):.3e}")
for rep in find_singularities(result):
    center = 0.5 * (rep.g_star[0] + rep.g_star[1])
    print(f"kink at g ~ {center:+.3f}: {rep.kind}")

csv_path = OUT / "fig3_three_body_nearest.csv"
with csv_path.open("w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["g", "B", "C"])
    writer.writerows(zip(g, B, C))
print(f"wrote {csv_path}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(g, B, label="B (Bell-CHSH)")
    ax.plot(g, C, label="C (concurrence)")
    ax.axhline(2.0, color="gray", lw=0.8, ls="--")
    for v in (-1, 0):
        ax.axvline(v, color="gray", lw=0.5, ls=":")
    ax.set_xlabel("g")
    ax.set_ylabel("measure")
    ax.legend()
    fig.tight_layout()
    fig.savefig(OUT / "fig3_three_body_nearest.png", dpi=150)
    print(f"wrote {OUT / 'fig3_three_body_nearest.png'}")
