"""Independent region-map oracle (numpy only) for alpha=3, mu=1.4.

Writes tests/golden/regionmap_a3_mu1.4.csv with columns theta,phi,region.
Grid matches the CLI defaults; the script refuses to write if any cell sits
within 1e-6 of b = 0 or p+ = 0, so rounding can never flip a label.
"""
import pathlib
import sys

import numpy as np

ALPHA, MU = 3.0, 1.4
TH = np.linspace(0.05, 1.55, 61)
PH = np.linspace(0.05, 2.5, 50)

out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden" / "regionmap_a3_mu1.4.csv"

T, P = np.meshgrid(TH, PH, indexing="ij")
s, c = np.sin(T), np.cos(T)
b = -1.0 + P**2 * s
p = 1.0 + ALPHA * c**2 - MU * ALPHA * s * c

margin = min(np.abs(b).min(), np.abs(p).min())
if margin < 1e-6:
    sys.exit(f"grid cell within {margin:g} of a region boundary")

label = np.where(p > 0, np.where(b > 0, "liftoff", "slip"),
                 np.where(b > 0, "indeterminate", "inconsistent"))

# theta boundaries from the quadratic in tan(theta): tan^2 - mu alpha tan + (1 + alpha) = 0
disc = (MU * ALPHA) ** 2 - 4 * (1 + ALPHA)
t1, t2 = np.arctan(0.5 * (MU * ALPHA - np.sqrt(disc))), np.arctan(0.5 * (MU * ALPHA + np.sqrt(disc)))
print(f"theta1={t1:.12f} theta2={t2:.12f} min margin={margin:.3e}")

with open(out, "w", newline="\n") as f:
    f.write("theta,phi,region\n")
    for i in range(len(TH)):
        for j in range(len(PH)):
            f.write(f"{T[i, j]:.17g},{P[i, j]:.17g},{label[i, j]}\n")
print(f"wrote {out}")
