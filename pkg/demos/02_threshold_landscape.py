"""Map the equilibrium regimes across the prior for several accuracies.

Writes a plot-ready CSV (one row per (alpha, p)) marking which equilibria
exist at k=2, and prints the regime boundaries for alpha = 0.8.
"""

import csv
import sys
from fractions import Fraction

from retesting import (
    ModelParams,
    reject_all_threshold,
    report_all_regions,
    report_max_thresholds,
)

OUT = sys.argv[1] if len(sys.argv) > 1 else "threshold_landscape.csv"

rows = []
for alpha in (Fraction(3, 5), Fraction(7, 10), Fraction(4, 5), Fraction(9, 10)):
    for num in range(1, 100):
        p = Fraction(num, 100)
        params = ModelParams(p=p, alpha=alpha, phi=Fraction(1, 2), k=2)
        lower, upper = report_max_thresholds(params)
        first, non_first = report_all_regions(params)
        rows.append(
            {
                "alpha": float(alpha),
                "p": float(p),
                "max_separating": int(lower <= p <= upper),
                "max_reject_all": int(p <= reject_all_threshold(params)),
                "all_first_score": int(first),
                "all_non_first_score": int(non_first.contains(p)),
            }
        )

with open(OUT, "w", newline="") as fh:
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
print(f"wrote {len(rows)} rows to {OUT}")

params = ModelParams(p=Fraction(1, 2), alpha=Fraction(4, 5), phi=Fraction(1, 2), k=2)
lower, upper = report_max_thresholds(params)
first, non_first = report_all_regions(params)
print("\nregimes at alpha=0.8, phi=0.5, k=2 (thresholds in p):")
print(f"  reject-all sustainable   up to {float(reject_all_threshold(params)):.4f}")
print(f"  best-score separating    on [{float(lower):.4f}, {float(upper):.4f}]")
print(f"  first-score equilibrium  on [{float(params.alpha_bar):.4f}, {float(params.alpha):.4f}]")
print(f"  multi-score equilibria   on {non_first}")
