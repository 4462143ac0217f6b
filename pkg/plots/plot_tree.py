#!/usr/bin/env python3
"""Wrong-edges-ratio phase-transition curves from a sim-tree CSV.

Usage: plot_tree.py IN.csv OUT.png
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from plot_common import float_column, read_table, run_script, save


def render(csv_path, out_path):
    columns = read_table(csv_path, ["n", "ratio_mle_mean", "ratio_poly_mean"])
    n_values = float_column(columns, "n", csv_path)
    mle = float_column(columns, "ratio_mle_mean", csv_path)
    poly = float_column(columns, "ratio_poly_mean", csv_path)
    suspicious = [r for r in mle + poly if not 0.0 <= r <= 1.2]
    if suspicious:
        print(f"warning: {len(suspicious)} ratio value(s) outside [0, 1.2]; "
              "is the truth really a star?", file=sys.stderr)
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(n_values, mle, marker="s", label="Chow-Liu (empirical MI)")
    ax.plot(n_values, poly, marker="o", label="Chow-Liu (polynomial-corrected MI)")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("mean wrong-edges-ratio")
    ax.set_title("Star-tree recovery")
    if n_values:
        ax.legend()
    save(fig, out_path)


def main(argv=None):
    return run_script(render, argv, "usage: plot_tree.py IN.csv OUT.png")


if __name__ == "__main__":
    sys.exit(main())
