#!/usr/bin/env python3
"""Per-dataset TAN error scatter (original vs modified) from a tan-compare
CSV; the y = x diagonal separates which variant won. Axes in percent.

Usage: plot_tan_scatter.py IN.csv OUT.png
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from plot_common import float_column, read_table, run_script, save


def render(csv_path, out_path):
    columns = read_table(csv_path, ["dataset", "error_mle", "error_poly"])
    x = [100.0 * v for v in float_column(columns, "error_mle", csv_path)]
    y = [100.0 * v for v in float_column(columns, "error_poly", csv_path)]
    fig, ax = plt.subplots(figsize=(6, 6))
    top = max(x + y + [1.0]) * 1.05
    ax.plot([0, top], [0, top], color="gray", linewidth=1, label="y = x")
    ax.scatter(x, y, zorder=3)
    ax.set_xlim(0, top)
    ax.set_ylim(0, top)
    ax.set_xlabel("original TAN error (%)")
    ax.set_ylabel("modified TAN error (%)")
    ax.set_title("Classification error per dataset")
    ax.legend()
    save(fig, out_path)


def main(argv=None):
    return run_script(render, argv, "usage: plot_tan_scatter.py IN.csv OUT.png")


if __name__ == "__main__":
    sys.exit(main())
