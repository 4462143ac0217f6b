#!/usr/bin/env python3
"""Entropy-estimator MSE curves from a sim-entropy CSV.

Usage: plot_entropy.py IN.csv OUT.png
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from plot_common import float_column, read_table, run_script, save

SERIES = [("mse_mle", "plug-in (MLE)"), ("mse_mm", "Miller-Madow"),
          ("mse_poly", "polynomial-corrected")]


def render(csv_path, out_path):
    columns = read_table(csv_path, ["S", "n"] + [c for c, _ in SERIES])
    s_values = float_column(columns, "S", csv_path)
    fig, ax = plt.subplots(figsize=(7, 5))
    for column, label in SERIES:
        ax.plot(s_values, float_column(columns, column, csv_path),
                marker="o", label=label)
    ax.set_xscale("log")
    ax.set_xlabel("alphabet size S")
    ax.set_ylabel("MSE (nats$^2$)")
    ax.set_title("Entropy estimation error along n = 5S/ln S")
    if s_values:
        ax.legend()
    save(fig, out_path)


def main(argv=None):
    return run_script(render, argv, "usage: plot_entropy.py IN.csv OUT.png")


if __name__ == "__main__":
    sys.exit(main())
