#!/usr/bin/env python3
"""Error-vs-training-size curves from a tan-curve CSV, one line per
estimator kind. Axes in percent.

Usage: plot_learning_curve.py IN.csv OUT.png
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from plot_common import float_column, read_table, run_script, save

STYLES = {"mle": ("s", "--", "original TAN"),
          "poly": ("o", "-", "modified TAN")}


def render(csv_path, out_path):
    columns = read_table(csv_path, ["size", "estimator", "mean_error"])
    sizes = float_column(columns, "size", csv_path)
    errors = [100.0 * v for v in float_column(columns, "mean_error", csv_path)]
    kinds = columns["estimator"]
    fig, ax = plt.subplots(figsize=(7, 5))
    for kind in dict.fromkeys(kinds):  # first-appearance order
        marker, style, label = STYLES.get(kind, ("x", ":", kind))
        xs = [s for s, k in zip(sizes, kinds) if k == kind]
        ys = [e for e, k in zip(errors, kinds) if k == kind]
        order = sorted(range(len(xs)), key=lambda i: xs[i])
        ax.plot([xs[i] for i in order], [ys[i] for i in order],
                marker=marker, linestyle=style, label=label)
    ax.set_xlabel("subset size")
    ax.set_ylabel("mean classification error (%)")
    ax.set_title("Learning curves")
    if sizes:
        ax.legend()
    save(fig, out_path)


def main(argv=None):
    return run_script(render, argv, "usage: plot_learning_curve.py IN.csv OUT.png")


if __name__ == "__main__":
    sys.exit(main())
