"""Seeded Monte Carlo runners behind the sim-entropy / sim-tree /
tan-compare CLI commands.

Every cell derives its own stream from (master seed, trial, tag), and both
estimator kinds always see the identical sampled data within a trial, so
sweeps are reproducible and the mle/poly comparison is exactly paired.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .estimators import (DEFAULT_CONFIG, entropy_mle, entropy_miller_madow,
                         entropy_poly)
from .graphical import chow_liu, random_star_model, sample_from_tree, wrong_edges_ratio
from .histograms import Histogram
from .rng import SeededGenerator
from .tan import cross_validate


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one sweep."""

    kind: str
    s_grid: tuple = ()
    n_grid: tuple = ()
    d: int = 7
    alphabet: int = 50
    mc: int = 20
    seed: int = 0
    fix_model: bool = False
    cfg: object = field(default=DEFAULT_CONFIG, compare=False)

    def __post_init__(self):
        if self.mc < 1:
            raise ValueError("mc must be >= 1")
        if self.kind == "entropy_sweep" and not self.s_grid:
            raise ValueError("entropy sweep needs a non-empty S grid")
        if self.kind == "tree_sweep" and not self.n_grid:
            raise ValueError("tree sweep needs a non-empty n grid")

    def comment_header(self, command):
        grid = self.s_grid or self.n_grid
        return [
            f"infotree v{__version__} {command}",
            f"seed={self.seed} mc={self.mc} grid={','.join(str(g) for g in grid)}"
            + (f" d={self.d} alphabet={self.alphabet} fix_model={self.fix_model}"
               if self.kind == "tree_sweep" else ""),
        ]


def sample_size_for_alphabet(S):
    """The sweep's sample-size rule n = ceil(5*S / ln S)."""
    return math.ceil(5.0 * S / math.log(S))


def run_entropy_sweep(spec: ExperimentSpec, sample_counts=None):
    """MSE of the entropy estimators on uniform sources along n = 5S/ln S.

    Returns (S, n, mse_mle, mse_mm, mse_poly) rows. ``sample_counts`` can
    replace the multinomial sampler (rng, S, n) -> counts, e.g. in tests.
    """
    master = SeededGenerator(spec.seed)
    rows = []
    for S in spec.s_grid:
        S = int(S)
        n = sample_size_for_alphabet(S)
        truth = math.log(S)
        sq = {"mle": [], "mm": [], "poly": []}
        for t in range(spec.mc):
            stream = master.derive(t, f"entropy-sweep-S{S}")
            if sample_counts is None:
                counts = stream.multinomial(n, np.full(S, 1.0 / S))
            else:
                counts = sample_counts(stream, S, n)
            h = Histogram(counts)
            sq["mle"].append((entropy_mle(h) - truth) ** 2)
            sq["mm"].append((entropy_miller_madow(h) - truth) ** 2)
            sq["poly"].append((entropy_poly(h, spec.cfg) - truth) ** 2)
        rows.append((S, n, float(np.mean(sq["mle"])), float(np.mean(sq["mm"])),
                     float(np.mean(sq["poly"]))))
    return rows


def run_tree_sweep(spec: ExperimentSpec):
    """Mean wrong-edges-ratio of both Chow-Liu variants per sample size.

    A fresh random star model is drawn per (n, trial) unless fix_model is
    set, in which case a single model (from the master seed) is reused; in
    both cases each trial's sample feeds both estimator kinds.
    """
    master = SeededGenerator(spec.seed)
    fixed = (
        random_star_model(spec.d, spec.alphabet, master.derive(0, "tree-model-fixed"))
        if spec.fix_model else None
    )
    rows = []
    for n in spec.n_grid:
        n = int(n)
        ratios = {"mle": [], "poly": []}
        for t in range(spec.mc):
            model = fixed
            if model is None:
                model = random_star_model(
                    spec.d, spec.alphabet, master.derive(t, f"tree-model-n{n}")
                )
            data = sample_from_tree(model, n, master.derive(t, f"tree-sample-n{n}"))
            for kind in ("mle", "poly"):
                est = chow_liu(data, kind, spec.cfg, alphabets=spec.alphabet)
                ratios[kind].append(
                    wrong_edges_ratio(est.structure, model.structure)
                )
        rows.append((n, float(np.mean(ratios["mle"])), float(np.mean(ratios["poly"]))))
    return rows


def run_tan_compare(manifest_rows, cfg=DEFAULT_CONFIG, folds=5, repeats=10,
                    seed=0, loader=None, report_error=None):
    """Matched-seed cross-validation of both TAN variants per dataset.

    ``manifest_rows`` are (dataset_path, label_col, quantize_bins,
    cluster_spec) tuples; failures are reported and the run continues.
    """
    from .dataio import load_dataset, parse_cluster_spec

    if loader is None:
        loader = load_dataset
    if report_error is None:
        report_error = lambda msg: print(msg, file=sys.stderr)
    rows = []
    for entry in manifest_rows:
        path, label_col, bins, cluster_spec = entry
        try:
            cluster = parse_cluster_spec(cluster_spec) if cluster_spec else None
            data = loader(path, label_col, quantize_bins=int(bins or 10),
                          cluster=cluster)
            report_mle = cross_validate(data, "mle", cfg, folds, repeats, seed)
            report_poly = cross_validate(data, "poly", cfg, folds, repeats, seed)
            if report_mle.fold_hashes != report_poly.fold_hashes:
                raise RuntimeError("fold partitions diverged between kinds")
            rows.append((path, report_mle.aggregate, report_poly.aggregate))
        except Exception as exc:  # keep sweeping the remaining datasets
            report_error(f"tan-compare: {path}: {exc}")
    return rows
