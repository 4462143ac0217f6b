"""Command-line interface.

Subcommands: approx, entropy, mi, chowliu, sim-entropy, sim-tree, tan-cv,
tan-curve, tan-compare. All randomized commands take --seed (falling back
to the INFOTREE_SEED environment variable, then a fixed default) and write
deterministic CSV: same seed, same bytes.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .dataio import (emit_csv, format_value, load_count_file, load_dataset,
                     load_samples_matrix, parse_cluster_spec, read_csv_rows,
                     resolve_seed)
from .estimators import (EstimatorConfig, entropy_mle, entropy_miller_madow,
                         entropy_poly, mutual_information)
from .experiments import (ExperimentSpec, run_entropy_sweep, run_tan_compare,
                          run_tree_sweep)
from .graphical import mwst, pairwise_mi_weights
from .histograms import Histogram, JointHistogram
from .tan import cross_validate, learning_curve


def _add_config_args(p):
    p.add_argument("--c1", type=float, default=4.0,
                   help="low-count threshold constant (count <= c1*ln n)")
    p.add_argument("--c2", type=float, default=1.8,
                   help="polynomial degree constant (degree = ceil(c2*ln n))")
    p.add_argument("--interval-slack", type=float, default=2.0,
                   help="multiplier on the approximation interval width")


def _config_from(args):
    return EstimatorConfig(c1=args.c1, c2=args.c2, interval_slack=args.interval_slack)


def _parse_int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="infotree",
        description="Entropy/mutual-information estimation and tree learning",
    )
    parser.add_argument("--version", action="version", version=f"infotree {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="best polynomial approximation of -x ln x")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--method", choices=["remez", "cheb"], default="remez")
    p.add_argument("--out", required=True)

    p = sub.add_parser("entropy", help="entropy of a count file, in nats")
    p.add_argument("--counts", required=True)
    p.add_argument("--estimator", choices=["mle", "mm", "poly"], default="mle")
    p.add_argument("--alphabet", type=int, default=None,
                   help="declared alphabet size (default: max index + 1)")
    _add_config_args(p)

    p = sub.add_parser("mi", help="mutual information of a joint count file")
    p.add_argument("--joint", required=True)
    p.add_argument("--estimator", choices=["mle", "poly"], default="mle")
    p.add_argument("--alphabet", default=None,
                   help="declared sizes, 'S' or 'S1,S2' (default: max index + 1)")
    _add_config_args(p)

    p = sub.add_parser("chowliu", help="learn a tree over the columns of a sample file")
    p.add_argument("--data", required=True)
    p.add_argument("--estimator", choices=["mle", "poly"], default="mle")
    p.add_argument("--alphabet", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_config_args(p)

    p = sub.add_parser("sim-entropy", help="MSE sweep of the entropy estimators")
    p.add_argument("--s-grid", default="100,1000,10000",
                   help="comma-separated alphabet sizes")
    p.add_argument("--mc", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_config_args(p)

    p = sub.add_parser("sim-tree", help="wrong-edges-ratio sweep of Chow-Liu variants")
    p.add_argument("--d", type=int, default=7)
    p.add_argument("--alphabet", type=int, default=200)
    p.add_argument("--n-min", type=int, default=1000)
    p.add_argument("--n-max", type=int, default=26000)
    p.add_argument("--n-points", type=int, default=26)
    p.add_argument("--mc", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--fix-model", action="store_true",
                   help="draw one model for the whole sweep instead of per trial")
    p.add_argument("--out", required=True)
    _add_config_args(p)

    p = sub.add_parser("tan-cv", help="cross-validate a TAN classifier on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--label-col", required=True)
    p.add_argument("--estimator", choices=["mle", "poly"], default="mle")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--quantize-bins", type=int, default=10)
    p.add_argument("--cluster", default=None, help="attribute groups, e.g. '0,1|2,3,4'")
    p.add_argument("--out", required=True)
    _add_config_args(p)

    p = sub.add_parser("tan-curve", help="learning curve of both TAN variants")
    p.add_argument("--data", required=True)
    p.add_argument("--label-col", required=True)
    p.add_argument("--sizes", required=True, help="comma-separated subset sizes")
    p.add_argument("--mc", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--quantize-bins", type=int, default=10)
    p.add_argument("--cluster", default=None)
    p.add_argument("--out", required=True)
    _add_config_args(p)

    p = sub.add_parser("tan-compare", help="paired TAN comparison over a dataset manifest")
    p.add_argument("--manifest", required=True,
                   help="CSV of dataset_path,label_col,quantize_bins,cluster_spec")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_config_args(p)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return _DISPATCH[args.command](args)


def _cmd_approx(args):
    from .approx import best_entropy_poly

    method = "remez" if args.method == "remez" else "chebyshev_projection"
    poly = best_entropy_poly(args.degree, method=method)
    rows = [(k, float(c)) for k, c in enumerate(poly.coeffs)]
    emit_csv(rows, ["k", "coeff"], args.out,
             trailing_comments=[f"sup_error={format_value(poly.sup_error)}"])
    return 0


def _cmd_entropy(args):
    kind, counts = load_count_file(args.counts)
    if kind != "hist":
        raise SystemExit("entropy expects a 1-D symbol,count file")
    if args.alphabet is not None:
        if args.alphabet < counts.size:
            raise SystemExit("--alphabet smaller than the largest symbol index")
        counts = np.concatenate([counts, np.zeros(args.alphabet - counts.size, np.int64)])
    h = Histogram(counts)
    cfg = _config_from(args)
    value = {"mle": entropy_mle,
             "mm": entropy_miller_madow,
             "poly": lambda hh: entropy_poly(hh, cfg)}[args.estimator](h)
    print(format_value(float(value)))
    return 0


def _cmd_mi(args):
    kind, counts = load_count_file(args.joint)
    if kind != "joint":
        raise SystemExit("mi expects a 2-D row,col,count file")
    if args.alphabet is not None:
        sizes = _parse_int_list(str(args.alphabet))
        s1, s2 = (sizes[0], sizes[0]) if len(sizes) == 1 else sizes[:2]
        if s1 < counts.shape[0] or s2 < counts.shape[1]:
            raise SystemExit("--alphabet smaller than the observed indices")
        grown = np.zeros((s1, s2), dtype=np.int64)
        grown[: counts.shape[0], : counts.shape[1]] = counts
        counts = grown
    value = mutual_information(JointHistogram(counts), args.estimator, _config_from(args))
    print(format_value(float(value)))
    return 0


def _cmd_chowliu(args):
    samples = load_samples_matrix(args.data)
    cfg = _config_from(args)
    weights = pairwise_mi_weights(samples, args.estimator, cfg, alphabets=args.alphabet)
    structure = mwst(weights)
    rows = [(u, v, float(weights.matrix[u, v])) for u, v in sorted(structure.edges)]
    emit_csv(rows, ["u", "v", "weight"], args.out,
             header_comments=[f"infotree v{__version__} chowliu estimator={args.estimator}"])
    return 0


def _cmd_sim_entropy(args):
    seed = resolve_seed(args.seed)
    spec = ExperimentSpec(kind="entropy_sweep", s_grid=tuple(_parse_int_list(args.s_grid)),
                          mc=args.mc, seed=seed, cfg=_config_from(args))
    rows = run_entropy_sweep(spec)
    emit_csv(rows, ["S", "n", "mse_mle", "mse_mm", "mse_poly"], args.out,
             header_comments=spec.comment_header("sim-entropy"))
    return 0


def _grid_linear(lo, hi, points):
    if points < 2:
        return [int(lo)]
    return [int(round(lo + (hi - lo) * i / (points - 1))) for i in range(points)]


def _cmd_sim_tree(args):
    seed = resolve_seed(args.seed)
    grid = _grid_linear(args.n_min, args.n_max, args.n_points)
    spec = ExperimentSpec(kind="tree_sweep", n_grid=tuple(grid), d=args.d,
                          alphabet=args.alphabet, mc=args.mc, seed=seed,
                          fix_model=args.fix_model, cfg=_config_from(args))
    rows = run_tree_sweep(spec)
    emit_csv(rows, ["n", "ratio_mle_mean", "ratio_poly_mean"], args.out,
             header_comments=spec.comment_header("sim-tree") + ["truth=star"])
    return 0


def _load_cli_dataset(args):
    cluster = parse_cluster_spec(args.cluster) if args.cluster else None
    return load_dataset(args.data, args.label_col,
                        quantize_bins=args.quantize_bins, cluster=cluster)


def _cmd_tan_cv(args):
    seed = resolve_seed(args.seed)
    data = _load_cli_dataset(args)
    report = cross_validate(data, args.estimator, _config_from(args),
                            folds=args.folds, repeats=args.repeats, seed=seed)
    rows = [(r, f, args.estimator, err) for r, f, err in report.fold_errors]
    emit_csv(rows, ["repeat", "fold", "estimator", "error"], args.out,
             header_comments=[
                 f"infotree v{__version__} tan-cv seed={seed} folds={args.folds} "
                 f"repeats={args.repeats}",
                 f"aggregate={format_value(report.aggregate)}",
             ])
    return 0


def _cmd_tan_curve(args):
    seed = resolve_seed(args.seed)
    data = _load_cli_dataset(args)
    sizes = _parse_int_list(args.sizes)
    cfg = _config_from(args)
    rows = []
    for kind in ("mle", "poly"):
        rows.extend(learning_curve(data, kind, cfg, train_sizes=sizes,
                                   mc=args.mc, seed=seed))
    rows.sort(key=lambda r: (r[0], r[1]))
    emit_csv(rows, ["size", "estimator", "mean_error"], args.out,
             header_comments=[f"infotree v{__version__} tan-curve seed={seed} mc={args.mc}"])
    return 0


def _cmd_tan_compare(args):
    seed = resolve_seed(args.seed)
    header, records = read_csv_rows(args.manifest)
    expected = ["dataset_path", "label_col", "quantize_bins", "cluster_spec"]
    if [h.strip() for h in header] != expected:
        raise SystemExit(f"manifest header must be {','.join(expected)}")
    manifest = [tuple(r) for r in records]
    rows = run_tan_compare(manifest, _config_from(args), folds=args.folds,
                           repeats=args.repeats, seed=seed)
    emit_csv(rows, ["dataset", "error_mle", "error_poly"], args.out,
             header_comments=[f"infotree v{__version__} tan-compare seed={seed} "
                              f"folds={args.folds} repeats={args.repeats}"])
    return 0


_DISPATCH = {
    "approx": _cmd_approx,
    "entropy": _cmd_entropy,
    "mi": _cmd_mi,
    "chowliu": _cmd_chowliu,
    "sim-entropy": _cmd_sim_entropy,
    "sim-tree": _cmd_sim_tree,
    "tan-cv": _cmd_tan_cv,
    "tan-curve": _cmd_tan_curve,
    "tan-compare": _cmd_tan_compare,
}


if __name__ == "__main__":
    sys.exit(main())
