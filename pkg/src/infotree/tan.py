"""Tree-augmented naive Bayes: attributes form a tree conditioned on the
class, learned by a maximum-weight spanning tree over conditional mutual
information, with unsmoothed empirical tables and MAP prediction.

No smoothing anywhere: zero-probability contexts contribute ln 0 = -inf at
prediction time, and only entirely unseen (parent value, class) contexts
fall back to a uniform column so the tables stay stochastic.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from .estimators import DEFAULT_CONFIG, conditional_mutual_information
from .graphical import TreeStructure, _normalized_beta_columns, mwst, random_tree_structure
from .histograms import SparseJointHistogram
from .validation import check_labels, check_samples_matrix, check_symbol_vector, resolve_alphabets


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """n records of d attribute symbols plus one class symbol."""

    attributes: np.ndarray
    labels: np.ndarray
    attribute_alphabets: tuple
    n_classes: int
    attribute_names: tuple = ()

    def __post_init__(self):
        X = check_samples_matrix(self.attributes)
        y = check_labels(self.labels, X.shape[0])
        sizes = resolve_alphabets(X, self.attribute_alphabets or None)
        if self.n_classes < 1 or (y.size and y.max() >= self.n_classes):
            raise ValueError("labels exceed the declared class alphabet")
        names = self.attribute_names or tuple(f"x{j}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise ValueError("attribute_names length mismatch")
        object.__setattr__(self, "attributes", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "attribute_alphabets", tuple(sizes))
        object.__setattr__(self, "attribute_names", tuple(names))

    @property
    def n(self):
        return self.attributes.shape[0]

    @property
    def d(self):
        return self.attributes.shape[1]

    def subset(self, idx):
        return LabeledDataset(
            attributes=self.attributes[idx],
            labels=self.labels[idx],
            attribute_alphabets=self.attribute_alphabets,
            n_classes=self.n_classes,
            attribute_names=self.attribute_names,
        )


@dataclass(frozen=True, eq=False)
class TanModel:
    """Class prior, attribute tree, and per-edge class-conditional tables.

    ``root_cpt[s, c]`` is P(X_root = s | C = c); for every non-root
    attribute i, ``cpts[i][s, t, c]`` is P(X_i = s | X_parent(i) = t, C = c).
    """

    prior: np.ndarray
    tree: TreeStructure
    root: int
    parents: dict
    root_cpt: np.ndarray
    cpts: dict
    alphabets: tuple
    n_classes: int
    flags: tuple = ()


def _conditional_mi_weights(data: LabeledDataset, kind, cfg):
    d = data.d
    w = np.zeros((d, d))
    for i in range(d):
        for j in range(i + 1, d):
            table = SparseJointHistogram.from_columns(
                [data.attributes[:, i], data.attributes[:, j], data.labels],
                [data.attribute_alphabets[i], data.attribute_alphabets[j], data.n_classes],
            )
            w[i, j] = w[j, i] = conditional_mutual_information(table, kind, cfg)
    return w


def fit_tan(data: LabeledDataset, kind="mle", cfg=DEFAULT_CONFIG) -> TanModel:
    """Learn structure and tables from labelled data.

    The attribute tree maximises total conditional mutual information
    (estimated per ``kind``); attribute 0 is the root, and all tables are
    unsmoothed empirical frequencies.
    """
    if data.n < 2:
        raise ValueError("need at least 2 records")
    X, y = data.attributes, data.labels
    C = data.n_classes
    sizes = data.attribute_alphabets
    flags = ()
    if data.d == 1:
        tree = TreeStructure(1, [])
        flags = ("single_attribute",)
    else:
        tree = mwst(_conditional_mi_weights(data, kind, cfg))
    parents = tree.parents_from(0)

    prior = np.bincount(y, minlength=C) / data.n

    root_counts = np.zeros((sizes[0], C))
    np.add.at(root_counts, (X[:, 0], y), 1.0)
    root_cpt = _normalize_columns(root_counts)

    cpts = {}
    for child, parent in parents.items():
        if parent is None:
            continue
        counts = np.zeros((sizes[child], sizes[parent], C))
        np.add.at(counts, (X[:, child], X[:, parent], y), 1.0)
        cpts[child] = _normalize_context_slices(counts)

    return TanModel(
        prior=prior,
        tree=tree,
        root=0,
        parents=parents,
        root_cpt=root_cpt,
        cpts=cpts,
        alphabets=sizes,
        n_classes=C,
        flags=flags,
    )


def _normalize_columns(counts):
    totals = counts.sum(axis=0)
    out = np.empty_like(counts, dtype=float)
    unseen = totals == 0
    out[:, unseen] = 1.0 / counts.shape[0]
    out[:, ~unseen] = counts[:, ~unseen] / totals[~unseen]
    return out


def _normalize_context_slices(counts):
    totals = counts.sum(axis=0)
    out = np.where(
        totals[None, :, :] == 0,
        1.0 / counts.shape[0],
        counts / np.where(totals[None, :, :] == 0, 1.0, totals[None, :, :]),
    )
    return out


def predict_batch(model: TanModel, X):
    """MAP class per row, computed in log space with ln 0 = -inf.

    Ties (including all -inf) break towards the lowest class index.
    """
    X = check_samples_matrix(X)
    if X.shape[1] != len(model.alphabets):
        raise ValueError(f"expected {len(model.alphabets)} attributes")
    for j, s in enumerate(model.alphabets):
        if X[:, j].max() >= s:
            raise ValueError(f"attribute {j} outside its alphabet of size {s}")
    n = X.shape[0]
    with np.errstate(divide="ignore"):
        scores = np.broadcast_to(np.log(model.prior), (n, model.n_classes)).copy()
        scores += np.log(model.root_cpt)[X[:, model.root], :]
        for child, parent in model.parents.items():
            if parent is None:
                continue
            scores += np.log(model.cpts[child])[X[:, child], X[:, parent], :]
    return np.argmax(scores, axis=1)


def predict(model: TanModel, x):
    """MAP class for a single attribute vector."""
    x = check_symbol_vector(x, model.alphabets)
    return int(predict_batch(model, x[None, :])[0])


@dataclass(frozen=True)
class EvalReport:
    """Per-fold misclassification rates and their aggregate.

    ``fold_errors`` holds (repeat, fold, error) triples; ``aggregate`` is
    their plain mean. Wall-clock time is informational and excluded from
    equality, so identical seeds compare equal.
    """

    fold_errors: tuple
    aggregate: float
    repeat_seeds: tuple
    fold_hashes: tuple
    wall_clock: float = field(compare=False, default=0.0)

    def errors_by_repeat(self):
        out = {}
        for repeat, fold, err in self.fold_errors:
            out.setdefault(repeat, []).append(err)
        return out


def _fold_partition(n, folds, perm):
    sizes = [n // folds + (1 if f < n % folds else 0) for f in range(folds)]
    parts = []
    start = 0
    for s in sizes:
        parts.append(perm[start:start + s])
        start += s
    return parts


def cross_validate(data: LabeledDataset, kind="mle", cfg=DEFAULT_CONFIG,
                   folds=5, repeats=10, seed=0) -> EvalReport:
    """Repeated random k-fold cross-validation with derived fold seeds.

    The fold partition depends only on (seed, repeat, n) — never on the
    estimator kind — so runs with different kinds are exactly paired.
    """
    from .rng import SeededGenerator

    if data.n < folds:
        raise ValueError(f"need at least {folds} records for {folds} folds")
    t0 = time.perf_counter()
    master = SeededGenerator(seed)
    rows = []
    hashes = []
    repeat_seeds = []
    for r in range(repeats):
        stream = master.derive(r, "cv-shuffle")
        repeat_seeds.append((seed, r))
        perm = stream.permutation(data.n)
        parts = _fold_partition(data.n, folds, perm)
        hashes.append(hashlib.blake2b(
            np.concatenate(parts).astype("<i8").tobytes(), digest_size=8
        ).hexdigest())
        for f, test_idx in enumerate(parts):
            train_idx = np.concatenate([parts[g] for g in range(folds) if g != f])
            model = fit_tan(data.subset(train_idx), kind, cfg)
            pred = predict_batch(model, data.attributes[test_idx])
            err = float(np.mean(pred != data.labels[test_idx]))
            rows.append((r, f, err))
    aggregate = float(np.mean([e for _, _, e in rows]))
    return EvalReport(
        fold_errors=tuple(rows),
        aggregate=aggregate,
        repeat_seeds=tuple(repeat_seeds),
        fold_hashes=tuple(hashes),
        wall_clock=time.perf_counter() - t0,
    )


def learning_curve(data: LabeledDataset, kind="mle", cfg=DEFAULT_CONFIG,
                   train_sizes=(), mc=20, seed=0):
    """Mean 80/20 holdout error per subset size.

    For each size, ``mc`` seeded random subsets are drawn; the subset split
    depends only on (seed, size, trial), so different kinds see identical
    subsets when called with the same seed.
    """
    from .rng import SeededGenerator

    sizes = [int(s) for s in train_sizes]
    if not sizes:
        raise ValueError("train_sizes must be non-empty")
    if max(sizes) > data.n:
        raise ValueError(f"largest size {max(sizes)} exceeds n={data.n}")
    master = SeededGenerator(seed)
    rows = []
    for size in sizes:
        errs = []
        for t in range(mc):
            stream = master.derive(t, f"learning-curve-{size}")
            subset = stream.choice(data.n, size=size, replace=False)
            n_train = (4 * size) // 5
            train = data.subset(subset[:n_train])
            test_idx = subset[n_train:]
            model = fit_tan(train, kind, cfg)
            pred = predict_batch(model, data.attributes[test_idx])
            errs.append(float(np.mean(pred != data.labels[test_idx])))
        rows.append((size, kind, float(np.mean(errs))))
    return rows


def quantize_uniform(column, bins=10):
    """Equal-width binning of a real column into ``bins`` symbols.

    Returns (symbols, edges); the maximum maps to bins-1 and a constant
    column maps to symbol 0 everywhere.
    """
    values = np.asarray(column, dtype=float)
    if values.size == 0:
        raise ValueError("empty column")
    if not np.isfinite(values).all():
        raise ValueError("column contains NaN or infinite values")
    lo, hi = float(values.min()), float(values.max())
    edges = np.linspace(lo, hi, bins + 1)
    if hi == lo:
        return np.zeros(values.size, dtype=np.int64), edges
    width = (hi - lo) / bins
    symbols = np.minimum(((values - lo) / width).astype(np.int64), bins - 1)
    return symbols, edges


def cluster_attributes(data: LabeledDataset, groups) -> LabeledDataset:
    """Merge attribute groups into single mixed-radix-encoded attributes.

    ``groups`` must partition the attribute indices; within a group the
    first listed attribute is the most significant digit. The merged
    alphabet is the product of the member alphabets.
    """
    groups = [list(g) for g in groups]
    flat = [i for g in groups for i in g]
    if sorted(flat) != list(range(data.d)):
        raise ValueError("groups must partition the attribute indices exactly")
    cols = []
    sizes = []
    names = []
    for g in groups:
        symbol = np.zeros(data.n, dtype=np.int64)
        size = 1
        for i in g:
            symbol = symbol * data.attribute_alphabets[i] + data.attributes[:, i]
            size *= data.attribute_alphabets[i]
        cols.append(symbol)
        sizes.append(size)
        names.append("+".join(data.attribute_names[i] for i in g))
    return LabeledDataset(
        attributes=np.stack(cols, axis=1),
        labels=data.labels,
        attribute_alphabets=tuple(sizes),
        n_classes=data.n_classes,
        attribute_names=tuple(names),
    )


# ---------------------------------------------------------------------------
# Synthetic class-conditional tree models (for experiments and tests)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TanGenerator:
    """A ground-truth TAN distribution to sample labelled data from."""

    prior: np.ndarray
    tree: TreeStructure
    root: int
    parents: dict
    root_cpt: np.ndarray
    cpts: dict
    alphabets: tuple
    n_classes: int


def random_tan_model(d, S, n_classes, rng, structure=None) -> TanGenerator:
    """Random TAN ground truth: random tree, Beta(1/2,1/2)-random tables."""
    if structure is None:
        structure = random_tree_structure(d, rng) if d >= 2 else TreeStructure(1, [])
    parents = structure.parents_from(0)
    prior = _normalized_beta_columns(rng, (n_classes, 1))[:, 0]
    root_cpt = _normalized_beta_columns(rng, (S, n_classes))
    cpts = {}
    for child, parent in parents.items():
        if parent is None:
            continue
        table = np.stack(
            [_normalized_beta_columns(rng, (S, S)) for _ in range(n_classes)], axis=2
        )
        cpts[child] = table
    return TanGenerator(prior, structure, 0, parents, root_cpt, cpts,
                        tuple([S] * d), n_classes)


def random_weak_link_tan_model(d, S, n_classes, rng, base_concentration=0.2,
                               mix_concentration=0.3, link=0.3,
                               structure=None) -> TanGenerator:
    """Random TAN ground truth with strong class signal but weak edges.

    Every attribute draws a spiky class-conditional base distribution
    (Dirichlet with ``base_concentration``); each edge conditional mixes
    ``link`` of a context-specific Dirichlet into the child's base. Small
    ``link`` keeps pairwise conditional MI gaps narrow, which is the regime
    where the quality of the MI estimate decides the learned structure.
    """
    g = rng.generator
    if structure is None:
        structure = random_tree_structure(d, rng) if d >= 2 else TreeStructure(1, [])
    parents = structure.parents_from(0)
    prior = g.dirichlet(np.ones(n_classes))
    base = {
        i: np.stack(
            [g.dirichlet(np.full(S, base_concentration)) for _ in range(n_classes)],
            axis=1,
        )
        for i in range(d)
    }
    cpts = {}
    for child, parent in parents.items():
        if parent is None:
            continue
        table = np.zeros((S, S, n_classes))
        for c in range(n_classes):
            for s in range(S):
                table[:, s, c] = (1.0 - link) * base[child][:, c] + \
                    link * g.dirichlet(np.full(S, mix_concentration))
        cpts[child] = table
    return TanGenerator(prior, structure, 0, parents, base[0], cpts,
                        tuple([S] * d), n_classes)


def sample_from_tan(gen: TanGenerator, n, rng) -> LabeledDataset:
    """Ancestral sampling: class first, then attributes down the tree."""
    n = int(n)
    cum_prior = np.cumsum(gen.prior)
    y = np.minimum(np.searchsorted(cum_prior, rng.uniform(size=n), side="right"),
                   gen.n_classes - 1)
    d = len(gen.alphabets)
    X = np.zeros((n, d), dtype=np.int64)
    root_cum = np.cumsum(gen.root_cpt, axis=0)
    u = rng.uniform(size=n)
    X[:, gen.root] = np.minimum(
        np.sum(root_cum[:, y].T < u[:, None], axis=1), gen.alphabets[gen.root] - 1
    )
    order = [gen.root]
    remaining = [c for c in gen.parents if gen.parents[c] is not None]
    while remaining:
        for c in list(remaining):
            if gen.parents[c] in order:
                order.append(c)
                remaining.remove(c)
    for child in order:
        parent = gen.parents[child]
        if parent is None:
            continue
        cum = np.cumsum(gen.cpts[child], axis=0)
        rowcum = cum[:, X[:, parent], y].T
        u = rng.uniform(size=n)
        X[:, child] = np.minimum(
            np.sum(rowcum < u[:, None], axis=1), gen.alphabets[child] - 1
        )
    return LabeledDataset(
        attributes=X,
        labels=y,
        attribute_alphabets=gen.alphabets,
        n_classes=gen.n_classes,
    )
