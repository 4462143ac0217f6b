"""Tree-structured density estimation: maximum-weight spanning trees over
pairwise mutual information, synthetic tree models, and ancestral sampling.

The spanning-tree step is Kruskal's algorithm on edges sorted by
(descending weight, ascending (i, j)), so ties break lexicographically and
every run is reproducible. Only the ordering of the edge weights matters to
the learned structure, which is exactly why a better mutual-information
estimate translates into better structure recovery.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .estimators import DEFAULT_CONFIG, mutual_information
from .histograms import JointHistogram
from .validation import check_samples_matrix, resolve_alphabets


@dataclass(frozen=True, eq=False)
class TreeStructure:
    """An undirected spanning tree on num_nodes nodes."""

    num_nodes: int
    edges: frozenset

    def __init__(self, num_nodes, edges):
        num_nodes = int(num_nodes)
        norm = frozenset(
            (int(min(u, v)), int(max(u, v))) for u, v in edges
        )
        _check_spanning_tree(num_nodes, norm)
        object.__setattr__(self, "num_nodes", num_nodes)
        object.__setattr__(self, "edges", norm)

    def neighbors(self):
        adj = {v: set() for v in range(self.num_nodes)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def parents_from(self, root):
        """parent map with edges directed away from ``root`` (root maps to None)."""
        adj = self.neighbors()
        parents = {int(root): None}
        stack = [int(root)]
        while stack:
            u = stack.pop()
            for w in sorted(adj[u]):
                if w not in parents:
                    parents[w] = u
                    stack.append(w)
        return parents

    def is_star(self):
        if self.num_nodes <= 2:
            return True
        degree = {}
        for u, v in self.edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        return max(degree.values()) == self.num_nodes - 1


def _check_spanning_tree(num_nodes, edges):
    if num_nodes < 1:
        raise ValueError("a tree needs at least one node")
    if len(edges) != num_nodes - 1:
        raise ValueError(f"{num_nodes} nodes need {num_nodes - 1} edges, got {len(edges)}")
    for u, v in edges:
        if u == v or not (0 <= u < num_nodes and 0 <= v < num_nodes):
            raise ValueError(f"edge ({u}, {v}) invalid for {num_nodes} nodes")
    seen = {0} if num_nodes else set()
    frontier = [0]
    adj = {v: [] for v in range(num_nodes)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    while frontier:
        u = frontier.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    if len(seen) != num_nodes:
        raise ValueError("edge set is not connected")


@dataclass(frozen=True, eq=False)
class TreeModel:
    """A tree-factorised joint distribution.

    ``conditionals[(child, parent)]`` is column-stochastic: column j is the
    distribution of the child given parent value j. Edges are directed away
    from ``root``.
    """

    structure: TreeStructure
    root: int
    root_marginal: np.ndarray
    conditionals: dict
    alphabets: tuple

    def __post_init__(self):
        _check_distribution(self.root_marginal, "root marginal")
        parents = self.structure.parents_from(self.root)
        for child, parent in parents.items():
            if parent is None:
                continue
            if (child, parent) not in self.conditionals:
                raise ValueError(f"missing conditional for edge ({child}, {parent})")
        for (child, parent), mat in self.conditionals.items():
            mat = np.asarray(mat)
            if mat.shape != (self.alphabets[child], self.alphabets[parent]):
                raise ValueError(f"conditional ({child}, {parent}) has shape {mat.shape}")
            for j in range(mat.shape[1]):
                _check_distribution(mat[:, j], f"P(X{child}|X{parent}={j})")

    @property
    def num_nodes(self):
        return self.structure.num_nodes


def _check_distribution(vec, what):
    vec = np.asarray(vec, dtype=float)
    if (vec < 0).any() or abs(float(vec.sum()) - 1.0) > 1e-12:
        raise ValueError(f"{what} is not a probability vector (sum {vec.sum()!r})")


@dataclass(frozen=True, eq=False)
class EdgeWeights:
    """Symmetric pairwise weight matrix plus the provenance of the weights."""

    matrix: np.ndarray
    provenance: str = "empirical_mi"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"weight matrix must be square, got {m.shape}")
        if not np.isfinite(m[~np.eye(m.shape[0], dtype=bool)]).all():
            raise ValueError("weights must be finite")
        if not np.allclose(m, m.T, atol=0, rtol=0, equal_nan=True):
            raise ValueError("weight matrix must be symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def num_nodes(self):
        return self.matrix.shape[0]


class _DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            x, self.parent[x] = self.parent[x], self.parent[self.parent[x]]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True


def mwst(weights) -> TreeStructure:
    """Maximum-weight spanning tree (Kruskal, lexicographic tie-break)."""
    if isinstance(weights, EdgeWeights):
        w = weights.matrix
    else:
        w = EdgeWeights(np.asarray(weights, dtype=float)).matrix
    d = w.shape[0]
    if d < 2:
        raise ValueError("need at least 2 nodes")
    order = sorted(
        ((i, j) for i in range(d) for j in range(i + 1, d)),
        key=lambda e: (-w[e[0], e[1]], e[0], e[1]),
    )
    ds = _DisjointSet(d)
    edges = []
    for i, j in order:
        if ds.union(i, j):
            edges.append((i, j))
            if len(edges) == d - 1:
                break
    return TreeStructure(d, edges)


def pairwise_mi_weights(samples, kind="mle", cfg=DEFAULT_CONFIG, alphabets=None) -> EdgeWeights:
    """Mutual information of every column pair, with the chosen estimator."""
    samples = check_samples_matrix(samples)
    n, d = samples.shape
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 samples and d >= 2 columns")
    sizes = resolve_alphabets(samples, alphabets)
    w = np.zeros((d, d))
    for i in range(d):
        for j in range(i + 1, d):
            joint = JointHistogram.from_samples(
                samples[:, i], samples[:, j], (sizes[i], sizes[j])
            )
            w[i, j] = w[j, i] = mutual_information(joint, kind, cfg)
    provenance = "empirical_mi" if kind == "mle" else "poly_mi"
    return EdgeWeights(w, provenance)


def chow_liu(samples, kind="mle", cfg=DEFAULT_CONFIG, alphabets=None, root=0) -> TreeModel:
    """Tree density estimate: MWST over pairwise MI, empirical edge CPTs.

    Conditional columns for parent values never seen in the data fall back
    to uniform; everything else is the raw (unsmoothed) empirical frequency.
    """
    samples = check_samples_matrix(samples)
    sizes = resolve_alphabets(samples, alphabets)
    structure = mwst(pairwise_mi_weights(samples, kind, cfg, sizes))
    return fit_tree_model(samples, structure, sizes, root=root)


def fit_tree_model(samples, structure, alphabets=None, root=0) -> TreeModel:
    """Empirical marginal/conditional tables for a given structure."""
    samples = check_samples_matrix(samples)
    n = samples.shape[0]
    sizes = resolve_alphabets(samples, alphabets)
    parents = structure.parents_from(root)
    marginal = np.bincount(samples[:, root], minlength=sizes[root]) / n
    conditionals = {}
    for child, parent in parents.items():
        if parent is None:
            continue
        table = np.zeros((sizes[child], sizes[parent]))
        np.add.at(table, (samples[:, child], samples[:, parent]), 1.0)
        col_totals = table.sum(axis=0)
        unseen = col_totals == 0
        table[:, unseen] = 1.0 / sizes[child]
        table[:, ~unseen] /= col_totals[~unseen]
        conditionals[(child, parent)] = table
    return TreeModel(
        structure=structure,
        root=int(root),
        root_marginal=marginal,
        conditionals=conditionals,
        alphabets=tuple(sizes),
    )


def wrong_edges_ratio(estimated: TreeStructure, truth: TreeStructure) -> float:
    """|estimated edges not in truth| / (d - 2).

    Lies in [0, 1] when the truth is a star (any estimate shares at least
    one edge with it); can exceed 1 for general truths.
    """
    if estimated.num_nodes != truth.num_nodes:
        raise ValueError("structures must have the same number of nodes")
    d = truth.num_nodes
    if d < 3:
        raise ValueError("wrong-edges-ratio needs at least 3 nodes")
    return len(estimated.edges - truth.edges) / (d - 2)


# ---------------------------------------------------------------------------
# Synthetic models and sampling
# ---------------------------------------------------------------------------

def beta_half_half(rng, shape):
    """Beta(1/2, 1/2) variates via sin^2(pi*U/2) — exact arcsine sampling."""
    u = rng.uniform(size=shape)
    return np.sin(np.pi * u / 2.0) ** 2


def _normalized_beta_columns(rng, shape):
    mat = beta_half_half(rng, shape)
    while True:
        sums = mat.sum(axis=0)
        bad = sums == 0.0  # measure-zero, but the contract says regenerate
        if not bad.any():
            break
        mat[:, bad] = beta_half_half(rng, (mat.shape[0], int(bad.sum())))
    return mat / mat.sum(axis=0)


def random_star_model(d, S, rng) -> TreeModel:
    """Star tree on d nodes (hub 0), Beta(1/2,1/2)-random distributions.

    The hub marginal and every column of every P(leaf | hub) are i.i.d.
    Beta(1/2,1/2) vectors normalised to sum 1.
    """
    if d < 2 or S < 2:
        raise ValueError("need d >= 2 nodes and S >= 2 symbols")
    marginal = _normalized_beta_columns(rng, (S, 1))[:, 0]
    conditionals = {
        (k, 0): _normalized_beta_columns(rng, (S, S)) for k in range(1, d)
    }
    structure = TreeStructure(d, [(0, k) for k in range(1, d)])
    return TreeModel(structure, 0, marginal, conditionals, tuple([S] * d))


def random_tree_structure(d, rng) -> TreeStructure:
    """Uniformly random labelled tree (random Pruefer sequence, decoded)."""
    if d < 2:
        raise ValueError("need d >= 2")
    if d == 2:
        return TreeStructure(2, [(0, 1)])
    seq = [int(x) for x in rng.integers(0, d, size=d - 2)]
    degree = [1] * d
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = [v for v in range(d) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return TreeStructure(d, edges)


def random_tree_model(d, S, rng, structure=None, root=0) -> TreeModel:
    """Random tree-factorised model with Beta(1/2,1/2)-normalized tables."""
    if structure is None:
        structure = random_tree_structure(d, rng)
    marginal = _normalized_beta_columns(rng, (S, 1))[:, 0]
    parents = structure.parents_from(root)
    conditionals = {}
    for child in range(d):
        parent = parents[child]
        if parent is None:
            continue
        conditionals[(child, parent)] = _normalized_beta_columns(rng, (S, S))
    return TreeModel(structure, root, marginal, conditionals, tuple([S] * d))


def _sample_categorical(rng, pvals, n):
    cum = np.cumsum(pvals)
    u = rng.uniform(size=n)
    return np.minimum(np.searchsorted(cum, u, side="right"), len(pvals) - 1)


def sample_from_tree(model: TreeModel, n, rng):
    """n i.i.d. rows by ancestral sampling; column k is node k."""
    d = model.num_nodes
    X = np.zeros((int(n), d), dtype=np.int64)
    parents = model.structure.parents_from(model.root)
    X[:, model.root] = _sample_categorical(rng, model.root_marginal, int(n))
    order = _topological_order(parents, model.root)
    for child in order:
        parent = parents[child]
        if parent is None:
            continue
        mat = model.conditionals[(child, parent)]
        cum = np.cumsum(mat, axis=0)
        rowcum = cum[:, X[:, parent]].T
        u = rng.uniform(size=int(n))
        X[:, child] = np.minimum(
            np.sum(rowcum < u[:, None], axis=1), mat.shape[0] - 1
        )
    return X


def _topological_order(parents, root):
    children = {}
    for child, parent in parents.items():
        if parent is not None:
            children.setdefault(parent, []).append(child)
    order = []
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for w in sorted(children.get(u,()), reverse=True):
            stack.append(w)
    return order


# ---------------------------------------------------------------------------
# Exact pairwise mutual information of a TreeModel
# ---------------------------------------------------------------------------

def node_marginals(model: TreeModel):
    parents = model.structure.parents_from(model.root)
    marg = {model.root: np.asarray(model.root_marginal, dtype=float)}
    for child in _topological_order(parents, model.root):
        parent = parents[child]
        if parent is None:
            continue
        marg[child] = model.conditionals[(child, parent)] @ marg[parent]
    return marg


def pairwise_joint(model: TreeModel, u, v):
    """Exact joint distribution of (X_u, X_v) under the model."""
    parents = model.structure.parents_from(model.root)

    def chain_to(node, ancestor):
        # P(node | ancestor) as a matrix product along the directed path.
        mat = np.eye(model.alphabets[node])
        cur = node
        while cur != ancestor:
            mat = mat @ model.conditionals[(cur, parents[cur])]
            cur = parents[cur]
        return mat

    anc_u = _ancestors(parents, u)
    anc_v = _ancestors(parents, v)
    meet = next(a for a in anc_u if a in set(anc_v))
    marg = node_marginals(model)[meet]
    mu = chain_to(u, meet)
    mv = chain_to(v, meet)
    if meet == u:
        return (mv * marg[None, :]).T  # P(u, v) = P(u) P(v|u)
    if meet == v:
        return mu * marg[None, :]
    joint = np.einsum("iw,jw,w->ij", mu, mv, marg)
    return joint


def _ancestors(parents, node):
    out = [node]
    while parents[out[-1]] is not None:
        out.append(parents[out[-1]])
    return out


def mi_of_joint(joint):
    """sum p_ij ln(p_ij / (p_i p_j)), the true MI of a joint distribution."""
    joint = np.asarray(joint, dtype=float)
    pi = joint.sum(axis=1)
    pj = joint.sum(axis=0)
    mask = joint > 0
    ratio = joint[mask] / np.outer(pi, pj)[mask]
    return float(np.sum(joint[mask] * np.log(ratio)))


def exact_mi_weights(model: TreeModel) -> EdgeWeights:
    """True pairwise MI of the model distribution, for oracle experiments."""
    d = model.num_nodes
    w = np.zeros((d, d))
    for i in range(d):
        for j in range(i + 1, d):
            w[i, j] = w[j, i] = mi_of_joint(pairwise_joint(model, i, j))
    return EdgeWeights(w, "exact_mi")
