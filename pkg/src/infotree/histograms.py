"""Count statistics: dense 1-D / 2-D histograms and sparse N-way tables.

All estimators consume these; they are immutable value objects and the
declared alphabet size matters (zero-count symbols contribute to the
polynomial-corrected estimators), so constructors take it explicitly where
it cannot be inferred.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _as_count_array(counts, ndim):
    arr = np.asarray(counts)
    if arr.ndim != ndim:
        raise ValueError(f"expected {ndim}-dimensional counts, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("counts must be non-empty")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise ValueError("counts must be integers")
        arr = rounded
    arr = arr.astype(np.int64)
    if (arr < 0).any():
        raise ValueError("counts must be non-negative")
    return arr


@dataclass(frozen=True, eq=False)
class Histogram:
    """Symbol counts over an alphabet of size len(counts), with total n."""

    counts: np.ndarray
    n: int

    def __init__(self, counts):
        arr = _as_count_array(counts, 1)
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)
        object.__setattr__(self, "n", int(arr.sum()))

    @property
    def alphabet(self):
        return self.counts.size

    @classmethod
    def from_samples(cls, symbols, alphabet=None):
        symbols = np.asarray(symbols, dtype=np.int64)
        if symbols.ndim != 1:
            raise ValueError("symbols must be a 1-D sequence")
        if symbols.size and symbols.min() < 0:
            raise ValueError("symbols must be non-negative")
        size = int(symbols.max()) + 1 if symbols.size else 0
        if alphabet is not None:
            if symbols.size and size > alphabet:
                raise ValueError("symbol index exceeds the declared alphabet")
            size = int(alphabet)
        return cls(np.bincount(symbols, minlength=size))


@dataclass(frozen=True, eq=False)
class JointHistogram:
    """Dense 2-D counts over an S1 x S2 alphabet."""

    counts: np.ndarray
    n: int

    def __init__(self, counts):
        arr = _as_count_array(counts, 2)
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)
        object.__setattr__(self, "n", int(arr.sum()))

    @property
    def shape(self):
        return self.counts.shape

    def row_marginal(self):
        return Histogram(self.counts.sum(axis=1))

    def col_marginal(self):
        return Histogram(self.counts.sum(axis=0))

    def flatten(self):
        return Histogram(self.counts.ravel())

    @classmethod
    def from_samples(cls, x, y, alphabets=None):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("x and y must be equal-length 1-D sequences")
        if alphabets is None:
            s1 = int(x.max()) + 1 if x.size else 0
            s2 = int(y.max()) + 1 if y.size else 0
        else:
            s1, s2 = (int(a) for a in alphabets)
            if x.size and (x.max() >= s1 or y.max() >= s2):
                raise ValueError("symbol index exceeds the declared alphabet")
        flat = np.bincount(x * s2 + y, minlength=s1 * s2)
        return cls(flat.reshape(s1, s2))


class SparseJointHistogram:
    """Counts over tuples of arbitrary arity, keyed sparsely.

    axis_sizes declares the per-axis alphabets; marginalisation keeps the
    declared sizes so zero-count cells remain accounted for downstream.
    """

    def __init__(self, counts, axis_sizes):
        self.axis_sizes = tuple(int(s) for s in axis_sizes)
        if not self.axis_sizes or any(s < 1 for s in self.axis_sizes):
            raise ValueError("axis_sizes must be positive")
        arity = len(self.axis_sizes)
        store = {}
        total = 0
        for key, c in dict(counts).items():
            key = tuple(int(k) for k in key)
            c = int(c)
            if len(key) != arity:
                raise ValueError(f"key {key} does not match arity {arity}")
            if any(k < 0 or k >= s for k, s in zip(key, self.axis_sizes)):
                raise ValueError(f"key {key} outside declared axis sizes")
            if c <= 0:
                raise ValueError("sparse counts must be positive")
            store[key] = store.get(key, 0) + c
            total += c
        self._counts = store
        self.n = total

    @property
    def arity(self):
        return len(self.axis_sizes)

    def items(self):
        return self._counts.items()

    @classmethod
    def from_columns(cls, columns, axis_sizes=None):
        cols = [np.asarray(c, dtype=np.int64) for c in columns]
        if not cols or any(c.ndim != 1 or c.size != cols[0].size for c in cols):
            raise ValueError("columns must be equal-length 1-D sequences")
        if axis_sizes is None:
            axis_sizes = [int(c.max()) + 1 for c in cols]
        stacked = np.stack(cols, axis=1)
        uniq, cnt = np.unique(stacked, axis=0, return_counts=True)
        counts = {tuple(row): int(k) for row, k in zip(uniq, cnt)}
        return cls(counts, axis_sizes)

    def marginalize(self, axes):
        """Sum counts over the dropped axes, keeping ``axes`` (in order)."""
        axes = tuple(axes)
        if len(set(axes)) != len(axes) or any(a < 0 or a >= self.arity for a in axes):
            raise ValueError(f"axes {axes} invalid for arity {self.arity}")
        out = {}
        for key, c in self._counts.items():
            sub = tuple(key[a] for a in axes)
            out[sub] = out.get(sub, 0) + c
        return SparseJointHistogram(out, [self.axis_sizes[a] for a in axes])

    def flatten(self):
        """Dense Histogram over the mixed-radix product alphabet.

        The first axis is most significant, matching the attribute-merging
        convention elsewhere in the package.
        """
        total = 1
        for s in self.axis_sizes:
            total *= s
        dense = np.zeros(total, dtype=np.int64)
        for key, c in self._counts.items():
            idx = 0
            for k, s in zip(key, self.axis_sizes):
                idx = idx * s + k
            dense[idx] = c
        return Histogram(dense)
