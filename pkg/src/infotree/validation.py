"""Input validation helpers shared by the functional API and the
sklearn-style estimator classes."""

from __future__ import annotations

import numpy as np


def check_samples_matrix(X):
    """n x d matrix of non-negative integer symbols, as int64."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D samples matrix, got shape {X.shape}")
    if X.size == 0:
        raise ValueError("samples matrix is empty")
    if not np.issubdtype(X.dtype, np.integer):
        rounded = np.rint(X)
        if not np.array_equal(rounded, X):
            raise ValueError("symbols must be integers")
        X = rounded
    X = X.astype(np.int64)
    if (X < 0).any():
        raise ValueError("symbols must be non-negative")
    return X


def check_labels(y, n):
    y = np.asarray(y)
    if y.ndim != 1 or y.size != n:
        raise ValueError(f"labels must be a length-{n} vector, got shape {y.shape}")
    if not np.issubdtype(y.dtype, np.integer):
        rounded = np.rint(y)
        if not np.array_equal(rounded, y):
            raise ValueError("labels must be integers")
        y = rounded
    y = y.astype(np.int64)
    if (y < 0).any():
        raise ValueError("labels must be non-negative")
    return y


def resolve_alphabets(X, alphabets=None):
    """Per-column alphabet sizes: declared (scalar or sequence) or max+1."""
    d = X.shape[1]
    observed = [int(X[:, j].max()) + 1 for j in range(d)]
    if alphabets is None:
        return observed
    if np.isscalar(alphabets):
        sizes = [int(alphabets)] * d
    else:
        sizes = [int(a) for a in alphabets]
        if len(sizes) != d:
            raise ValueError(f"got {len(sizes)} alphabet sizes for {d} columns")
    for j, (s, o) in enumerate(zip(sizes, observed)):
        if o > s:
            raise ValueError(
                f"column {j} contains symbol {o - 1} outside its declared alphabet {s}"
            )
    return sizes


def check_symbol_vector(x, alphabets):
    """Single attribute vector, validated against per-column alphabets."""
    x = np.asarray(x)
    if x.ndim != 1 or x.size != len(alphabets):
        raise ValueError(f"expected {len(alphabets)} attributes, got shape {x.shape}")
    if not np.issubdtype(x.dtype, np.integer):
        rounded = np.rint(x)
        if not np.array_equal(rounded, x):
            raise ValueError("symbols must be integers")
        x = rounded
    x = x.astype(np.int64)
    for j, (v, s) in enumerate(zip(x, alphabets)):
        if not (0 <= v < s):
            raise ValueError(f"attribute {j} value {v} outside alphabet of size {s}")
    return x
