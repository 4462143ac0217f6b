"""Estimator-style wrappers over the functional core.

``ChowLiuTree`` and ``TanClassifier`` follow the scikit-learn conventions
(constructor stores hyperparameters verbatim, fit returns self, fitted
attributes carry a trailing underscore, get_params/set_params round-trip),
so they compose with sklearn's clone, pipelines and model selection without
this package depending on sklearn.
"""

from __future__ import annotations

import inspect

import numpy as np

from .estimators import EstimatorConfig
from .graphical import chow_liu, sample_from_tree
from .rng import SeededGenerator
from .tan import LabeledDataset, fit_tan, predict_batch
from .validation import check_labels, check_samples_matrix, resolve_alphabets


class ParamsMixin:
    """get_params/set_params driven by the constructor signature."""

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self, deep=True):
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {type(self).__name__}")
            setattr(self, key, value)
        return self


def _make_config(estimator, c1, c2, interval_slack):
    if estimator not in ("mle", "poly"):
        raise ValueError(f"estimator must be 'mle' or 'poly', got {estimator!r}")
    return EstimatorConfig(c1=c1, c2=c2, interval_slack=interval_slack)


class ChowLiuTree(ParamsMixin):
    """Tree-structured density estimator.

    Parameters mirror the CLI: ``estimator`` selects how pairwise mutual
    information is estimated, ``alphabet`` optionally declares per-column
    (or shared scalar) alphabet sizes.
    """

    def __init__(self, estimator="mle", c1=4.0, c2=1.8, interval_slack=2.0,
                 alphabet=None):
        self.estimator = estimator
        self.c1 = c1
        self.c2 = c2
        self.interval_slack = interval_slack
        self.alphabet = alphabet

    def fit(self, X, y=None):
        X = check_samples_matrix(X)
        cfg = _make_config(self.estimator, self.c1, self.c2, self.interval_slack)
        self.model_ = chow_liu(X, self.estimator, cfg, alphabets=self.alphabet)
        self.structure_ = self.model_.structure
        self.edges_ = sorted(self.structure_.edges)
        self.n_features_in_ = X.shape[1]
        return self

    def sample(self, n, seed=0):
        self._check_fitted()
        return sample_from_tree(self.model_, n, SeededGenerator(seed))

    def score_samples(self, X):
        """Log-likelihood of each row under the fitted tree model."""
        self._check_fitted()
        X = check_samples_matrix(X)
        model = self.model_
        parents = model.structure.parents_from(model.root)
        with np.errstate(divide="ignore"):
            ll = np.log(model.root_marginal)[X[:, model.root]]
            for child, parent in parents.items():
                if parent is None:
                    continue
                ll = ll + np.log(model.conditionals[(child, parent)])[
                    X[:, child], X[:, parent]
                ]
        return ll

    def score(self, X, y=None):
        return float(np.mean(self.score_samples(X)))

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise RuntimeError("this ChowLiuTree instance is not fitted yet")


class TanClassifier(ParamsMixin):
    """Tree-augmented naive Bayes classifier with a pluggable MI estimator."""

    def __init__(self, estimator="mle", c1=4.0, c2=1.8, interval_slack=2.0,
                 alphabet=None, n_classes=None):
        self.estimator = estimator
        self.c1 = c1
        self.c2 = c2
        self.interval_slack = interval_slack
        self.alphabet = alphabet
        self.n_classes = n_classes

    def fit(self, X, y):
        X = check_samples_matrix(X)
        y = check_labels(y, X.shape[0])
        cfg = _make_config(self.estimator, self.c1, self.c2, self.interval_slack)
        sizes = resolve_alphabets(X, self.alphabet)
        n_classes = self.n_classes or int(y.max()) + 1
        data = LabeledDataset(
            attributes=X,
            labels=y,
            attribute_alphabets=tuple(sizes),
            n_classes=n_classes,
        )
        self.model_ = fit_tan(data, self.estimator, cfg)
        self.classes_ = np.arange(n_classes)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        self._check_fitted()
        return predict_batch(self.model_, X)

    def predict_log_joint(self, X):
        """Unnormalised log posterior ln P(c) + ln P(x | c) per class."""
        self._check_fitted()
        X = check_samples_matrix(X)
        model = self.model_
        with np.errstate(divide="ignore"):
            scores = np.broadcast_to(
                np.log(model.prior), (X.shape[0], model.n_classes)
            ).copy()
            scores += np.log(model.root_cpt)[X[:, model.root], :]
            for child, parent in model.parents.items():
                if parent is None:
                    continue
                scores += np.log(model.cpts[child])[X[:, child], X[:, parent], :]
        return scores

    def predict_proba(self, X):
        scores = self.predict_log_joint(X)
        shift = np.max(scores, axis=1, keepdims=True)
        shift[~np.isfinite(shift)] = 0.0
        w = np.exp(scores - shift)
        totals = w.sum(axis=1, keepdims=True)
        # all--inf rows carry no information: fall back to uniform
        degenerate = totals[:, 0] == 0
        w[degenerate] = 1.0
        totals[degenerate] = w.shape[1]
        return w / totals

    def score(self, X, y):
        y = check_labels(y, np.asarray(X).shape[0])
        return float(np.mean(self.predict(X) == y))

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise RuntimeError("this TanClassifier instance is not fitted yet")
