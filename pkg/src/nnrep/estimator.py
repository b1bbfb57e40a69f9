"""scikit-learn estimator wrapper around the prototype constructions.

``NearestPrototypeClassifier`` learns a Boolean function from its full truth
table and stores the resulting prototypes, so it can sit in a pipeline or be
cloned, grid-searched and scored like any other classifier.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .constructions import (
    build_covering,
    build_symmetric,
    build_threshold,
)
from .core import BooleanFunction, ThresholdSpec, all_points, symmetric_levels
from .minimize import exact_bnn
from .representation import NNRepresentation, classify_knn, classify_nn, verify_knn, verify_nn

METHODS = ("auto", "covering", "symmetric", "threshold", "exact-bnn", "all-points")


def check_boolean_array(X, n_features: int | None = None) -> np.ndarray:
    """Validate a 2-D array of 0/1 rows and return it as int64."""
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise ValueError("need at least one feature")
    if n_features is not None and arr.shape[1] != n_features:
        raise ValueError(f"X has {arr.shape[1]} features, expected {n_features}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("X must contain only 0 and 1")
    return arr.astype(np.int64)


def function_from_samples(X, y) -> BooleanFunction:
    """Truth table from every point of the cube, each given exactly once."""
    X = check_boolean_array(X)
    y = np.asarray(y)
    if y.shape != (X.shape[0],):
        raise ValueError("y must be 1-D with one label per row of X")
    labels = np.unique(y)
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("y must be 0/1")
    n = X.shape[1]
    idx = X @ (1 << np.arange(n, dtype=np.int64))
    if len(idx) != 1 << n or len(np.unique(idx)) != 1 << n:
        raise ValueError(f"X must list each of the {1 << n} points of the cube exactly once")
    values = np.zeros(1 << n, dtype=bool)
    values[idx] = y.astype(bool)
    return BooleanFunction.from_values(n, values)


class NearestPrototypeClassifier(ClassifierMixin, BaseEstimator):
    """Exact nearest-prototype classifier for a Boolean function.

    Parameters
    ----------
    method : str
        ``"covering"`` (any function), ``"symmetric"`` (weight-only
        functions), ``"threshold"`` (needs ``weights`` and ``threshold``),
        ``"exact-bnn"`` (minimum Boolean prototypes, arity <= 4),
        ``"all-points"`` (every point is a prototype) or ``"auto"``, which
        uses the symmetric construction when it applies and the covering one
        otherwise.
    k : int
        Number of neighbours voting at prediction time.
    weights, threshold :
        Integer threshold description, used only by ``method="threshold"``.
    """

    def __init__(self, method="auto", k=1, weights=None, threshold=None):
        self.method = method
        self.k = k
        self.weights = weights
        self.threshold = threshold

    def _build(self, f: BooleanFunction) -> NNRepresentation:
        method = self.method
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
        sym = symmetric_levels(f)
        if method == "auto":
            method = "symmetric" if sym is not None else "covering"
        if method == "symmetric":
            if sym is None:
                raise ValueError("function is not symmetric")
            return build_symmetric(sym)
        if method == "threshold":
            if self.weights is None or self.threshold is None:
                raise ValueError("threshold method needs weights and threshold")
            spec = ThresholdSpec.from_rational(self.weights, self.threshold)
            if spec.function() != f:
                raise ValueError("training labels do not match the given threshold function")
            return build_threshold(spec)
        if method == "exact-bnn":
            return exact_bnn(f).witness
        if method == "all-points":
            pts = all_points(f.arity)
            return NNRepresentation(f.arity, [p for p in pts if f(p)],
                                    [p for p in pts if not f(p)])
        return build_covering(f)

    def fit(self, X, y):
        f = function_from_samples(X, y)
        rep = self._build(f)
        report = verify_nn(f, rep) if self.k == 1 else verify_knn(f, rep, self.k)
        self.function_ = f
        self.representation_ = rep
        self.represents_ = report.ok
        self.n_features_in_ = f.arity
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "representation_")
        X = check_boolean_array(X, self.n_features_in_)
        rep = self.representation_
        if self.k == 1:
            labels = [classify_nn(rep, tuple(row)) for row in X]
        else:
            labels = [classify_knn(rep, tuple(row), self.k) for row in X]
        return np.array([lab.value for lab in labels], dtype=np.int64)

    @property
    def n_prototypes_(self) -> int:
        check_is_fitted(self, "representation_")
        return self.representation_.size
