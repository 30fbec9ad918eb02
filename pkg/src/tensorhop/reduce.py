"""Depth-axis compression: fit maps from R^n fibers to R^d and apply them.

The reducers follow the scikit-learn estimator protocol (fit/transform,
get_params) over the (n*n, n) matrix of depth fibers, so they compose with
ordinary sklearn tooling; reduce helpers wire them to tensor objects.  One
map is fitted per tensor and shared across all of its fibers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import DimensionError, ParseError
from .tensors import NormalizedTensor, Semantics
from .validation import as_float_matrix, check_reduction_dim

REDUCTION_KINDS = ("sum", "pca", "randproj")


@dataclass(frozen=True, eq=False)
class ReducedTensor:
    """Depth-compressed tensor, float64, shape (n, n, d)."""

    n: int
    length: int
    semantics: Semantics
    d: int
    values: np.ndarray = field(repr=False)

    def slice_matrix(self, k: int) -> np.ndarray:
        """The n x n matrix at depth index k (0-based)."""
        return self.values[:, :, k]

    def slices(self) -> list[np.ndarray]:
        return [self.values[:, :, k] for k in range(self.d)]


class SumReducer(BaseEstimator, TransformerMixin):
    """Reduce each fiber to the scalar sum of its components (d = 1).

    Applied to a walk tensor this reproduces the powered adjacency matrix;
    applied to a simple-path tensor it reproduces the simple-path counts.
    """

    d = 1

    def fit(self, X, y=None):
        X = as_float_matrix(X, "X")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = as_float_matrix(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise DimensionError(
                f"expected fibers of size {self.n_features_in_}, got {X.shape[1]}"
            )
        return X.sum(axis=1, keepdims=True)


class FiberPCA(BaseEstimator, TransformerMixin):
    """Deterministic principal-component reduction of depth fibers.

    Components are eigenvectors of the sample covariance of the fibers, in
    descending eigenvalue order; each component is sign-fixed so that its
    largest-magnitude entry (lowest index on ties) is positive.  The ordering
    and sign conventions pin the decomposition down so independent
    implementations agree to tolerance.
    """

    def __init__(self, d: int = 2):
        self.d = d

    def fit(self, X, y=None):
        X = as_float_matrix(X, "X")
        n_samples, n_features = X.shape
        check_reduction_dim(self.d, n_features)
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        cov = (centered.T @ centered) / max(n_samples - 1, 1)
        eigenvalues, eigenvectors = np.linalg.eigh(cov)
        order = np.argsort(-eigenvalues, kind="stable")[: self.d]
        components = eigenvectors[:, order].copy()
        for col in range(components.shape[1]):
            pivot = int(np.argmax(np.abs(components[:, col])))
            if components[pivot, col] < 0:
                components[:, col] = -components[:, col]
        self.components_ = components
        self.explained_variance_ = eigenvalues[order]
        self.n_features_in_ = n_features
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = as_float_matrix(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise DimensionError(
                f"expected fibers of size {self.n_features_in_}, got {X.shape[1]}"
            )
        return (X - self.mean_) @ self.components_

    def inverse_transform(self, Z):
        check_is_fitted(self)
        Z = as_float_matrix(Z, "Z")
        return Z @ self.components_.T + self.mean_

    def reconstruction_error(self, X) -> float:
        """Largest absolute reconstruction error over all fibers."""
        X = as_float_matrix(X, "X")
        back = self.inverse_transform(self.transform(X))
        return float(np.max(np.abs(back - X), initial=0.0))


def projection_matrix(n: int, d: int, seed: int) -> np.ndarray:
    """The realized n x d sign matrix (entries +-1/sqrt(d)) for a given seed.

    Drawn from a PCG64 stream, so it is a pure function of (n, d, seed) and
    identical across runs and platforms.
    """
    check_reduction_dim(d, n)
    rng = np.random.Generator(np.random.PCG64(seed))
    signs = rng.integers(0, 2, size=(n, d)) * 2 - 1
    return signs / np.sqrt(d)


class SignRandomProjection(BaseEstimator, TransformerMixin):
    """Dense +-1/sqrt(d) projection drawn from a seeded PCG64 stream."""

    def __init__(self, d: int = 2, seed: int = 0):
        self.d = d
        self.seed = seed

    def fit(self, X, y=None):
        X = as_float_matrix(X, "X")
        self.matrix_ = projection_matrix(X.shape[1], self.d, self.seed)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = as_float_matrix(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise DimensionError(
                f"expected fibers of size {self.n_features_in_}, got {X.shape[1]}"
            )
        return X @ self.matrix_


def make_reducer(method: str, d: int = 1, seed: int = 0):
    """Construct an unfitted reducer: 'sum', 'pca', or 'randproj'."""
    if method == "sum":
        return SumReducer()
    if method == "pca":
        return FiberPCA(d=d)
    if method == "randproj":
        return SignRandomProjection(d=d, seed=seed)
    raise ValueError(f"unknown reduction method {method!r}")


def fibers_of(t: NormalizedTensor) -> np.ndarray:
    """The (n*n, depth) matrix whose rows are the depth fibers of t."""
    return t.values.reshape(t.n * t.n, t.values.shape[2])


def fit_reducer(t: NormalizedTensor, reducer):
    """Fit a reducer on every fiber of one tensor; returns the reducer."""
    reducer.fit(fibers_of(t))
    return reducer


def apply_reduction(t: NormalizedTensor, reducer) -> ReducedTensor:
    """Apply a fitted reducer to every fiber, yielding the (n, n, d) tensor."""
    transformed = reducer.transform(fibers_of(t))
    d = transformed.shape[1]
    values = np.ascontiguousarray(transformed.reshape(t.n, t.n, d))
    return ReducedTensor(n=t.n, length=t.length, semantics=t.semantics, d=d, values=values)


def reducer_to_json(reducer) -> dict:
    """Serializable description of a fitted reduction map."""
    check_is_fitted(reducer)
    if isinstance(reducer, SumReducer):
        return {"kind": "sum", "d": 1, "n": int(reducer.n_features_in_)}
    if isinstance(reducer, FiberPCA):
        return {
            "kind": "pca",
            "d": int(reducer.d),
            "n": int(reducer.n_features_in_),
            "mean": reducer.mean_.tolist(),
            "components": reducer.components_.tolist(),
        }
    if isinstance(reducer, SignRandomProjection):
        return {
            "kind": "randproj",
            "d": int(reducer.d),
            "n": int(reducer.n_features_in_),
            "seed": int(reducer.seed),
            "matrix": reducer.matrix_.tolist(),
        }
    raise TypeError(f"cannot serialize {type(reducer).__name__}")


def reducer_from_json(doc: dict):
    """Rebuild a fitted reducer from reducer_to_json output."""
    try:
        kind = doc["kind"]
        if kind == "sum":
            reducer = SumReducer()
            reducer.n_features_in_ = int(doc["n"])
            return reducer
        if kind == "pca":
            reducer = FiberPCA(d=int(doc["d"]))
            reducer.mean_ = np.asarray(doc["mean"], dtype=np.float64)
            reducer.components_ = np.asarray(doc["components"], dtype=np.float64)
            reducer.n_features_in_ = int(doc["n"])
            return reducer
        if kind == "randproj":
            reducer = SignRandomProjection(d=int(doc["d"]), seed=int(doc["seed"]))
            reducer.matrix_ = np.asarray(doc["matrix"], dtype=np.float64)
            reducer.n_features_in_ = int(doc["n"])
            return reducer
    except KeyError as exc:
        raise ParseError(f"reduction map document missing field {exc}") from None
    raise ParseError(f"unknown reduction kind {kind!r}")
