"""scikit-learn style wrappers around the exact routines.

Inputs are rational point clouds: integer arrays, object arrays of
Fractions, or nested lists of ints, Fractions and "p/q" strings.  Float
arrays are refused so that every answer stays exact.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import linalg as la
from .chamber import reduce
from .clipping import ClippedCone, validate_clipped
from .descent import descend
from .lattice import FiniteAction, embed, invariant_coordinates, invariant_sublattice, reynolds


def check_rational_array(X, n_features: int | None = None) -> list[tuple]:
    """Rows of ``X`` as tuples of Fractions."""
    if isinstance(X, np.ndarray):
        if X.dtype.kind == "f":
            raise ValueError("float arrays are not accepted; pass integers or Fractions")
        if X.ndim != 2:
            raise ValueError(f"expected a 2-d array, got {X.ndim} dimensions")
        rows = X.tolist()
    else:
        rows = list(X)
    out = []
    for r in rows:
        try:
            out.append(la.vec(r))
        except TypeError as exc:
            raise ValueError(str(exc)) from None
    if not out:
        raise ValueError("empty input")
    widths = {len(r) for r in out}
    if len(widths) != 1:
        raise ValueError("rows have different lengths")
    if n_features is not None and widths != {n_features}:
        raise ValueError(f"expected {n_features} features, got {widths.pop()}")
    return out


def _object_array(rows) -> np.ndarray:
    arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            arr[i, j] = Fraction(x)
    return arr


def _check_fitted(est, attr: str) -> None:
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


class ChamberReducer(BaseEstimator, TransformerMixin):
    """Maps points of the ambient plus-hull into the chamber closure."""

    def __init__(self, cone: ClippedCone | None = None, max_steps: int = 10_000, seed: int = 0):
        self.cone = cone
        self.max_steps = max_steps
        self.seed = seed

    def fit(self, X=None, y=None):
        if self.cone is None:
            raise ValueError("ChamberReducer needs a cone")
        rep = validate_clipped(self.cone)
        if not rep["ok"]:
            raise ValueError("cone fails validation")
        self.n_features_in_ = self.cone.rank
        self.roots_ = tuple(r.vector for r in self.cone.roots)
        return self

    def _traces(self, X):
        _check_fitted(self, "roots_")
        rows = check_rational_array(X, self.n_features_in_)
        return [reduce(r, self.cone, self.max_steps, seed=self.seed) for r in rows]

    def transform(self, X):
        return _object_array([t.end for t in self._traces(X)])

    def words(self, X) -> list[list[int]]:
        return [t.word for t in self._traces(X)]

    def predict(self, X):
        """True where the point already lies in the chamber closure."""
        _check_fitted(self, "roots_")
        rows = check_rational_array(X, self.n_features_in_)
        lat = self.cone.lattice
        return np.array([all(lat.pair(e, r) >= 0 for e in self.roots_) for r in rows])


class InvariantProjector(BaseEstimator, TransformerMixin):
    """Group averaging followed by coordinates in an invariant lattice basis."""

    def __init__(self, action: FiniteAction | None = None):
        self.action = action

    def fit(self, X=None, y=None):
        if self.action is None:
            raise ValueError("InvariantProjector needs a group action")
        self.n_features_in_ = self.action.dim
        self.basis_ = tuple(invariant_sublattice(self.action))
        self.reynolds_ = reynolds(self.action)
        return self

    def transform(self, X):
        _check_fitted(self, "basis_")
        rows = check_rational_array(X, self.n_features_in_)
        if not self.basis_:
            return np.empty((len(rows), 0), dtype=object)
        return _object_array([invariant_coordinates(self.basis_, la.matvec(self.reynolds_, r)) for r in rows])

    def inverse_transform(self, Y):
        _check_fitted(self, "basis_")
        rows = check_rational_array(Y, len(self.basis_))
        return _object_array([embed(self.basis_, r) for r in rows])


class InvariantDescent(BaseEstimator, TransformerMixin):
    """Runs the descent pipeline on ``fit`` and classifies invariant points
    against the descended cone."""

    def __init__(self, action: FiniteAction | None = None, samples: int = 1000, seed: int = 0):
        self.action = action
        self.samples = samples
        self.seed = seed

    def fit(self, X: ClippedCone, y=None):
        if not isinstance(X, ClippedCone):
            raise TypeError("fit expects a ClippedCone")
        self.report_ = descend(X, self.action, samples=self.samples, seed=self.seed)
        self.n_features_in_ = X.rank
        self.reynolds_ = reynolds(self.action)
        return self

    def transform(self, X):
        """Invariant coordinates of the group averages of ambient points."""
        _check_fitted(self, "report_")
        rows = check_rational_array(X, self.n_features_in_)
        basis = self.report_.invariant_basis
        return _object_array([invariant_coordinates(basis, la.matvec(self.reynolds_, r)) for r in rows])

    def predict(self, Y):
        """Interior membership of invariant-coordinate points in the
        descended clipped cone."""
        _check_fitted(self, "report_")
        B = self.report_.B
        rows = check_rational_array(Y, B.rank)
        return np.array([B.member(r, "interior") for r in rows])
