"""Estimator-style wrapper so the solver composes with the sklearn ecosystem."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .hyperbolic import PickProblem
from .solver import solve, verify


def check_polydisc_array(values, n: int | None = None, name: str = "X") -> np.ndarray:
    """Validate a 2-d complex array whose entries lie inside the unit disc."""
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array of complex coordinates")
    if n is not None and arr.shape[1] != n:
        raise ValueError(f"{name} must have {n} coordinates per row")
    if np.any(np.abs(arr) >= 1.0):
        raise ValueError(f"{name} entries must lie strictly inside the unit disc")
    return arr


class PickInterpolator(BaseEstimator):
    """Fit the extremal three-point interpolant; predict evaluates it.

    ``fit(X, y)`` takes the three nodes as a complex array of shape (3, n)
    and the three targets as shape (3,).  ``predict(Z)`` evaluates the
    recovered rational inner function at rows of ``Z``.

    Attributes after fitting: ``report_`` (the full solve report),
    ``classification_``, ``n_features_in_``.
    """

    def __init__(self, decision_band: float = 1e-9, sample_budget: int = 1024):
        self.decision_band = decision_band
        self.sample_budget = sample_budget

    def fit(self, X, y):
        X = check_polydisc_array(X, name="X")
        y = np.asarray(y, dtype=complex).ravel()
        if X.shape[0] != 3 or y.shape != (3,):
            raise ValueError("fit expects exactly three nodes and three targets")
        problem = PickProblem(X, y)
        self.report_ = solve(
            problem, band=self.decision_band, sample_budget=self.sample_budget
        )
        self.classification_ = self.report_.classification
        self.n_features_in_ = X.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "report_"):
            raise NotFittedError("call fit before predict")

    def predict(self, Z) -> np.ndarray:
        self._check_fitted()
        Z = check_polydisc_array(Z, n=self.n_features_in_, name="Z")
        return np.asarray(self.report_.evaluate(Z))

    def score(self, X, y) -> float:
        """Negative max interpolation error at the given points."""
        self._check_fitted()
        predictions = self.predict(X)
        return -float(np.max(np.abs(predictions - np.asarray(y, dtype=complex))))

    def verify(self, sample_budget: int | None = None):
        self._check_fitted()
        budget = self.sample_budget if sample_budget is None else sample_budget
        return verify(self.report_, sample_budget=budget)
