"""scikit-learn style front end.

Rows of ``X`` are annuli ``(r1, r2, t)``.  Nothing is learned from data:
:meth:`SteklovDirichletSolver.fit` only validates the input and records
its width, so the estimator can sit inside a ``Pipeline`` or be cloned
and grid-searched over its numerical parameters.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .analysis import bounds_report, shape_derivative
from .eigenfunction import normalize, series_from_eigvec
from .exceptions import InvalidAnnulus
from .geometry import Annulus
from .spectral import solve_first_eigenvalue

FEATURES = ("sigma", "dsigma_dt", "upper_M", "concentric", "liminf_lower", "n_final")


def check_annuli(X):
    """Validate an ``(n_samples, 3)`` array of ``(r1, r2, t)`` rows; returns a float array."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 3:
        raise ValueError(f"expected 3 columns (r1, r2, t), got {X.shape[1]}")
    for i, row in enumerate(X):
        try:
            Annulus(*row)
        except InvalidAnnulus as exc:
            raise ValueError(f"row {i}: {exc}") from exc
    return X


class SteklovDirichletSolver(TransformerMixin, BaseEstimator):
    """First Steklov-Dirichlet eigenvalue of eccentric annuli.

    Parameters
    ----------
    tol : float, default=1e-12
        Stopping tolerance between successive truncation doublings.
    n_max : int, default=4096
        Largest truncation size.
    features : tuple of str, default=("sigma", "dsigma_dt")
        Columns produced by :meth:`transform`, any of ``FEATURES``.

    Examples
    --------
    >>> import numpy as np
    >>> est = SteklovDirichletSolver().fit(np.array([[1.0, 3.0, 0.4]]))
    >>> round(float(est.predict(np.array([[1.0, 3.0, 0.4]]))[0]), 10)
    0.2804158166
    """

    def __init__(self, tol=1e-12, n_max=4096, features=("sigma", "dsigma_dt")):
        self.tol = tol
        self.n_max = n_max
        self.features = features

    def _check_params(self):
        unknown = [f for f in self.features if f not in FEATURES]
        if unknown:
            raise ValueError(f"unknown features {unknown}; choose from {FEATURES}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def fit(self, X, y=None):
        self._check_params()
        X = check_annuli(X)
        self.n_features_in_ = X.shape[1]
        self.feature_names_out_ = np.asarray(self.features, dtype=object)
        return self

    def _row(self, r1, r2, t):
        a = Annulus(r1, r2, t)
        res = solve_first_eigenvalue(a, tol=self.tol, n_max=self.n_max)
        out = {"sigma": res.sigma, "n_final": float(res.n_final)}
        if "dsigma_dt" in self.features:
            if a.is_concentric:
                out["dsigma_dt"] = 0.0
            else:
                out["dsigma_dt"] = shape_derivative(normalize(series_from_eigvec(res.frame, res.eig)))
        if {"upper_M", "concentric", "liminf_lower"} & set(self.features):
            b = bounds_report(a)
            out.update(upper_M=b.upper_M, concentric=b.concentric, liminf_lower=b.liminf_lower)
        return [out[f] for f in self.features]

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_annuli(X)
        return np.array([self._row(*row) for row in X], dtype=float).reshape(len(X), len(self.features))

    def predict(self, X):
        """First eigenvalue for each row."""
        check_is_fitted(self, "n_features_in_")
        X = check_annuli(X)
        return np.array([solve_first_eigenvalue(Annulus(*row), tol=self.tol, n_max=self.n_max).sigma
                         for row in X])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_features_in_")
        return self.feature_names_out_.copy()
