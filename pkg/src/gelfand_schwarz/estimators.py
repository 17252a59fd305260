"""scikit-learn style wrappers around the functional core.

These are thin: every heavy object (coefficient tables, quadrature grids)
lives in the functional modules, and the estimators only hold parameters
and fitted state.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .catalog import builtin_pair
from .exceptions import DimensionError
from .spherical import SeriesKernel, build_coefficient_table
from .transform import BoxQuadrature, build_h_global, fourier_inverse


def _resolve(pair):
    return builtin_pair(pair) if isinstance(pair, str) else pair


def _check_X(X, n):
    X = check_array(X, dtype=np.float64)
    if X.shape[1] != n:
        raise DimensionError(f"X has {X.shape[1]} features, the pair acts on R^{n}")
    return X


class GeneratorMap(TransformerMixin, BaseEstimator):
    """``X -> rho(X)``: the invariant feature map of a pair."""

    def __init__(self, pair="z2-r2"):
        self.pair = pair

    def fit(self, X=None, y=None):
        self.pair_ = _resolve(self.pair)
        if X is not None:
            _check_X(X, self.pair_.n)
        self.n_features_in_ = self.pair_.n
        return self

    def transform(self, X):
        check_is_fitted(self, "pair_")
        return self.pair_.rho_many(_check_X(X, self.pair_.n))


class SphericalSeries(BaseEstimator):
    """``predict(X) = h_xi(rho(X))``, the truncated series of ``phi_xi``."""

    def __init__(self, pair="z2-r2", xi=(1.0, 0.0), max_degree=30):
        self.pair = pair
        self.xi = xi
        self.max_degree = max_degree

    def fit(self, X=None, y=None):
        self.pair_ = _resolve(self.pair)
        xi = np.asarray(self.xi, dtype=float)
        if xi.shape != (self.pair_.n,):
            raise DimensionError(f"xi must have length {self.pair_.n}")
        self.table_ = build_coefficient_table(self.pair_, self.max_degree)
        self.coef_ = SeriesKernel(self.table_).coefficients(self.pair_.rho_many(xi[None, :]))[0]
        self.n_features_in_ = self.pair_.n
        return self

    def predict(self, X):
        check_is_fitted(self, "table_")
        X = _check_X(X, self.pair_.n)
        kernel = SeriesKernel(self.table_)
        return kernel(self.pair_.rho_many(np.asarray(self.xi, float)[None, :]), self.pair_.rho_many(X))[0]


class SchwarzRegressor(RegressorMixin, BaseEstimator):
    """Reconstruct ``f`` from its compactly supported Fourier transform as ``h o rho``.

    ``fhat`` is an :class:`~gelfand_schwarz.transform.InvariantFunction`.
    ``predict`` returns ``h(rho(X))`` (complex); ``reference`` returns the
    classical inversion ``f(X)`` for comparison.
    """

    def __init__(self, pair="z2-r2", fhat=None, max_degree=30, quad_radius=1.5, quad_nodes=64):
        self.pair = pair
        self.fhat = fhat
        self.max_degree = max_degree
        self.quad_radius = quad_radius
        self.quad_nodes = quad_nodes

    def fit(self, X=None, y=None):
        if self.fhat is None:
            raise ValueError("fhat is required")
        self.pair_ = _resolve(self.pair)
        self.quad_ = BoxQuadrature(self.quad_radius, self.quad_nodes, self.pair_.n)
        self.table_ = build_coefficient_table(self.pair_, self.max_degree)
        self.n_features_in_ = self.pair_.n
        return self

    def predict(self, X):
        check_is_fitted(self, "table_")
        X = _check_X(X, self.pair_.n)
        return build_h_global(self.table_, self.fhat, self.quad_, self.pair_.rho_many(X))

    def reference(self, X):
        check_is_fitted(self, "table_")
        return fourier_inverse(self.fhat, self.quad_, _check_X(X, self.pair_.n))

    def score(self, X, y=None, sample_weight=None):
        """Negative max abs gap between ``h o rho`` and the classical inversion (higher is better)."""
        return -float(np.max(np.abs(self.predict(X) - self.reference(X))))
