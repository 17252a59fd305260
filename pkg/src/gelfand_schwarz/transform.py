"""Classical and spherical Fourier transforms by tensor Gauss-Legendre quadrature.

Conventions, fixed once for the whole package::

    fhat(xi) = int f(x) exp(-i <x, xi>) dx
    f(x)     = (2 pi)^-n int fhat(xi) exp(i <x, xi>) dxi
    h(t)     = (2 pi)^-n int fhat(xi) h_xi(t) dxi

so that ``h(rho(x)) = f(x)`` whenever ``fhat`` has compact support.  With
``f = ghat`` one has ``fhat(xi) = (2 pi)^n g(-xi)``, hence the plain
Lebesgue form ``h(t) = int g(-xi) h_xi(t) dxi`` used by
:func:`corollary_h_from_g`.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import DimensionError, InvarianceError, SupportError, ValidationError, warn_support
from .spherical import SeriesKernel, spherical_values

MAX_DIM = 3
AUDIT_TOL = 1e-12


@dataclass(frozen=True)
class InvariantFunction:
    """A vectorised function R^n -> C with declared support and symmetry.

    ``evaluator`` maps an array of shape ``(m, n)`` to shape ``(m,)``.
    ``support_radius=None`` means unbounded support.
    """

    evaluator: object
    n: int
    support_radius: float = None
    group: object = None
    name: str = ""

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.n:
            raise DimensionError(f"function on R^{self.n} evaluated at points of dimension {X.shape[1]}")
        out = np.asarray(self.evaluator(X))
        return out[0] if single else out

    def audit(self, group=None, tol=AUDIT_TOL):
        """Spot-check ``|f(k x) - f(x)| <= tol`` on a fixed audit set; returns the max defect."""
        group = group if group is not None else self.group
        if group is None:
            return 0.0
        mats, _ = group.nodes()
        if len(mats) > 8:
            mats = mats[np.linspace(0, len(mats) - 1, 8).astype(int)]
        rng = np.random.default_rng(20240607)
        r = self.support_radius if self.support_radius is not None else 2.0
        X = rng.uniform(-r, r, size=(16, self.n))
        base = self(X)
        defect = max(float(np.max(np.abs(self(X @ k.T) - base))) for k in mats)
        if defect > tol:
            raise InvarianceError(f"{self.name or 'function'} is not invariant (audit defect {defect:.3e})")
        return defect


def bump(n, radius=1.0, group=None):
    """``exp(-1 / (1 - |x/r|^2))`` inside the ball of radius ``r``, zero outside (C-infinity)."""
    def ev(X):
        r2 = np.sum((X / radius) ** 2, axis=1)
        out = np.zeros(len(X))
        inside = r2 < 1
        out[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
        return out

    return InvariantFunction(ev, n, radius, group, name=f"bump(r={radius})")


def gaussian(n, scale=1.0, group=None):
    """``scale * exp(-|x|^2 / 2)``; unbounded support, used only for calibration."""
    return InvariantFunction(lambda X: scale * np.exp(-0.5 * np.sum(X ** 2, axis=1)), n, None, group,
                             name="gaussian")


def zero_function(n, group=None):
    return InvariantFunction(lambda X: np.zeros(len(X)), n, 0.0, group, name="zero")


@dataclass(frozen=True)
class BoxQuadrature:
    """Tensor Gauss-Legendre rule on ``[-radius, radius]^dim``."""

    radius: float
    nodes: int
    dim: int
    _check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise ValidationError(f"box quadrature supports 1 <= n <= {MAX_DIM}")
        if self.radius <= 0 or self.nodes < 1:
            raise ValidationError("radius and nodes must be positive")
        if self._check:
            self._verify_exactness()

    @property
    def degree(self):
        """Polynomial exactness degree per axis."""
        return 2 * self.nodes - 1

    @cached_property
    def _rule(self):
        g, w = np.polynomial.legendre.leggauss(self.nodes)
        return g, w

    def _verify_exactness(self):
        g, w = self._rule
        if np.any(w <= 0):
            raise ValidationError("Gauss-Legendre weights must be positive")
        for k in range(0, self.degree + 1, 2):
            exact = 2.0 / (k + 1)
            if abs(np.dot(w, g ** k) - exact) > 1e-12 * max(1.0, exact):
                raise ValidationError(f"rule is not exact on x^{k}")

    @cached_property
    def _grid(self):
        g, w = self._rule
        g, w = g * self.radius, w * self.radius
        axes = np.meshgrid(*([g] * self.dim), indexing="ij")
        X = np.stack(axes, axis=-1).reshape(-1, self.dim)
        W = w
        for _ in range(self.dim - 1):
            W = np.multiply.outer(W, w)
        X.setflags(write=False)
        W = W.ravel()
        W.setflags(write=False)
        return X, W

    def points(self):
        return self._grid[0]

    def weights(self):
        return self._grid[1]

    def refined(self):
        return BoxQuadrature(self.radius, 2 * self.nodes, self.dim)

    def to_json_dict(self):
        return {"R": self.radius, "nodes": self.nodes}


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    degree: int
    nodes: int
    delta: float = None


def _support_estimate(f, quad):
    # largest |f| on the box faces
    g = np.linspace(-quad.radius, quad.radius, 9)
    pts = []
    for axis in range(quad.dim):
        for side in (-quad.radius, quad.radius):
            P = np.stack(np.meshgrid(*([g] * quad.dim), indexing="ij"), -1).reshape(-1, quad.dim)
            P[:, axis] = side
            pts.append(P)
    return float(np.max(np.abs(f(np.concatenate(pts)))))


def _check_support(f, quad, strict):
    if f.n != quad.dim:
        raise DimensionError(f"function on R^{f.n} with a quadrature on R^{quad.dim}")
    if f.support_radius is None:
        warn_support(f"{f.name or 'function'} has unbounded support; box truncates it",
                     _support_estimate(f, quad))
    elif f.support_radius > quad.radius:
        if strict:
            raise SupportError(f"support radius {f.support_radius} exceeds box half-width {quad.radius}")
        warn_support(f"support radius {f.support_radius} exceeds box half-width {quad.radius}",
                     _support_estimate(f, quad))


def _points(v, dim):
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    v = np.atleast_2d(v)
    if v.shape[1] != dim:
        raise DimensionError(f"points of dimension {v.shape[1]}, expected {dim}")
    return v, single


def _active(f, quad):
    X, W = quad.points(), quad.weights()
    vals = f(X)
    mask = vals != 0
    return X[mask], (W * vals)[mask]


def fourier_forward(f, quad, xi):
    """``fhat(xi) = int f(x) exp(-i <x, xi>) dx`` for one point or rows of points."""
    _check_support(f, quad, strict=False)
    Xi, single = _points(xi, quad.dim)
    X, wf = _active(f, quad)
    out = np.exp(-1j * (Xi @ X.T)) @ wf
    return complex(out[0]) if single else out


def fourier_inverse(fhat, quad, x):
    """``f(x) = (2 pi)^-n int fhat(xi) exp(i <x, xi>) dxi``."""
    _check_support(fhat, quad, strict=True)
    Xs, single = _points(x, quad.dim)
    Xi, wf = _active(fhat, quad)
    out = np.exp(1j * (Xs @ Xi.T)) @ wf / (2 * math.pi) ** quad.dim
    return complex(out[0]) if single else out


def gelfand_transform(pair, f, quad, xi):
    """``F(f)(phi_xi) = int f(x) phi_xi(-x) dx``; equals ``fhat(xi)`` for invariant ``f``."""
    if pair.n != quad.dim:
        raise DimensionError("pair and quadrature dimensions differ")
    f.audit(pair.group)
    _check_support(f, quad, strict=False)
    Xi, single = _points(xi, quad.dim)
    X, wf = _active(f, quad)
    out = np.array([spherical_values(pair, x_i, -X) @ wf for x_i in Xi])
    return complex(out[0]) if single else out


def _kernel(table):
    cache = table.pair._cache.setdefault("kernels", {})
    if table.max_degree not in cache:
        cache[table.max_degree] = SeriesKernel(table)
    return cache[table.max_degree]


def _h_integral(table, weights_fn, quad, t, scale):
    pair = table.pair
    if pair.n != quad.dim:
        raise DimensionError("pair and quadrature dimensions differ")
    T, single = _points(t, pair.ell)
    Xi, wf = weights_fn()
    if len(Xi) == 0:
        out = np.zeros(len(T), dtype=complex)
    else:
        out = (wf @ _kernel(table)(pair.rho_many(Xi), T)) * scale
    return complex(out[0]) if single else out


def build_h_global(table, fhat, quad, t):
    """``h(t) = (2 pi)^-n int fhat(xi) h_xi(t) dxi`` with the truncated series ``h_xi``."""
    _check_support(fhat, quad, strict=True)
    fhat.audit(table.pair.group)
    return _h_integral(table, lambda: _active(fhat, quad), quad, t, (2 * math.pi) ** -quad.dim)


def corollary_h_from_g(table, g, quad, t):
    """``h(t) = int g(-xi) h_xi(t) dxi`` (Lebesgue measure); then ``h(rho(xi)) = ghat(xi)``."""
    _check_support(g, quad, strict=True)
    g.audit(table.pair.group)

    def weights():
        X, W = quad.points(), quad.weights()
        vals = g(-X)
        mask = vals != 0
        return X[mask], (W * vals)[mask]

    return _h_integral(table, weights, quad, t, 1.0)


@dataclass
class SchwarzReport:
    pair: str
    M: int
    quad: dict
    max_abs_error: float
    max_abs_f: float
    points: list = field(repr=False)

    @property
    def relative_error(self):
        return self.max_abs_error / self.max_abs_f if self.max_abs_f else self.max_abs_error

    def to_json_dict(self):
        return {"pair": self.pair, "M": self.M, "quad": self.quad,
                "max_abs_error": self.max_abs_error, "max_abs_f": self.max_abs_f,
                "points": self.points}


def _c(z):
    return [float(z.real), float(z.imag)]


def verify_schwarz(pair, table, fhat, quad, test_points, budget=False):
    """Compare ``f(x)`` (classical inversion) with ``h(rho(x))`` at each test point."""
    X, _ = _points(test_points, pair.n)
    f_vals = fourier_inverse(fhat, quad, X)
    h_vals = build_h_global(table, fhat, quad, pair.rho_many(X))
    err = np.abs(f_vals - h_vals)
    qd = {**quad.to_json_dict(), "degree": quad.degree}
    if budget:
        fine = quad.refined()
        f2 = fourier_inverse(fhat, fine, X)
        qd["doubling_delta"] = float(np.max(np.abs(f2 - f_vals)))
    rows = [{"x": [float(v) for v in x], "f": _c(fv), "h_rho": _c(hv), "err": float(e)}
            for x, fv, hv, e in zip(X, f_vals, h_vals, err)]
    return SchwarzReport(pair.name or "custom", table.max_degree, qd,
                         float(err.max()) if len(err) else 0.0,
                         float(np.abs(f_vals).max()) if len(err) else 0.0, rows)


def corollary_check(table, g, quad, xis):
    """Max of ``|h(rho(xi)) - F(g)(phi_xi)|`` over the rows of ``xis``."""
    pair = table.pair
    Xi, _ = _points(xis, pair.n)
    h = corollary_h_from_g(table, g, quad, pair.rho_many(Xi))
    ref = gelfand_transform(pair, g, quad, Xi)
    return float(np.max(np.abs(h - ref)))


def with_budget(fn, quad, *args):
    """Run ``fn(quad, *args)`` and again on the doubled rule; report the change."""
    v = fn(quad, *args)
    v2 = fn(quad.refined(), *args)
    return QuadratureResult(v, quad.degree, quad.nodes, float(np.max(np.abs(np.asarray(v2) - np.asarray(v)))))
