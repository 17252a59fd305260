"""Spherical functions of a pair (K, R^n) and their generator series.

``phi_xi(x) = int_K exp(i <x, k xi>) dk``.  Its Taylor coefficient at ``x^I``
is ``b_I(xi) = i^|I| / I! * Reynolds(x^I)(xi)`` (differentiate the exponential
under the integral), which we express exactly as a polynomial in
``t = rho(xi)``.  Regrouping the degree-``m`` Taylor block in the products
``rho(x)^J`` gives ``a_J(xi) = q_J(rho(xi))``, and

    h_xi(t) = sum_J q_J(rho(xi)) t^J

satisfies ``phi_xi = h_xi o rho``.  All coefficient tables are exact: each
entry is a rational polynomial times a power of ``i``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import (DimensionError, ExpressibilityError, InsufficientDepthError,
                         SpecialAssumptionError, TruncationError)
from .invariants import (check_special_assumption, enumerate_graded,
                         expansion_matrix, express_in_generators, min_norm_combination)
from .groups import reynolds
from .polynomial import (Polynomial, derivative_at_zero_pairing, graded_degree,
                         monomials_of_degree, multi_factorial, poly_eval, to_fraction)

I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)


def _exact_or_float(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, complex):
        return v
    return float(v)


@dataclass(frozen=True)
class PhasedPolynomial:
    """``i^phase * poly`` with ``poly`` rational; keeps powers of ``i`` exact.

    Normalised so that ``phase`` is 0 (real) or 1 (imaginary).
    """

    phase: int
    poly: Polynomial

    def __post_init__(self):
        phase = self.phase % 4
        if phase >= 2:
            object.__setattr__(self, "poly", -self.poly)
            phase -= 2
        object.__setattr__(self, "phase", phase)

    def is_zero(self):
        return self.poly.is_zero()

    def exact_value(self, t):
        """``(phase, value)`` with ``value = poly(t)``, exact for rational ``t``."""
        return self.phase, poly_eval(self.poly, [_exact_or_float(v) for v in t])

    def __call__(self, t):
        phase, v = self.exact_value(t)
        return I_POWERS[phase] * (float(v) if isinstance(v, Fraction) else v)

    def to_json_dict(self):
        """Polynomial spec; imaginary coefficients become ``["0", "p/q"]`` pairs."""
        terms = [{"exp": list(I), "coeff": str(c) if self.phase == 0 else ["0", str(c)]}
                 for I, c in self.poly.terms.items()]
        return {"n": self.poly.n_vars, "terms": terms}

    def __str__(self):
        body = self.poly.__str__([f"t{k + 1}" for k in range(self.poly.n_vars)])
        return f"i*({body})" if self.phase else body


@dataclass(frozen=True)
class CoefficientTable:
    pair: object
    max_degree: int
    b_table: dict = field(repr=False)
    a_table: dict = field(repr=False)

    def a_of_degree(self, m):
        return {J: self.a_table[J] for J in enumerate_graded(m, self.pair.degrees)}

    def taylor_block(self, m):
        return {I: self.b_table[I] for I in monomials_of_degree(self.pair.n, m)}


@dataclass(frozen=True)
class SpectrumPoint:
    lambda_: tuple
    witness_xi: tuple

    @classmethod
    def from_xi(cls, pair, xi):
        return cls(tuple(pair.rho(xi)), tuple(xi))


@dataclass(frozen=True)
class HSeries:
    """Truncated ``h_xi``: ``terms[J] = q_J(rho(xi))`` for graded degree ``<= M``."""

    pair: object
    max_degree: int
    xi: tuple
    terms: dict = field(repr=False)

    def evaluate(self, t):
        return eval_h_series(self, t)

    __call__ = evaluate

    def band(self, m):
        return {J: c for J, c in self.terms.items() if graded_degree(J, self.pair.degrees) == m}

    def remainder_proxy(self, t):
        """Magnitude of the last non-empty graded band at ``t`` (empirical tail size)."""
        degs = self.pair.degrees
        for m in range(self.max_degree, -1, -1):
            band = [J for J in self.terms if graded_degree(J, degs) == m]
            if band:
                return math.fsum(abs(self.terms[J] * _mono(t, J)) for J in band)
        return 0.0

    def to_json_dict(self):
        return {"xi": [float(v) for v in self.xi], "M": self.max_degree,
                "terms": [{"J": list(J), "re": complex(c).real, "im": complex(c).imag}
                          for J, c in self.terms.items()]}


def _mono(t, J):
    v = 1.0
    for tk, j in zip(t, J):
        if j:
            v = v * tk ** j
    return v


# ----------------------------------------------------------------------------
# direct evaluation

def _check_dim(pair, *vecs):
    for v in vecs:
        if len(v) != pair.n:
            raise DimensionError(f"point of dimension {len(v)} for a pair on R^{pair.n}")


def _exact_phase(x, k, xi):
    # <x, k xi> computed exactly, then rounded once; symmetric in (x, xi) up to k -> k^T
    xs = [to_fraction(v) for v in x]
    ys = [to_fraction(v) for v in xi]
    return float(sum((xs[i] * k[i][j] * ys[j] for i in range(len(xs)) for j in range(len(ys))
                      if k[i][j]), Fraction(0)))


def eval_spherical_direct(pair, xi, x):
    """``phi_xi(x)`` by Haar averaging of ``exp(i <x, k xi>)``.

    Finite groups: phases are computed in exact arithmetic and the mean is an
    exactly rounded sum, so ``phi_xi(x) == phi_x(xi)`` holds bit for bit.
    """
    xi, x = list(xi), list(x)
    _check_dim(pair, xi, x)
    K = pair.group
    if K.is_finite:
        ph = [_exact_phase(x, k, xi) for k in K.elements]
        N = len(ph)
        return complex(math.fsum(math.cos(p) for p in ph) / N, math.fsum(math.sin(p) for p in ph) / N)
    mats, w = K.nodes()
    ph = mats @ np.asarray(xi, dtype=float) @ np.asarray(x, dtype=float)
    return complex(math.fsum(w * np.cos(ph)), math.fsum(w * np.sin(ph)))


def spherical_values(pair, xi, X):
    """Vectorised ``phi_xi`` at the rows of ``X`` (float arithmetic)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    mats, w = pair.group.nodes()
    kxi = mats @ np.asarray(xi, dtype=float)
    return np.exp(1j * (X @ kxi.T)) @ w


def spherical_eigenvalue(pair, j, xi):
    """``lambda_j(xi) = i^deg(rho_j) * rho_j(xi)`` for 1-based generator index ``j``."""
    if not 1 <= j <= pair.ell:
        raise IndexError(f"generator index {j} outside 1..{pair.ell}")
    _check_dim(pair, xi)
    v = poly_eval(pair.generators[j - 1], [_exact_or_float(u) for u in xi])
    return I_POWERS[pair.degrees[j - 1] % 4] * (float(v) if isinstance(v, Fraction) else v)


def verify_symmetry(pair, xi, x):
    """``|phi_xi(x) - phi_x(xi)|``."""
    return abs(eval_spherical_direct(pair, xi, x) - eval_spherical_direct(pair, x, xi))


# ----------------------------------------------------------------------------
# coefficient tables

def build_coefficient_table(pair, M):
    """Exact ``b_I`` (``|I| <= M``) and ``q_J`` (graded degree ``<= M``) tables."""
    if M < 0:
        raise ValueError("M must be non-negative")
    cache = pair._cache.setdefault("tables", {})
    if M in cache:
        return cache[M]
    b_table, a_table = {}, {}
    for m in range(M + 1):
        rows = expansion_matrix(pair, m).rows
        block = []
        for I in rows:
            avg = reynolds(pair.group, Polynomial.monomial(I))
            try:
                q = express_in_generators(pair, avg, check_invariance=False)
            except ExpressibilityError as exc:
                raise ExpressibilityError(
                    f"Reynolds average of x^{I} is not expressible in the generators "
                    f"(incomplete generator set?)", degree=m, residual=exc.residual, index=I) from exc
            q = q / multi_factorial(I)
            b_table[I] = PhasedPolynomial(m, q)
            block.append(q)
        a, residual = min_norm_combination(pair, m, block)
        if any(not r.is_zero() for r in residual):
            raise ExpressibilityError(f"degree-{m} Taylor block is not in the span of rho^J",
                                      degree=m, residual=residual)
        for J, q in zip(expansion_matrix(pair, m).cols, a):
            a_table[J] = PhasedPolynomial(m, q)
    table = CoefficientTable(pair, M, b_table, a_table)
    cache[M] = table
    return table


def build_h_series(table, xi):
    """``h_xi`` truncated at the table depth.

    For rational ``xi`` each coefficient is computed exactly and rounded once.
    """
    pair = table.pair
    _check_dim(pair, xi)
    rho_xi = pair.rho([_exact_or_float(v) for v in xi])
    terms = {J: q(rho_xi) for J, q in table.a_table.items()}
    return HSeries(pair, table.max_degree, tuple(xi), terms)


def eval_h_series(h, t):
    if len(t) != h.pair.ell:
        raise DimensionError(f"t has length {len(t)}, expected {h.pair.ell}")
    vals = [c * _mono(t, J) for J, c in h.terms.items()]
    vals = [complex(v) for v in vals]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


class SeriesKernel:
    """Batched ``h_xi(t)`` for many ``xi`` and many ``t``.

    Writes ``h_xi(t) = sum_{alpha, J} C[alpha, J] rho(xi)^alpha t^J`` and
    evaluates it as ``V C T^T``.
    """

    def __init__(self, table):
        self.table = table
        self.pair = table.pair
        self.J = list(table.a_table)
        alphas = sorted({a for q in table.a_table.values() for a in q.poly.terms})
        index = {a: r for r, a in enumerate(alphas)}
        C = np.zeros((len(alphas), len(self.J)), dtype=complex)
        for col, J in enumerate(self.J):
            q = table.a_table[J]
            for a, c in q.poly.terms.items():
                C[index[a], col] += I_POWERS[q.phase] * float(c)
        self.alphas = np.array(alphas, dtype=int).reshape(len(alphas), self.pair.ell)
        self.Jarr = np.array(self.J, dtype=int).reshape(len(self.J), self.pair.ell)
        self.C = C

    @staticmethod
    def _monomials(T, E):
        T = np.atleast_2d(np.asarray(T, dtype=float))
        return np.prod(T[:, None, :] ** E[None, :, :], axis=2)

    def coefficients(self, rho_xi):
        """``q_J(rho(xi))`` for each row of ``rho_xi``; shape ``(p, len(J))``."""
        return self._monomials(rho_xi, self.alphas) @ self.C

    def __call__(self, rho_xi, T):
        """Matrix ``H[p, q] = h_{xi_p}(T_q)`` given ``rho(xi_p)`` rows."""
        return self.coefficients(rho_xi) @ self._monomials(T, self.Jarr).T


def check_doubling(table, xis, T, tol=1e-12):
    """Compare ``h_xi(t)`` at depth M and 2M; returns the max change or raises TruncationError."""
    pair = table.pair
    deep = build_coefficient_table(pair, 2 * table.max_degree)
    R = pair.rho_many(np.atleast_2d(xis))
    delta = float(np.max(np.abs(SeriesKernel(table)(R, T) - SeriesKernel(deep)(R, T))))
    if delta > tol:
        raise TruncationError(f"doubling the series depth from {table.max_degree} moved h by {delta:.3e}")
    return delta


# ----------------------------------------------------------------------------
# verification

def _embed(p, offset, total):
    return Polynomial(total, {(0,) * offset + I + (0,) * (total - offset - len(I)): c
                              for I, c in p.terms.items()}, p.field)


def verify_eigenfunction(table, xi, j):
    """Max coefficient of ``D_j T - lambda_j(xi) T`` on degrees ``<= M - deg(rho_j)``.

    ``T`` is the degree-``M`` Taylor polynomial of ``phi_xi`` rebuilt from the
    b-table.  With ``xi=None`` the check is symbolic in ``xi``.  Exact.
    """
    pair = table.pair
    if not 1 <= j <= pair.ell:
        raise IndexError(f"generator index {j} outside 1..{pair.ell}")
    d = pair.degrees[j - 1]
    M = table.max_degree
    if M < d:
        raise InsufficientDepthError(f"table depth {M} is below deg(rho_{j}) = {d}")
    n = pair.n
    total = 2 * n
    acc = {}
    for I, b in table.b_table.items():
        # strip the common factor i^|I|; what remains is a sign
        sign = 1 if (b.phase - sum(I)) % 4 == 0 else -1
        xi_poly = b.poly.substitute(list(pair.generators))
        if sign < 0:
            xi_poly = -xi_poly
        for E, c in xi_poly.terms.items():
            key = I + E
            acc[key] = acc.get(key, 0) + c
    T = Polynomial(total, acc)
    rho_j = pair.generators[j - 1]
    lhs = T.apply_operator(rho_j)
    rhs = T * _embed(rho_j, n, total)
    diff = (lhs - rhs)
    diff = Polynomial(total, {E: c for E, c in diff.terms.items() if sum(E[:n]) <= M - d})
    if xi is None:
        return diff.max_abs_coefficient()
    _check_dim(pair, xi)
    xs = [_exact_or_float(v) for v in xi]
    worst = Fraction(0)
    blocks = {}
    for E, c in diff.terms.items():
        blocks.setdefault(E[:n], {})[E[n:]] = c
    for I, part in blocks.items():
        v = poly_eval(Polynomial(n, part), xs)
        worst = max(worst, abs(v))
    return worst


def special_case_a(pair, J, xi):
    """Closed-form ``a_J(xi) = lambda(xi)^J / (D^J rho^J)(0)``; valid only under orthogonality."""
    J = tuple(J)
    _check_dim(pair, xi)
    m = graded_degree(J, pair.degrees)
    verdict = check_special_assumption(pair, m)
    if not verdict.holds:
        raise SpecialAssumptionError(
            f"orthogonality fails ({verdict.describe()}); closed form does not apply",
            counterexample=verdict.counterexample)
    rho = pair.generators
    xs = [_exact_or_float(v) for v in xi]
    value = 1
    for g, jk in zip(rho, J):
        if jk:
            value = value * poly_eval(g, xs) ** jk
    norm = derivative_at_zero_pairing(pair.rho_power(J), pair.rho_power(J))
    value = value / norm
    return I_POWERS[m % 4] * (float(value) if isinstance(value, Fraction) else value)


def series_direct_gap(table, xi, X):
    """``max_x |h_xi(rho(x)) - phi_xi(x)|`` over rows of ``X`` plus the remainder proxy there."""
    pair = table.pair
    X = np.atleast_2d(np.asarray(X, dtype=float))
    h = build_h_series(table, xi)
    gaps, tails = [], []
    for x in X:
        t = pair.rho(list(x))
        gaps.append(abs(eval_h_series(h, t) - eval_spherical_direct(pair, xi, x)))
        tails.append(h.remainder_proxy(t))
    return max(gaps), max(tails)


__all__ = [
    "PhasedPolynomial", "CoefficientTable", "SpectrumPoint", "HSeries", "SeriesKernel",
    "eval_spherical_direct", "spherical_values", "spherical_eigenvalue", "verify_symmetry",
    "build_coefficient_table", "build_h_series", "eval_h_series", "check_doubling",
    "verify_eigenfunction", "special_case_a", "series_direct_gap",
]
