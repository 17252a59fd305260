"""Generator sets of K-invariant polynomials and exact expression in the generators.

Given homogeneous invariant generators ``rho_1, ..., rho_l`` of degrees
``d_1, ..., d_l``, every invariant form of degree ``m`` is a combination of
the products ``rho^J`` with graded degree ``sum_k j_k d_k = m``.  When the
generators satisfy relations (e.g. ``rho_2^2 = rho_1 rho_3`` for
``{x1^2, x1 x2, x2^2}``) that combination is not unique; we always return the
minimum-Euclidean-norm coefficient vector, computed exactly with the
pseudo-inverse of the expansion matrix.  This choice is deterministic and
commutes with reordering the generators.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .exceptions import DimensionError, ExpressibilityError, HomogeneityError, InvarianceError, ValidationError
from .groups import CompactGroup, invariance_witness
from .polynomial import RATIONAL, Polynomial, derivative_at_zero_pairing, monomials_of_degree


@dataclass(frozen=True)
class GelfandPair:
    group: CompactGroup
    generators: tuple
    degrees: tuple
    name: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def n(self):
        return self.group.n

    @property
    def ell(self):
        return len(self.generators)

    def rho(self, x):
        """``(rho_1(x), ..., rho_l(x))``; exact for rational ``x``."""
        return tuple(g(x) for g in self.generators)

    def rho_many(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n:
            raise DimensionError(f"expected an array of shape (m, {self.n})")
        return np.stack([g.evaluate_many(X).real for g in self.generators], axis=1)

    def rho_power(self, J):
        """The polynomial ``rho^J = prod_k rho_k^{j_k}`` (cached)."""
        J = tuple(J)
        if len(J) != self.ell:
            raise DimensionError(f"multi-index of length {len(J)} for {self.ell} generators")
        cache = self._cache.setdefault("rho_power", {})
        if J not in cache:
            p = Polynomial.constant(self.n, 1)
            for g, j in zip(self.generators, J):
                if j:
                    p = p * _gen_power(self, g, j)
            cache[J] = p
        return cache[J]

    def to_json_dict(self):
        return {"group": self.group.to_json_dict(),
                "generators": [g.to_json_dict() for g in self.generators]}


def _gen_power(pair, g, j):
    cache = pair._cache.setdefault("gen_power", {})
    key = (pair.generators.index(g), j)
    if key not in cache:
        cache[key] = g ** j
    return cache[key]


def validate_pair(group, gens, name=""):
    """Check the generators and bundle them with the group.

    Every generator must be a non-zero homogeneous polynomial over ``group.n``
    variables that is invariant under the group; the invariance check is
    exact (Reynolds average equals the polynomial).
    """
    gens = tuple(gens)
    if not gens:
        raise ValidationError("at least one generator is required")
    degs = []
    for idx, g in enumerate(gens):
        if g.n_vars != group.n:
            raise DimensionError(f"generator {idx + 1} has {g.n_vars} variables, group acts on R^{group.n}")
        if g.field != RATIONAL:
            raise ValidationError(f"generator {idx + 1} must have rational coefficients")
        if g.is_zero():
            raise ValidationError(f"generator {idx + 1} is the zero polynomial")
        if not g.is_homogeneous():
            raise HomogeneityError(f"generator {idx + 1} is not homogeneous: {g}")
        if g.degree == 0:
            raise HomogeneityError(f"generator {idx + 1} is a constant")
        w = invariance_witness(group, g)
        if w is not None:
            k, defect = w
            raise InvarianceError(f"generator {idx + 1} is not invariant; p(k x) - p(x) = {defect}",
                                  witness=k, defect=defect)
        degs.append(g.degree)
    return GelfandPair(group, gens, tuple(degs), name=name)


def enumerate_graded(m, degrees):
    """All ``J`` with graded degree ``m``, lex-descending (e.g. (2,0,0) before (1,1,0))."""
    degrees = tuple(degrees)
    if m < 0:
        return []

    def rec(rest, k):
        if k == len(degrees):
            return [()] if rest == 0 else []
        out = []
        for j in range(rest // degrees[k], -1, -1):
            out.extend((j,) + tail for tail in rec(rest - j * degrees[k], k + 1))
        return out

    return rec(m, 0)


def enumerate_graded_upto(M, degrees):
    return [J for m in range(M + 1) for J in enumerate_graded(m, degrees)]


@dataclass(frozen=True)
class ExpansionMatrix:
    """Column ``J`` holds the monomial coefficients of ``rho^J`` on the rows' monomials."""

    rows: tuple
    cols: tuple
    matrix: tuple

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def rank(self):
        return linalg.rank(self.matrix) if self.rows and self.cols else 0


def expansion_matrix(pair, m):
    cache = pair._cache.setdefault("expansion", {})
    if m not in cache:
        rows = tuple(monomials_of_degree(pair.n, m))
        cols = tuple(enumerate_graded(m, pair.degrees))
        powers = [pair.rho_power(J) for J in cols]
        matrix = tuple(tuple(p.coefficient(I) for p in powers) for I in rows)
        cache[m] = ExpansionMatrix(rows, cols, matrix)
    return cache[m]


def min_norm_inverse(pair, m):
    """Exact pseudo-inverse of ``expansion_matrix(pair, m)`` (shape ``len(cols) x len(rows)``)."""
    cache = pair._cache.setdefault("pinv", {})
    if m not in cache:
        E = expansion_matrix(pair, m)
        if not E.cols:
            cache[m] = ()
        else:
            cache[m] = tuple(tuple(r) for r in linalg.pseudo_inverse(E.matrix))
    return cache[m]


def min_norm_combination(pair, m, rhs):
    """Minimum-norm ``a`` with ``E a = rhs`` for ``rhs`` indexed by the degree-``m`` monomials.

    ``rhs`` entries may be scalars or polynomials (anything closed under
    scaling by Fractions and addition).  Returns ``(a, residual)`` where the
    residual is ``E a - rhs`` as a list.
    """
    E = expansion_matrix(pair, m)
    P = min_norm_inverse(pair, m)
    zero = _zero_like(rhs)
    a = [_combine(row, rhs, zero) for row in P]
    back = [_combine(row, a, zero) for row in E.matrix] if E.cols else [zero] * len(rhs)
    residual = [u - v for u, v in zip(back, rhs)]
    return a, residual


def _zero_like(values):
    for v in values:
        if isinstance(v, Polynomial):
            return Polynomial.zero(v.n_vars, v.field)
        return 0 * v
    return Fraction(0)


def _combine(coeffs, values, zero):
    acc = zero
    for c, v in zip(coeffs, values):
        if c:
            acc = acc + v * c
    return acc


def express_in_generators(pair, p, check_invariance=True):
    """Return ``q`` in ``l`` variables with ``q(rho(x)) = p(x)`` identically.

    Each homogeneous degree is solved independently with the minimum-norm
    rule.  Raises :class:`InvarianceError` for a non-invariant ``p`` and
    :class:`ExpressibilityError` (carrying the residual) if some component is
    not in the algebra generated by ``pair.generators``.
    """
    if p.n_vars != pair.n:
        raise DimensionError(f"polynomial in {p.n_vars} variables for a pair on R^{pair.n}")
    terms = {}
    for m, comp in p.homogeneous_components():
        if check_invariance:
            w = invariance_witness(pair.group, comp)
            if w is not None:
                raise InvarianceError(f"degree-{m} component is not invariant", witness=w[0], defect=w[1])
        E = expansion_matrix(pair, m)
        rhs = [comp.coefficient(I) for I in E.rows]
        a, residual = min_norm_combination(pair, m, rhs)
        if any(r != 0 for r in residual):
            res_poly = Polynomial(pair.n, dict(zip(E.rows, residual)), p.field)
            raise ExpressibilityError(f"degree-{m} component {comp} is not generated by the generators",
                                      degree=m, residual=res_poly)
        for J, c in zip(E.cols, a):
            if c != 0:
                terms[J] = c
    return Polynomial(pair.ell, terms, p.field)


@dataclass(frozen=True)
class SpecialAssumptionResult:
    holds: bool
    max_degree: int
    counterexample: tuple = None  # (J, J', value)

    def __bool__(self):
        return self.holds

    def describe(self):
        if self.holds:
            return f"holds up to graded degree {self.max_degree}"
        J, Jp, v = self.counterexample
        return f"assumption fails, witness J={J}, J'={Jp}, value {v}"


def check_special_assumption(pair, M):
    """Search for ``J != J'`` (graded degree <= M) with ``(D^J rho^J')(0) != 0``.

    Pairs of different graded degree always pair to zero, so only equal
    degrees are scanned; the first violation in graded-lex order is returned.
    """
    cache = pair._cache.setdefault("special", {})
    if M in cache:
        return cache[M]
    result = SpecialAssumptionResult(True, M)
    for m in range(M + 1):
        cols = enumerate_graded(m, pair.degrees)
        found = None
        for J in cols:
            for Jp in cols:
                if J == Jp:
                    continue
                v = derivative_at_zero_pairing(pair.rho_power(J), pair.rho_power(Jp))
                if v != 0:
                    found = (J, Jp, v)
                    break
            if found:
                break
        if found:
            result = SpecialAssumptionResult(False, M, found)
            break
    cache[M] = result
    return result
