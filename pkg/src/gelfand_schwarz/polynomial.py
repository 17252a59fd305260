"""Sparse multivariate polynomials and multi-index calculus.

A multi-index is a plain tuple of non-negative ints.  Polynomials map
multi-indices to coefficients in one of two scalar fields:

* ``"rational"``: :class:`fractions.Fraction`, used by every symbolic table;
* ``"complex"``: Python ``complex``, used on quadrature paths.

Conversion between the two is explicit (:meth:`Polynomial.to_complex`).
Terms are kept in graded-lexicographic order (total degree ascending, then
exponent tuples in descending lexicographic order) so that serialisation is
deterministic.
"""

from fractions import Fraction
from functools import reduce
from math import factorial
from numbers import Rational
from types import MappingProxyType

import numpy as np

from .exceptions import DimensionError, ValidationError

RATIONAL = "rational"
COMPLEX = "complex"
FIELDS = (RATIONAL, COMPLEX)


# --------------------------------------------------------------------------
# multi-indices

def as_multiindex(exponents):
    I = tuple(int(e) for e in exponents)
    if any(e < 0 for e in I):
        raise ValidationError(f"negative exponent in multi-index {I}")
    return I


def degree(I):
    """Plain degree ``i_1 + ... + i_n``."""
    return sum(I)


def multi_factorial(I):
    """``I! = i_1! * ... * i_n!`` as an exact integer."""
    return reduce(lambda acc, e: acc * factorial(e), I, 1)


def graded_degree(J, degs):
    """Weighted degree ``sum_k j_k * degs[k]`` of the generator monomial ``rho^J``."""
    if len(J) != len(degs):
        raise DimensionError(f"multi-index of length {len(J)} vs {len(degs)} degrees")
    return sum(j * d for j, d in zip(J, degs))


def graded_lex_key(I):
    return (sum(I), tuple(-e for e in I))


def monomials_of_degree(n, m):
    """All exponent tuples of length ``n`` and total degree ``m``, lex-descending."""
    if n == 0:
        return [()] if m == 0 else []
    out = []
    for first in range(m, -1, -1):
        out.extend((first,) + rest for rest in monomials_of_degree(n - 1, m - first))
    return out


def unit_index(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


# --------------------------------------------------------------------------
# scalars

def to_fraction(c):
    """Exact conversion of ints, Fractions, ``"p/q"`` strings and finite floats."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, (float, np.floating)):
        return Fraction(float(c))
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise ValidationError(f"cannot convert {c!r} to an exact rational")


def _coerce(c, field):
    if field == RATIONAL:
        return to_fraction(c)
    if isinstance(c, Fraction):
        return complex(float(c))
    return complex(c)


# --------------------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial in ``n_vars`` variables.

    >>> x1, x2 = Polynomial.variables(2)
    >>> ((x1**2 + x2**2) ** 2).terms_list()[1]
    ((2, 2), Fraction(2, 1))
    """

    __slots__ = ("n_vars", "field", "_terms", "_hash")

    def __init__(self, n_vars, terms=None, field=RATIONAL):
        if n_vars < 0:
            raise DimensionError("n_vars must be non-negative")
        if field not in FIELDS:
            raise ValidationError(f"unknown scalar field {field!r}")
        self.n_vars = int(n_vars)
        self.field = field
        clean = {}
        for exp, c in (terms or {}).items():
            I = as_multiindex(exp)
            if len(I) != self.n_vars:
                raise DimensionError(f"exponent {I} has length {len(I)}, expected {self.n_vars}")
            c = _coerce(c, field)
            if c != 0:
                clean[I] = clean.get(I, 0) + c
                if clean[I] == 0:
                    del clean[I]
        self._terms = dict(sorted(clean.items(), key=lambda kv: graded_lex_key(kv[0])))
        self._hash = None

    @classmethod
    def _raw(cls, n_vars, terms, field):
        # trusted constructor: terms already coerced, pruned and keyed by tuples
        obj = cls.__new__(cls)
        obj.n_vars = n_vars
        obj.field = field
        obj._terms = dict(sorted(((k, v) for k, v in terms.items() if v != 0),
                                 key=lambda kv: graded_lex_key(kv[0])))
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, n_vars, field=RATIONAL):
        return cls(n_vars, {}, field)

    @classmethod
    def constant(cls, n_vars, c, field=RATIONAL):
        return cls(n_vars, {(0,) * n_vars: c}, field)

    @classmethod
    def monomial(cls, exponents, coeff=1, field=RATIONAL):
        I = as_multiindex(exponents)
        return cls(len(I), {I: coeff}, field)

    @classmethod
    def variables(cls, n_vars, field=RATIONAL):
        return [cls.monomial(unit_index(n_vars, i), 1, field) for i in range(n_vars)]

    # inspection ----------------------------------------------------------------
    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def terms_list(self):
        return list(self._terms.items())

    def coefficient(self, I):
        return self._terms.get(tuple(I), Fraction(0) if self.field == RATIONAL else 0j)

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    @property
    def degree(self):
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(I) for I in self._terms), default=-1)

    def is_homogeneous(self):
        return len({sum(I) for I in self._terms}) <= 1

    def homogeneous_components(self):
        """``[(m, p_m), ...]`` in ascending degree, zero components omitted."""
        buckets = {}
        for I, c in self._terms.items():
            buckets.setdefault(sum(I), {})[I] = c
        return [(m, Polynomial._raw(self.n_vars, buckets[m], self.field)) for m in sorted(buckets)]

    def homogeneous_component(self, m):
        return Polynomial._raw(self.n_vars, {I: c for I, c in self._terms.items() if sum(I) == m},
                               self.field)

    def truncate(self, max_degree):
        return Polynomial._raw(self.n_vars, {I: c for I, c in self._terms.items()
                                             if sum(I) <= max_degree}, self.field)

    def max_abs_coefficient(self):
        return max((abs(c) for c in self._terms.values()), default=Fraction(0) if self.field == RATIONAL else 0.0)

    # arithmetic ----------------------------------------------------------------
    def _check_compatible(self, other):
        if self.n_vars != other.n_vars:
            raise DimensionError(f"polynomials in {self.n_vars} and {other.n_vars} variables")
        if self.field != other.field:
            raise ValidationError("mixing rational and complex polynomials; convert explicitly")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            return other
        return Polynomial.constant(self.n_vars, other, self.field)

    def __add__(self, other):
        other = self._lift(other)
        res = dict(self._terms)
        for I, c in other._terms.items():
            res[I] = res.get(I, 0) + c
        return Polynomial._raw(self.n_vars, res, self.field)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n_vars, {I: -c for I, c in self._terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = _coerce(c, self.field)
        return Polynomial._raw(self.n_vars, {I: c * v for I, v in self._terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_compatible(other)
        res = {}
        for I, a in self._terms.items():
            for J, b in other._terms.items():
                K = tuple(i + j for i, j in zip(I, J))
                res[K] = res.get(K, 0) + a * b
        return Polynomial._raw(self.n_vars, res, self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if self.field == RATIONAL:
            return self.scale(Fraction(1) / to_fraction(c))
        return self.scale(1 / complex(c))

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(self.n_vars, 1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.n_vars == other.n_vars and self.field == other.field
                    and self._terms == other._terms)
        if isinstance(other, (int, Fraction, float, complex)):
            return self == Polynomial.constant(self.n_vars, other, self.field)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_vars, self.field, frozenset(self._terms.items())))
        return self._hash

    # conversion ----------------------------------------------------------------
    def to_complex(self):
        if self.field == COMPLEX:
            return self
        return Polynomial._raw(self.n_vars, {I: complex(float(c)) for I, c in self._terms.items()},
                               COMPLEX)

    # evaluation ----------------------------------------------------------------
    def __call__(self, x):
        return poly_eval(self, x)

    def evaluate_many(self, X):
        """Vectorised float evaluation at the rows of ``X`` (shape ``(m, n)``)."""
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.n_vars:
            raise DimensionError(f"expected points of dimension {self.n_vars}")
        if not self._terms:
            return np.zeros(X.shape[0])
        exps = np.array(list(self._terms), dtype=int).reshape(len(self._terms), self.n_vars)
        coeffs = np.array([complex(c) if self.field == COMPLEX else float(c)
                           for c in self._terms.values()])
        mon = np.prod(X[:, None, :] ** exps[None, :, :], axis=2)
        return mon @ coeffs

    # calculus ------------------------------------------------------------------
    def derivative(self, I):
        """``d^I p`` for a multi-index ``I`` acting on the first ``len(I)`` variables."""
        I = tuple(I) + (0,) * (self.n_vars - len(I))
        res = {}
        for E, c in self._terms.items():
            if any(e < i for e, i in zip(E, I)):
                continue
            mult = 1
            for e, i in zip(E, I):
                mult *= factorial(e) // factorial(e - i)
            K = tuple(e - i for e, i in zip(E, I))
            res[K] = res.get(K, 0) + c * mult
        return Polynomial._raw(self.n_vars, res, self.field)

    def apply_operator(self, op):
        """Apply the constant-coefficient operator obtained from ``op`` by ``x_k -> d/dx_k``.

        ``op`` may have fewer variables than ``self``; it then acts on the
        leading ``op.n_vars`` variables only.
        """
        if op.n_vars > self.n_vars:
            raise DimensionError("operator has more variables than the operand")
        if op.field != self.field:
            raise ValidationError("operator and operand live in different scalar fields")
        acc = {}
        for I, c in op._terms.items():
            for K, v in self.derivative(I)._terms.items():
                acc[K] = acc.get(K, 0) + c * v
        return Polynomial._raw(self.n_vars, acc, self.field)

    def compose_linear(self, A):
        return poly_compose_linear(self, A)

    def substitute(self, polys):
        """``self(polys[0], ..., polys[n-1])`` for a list of polynomials in a common ring."""
        if len(polys) != self.n_vars:
            raise DimensionError(f"need {self.n_vars} substitutions, got {len(polys)}")
        if not polys:
            raise DimensionError("cannot substitute into a polynomial with no variables")
        m, field = polys[0].n_vars, polys[0].field
        cache = {}

        def power(k, e):
            if (k, e) not in cache:
                cache[(k, e)] = polys[k] ** e
            return cache[(k, e)]

        acc = {}
        for I, c in self._terms.items():
            term = Polynomial.constant(m, _coerce(c, field), field)
            for k, e in enumerate(I):
                if e:
                    term = term * power(k, e)
            for K, v in term._terms.items():
                acc[K] = acc.get(K, 0) + v
        return Polynomial._raw(m, acc, field)

    # display -------------------------------------------------------------------
    def __repr__(self):
        return f"Polynomial({self.n_vars}, {self}, field={self.field!r})"

    def __str__(self, names=None):
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.n_vars)]
        parts = []
        for I, c in self._terms.items():
            mono = "*".join(f"{names[k]}^{e}" if e > 1 else names[k] for k, e in enumerate(I) if e)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    # serialisation ---------------------------------------------------------------
    def to_json_dict(self):
        return {"n": self.n_vars,
                "terms": [{"exp": list(I), "coeff": coeff_to_json(c)} for I, c in self._terms.items()]}

    @classmethod
    def from_json_dict(cls, data):
        if not isinstance(data, dict) or set(data) != {"n", "terms"}:
            raise ValidationError("polynomial spec must be an object with exactly keys 'n' and 'terms'")
        n = data["n"]
        if not isinstance(n, int) or n < 1:
            raise ValidationError("polynomial spec 'n' must be a positive integer")
        terms, field = {}, RATIONAL
        parsed = []
        for t in data["terms"]:
            if not isinstance(t, dict) or set(t) != {"exp", "coeff"}:
                raise ValidationError("polynomial term must have exactly keys 'exp' and 'coeff'")
            c = coeff_from_json(t["coeff"])
            if not isinstance(c, Fraction):
                field = COMPLEX
            parsed.append((as_multiindex(t["exp"]), c))
        for I, c in parsed:
            if I in terms:
                raise ValidationError(f"duplicate exponent {list(I)} in polynomial spec")
            terms[I] = c
        return cls(n, terms, field)


def coeff_to_json(c):
    if isinstance(c, Fraction):
        return str(c)
    c = complex(c)
    return [c.real, c.imag]


def coeff_from_json(v):
    try:
        return _coeff_from_json(v)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad coefficient {v!r}: {exc}") from exc


def _coeff_from_json(v):
    if isinstance(v, str):
        return to_fraction(v)
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(u, (int, float)) for u in v):
        return complex(v[0], v[1])
    if isinstance(v, list) and len(v) == 2 and all(isinstance(u, str) for u in v):
        # exact Gaussian-rational dump, read back as a complex float
        return complex(float(to_fraction(v[0])), float(to_fraction(v[1])))
    raise ValidationError(f"bad coefficient {v!r}: expected 'p/q' string or [re, im]")


# --------------------------------------------------------------------------
# module-level operations

def poly_product(p, q):
    return p * q


def poly_eval(p, x):
    """Evaluate ``p`` at the point ``x``; exact when ``x`` and ``p`` are rational."""
    x = list(x)
    if len(x) != p.n_vars:
        raise DimensionError(f"point of dimension {len(x)} for polynomial in {p.n_vars} variables")
    if p.field == RATIONAL and all(isinstance(v, (int, Fraction)) for v in x):
        x = [Fraction(v) for v in x]
        total = Fraction(0)
    else:
        x = [complex(v) if isinstance(v, complex) else float(v) for v in x]
        total = 0.0
    powers = [{} for _ in x]
    for I, c in p.terms.items():
        term = c if p.field == COMPLEX or isinstance(total, Fraction) else float(c)
        for k, e in enumerate(I):
            if e:
                pk = powers[k]
                if e not in pk:
                    pk[e] = x[k] ** e
                term = term * pk[e]
        total = total + term
    return total


def _linear_forms(A, n, field):
    rows = [list(r) for r in A]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionError(f"matrix must be {n}x{n}")
    forms = []
    for r in rows:
        terms = {unit_index(n, j): a for j, a in enumerate(r)}
        forms.append(Polynomial(n, terms, field))
    return forms


def poly_compose_linear(p, A):
    """Return ``x -> p(A x)``.

    Exact if ``p`` is rational and ``A`` has int/Fraction entries; otherwise the
    result lives in the complex field.
    """
    n = p.n_vars
    exact = p.field == RATIONAL and all(isinstance(a, (int, Fraction)) for r in A for a in r)
    field = RATIONAL if exact else COMPLEX
    forms = _linear_forms(A, n, field)
    q = p if field == p.field else p.to_complex()
    return q.substitute(forms)


def derivative_at_zero_pairing(q, p):
    """``(q(d) p)(0) = sum_I q_I p_I I!``: constant-coefficient operator of ``q`` applied to ``p`` at 0."""
    if q.n_vars != p.n_vars:
        raise DimensionError(f"pairing of polynomials in {q.n_vars} and {p.n_vars} variables")
    small, big = (q, p) if len(q) <= len(p) else (p, q)
    total = Fraction(0) if q.field == p.field == RATIONAL else 0j
    bt = big.terms
    for I, c in small.terms.items():
        d = bt.get(I)
        if d is not None:
            total += c * d * multi_factorial(I)
    return total


def homogeneous_components(p):
    return p.homogeneous_components()
