"""Compact groups K acting orthogonally on R^n and their normalised Haar averages.

Three kinds are supported:

``finite``
    An explicit list of rational orthogonal matrices.  Orthogonality and
    closure are checked exactly, and averages are exact arithmetic means.
``so2``
    SO(2) on R^2, averaged with the uniform trapezoid rule on
    ``quadrature_points`` angles.
``so3``
    SO(3) on R^3, averaged with a ZYZ Euler-angle product rule: trapezoid in
    the two azimuthal angles and Gauss-Legendre in ``cos(beta)``.

Polynomial Reynolds averages never use quadrature.  For the rotation groups
the average of a degree-``d`` form is its mean over the unit sphere times
``|x|^d``, and sphere means of monomials are closed-form rationals.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exceptions import ClosureError, DimensionError, GroupValidationError, QuadratureError, ValidationError
from .polynomial import RATIONAL, Polynomial, poly_compose_linear, to_fraction

FINITE, SO2, SO3 = "finite", "so2", "so3"
SO3_RULE = "euler-zyz-gauss"
DEFAULT_SO2_POINTS = 256
DEFAULT_SO3_RESOLUTION = 24


def _freeze(M):
    return tuple(tuple(to_fraction(a) for a in row) for row in M)


def _mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0)) for j in range(n))
                 for i in range(n))


def _identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _transpose(M):
    return tuple(zip(*M))


@dataclass(frozen=True)
class CompactGroup:
    kind: str
    n: int
    elements: tuple = ()
    quadrature_points: int = 0
    quadrature_rule: str = ""
    label: str = field(default="", compare=False)

    # constructors ---------------------------------------------------------------
    @classmethod
    def finite(cls, matrices, label=""):
        """Validated finite group from rational matrices (raises on any defect)."""
        mats = [_freeze(M) for M in matrices]
        if not mats:
            raise GroupValidationError("a finite group needs at least one element")
        n = len(mats[0])
        for idx, M in enumerate(mats):
            if len(M) != n or any(len(r) != n for r in M):
                raise DimensionError(f"element {idx} is not {n}x{n}")
            if _mat_mul(_transpose(M), M) != _identity(n):
                raise GroupValidationError(f"element {idx} is not orthogonal: {_fmt(M)}", element=M)
        if len(set(mats)) != len(mats):
            dup = next(M for M in mats if mats.count(M) > 1)
            raise GroupValidationError(f"duplicate element {_fmt(dup)}", element=dup)
        members = set(mats)
        if _identity(n) not in members:
            raise ClosureError("identity matrix is missing", witness=_identity(n))
        for A in mats:
            for B in mats:
                P = _mat_mul(A, B)
                if P not in members:
                    raise ClosureError(f"product {_fmt(A)} * {_fmt(B)} = {_fmt(P)} is not in the set",
                                       witness=P)
        return cls(FINITE, n, tuple(mats), label=label)

    @classmethod
    def trivial(cls, n):
        return cls.finite([_identity(n)], label="trivial")

    @classmethod
    def so2(cls, quadrature_points=DEFAULT_SO2_POINTS):
        if quadrature_points < 1:
            raise ValidationError("quadrature_points must be positive")
        return cls(SO2, 2, quadrature_points=int(quadrature_points))

    @classmethod
    def so3(cls, resolution=DEFAULT_SO3_RESOLUTION):
        if resolution < 1:
            raise ValidationError("resolution must be positive")
        return cls(SO3, 3, quadrature_points=int(resolution), quadrature_rule=SO3_RULE)

    @property
    def is_finite(self):
        return self.kind == FINITE

    @property
    def order(self):
        return len(self.elements) if self.is_finite else math.inf

    def refined(self):
        """Same group with the quadrature resolution doubled (finite groups unchanged)."""
        if self.is_finite:
            return self
        return CompactGroup(self.kind, self.n, (), 2 * self.quadrature_points, self.quadrature_rule)

    # quadrature nodes -------------------------------------------------------------
    @cached_property
    def _nodes(self):
        if self.kind == FINITE:
            mats = np.array([[[float(a) for a in row] for row in M] for M in self.elements])
            w = np.full(len(mats), 1.0 / len(mats))
        elif self.kind == SO2:
            th = 2 * np.pi * np.arange(self.quadrature_points) / self.quadrature_points
            c, s = np.cos(th), np.sin(th)
            mats = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
            w = np.full(len(th), 1.0 / len(th))
        else:
            mats, w = _so3_product_rule(self.quadrature_points)
        mats.setflags(write=False)
        w.setflags(write=False)
        return mats, w

    def nodes(self):
        """``(matrices, weights)``: arrays of shape ``(N, n, n)`` and ``(N,)``, weights summing to 1."""
        return self._nodes

    def exact_witnesses(self):
        """Rational group elements whose joint invariants are exactly the K-invariants."""
        if self.is_finite:
            return self.elements
        c, s = Fraction(3, 5), Fraction(4, 5)
        if self.kind == SO2:
            return (((c, -s), (s, c)),)
        one, zero = Fraction(1), Fraction(0)
        rz = ((c, -s, zero), (s, c, zero), (zero, zero, one))
        rx = ((one, zero, zero), (zero, c, -s), (zero, s, c))
        return (rz, rx)

    # serialisation -------------------------------------------------------------------
    def to_json_dict(self):
        d = {"n": self.n, "kind": self.kind}
        if self.is_finite:
            d["matrices"] = [[[str(a) for a in row] for row in M] for M in self.elements]
        else:
            d["quadrature_points"] = self.quadrature_points
        return d


def _fmt(M):
    return "[" + "; ".join(" ".join(str(a) for a in row) for row in M) + "]"


def _rot_z(a):
    c, s = np.cos(a), np.sin(a)
    z, o = np.zeros_like(a), np.ones_like(a)
    return np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1), np.stack([z, z, o], -1)], -2)


def _rot_y(b):
    c, s = np.cos(b), np.sin(b)
    z, o = np.zeros_like(b), np.ones_like(b)
    return np.stack([np.stack([c, z, s], -1), np.stack([z, o, z], -1), np.stack([-s, z, c], -1)], -2)


def _so3_product_rule(N):
    # Haar measure in ZYZ Euler angles is sin(beta) d(alpha) d(beta) d(gamma) / (8 pi^2)
    ang = 2 * np.pi * np.arange(N) / N
    u, wu = np.polynomial.legendre.leggauss(N)
    beta = np.arccos(u)
    A, B, G = np.meshgrid(ang, beta, ang, indexing="ij")
    W = np.broadcast_to((wu / 2)[None, :, None], A.shape) / (N * N)
    mats = _rot_z(A.ravel()) @ _rot_y(B.ravel()) @ _rot_z(G.ravel())
    return mats, W.ravel().copy()


# ----------------------------------------------------------------------------
# parsing

_GROUP_KEYS = {"n", "kind", "matrices", "quadrature_points"}


def validate_group(raw):
    """Parse a group spec dict (JSON schema in the README) into a :class:`CompactGroup`."""
    if isinstance(raw, CompactGroup):
        return raw
    if not isinstance(raw, dict):
        raise ValidationError("group spec must be an object")
    unknown = set(raw) - _GROUP_KEYS
    if unknown:
        raise ValidationError(f"unknown keys in group spec: {sorted(unknown)}")
    if "n" not in raw or "kind" not in raw:
        raise ValidationError("group spec needs 'n' and 'kind'")
    n, kind = raw["n"], raw["kind"]
    if not isinstance(n, int) or n < 1:
        raise ValidationError("'n' must be a positive integer")
    if kind == FINITE:
        if "quadrature_points" in raw:
            raise ValidationError("'quadrature_points' is not allowed for finite groups")
        mats = raw.get("matrices")
        if not isinstance(mats, list):
            raise ValidationError("finite group spec needs 'matrices'")
        try:
            group = CompactGroup.finite(mats)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, (GroupValidationError, DimensionError)):
                raise
            raise ValidationError(f"malformed matrix entry: {exc}") from exc
        if group.n != n:
            raise DimensionError(f"matrices are {group.n}x{group.n} but n={n}")
        return group
    if kind in (SO2, SO3):
        if "matrices" in raw:
            raise ValidationError(f"'matrices' is not allowed for kind {kind!r}")
        want = 2 if kind == SO2 else 3
        if n != want:
            raise DimensionError(f"{kind} acts on R^{want}, got n={n}")
        pts = raw.get("quadrature_points", DEFAULT_SO2_POINTS if kind == SO2 else DEFAULT_SO3_RESOLUTION)
        if not isinstance(pts, int) or pts < 1:
            raise ValidationError("'quadrature_points' must be a positive integer")
        return CompactGroup.so2(pts) if kind == SO2 else CompactGroup.so3(pts)
    raise ValidationError(f"unknown group kind {kind!r}")


# ----------------------------------------------------------------------------
# Haar averages

def haar_average_scalar(K, F):
    """Normalised Haar average of ``F`` over ``K``.

    For finite groups ``F`` receives the exact rational matrix; if every value
    is rational the mean is an exact :class:`Fraction`.  For rotation groups
    ``F`` receives float matrices at the quadrature nodes.  Summation uses
    :func:`math.fsum`, so the result does not depend on element order.
    """
    if K.is_finite:
        values = [F(k) for k in K.elements]
        if all(isinstance(v, (int, Fraction)) for v in values):
            return sum((Fraction(v) for v in values), Fraction(0)) / len(values)
        return _fsum_complex(values) / len(values)
    mats, w = K.nodes()
    return _fsum_complex([wi * F(M) for M, wi in zip(mats, w)])


def _fsum_complex(values):
    values = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def haar_average_checked(K, F, tol=1e-12):
    """Average with a doubling check; returns ``(value, delta)``.

    Raises :class:`QuadratureError` if doubling the resolution changes the
    result by ``tol`` or more.  Finite groups report ``delta = 0``.
    """
    value = haar_average_scalar(K, F)
    if K.is_finite:
        return value, 0.0
    delta = abs(complex(haar_average_scalar(K.refined(), F)) - complex(value))
    if delta >= tol:
        raise QuadratureError(f"doubling {K.kind} resolution moved the average by {delta:.3e}")
    return value, delta


# ----------------------------------------------------------------------------
# Reynolds operator

def _double_factorial(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def sphere_moment(alpha, n):
    """Mean of ``x^alpha`` over the unit sphere in R^n (exact rational)."""
    if any(a % 2 for a in alpha):
        return Fraction(0)
    d = sum(alpha)
    num = math.prod(_double_factorial(a - 1) for a in alpha)
    den = math.prod(n + 2 * j for j in range(d // 2))
    return Fraction(num, den)


def norm_squared(n, field=RATIONAL):
    return Polynomial(n, {tuple(2 if k == i else 0 for k in range(n)): 1 for i in range(n)}, field)


def reynolds(K, p):
    """Reynolds projection ``x -> int_K p(k x) dk`` (exact on rational input)."""
    if p.n_vars != K.n:
        raise DimensionError(f"polynomial in {p.n_vars} variables for a group acting on R^{K.n}")
    if K.is_finite:
        acc = Polynomial.zero(K.n, p.field)
        for k in K.elements:
            acc = acc + poly_compose_linear(p, k)
        return acc / len(K.elements)
    r2 = norm_squared(K.n, p.field)
    acc = Polynomial.zero(K.n, p.field)
    for d, comp in p.homogeneous_components():
        if d % 2:
            continue
        mean = sum((c * sphere_moment(I, K.n) for I, c in comp.terms.items()),
                   Fraction(0) if p.field == RATIONAL else 0j)
        if mean != 0:
            acc = acc + (r2 ** (d // 2)).scale(mean)
    return acc


def invariance_witness(K, p):
    """``None`` if ``p`` is K-invariant, else ``(k, defect)`` with ``defect = p(k x) - p(x)``.

    The decision is made by comparing ``p`` with its exact Reynolds average;
    the witness is then taken from :meth:`CompactGroup.exact_witnesses`.
    """
    if reynolds(K, p) == p:
        return None
    for k in K.exact_witnesses():
        q = poly_compose_linear(p, k) if p.field == RATIONAL else poly_compose_linear(
            p, [[float(a) for a in row] for row in k])
        if q != p:
            return k, q - p
    # unreachable for rational input: the witnesses generate a dense subgroup
    return None, reynolds(K, p) - p


def is_invariant(K, p):
    return invariance_witness(K, p) is None

