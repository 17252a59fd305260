"""Built-in pairs: the trivial pair on R^2, Z2 = {+-Id} on R^2, SO(2) and SO(3)."""

from .groups import CompactGroup
from .invariants import validate_pair
from .polynomial import Polynomial

BUILTIN_NAMES = ("trivial", "z2-r2", "so2", "so3")


def _mono(*exp):
    return Polynomial.monomial(exp)


def trivial_pair(n=2):
    gens = [Polynomial.monomial(tuple(int(i == j) for j in range(n))) for i in range(n)]
    return validate_pair(CompactGroup.trivial(n), gens, name="trivial")


def z2_pair():
    group = CompactGroup.finite([[[1, 0], [0, 1]], [[-1, 0], [0, -1]]], label="z2")
    return validate_pair(group, [_mono(2, 0), _mono(1, 1), _mono(0, 2)], name="z2-r2")


def so2_pair(quadrature_points=256):
    return validate_pair(CompactGroup.so2(quadrature_points), [_mono(2, 0) + _mono(0, 2)], name="so2")


def so3_pair(resolution=24):
    r2 = _mono(2, 0, 0) + _mono(0, 2, 0) + _mono(0, 0, 2)
    return validate_pair(CompactGroup.so3(resolution), [r2], name="so3")


_FACTORIES = {"trivial": trivial_pair, "z2-r2": z2_pair, "so2": so2_pair, "so3": so3_pair}


def builtin_pair(name):
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise KeyError(f"unknown built-in pair {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
