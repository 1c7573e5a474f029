"""Exact divisor-class arithmetic on Hirzebruch surfaces.

The surface of index ``m`` is the projectivisation of ``O + O(m)`` over
the projective line.  Divisor classes are integer pairs ``(k, a)`` in
the basis (section class, fibre class), with intersection rules

    fibre . fibre = 0,   section . fibre = 1,   section . section = m.

A class ``(k, a)`` with ``k >= 1`` is the class of a curve that the
ruling projects ``k : 1`` onto the line.  Everything in this module is
an exact integer formula; nothing here floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

# Inputs are capped so downstream scan tables stay desk-sized; the
# arithmetic itself is arbitrary-precision.
COORDINATE_CAP = 10**6


def _check_int(value: int, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {value!r}")


@dataclass(frozen=True)
class Surface:
    """The Hirzebruch surface of index ``m``."""

    m: int

    def __post_init__(self) -> None:
        _check_int(self.m, "surface index")
        if self.m < 0:
            raise ValueError("surface index must be non-negative")
        if self.m > COORDINATE_CAP:
            raise ValueError(f"surface index above supported cap {COORDINATE_CAP}")


@dataclass(frozen=True)
class DivisorClass:
    """The class ``k * section + a * fibre``.

    Negative coefficients are legal; each operation states its own
    domain.
    """

    k: int
    a: int

    def __post_init__(self) -> None:
        _check_int(self.k, "coefficient k")
        _check_int(self.a, "coefficient a")
        if abs(self.k) > COORDINATE_CAP or abs(self.a) > COORDINATE_CAP:
            raise ValueError(f"divisor coefficients above supported cap {COORDINATE_CAP}")


def intersect(d1: DivisorClass, d2: DivisorClass, surface: Surface) -> int:
    """Intersection number of two divisor classes.

    Bilinear and symmetric: ``k1*k2*m + k1*a2 + k2*a1``.
    """
    return d1.k * d2.k * surface.m + d1.k * d2.a + d2.k * d1.a


def directrix(surface: Surface) -> DivisorClass:
    """Class of the unique curve of self-intersection ``-m``."""
    return DivisorClass(1, -surface.m)


def canonical_class(surface: Surface) -> DivisorClass:
    """Canonical divisor class of the surface."""
    return DivisorClass(-2, surface.m - 2)


def arithmetic_genus(divisor: DivisorClass, surface: Surface) -> int:
    """Arithmetic genus of a curve of class ``(k, a)``, ``k >= 1``.

    By adjunction this equals ``C(k,2)*m + (k-1)*(a-1)``.
    """
    if divisor.k < 1:
        raise ValueError("arithmetic genus needs a curve class with k >= 1")
    return comb(divisor.k, 2) * surface.m + (divisor.k - 1) * (divisor.a - 1)


def h0_line_bundle(divisor: DivisorClass, surface: Surface) -> int:
    """Dimension of the space of global sections of ``O(k, a)``.

    A section is a vector of one-variable forms, one of degree
    ``j*m + a`` for each ``j = 0..k``; summands of negative degree
    contribute nothing.  For ``k >= 0`` and ``a >= 0`` the sum
    collapses to ``C(k+1,2)*m + (k+1)*(a+1)``.
    """
    if divisor.k < 0:
        return 0
    m = surface.m
    return sum(max(j * m + divisor.a + 1, 0) for j in range(divisor.k + 1))
