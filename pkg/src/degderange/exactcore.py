"""Exact rational scalars and dense univariate polynomials.

Every exact computation in this package runs over arbitrary-precision
rationals, realized by :class:`fractions.Fraction` (always reduced, positive
denominator, decidable equality).  Plain ``int`` values are accepted and
returned wherever a quantity is integer-valued; they mix exactly with
``Fraction``.  No floating point enters this module.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Sequence, Union

ExactScalar = Union[int, Fraction]

# Factorials below this are kept in a lazily grown table; larger ones fall
# through to math.factorial.
FACTORIAL_CACHE_CAP = 256

_fact_table = [1]
_fact_lock = threading.Lock()


def rat(num: int, den: int = 1) -> Fraction:
    """Reduced rational num/den with positive denominator.

    Raises ZeroDivisionError when den == 0.
    """
    return Fraction(num, den)


def factorial(n: int) -> int:
    """Exact n! for n >= 0."""
    if n < 0:
        raise ValueError(f"factorial of negative {n}")
    if n <= FACTORIAL_CACHE_CAP:
        if n >= len(_fact_table):
            with _fact_lock:
                while len(_fact_table) <= n:
                    _fact_table.append(_fact_table[-1] * len(_fact_table))
        return _fact_table[n]
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Generalized binomial coefficient n(n-1)...(n-k+1)/k! for integer n.

    n may be negative; k must be >= 0.  The result is always an integer.
    """
    if k < 0:
        raise ValueError(f"binomial lower index must be >= 0, got {k}")
    if n >= 0:
        return math.comb(n, k) if k <= n else 0
    # binom(n, k) = (-1)^k binom(k - n - 1, k) for n < 0
    return (-1) ** k * math.comb(k - n - 1, k)


def binomial_rational(q: ExactScalar, k: int) -> Fraction:
    """q(q-1)...(q-k+1)/k! for rational q and integer k >= 0."""
    if k < 0:
        raise ValueError(f"binomial lower index must be >= 0, got {k}")
    num = Fraction(1)
    for i in range(k):
        num *= q - i
    return num / factorial(k)


class Poly:
    """Dense univariate polynomial, coefficients ascending by degree.

    Coefficients are exact rationals; the zero polynomial is the single
    coefficient 0.  Instances are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[ExactScalar] = (0,)):
        cs = [Fraction(c) for c in coeffs] or [Fraction(0)]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    def __call__(self, a: ExactScalar) -> Fraction:
        """Exact evaluation at a rational point (Horner)."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly(out)

    def scale(self, c: ExactScalar) -> "Poly":
        return Poly([Fraction(c) * v for v in self.coeffs])

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"


def poly_eval(p: Poly, a: ExactScalar) -> Fraction:
    return p(a)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_scale(p: Poly, c: ExactScalar) -> Poly:
    return p.scale(c)
