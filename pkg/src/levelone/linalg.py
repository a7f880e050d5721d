"""Exact rational vector and matrix helpers.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of
rows.  Inversion and solving delegate to sympy's exact rational matrices and
convert the result back to ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import sympy

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def frac_vec(values: Iterable) -> Vec:
    return tuple(Fraction(v) for v in values)


def frac_mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(frac_vec(r) for r in rows)


def _to_fraction(x: sympy.Expr) -> Fraction:
    rational = sympy.Rational(x)
    return Fraction(int(rational.p), int(rational.q))


def inverse(rows: Sequence[Sequence]) -> Mat:
    """Exact inverse of a square rational matrix."""
    m = sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows])
    inv = m.inv()
    return tuple(tuple(_to_fraction(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))


def matvec(m: Sequence[Sequence], v: Sequence) -> Vec:
    return tuple(sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Mat:
    cols = list(zip(*b))
    return tuple(tuple(sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def transpose(m: Sequence[Sequence]) -> Mat:
    return tuple(tuple(Fraction(x) for x in col) for col in zip(*m))


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def bilinear(gram: Sequence[Sequence], x: Sequence, y: Sequence) -> Fraction:
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            row = gram[i]
            for j, yj in enumerate(y):
                if yj:
                    total += xi * row[j] * yj
    return total


def add(x: Sequence, y: Sequence) -> Vec:
    return tuple(Fraction(a) + b for a, b in zip(x, y))


def sub(x: Sequence, y: Sequence) -> Vec:
    return tuple(Fraction(a) - b for a, b in zip(x, y))


def scale(c, x: Sequence) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in x)


def zero(n: int) -> Vec:
    return (Fraction(0),) * n


def fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
