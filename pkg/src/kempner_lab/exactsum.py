"""Exact summation of long streams of rationals.

Naive left-to-right accumulation of n unit fractions is quadratic in the
size of the growing denominator.  A binary-counter reduction keeps the
additions balanced (like merge sort), and each merge uses the classic
gcd-of-denominators form so intermediate results stay reduced without a
gcd on full products.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable


def add_reduced(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    """a/b + c/d for reduced inputs; returns a reduced (num, den)."""
    g = gcd(b, d)
    if g == 1:
        return a * d + c * b, b * d
    b_r = b // g
    d_r = d // g
    num = a * d_r + c * b_r
    den = b_r * d
    g2 = gcd(num, g)
    if g2 > 1:
        num //= g2
        den //= g2
    return num, den


def sum_reciprocals(values: Iterable[int]) -> Fraction:
    """Exact sum of 1/v over the stream, via balanced pairwise merging."""
    stack: list[tuple[int, int, int]] = []  # (level, num, den)
    for v in values:
        level, num, den = 0, 1, v
        while stack and stack[-1][0] == level:
            _, n2, d2 = stack.pop()
            num, den = add_reduced(num, den, n2, d2)
            level += 1
        stack.append((level, num, den))
    num, den = 0, 1
    while stack:
        _, n2, d2 = stack.pop()
        num, den = add_reduced(num, den, n2, d2)
    return Fraction(num, den)


def sum_fractions(values: Iterable[Fraction]) -> Fraction:
    """Exact sum of a stream of fractions, same balanced scheme."""
    stack: list[tuple[int, int, int]] = []
    for f in values:
        level, num, den = 0, f.numerator, f.denominator
        while stack and stack[-1][0] == level:
            _, n2, d2 = stack.pop()
            num, den = add_reduced(num, den, n2, d2)
            level += 1
        stack.append((level, num, den))
    num, den = 0, 1
    while stack:
        _, n2, d2 = stack.pop()
        num, den = add_reduced(num, den, n2, d2)
    return Fraction(num, den)
