"""Brute-force reference paths used to cross-check the fast machinery.

Everything here re-derives results from the raw definition: each integer
is decoded independently by repeated division and filtered digit by
digit.  Nothing calls the block-counting, digit-scanning, or enumeration
code, so agreement between the two sides is meaningful evidence.  Speed
is explicitly not a goal; a hard range cap keeps runs bounded.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from .constraints import DigitConstraint
from .errors import RangeTooLarge

HARD_CAP = 10**7


@dataclass(frozen=True)
class OracleReport:
    lo: int
    hi: int
    members: int
    total: Fraction
    checksum: str


def _position_tables(constraint: DigitConstraint, hi: int):
    """Quotients and forbidden sets per digit position, straight from the
    definitions, wide enough to decode hi."""
    seq = constraint.sequence
    quots: list[int] = []
    forbidden: list[frozenset[int] | None] = []
    n = hi
    i = 0
    while n:
        q = seq.quotient(i)
        quots.append(q)
        forbidden.append(constraint.forbidden_at(i))
        n //= q
        i += 1
    return quots, forbidden


def oracle_members(constraint: DigitConstraint, lo: int, hi: int) -> list[int]:
    """All members in [lo, hi], each checked independently."""
    if not 1 <= lo <= hi or hi > HARD_CAP:
        raise RangeTooLarge(
            f"oracle range must satisfy 1 <= lo <= hi <= {HARD_CAP}, got [{lo}, {hi}]"
        )
    quots, forbidden = _position_tables(constraint, hi)
    out = []
    append = out.append
    for n in range(lo, hi + 1):
        m = n
        i = 0
        while m:
            m, c = divmod(m, quots[i])
            f = forbidden[i]
            if f is not None and c in f:
                break
            i += 1
        else:
            append(n)
    return out


def _half_sum(members: list[int], lo: int, hi: int) -> Fraction:
    if hi - lo <= 64:
        total = Fraction(0)
        for a in members[lo:hi]:
            total += Fraction(1, a)
        return total
    mid = (lo + hi) // 2
    return _half_sum(members, lo, mid) + _half_sum(members, mid, hi)


def oracle_sum(constraint: DigitConstraint, lo: int, hi: int) -> Fraction:
    """Exact reciprocal sum over the members in [lo, hi]."""
    members = oracle_members(constraint, lo, hi)
    return _half_sum(members, 0, len(members))


def oracle_report(constraint: DigitConstraint, lo: int, hi: int) -> OracleReport:
    """Members, exact sum, and a checksum of the sorted member list."""
    members = oracle_members(constraint, lo, hi)
    digest = hashlib.sha256(",".join(map(str, members)).encode()).hexdigest()
    return OracleReport(
        lo=lo,
        hi=hi,
        members=len(members),
        total=_half_sum(members, 0, len(members)),
        checksum=digest,
    )
