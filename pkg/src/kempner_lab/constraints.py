"""Missing-digit conditions: membership, exact block counts, and counting.

A constraint couples a quotient sequence with an index set I of digit
positions and, for each i in I, a nonempty proper forbidden subset U_i of
[0, d_i - 1].  A positive integer is a member when none of its digits at
constrained positions fall in the forbidden set.  Storage is a default
forbidden set plus sparse per-index overrides, so an "every position"
constraint with one uniform set costs O(1) space.

Members with exactly k+1 digits form the block A_k living in
[g_k, g_{k+1} - 1]; blocks are counted exactly by splitting off the
leading digit (which ranges over [1, d_k - 1]).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from . import indexsets
from .errors import (
    BitOutOfRange,
    BudgetExceeded,
    DigitOutOfRange,
    EmptyForbiddenSet,
    ForbiddenSetNotProper,
    InputOutOfRange,
    NonPositiveInput,
    OverrideOutsideIndexSet,
)
from .gadic import Numeral, QuotientSequence, base_value, constant, to_digits
from .indexsets import ExplicitIndices, IndexSet

FINITE = "finite"
INFINITE = "infinite"
UNKNOWN = "unknown"

# Indices checked eagerly at construction; later positions are validated
# when first touched.
_VALIDATION_HORIZON = 64


@dataclass(frozen=True)
class DigitConstraint:
    sequence: QuotientSequence
    index_set: IndexSet
    default_forbidden: frozenset[int] | None
    overrides: tuple[tuple[int, frozenset[int]], ...] = ()

    def forbidden_at(self, i: int) -> frozenset[int] | None:
        """Forbidden set at position i, or None when i is unconstrained."""
        if not self.index_set.contains(i):
            return None
        for idx, s in self.overrides:
            if idx == i:
                return _check_forbidden(s, self.sequence.quotient(i), i)
        if self.default_forbidden is None:
            raise EmptyForbiddenSet(f"no forbidden set available at constrained position {i}")
        return _check_forbidden(self.default_forbidden, self.sequence.quotient(i), i)


def _check_forbidden(s: frozenset[int], d_i: int, i: int) -> frozenset[int]:
    if not s:
        raise EmptyForbiddenSet(f"forbidden set at position {i} is empty")
    if max(s) >= d_i:
        raise DigitOutOfRange(
            f"forbidden digit {max(s)} at position {i} outside [0, {d_i - 1}]"
        )
    if len(s) >= d_i:
        raise ForbiddenSetNotProper(
            f"forbidden set at position {i} covers all of [0, {d_i - 1}]"
        )
    return s


def make_constraint(
    seq: QuotientSequence,
    index_set: IndexSet,
    default: frozenset[int] | set[int] | list[int] | None = None,
    overrides: Mapping[int, set[int] | frozenset[int] | list[int]] | None = None,
) -> DigitConstraint:
    """Validate and build a digit constraint.

    Every override index must belong to the index set.  A missing default
    is allowed only when the index set is finite and fully overridden.
    """
    default_f = frozenset(default) if default else None
    if default_f and min(default_f) < 0:
        raise DigitOutOfRange(f"forbidden digits must be nonnegative, got {min(default_f)}")
    over: list[tuple[int, frozenset[int]]] = []
    for i, s in sorted((overrides or {}).items()):
        if not index_set.contains(i):
            raise OverrideOutsideIndexSet(
                f"override at position {i} which the index set does not constrain"
            )
        sf = frozenset(s)
        if not sf:
            raise EmptyForbiddenSet(f"override at position {i} is empty")
        if min(sf) < 0:
            raise DigitOutOfRange(f"forbidden digits must be nonnegative, got {min(sf)}")
        _check_forbidden(sf, seq.quotient(i), i)
        over.append((i, sf))

    if default_f is None:
        covered = {i for i, _ in over}
        if not indexsets.is_finite(index_set) or any(
            i not in covered for i in _finite_members(index_set)
        ):
            raise EmptyForbiddenSet(
                "no default forbidden set and the index set is not fully overridden"
            )

    constraint = DigitConstraint(seq, index_set, default_f, tuple(over))
    # Eager sweep of small constrained positions; catches defaults that are
    # full or out of range wherever that is decidable up front.
    for i in range(_VALIDATION_HORIZON + 1):
        if index_set.contains(i):
            constraint.forbidden_at(i)
    return constraint


def _finite_members(ix: IndexSet) -> list[int]:
    ix = indexsets.normalize(ix)
    if isinstance(ix, ExplicitIndices):
        return sorted(ix.indices)
    if isinstance(ix, indexsets.ComplementIndices):
        inner = indexsets.normalize(ix.inner)
        if isinstance(inner, indexsets.AllIndices):
            return []
        if isinstance(inner, indexsets.ArithmeticIndices) and inner.step == 1:
            return list(range(inner.first))
    raise AssertionError("finite member listing requested for a non-finite rule")


def fixed_bits(bits: Mapping[int, int]) -> DigitConstraint:
    """Binary constraint pinning digit i to bits[i] at every given position."""
    if not bits:
        raise BitOutOfRange("fixed-bits map must be nonempty")
    for i, v in bits.items():
        if i < 0:
            raise BitOutOfRange(f"bit position {i} is negative")
        if v not in (0, 1):
            raise BitOutOfRange(f"bit value at position {i} must be 0 or 1, got {v}")
    index_set = ExplicitIndices(frozenset(bits))
    overrides = {i: {1 - v} for i, v in bits.items()}
    return make_constraint(constant(2), index_set, default=None, overrides=overrides)


def is_member(constraint: DigitConstraint, n: int) -> bool:
    """Whether every constrained digit of n avoids its forbidden set."""
    if n < 1:
        raise NonPositiveInput(f"membership is defined for positive integers, got {n}")
    numeral = to_digits(constraint.sequence, n)
    contains = constraint.index_set.contains
    for i, c in enumerate(numeral.digits):
        if contains(i) and c in constraint.forbidden_at(i):
            return False
    return True


def is_member_numeral(constraint: DigitConstraint, numeral: Numeral) -> bool:
    contains = constraint.index_set.contains
    for i, c in enumerate(numeral.digits):
        if contains(i) and c in constraint.forbidden_at(i):
            return False
    return True


@dataclass(frozen=True)
class BlockCount:
    """Exact size of block A_k plus the two-sided product bound."""

    k: int
    exact: int
    product_bound: int
    empty: bool


def _allowed_count(constraint: DigitConstraint, i: int) -> int:
    d_i = constraint.sequence.quotient(i)
    forbidden = constraint.forbidden_at(i)
    return d_i if forbidden is None else d_i - len(forbidden)


def _leading_allowed_count(constraint: DigitConstraint, k: int) -> int:
    d_k = constraint.sequence.quotient(k)
    forbidden = constraint.forbidden_at(k)
    if forbidden is None:
        return d_k - 1
    return (d_k - 1) - len(forbidden - {0})


def block_count_exact(constraint: DigitConstraint, k: int) -> BlockCount:
    """|A_k| by direct digit counting, leading digit split off exactly.

    ``product_bound`` is the plain product of per-position allowed digit
    counts over positions 0..k; the exact count always lies in
    [product_bound / 2, product_bound] for nonempty blocks.
    """
    if k < 0:
        raise InputOutOfRange(f"negative block index {k}")
    product = 1
    exact = 1
    for i in range(k):
        a = _allowed_count(constraint, i)
        product *= a
        exact *= a
    exact *= _leading_allowed_count(constraint, k)
    product *= _allowed_count(constraint, k)
    d_k = constraint.sequence.quotient(k)
    forbidden = constraint.forbidden_at(k)
    empty = forbidden is not None and forbidden == frozenset(range(1, d_k))
    return BlockCount(k=k, exact=exact, product_bound=product, empty=empty)


def count_upto(constraint: DigitConstraint, n: int) -> int:
    """Number of members <= n, by most-significant-first digit scanning.

    Full lower blocks are counted with the closed form; within the top
    block, each position contributes the prefix-constrained count of
    numerals that first drop below n there.  n itself is included iff it
    is a member.
    """
    if n < 0:
        raise NonPositiveInput(f"count is defined for n >= 0, got {n}")
    if n == 0:
        return 0
    numeral = to_digits(constraint.sequence, n)
    digits = numeral.digits
    top = len(digits) - 1
    total = sum(block_count_exact(constraint, k).exact for k in range(top))

    # Prefix products of allowed counts below each position.
    prefix = [1] * (top + 1)
    for i in range(1, top + 1):
        prefix[i] = prefix[i - 1] * _allowed_count(constraint, i - 1)

    for j in range(top, -1, -1):
        c_j = digits[j]
        forbidden = constraint.forbidden_at(j)
        low = 1 if j == top else 0
        below = max(c_j - low, 0)
        if forbidden:
            below -= sum(1 for u in forbidden if low <= u < c_j)
        total += below * prefix[j]
        if forbidden and c_j in forbidden:
            return total
    return total + (1 if is_member_numeral(constraint, numeral) else 0)


def enumerate_block(constraint: DigitConstraint, k: int, budget: int) -> Iterator[int]:
    """Yield the members of A_k in increasing order.

    Raises BudgetExceeded after ``budget`` elements when more remain; the
    exception's ``produced`` field records how many were yielded.
    """
    if k < 0:
        raise InputOutOfRange(f"negative block index {k}")
    if budget < 0:
        raise InputOutOfRange(f"budget must be nonnegative, got {budget}")
    seq = constraint.sequence
    # digit*g_i contributions per position, ascending; leading digit last
    tables: list[list[int]] = []
    for i in range(k):
        g_i = base_value(seq, i)
        forbidden = constraint.forbidden_at(i) or frozenset()
        tables.append([c * g_i for c in range(seq.quotient(i)) if c not in forbidden])
    g_k = base_value(seq, k)
    forbidden = constraint.forbidden_at(k) or frozenset()
    leading = [c * g_k for c in range(1, seq.quotient(k)) if c not in forbidden]

    def emit(pos: int, acc: int) -> Iterator[int]:
        if pos < 0:
            yield acc
            return
        for contrib in tables[pos]:
            yield from emit(pos - 1, acc + contrib)

    produced = 0
    for lead in leading:
        for value in emit(k - 1, lead):
            if produced == budget:
                raise BudgetExceeded(
                    f"block {k} exceeds the enumeration budget of {budget}", produced
                )
            produced += 1
            yield value


def is_finite_set(constraint: DigitConstraint) -> str:
    """Certify whether the member set is finite.

    Finite exactly when the index set is cofinite and, beyond all
    overrides, the default forbids every nonzero digit.  The closed rule
    algebra decides every combination, so UNKNOWN is reserved for future
    rules without a certificate.
    """
    if not indexsets.is_cofinite(constraint.index_set):
        # Infinitely many unconstrained leading positions, each block there
        # nonempty, so the set is infinite.
        return INFINITE
    default = constraint.default_forbidden
    if default is None:
        # cofinite index sets cannot be fully overridden (overrides are finite)
        return INFINITE
    seq = constraint.sequence
    if seq.kind in ("power", "factorial"):
        return INFINITE
    if seq.kind == "constant":
        tail_quotients = {seq.d}
    elif seq.extend == "repeat-last":
        tail_quotients = {seq.values[-1]}
    else:
        tail_quotients = set(seq.values)
    if all(default == frozenset(range(1, d)) for d in tail_quotients):
        return FINITE
    return INFINITE
