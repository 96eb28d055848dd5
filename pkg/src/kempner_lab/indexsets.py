"""Index sets of constrained digit positions, as a closed rule algebra.

Five rule families describe which digit positions carry a forbidden set:
every position, an explicit finite set, an arithmetic progression, the
powers of a fixed base, or the complement of another rule.  Keeping the
algebra closed makes three questions decidable symbolically: membership,
finiteness/cofiniteness, and the asymptotic growth of the counting
function count(k) = |I ∩ [0, k]|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InputOutOfRange


@dataclass(frozen=True)
class AllIndices:
    def contains(self, i: int) -> bool:
        return i >= 0

    def count(self, k: int) -> int:
        return k + 1 if k >= 0 else 0


@dataclass(frozen=True)
class ExplicitIndices:
    indices: frozenset[int]

    def __post_init__(self):
        if not self.indices:
            raise InputOutOfRange("explicit index set must be nonempty")
        if any(i < 0 for i in self.indices):
            raise InputOutOfRange("index set entries must be nonnegative")

    def contains(self, i: int) -> bool:
        return i in self.indices

    def count(self, k: int) -> int:
        return sum(1 for i in self.indices if i <= k)


@dataclass(frozen=True)
class ArithmeticIndices:
    """{first, first + step, first + 2*step, ...}"""

    first: int
    step: int

    def __post_init__(self):
        if self.first < 0:
            raise InputOutOfRange(f"first term must be nonnegative, got {self.first}")
        if self.step < 1:
            raise InputOutOfRange(f"step must be >= 1, got {self.step}")

    def contains(self, i: int) -> bool:
        return i >= self.first and (i - self.first) % self.step == 0

    def count(self, k: int) -> int:
        if k < self.first:
            return 0
        return (k - self.first) // self.step + 1


@dataclass(frozen=True)
class PowerIndices:
    """{1, base, base**2, ...}"""

    base: int

    def __post_init__(self):
        if self.base < 2:
            raise InputOutOfRange(f"power index base must be >= 2, got {self.base}")

    def contains(self, i: int) -> bool:
        if i < 1:
            return False
        while i % self.base == 0:
            i //= self.base
        return i == 1

    def count(self, k: int) -> int:
        if k < 1:
            return 0
        n = 0
        p = 1
        while p <= k:
            n += 1
            p *= self.base
        return n


@dataclass(frozen=True)
class ComplementIndices:
    inner: "IndexSet"

    def contains(self, i: int) -> bool:
        return i >= 0 and not self.inner.contains(i)

    def count(self, k: int) -> int:
        if k < 0:
            return 0
        return (k + 1) - self.inner.count(k)


IndexSet = Union[AllIndices, ExplicitIndices, ArithmeticIndices, PowerIndices, ComplementIndices]


def normalize(ix: IndexSet) -> IndexSet:
    """Strip double complements so certificates see the underlying rule."""
    while isinstance(ix, ComplementIndices) and isinstance(ix.inner, ComplementIndices):
        ix = ix.inner.inner
    return ix


def is_finite(ix: IndexSet) -> bool:
    ix = normalize(ix)
    if isinstance(ix, ExplicitIndices):
        return True
    if isinstance(ix, ComplementIndices):
        return is_cofinite(ix.inner)
    return False


def is_cofinite(ix: IndexSet) -> bool:
    ix = normalize(ix)
    if isinstance(ix, AllIndices):
        return True
    if isinstance(ix, ArithmeticIndices):
        return ix.step == 1
    if isinstance(ix, ComplementIndices):
        return is_finite(ix.inner)
    return False


def is_infinite(ix: IndexSet) -> bool:
    return not is_finite(ix)


def members_upto(ix: IndexSet, k: int) -> list[int]:
    return [i for i in range(k + 1) if ix.contains(i)]


def iter_members_between(ix: IndexSet, lo: int, hi: int):
    """Members of the index set in [lo, hi], ascending, without scanning
    the whole range for sparse rules."""
    lo = max(lo, 0)
    if isinstance(ix, AllIndices):
        yield from range(lo, hi + 1)
    elif isinstance(ix, ExplicitIndices):
        yield from (i for i in sorted(ix.indices) if lo <= i <= hi)
    elif isinstance(ix, ArithmeticIndices):
        if hi < ix.first:
            return
        if lo <= ix.first:
            start = ix.first
        else:
            start = ix.first + -((lo - ix.first) // -ix.step) * ix.step
        yield from range(start, hi + 1, ix.step)
    elif isinstance(ix, PowerIndices):
        p = 1
        while p <= hi:
            if p >= lo:
                yield p
            p *= ix.base
    else:
        yield from (i for i in range(lo, hi + 1) if ix.contains(i))


# --- growth envelopes -------------------------------------------------------
#
# The convergence/divergence certificates need two-sided envelopes on
# count(k), valid for every k >= valid_from:
#
#   linear:   count(k) >= slope * k + offset           (slope > 0)
#   log:      log_b(k) <= count(k) <= log_b(k) + 1     (k >= 1)
#   bounded:  count(k) <= limit, with equality once k >= valid_from
#
# Each envelope below is a small arithmetic fact about its rule family.

GROWTH_LINEAR = "linear"
GROWTH_LOG = "log"
GROWTH_BOUNDED = "bounded"


@dataclass(frozen=True)
class Growth:
    kind: str
    slope: Fraction = Fraction(0)
    offset: Fraction = Fraction(0)
    log_base: int = 0
    limit: int = 0
    valid_from: int = 0


def growth(ix: IndexSet) -> Growth:
    ix = normalize(ix)
    if isinstance(ix, AllIndices):
        return Growth(GROWTH_LINEAR, slope=Fraction(1), offset=Fraction(1))
    if isinstance(ix, ArithmeticIndices):
        # count(k) >= (k - first) / step for every k >= 0
        return Growth(
            GROWTH_LINEAR,
            slope=Fraction(1, ix.step),
            offset=Fraction(-ix.first, ix.step),
        )
    if isinstance(ix, ExplicitIndices):
        return Growth(GROWTH_BOUNDED, limit=len(ix.indices), valid_from=max(ix.indices))
    if isinstance(ix, PowerIndices):
        return Growth(GROWTH_LOG, log_base=ix.base, valid_from=1)
    return _complement_growth(ix.inner)


def _complement_growth(inner: IndexSet) -> Growth:
    inner = normalize(inner)
    if isinstance(inner, AllIndices):
        return Growth(GROWTH_BOUNDED, limit=0, valid_from=0)
    if isinstance(inner, ExplicitIndices):
        # count(k) >= k + 1 - |S|
        return Growth(GROWTH_LINEAR, slope=Fraction(1), offset=Fraction(1 - len(inner.indices)))
    if isinstance(inner, ArithmeticIndices):
        if inner.step == 1:
            # complement is [0, first)
            return Growth(
                GROWTH_BOUNDED, limit=inner.first, valid_from=max(inner.first - 1, 0)
            )
        # inner.count(k) <= k/step + 1, so count(k) >= k (1 - 1/step)
        return Growth(GROWTH_LINEAR, slope=1 - Fraction(1, inner.step), offset=Fraction(0))
    if isinstance(inner, PowerIndices):
        # inner.count(k) <= log2(k) + 1 <= k/2 + 1 for k >= 4
        return Growth(GROWTH_LINEAR, slope=Fraction(1, 2), offset=Fraction(0), valid_from=4)
    raise AssertionError("unreachable: nested complements are normalized away")
