"""Reciprocal sums over missing-digit sets and their classification.

Per-block reciprocal sums are bracketed exactly: every member of block k
lies in [g_k, g_{k+1} - 1], so the block sum lies between |A_k|/g_{k+1}
and |A_k|/g_k.  Partial sums are exact rationals computed by block
enumeration under an element budget.

Convergence or divergence verdicts come only from symbolically certified
hypotheses over the closed rule algebra; numeric windows merely
spot-check the certificate.  Two tests exist: for sequences with a
uniform quotient bound d, the counting function of constrained positions
is compared against logarithmic thresholds; for unbounded quotients,
divergence follows when the series of forbidden-digit ratios converges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import count as _count_from

from . import indexsets
from .constraints import (
    FINITE,
    UNKNOWN,
    DigitConstraint,
    block_count_exact,
    count_upto,
    enumerate_block,
    is_finite_set,
)
from .errors import (
    BudgetExceeded,
    InputOutOfRange,
    MissingBoundHint,
    NonPositiveInput,
    SetFinitenessUnknown,
    SetIsFinite,
)
from .exactsum import sum_fractions, sum_reciprocals
from .gadic import base_value
from .indexsets import GROWTH_BOUNDED, GROWTH_LINEAR, GROWTH_LOG, Growth

DEFAULT_BUDGET = 10**6
DEFAULT_K_WINDOW = 10_000

CONVERGENT = "convergent"
DIVERGENT = "divergent"
FINITE_SET = "finite-set"
INCONCLUSIVE = "inconclusive"

RULE_INDEX_GROWTH = "bounded-quotients:index-count-dominates-threshold"
RULE_INDEX_SPARSITY = "bounded-quotients:index-count-below-threshold"
RULE_RATIO_TAIL = "unbounded-quotients:forbidden-ratio-tail-converges"
RULE_FINITE = "finite-member-set"

# Largest certifying value is reported when the caller does not pin one.
DELTA_GRID = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 10), Fraction(1, 20))


@dataclass(frozen=True)
class BlockReport:
    """Exact two-sided bracket on one block's reciprocal sum."""

    k: int
    g_lo: int
    g_hi: int
    count: int
    bracket_lo: Fraction
    bracket_hi: Fraction
    cumulative_lo: Fraction
    cumulative_hi: Fraction


@dataclass(frozen=True)
class Margin:
    """Numbers backing a verdict: the delta used, the index past which the
    certified inequality holds, and a window spot-check residual."""

    delta: Fraction | None = None
    threshold_label: str = ""
    threshold_index: int | None = None
    value: object = None
    window: int | None = None


@dataclass(frozen=True)
class Classification:
    verdict: str
    rule_fired: str | None = None
    margin: Margin | None = None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class PartialSum:
    value: Fraction
    truncated: bool
    terms: int


def block_reports(constraint: DigitConstraint, max_k: int) -> list[BlockReport]:
    """BlockReports for k = 0..max_k with running cumulative brackets."""
    if max_k < 0:
        raise InputOutOfRange(f"max_k must be nonnegative, got {max_k}")
    out = []
    cum_lo = Fraction(0)
    cum_hi = Fraction(0)
    for k in range(max_k + 1):
        g_lo = base_value(constraint.sequence, k)
        g_hi = base_value(constraint.sequence, k + 1)
        n = block_count_exact(constraint, k).exact
        lo = Fraction(n, g_hi)
        hi = Fraction(n, g_lo)
        cum_lo += lo
        cum_hi += hi
        out.append(BlockReport(k, g_lo, g_hi, n, lo, hi, cum_lo, cum_hi))
    return out


def block_bracket(constraint: DigitConstraint, k: int) -> BlockReport:
    return block_reports(constraint, k)[-1]


def partial_sum_exact(
    constraint: DigitConstraint, n_max: int, budget: int | None = None
) -> PartialSum:
    """Exact sum of 1/a over members a <= n_max.

    Enumeration stops after ``budget`` members; the result then carries
    ``truncated=True`` and the partial value.
    """
    if n_max < 1:
        raise NonPositiveInput(f"n_max must be >= 1, got {n_max}")
    if budget is None:
        budget = DEFAULT_BUDGET
    seq = constraint.sequence
    remaining = budget
    terms = 0
    truncated = False
    partials: list[Fraction] = []
    k = 0
    while base_value(seq, k) <= n_max and not truncated:
        members = []
        try:
            for a in enumerate_block(constraint, k, remaining):
                if a > n_max:
                    break
                members.append(a)
        except BudgetExceeded:
            truncated = True
        remaining -= len(members)
        terms += len(members)
        if members:
            partials.append(sum_reciprocals(members))
        k += 1
    return PartialSum(value=sum_fractions(partials), truncated=truncated, terms=terms)


def density(constraint: DigitConstraint, n: int) -> Fraction:
    """Member count up to n divided by n, exact."""
    if n < 1:
        raise NonPositiveInput(f"density point must be >= 1, got {n}")
    return Fraction(count_upto(constraint, n), n)


def weierstrass_lower(xs) -> Fraction:
    """1 - sum(x_i): a lower bound for prod(1 - x_i) when all x_i in [0, 1)."""
    total = Fraction(0)
    for x in xs:
        x = Fraction(x)
        if not 0 <= x < 1:
            raise InputOutOfRange(f"factors must lie in [0, 1), got {x}")
        total += x
    return 1 - total


def _ratio_at(constraint: DigitConstraint, i: int) -> Fraction:
    """|U_i| / d_i for a constrained position i."""
    forbidden = constraint.forbidden_at(i)
    assert forbidden is not None
    return Fraction(len(forbidden), constraint.sequence.quotient(i))


def tail_upper_estimate(constraint: DigitConstraint, k0: int, K: int) -> Fraction:
    """d * sum over k = k0..K of (1 - 1/d)**count(k): dominates the exact
    reciprocal sum over members in [g_k0, g_{K+1} - 1].  Needs a declared
    uniform quotient bound d."""
    d = constraint.sequence.bound_hint
    if d is None:
        raise MissingBoundHint("upper tail estimate needs a declared quotient bound")
    if not 0 <= k0 <= K:
        raise InputOutOfRange(f"need 0 <= k0 <= K, got k0={k0}, K={K}")
    ratio = 1 - Fraction(1, d)
    total = Fraction(0)
    for k in range(k0, K + 1):
        total += ratio ** constraint.index_set.count(k)
    return d * total


def tail_lower_estimate(constraint: DigitConstraint, k1: int, K: int) -> Fraction:
    """(1/2) * sum over nonempty blocks k = k1..K of the allowed-ratio
    product prod_{i in I, i <= k} (1 - |U_i|/d_i): a certified lower bound
    for the reciprocal sum over those blocks."""
    if not 0 <= k1 <= K:
        raise InputOutOfRange(f"need 0 <= k1 <= K, got k1={k1}, K={K}")
    contains = constraint.index_set.contains
    product = Fraction(1)
    for i in range(k1):
        if contains(i):
            product *= 1 - _ratio_at(constraint, i)
    total = Fraction(0)
    for k in range(k1, K + 1):
        if contains(k):
            product *= 1 - _ratio_at(constraint, k)
        if not block_count_exact(constraint, k).empty:
            total += product
    return total / 2


# --- bounded-quotient certificates ------------------------------------------


def _delta_candidates(delta) -> tuple[Fraction, ...]:
    if delta is None:
        return DELTA_GRID
    f = Fraction(str(delta)) if isinstance(delta, float) else Fraction(delta)
    if f <= 0:
        raise InputOutOfRange(f"delta must be positive, got {f}")
    return (f,)


def _first_k_holding(start: int, holds) -> int:
    """Smallest k >= start with holds(k), given holds is monotone there."""
    k = max(start, 2)
    hi = k
    while not holds(hi):
        hi *= 2
    lo = k
    while lo < hi:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _certify_convergence(
    growth: Growth, d: int, delta: Fraction, index_count
) -> int | None:
    """Index from which count(k) >= (1+delta) * ln k / ln(d/(d-1)) is
    certified, or None."""
    ln_ratio = math.log(d / (d - 1))
    coeff = float(1 + delta) / ln_ratio
    if growth.kind == GROWTH_LINEAR:
        a = float(growth.slope)
        c = float(growth.offset)
        # beyond coeff/a the gap (a*k + c) - coeff*ln(k) is increasing
        start = max(2, growth.valid_from, math.ceil(coeff / a))
        return _first_k_holding(start, lambda k: a * k + c >= coeff * math.log(k))
    if growth.kind == GROWTH_LOG:
        b = growth.log_base
        p, q = delta.numerator, delta.denominator
        # ln(d/(d-1)) >= (1+delta) ln b, exactly in integers
        if d**q >= b ** (p + q) * (d - 1) ** q:
            return max(2, growth.valid_from)
        return None
    return None


def _certify_divergence(
    growth: Growth, d: int, delta: Fraction, index_count
) -> int | None:
    """Index from which count(k) <= (1-delta) * ln k / ln d is certified,
    or None."""
    if delta >= 1:
        return None
    p, q = delta.numerator, delta.denominator
    if growth.kind == GROWTH_BOUNDED:
        limit = growth.limit
        # limit <= (1-delta) log_d(k)  <=>  k**(q-p) >= d**(limit*q)
        target = d ** (limit * q)
        k1 = _first_k_holding(2, lambda k: k ** (q - p) >= target)
        return max(k1, growth.valid_from, 2)
    if growth.kind == GROWTH_LOG:
        b = growth.log_base
        # strict leading-coefficient gap absorbs the +1 in the envelope:
        # ln d < (1-delta) ln b  <=>  d**q < b**(q-p)
        if not d**q < b ** (q - p):
            return None
        ln_b = math.log(b)
        coeff = float(1 - delta) / math.log(d)
        start = max(2, growth.valid_from)
        return _first_k_holding(
            start, lambda k: math.log(k) / ln_b + 1 <= coeff * math.log(k)
        )
    return None


def _window_slack(index_count, threshold, k_from: int, k_to: int, sign: int) -> float | None:
    """Worst residual of the certified inequality over [k_from, k_to]."""
    worst = None
    for k in range(k_from, k_to + 1):
        s = sign * (index_count(k) - threshold(k))
        if worst is None or s < worst:
            worst = s
    return worst


def convergence_by_bounded_quotients(
    constraint: DigitConstraint,
    delta=None,
    k_window: int = DEFAULT_K_WINDOW,
) -> Classification:
    """Classify via the uniform-bound thresholds on the counting function.

    Convergent when count(k) eventually dominates
    (1+delta) ln k / ln(d/(d-1)); divergent when it eventually stays below
    (1-delta) ln k / ln d.  The boundary regime (count growing like
    log k at the critical rate) is reported inconclusive.
    """
    d = constraint.sequence.bound_hint
    if d is None:
        raise MissingBoundHint("sequence is not declared bounded")
    growth = indexsets.growth(constraint.index_set)
    index_count = constraint.index_set.count
    candidates = _delta_candidates(delta)

    for f in candidates:
        k0 = _certify_convergence(growth, d, f, index_count)
        if k0 is not None:
            coeff = float(1 + f) / math.log(d / (d - 1))
            slack = _window_slack(
                index_count, lambda k: coeff * math.log(k), k0, k_window, +1
            )
            return Classification(
                verdict=CONVERGENT,
                rule_fired=RULE_INDEX_GROWTH,
                margin=Margin(f, "k0", k0, slack, k_window),
                notes=(
                    f"count(k) certified >= (1+{f}) ln k / ln({d}/{d - 1}) for all k >= {k0}",
                ),
            )
    for f in candidates:
        k1 = _certify_divergence(growth, d, f, index_count)
        if k1 is not None:
            coeff = float(1 - f) / math.log(d)
            slack = _window_slack(
                index_count, lambda k: coeff * math.log(k), k1, k_window, -1
            )
            return Classification(
                verdict=DIVERGENT,
                rule_fired=RULE_INDEX_SPARSITY,
                margin=Margin(f, "k1", k1, slack, k_window),
                notes=(
                    f"count(k) certified <= (1-{f}) ln k / ln {d} for all k >= {k1}",
                ),
            )
    notes = ["neither threshold certified for delta in " + ", ".join(str(c) for c in candidates)]
    if growth.kind == GROWTH_LOG:
        notes.append(
            "count(k) grows logarithmically at the boundary rate; no verdict is sound here"
        )
    return Classification(verdict=INCONCLUSIVE, notes=tuple(notes))


# --- unbounded-quotient certificate -----------------------------------------


def _iter_index_members(constraint: DigitConstraint):
    contains = constraint.index_set.contains
    for i in _count_from(0):
        if contains(i):
            yield i


def _power_all_tail(base: int, size: int, i0: int) -> Fraction:
    """sum over all i >= i0 of size / base**(i+1)."""
    return Fraction(size, base**i0 * (base - 1))


def _ratio_tail_bracket(
    constraint: DigitConstraint, i0: int
) -> tuple[Fraction, Fraction]:
    """Enclosure of sum over i in I, i >= i0 of |U_i|/d_i; tight for rule
    combinations with closed forms, adaptively refined otherwise."""
    seq = constraint.sequence
    ix = indexsets.normalize(constraint.index_set)
    default_size = len(constraint.default_forbidden or ())

    if seq.kind == "power":
        b = seq.base
        exact = _geometric_tail_over(ix, b, default_size, i0)
        if exact is not None:
            adjust = sum(
                (Fraction(len(s) - default_size, seq.quotient(i)) for i, s in constraint.overrides if i >= i0),
                Fraction(0),
            )
            return exact + adjust, exact + adjust

        def remainder_past(horizon: int) -> Fraction:
            return _power_all_tail(b, _max_forbidden_size(constraint, horizon), horizon + 1)

    elif seq.kind == "factorial" and isinstance(ix, indexsets.PowerIndices):

        def remainder_past(horizon: int) -> Fraction:
            # constrained positions above the horizon are spaced at least by
            # factor ix.base, and each term is below size/position
            u = _max_forbidden_size(constraint, horizon)
            return Fraction(u * ix.base, (horizon + 1) * (ix.base - 1))

    else:
        raise SetFinitenessUnknown("no convergent enclosure for this ratio tail")

    # No closed form: sum explicit terms along the index set to a growing
    # horizon, closed off by a certified remainder bound.  Refinement stops
    # once the enclosure settles the only question asked of it (tail vs 1/2).
    half = Fraction(1, 2)
    horizon = max(i0, 4)
    for _ in range(64):
        horizon = 2 * horizon + 16
        partial = sum_fractions(
            _ratio_at(constraint, i)
            for i in indexsets.iter_members_between(ix, i0, horizon)
        )
        remainder = remainder_past(horizon)
        if partial + remainder < half or partial >= half:
            break
    return partial, partial + remainder


def _max_forbidden_size(constraint: DigitConstraint, beyond: int) -> int:
    sizes = [len(constraint.default_forbidden or ())]
    sizes += [len(s) for i, s in constraint.overrides if i > beyond]
    return max(sizes)


def _geometric_tail_over(ix, base: int, size: int, i0: int) -> Fraction | None:
    """Closed form of sum over i in ix, i >= i0 of size/base**(i+1), when
    the index rule admits one."""
    if isinstance(ix, indexsets.AllIndices):
        return _power_all_tail(base, size, i0)
    if isinstance(ix, indexsets.ExplicitIndices):
        return sum(
            (Fraction(size, base ** (i + 1)) for i in ix.indices if i >= i0),
            Fraction(0),
        )
    if isinstance(ix, indexsets.ArithmeticIndices):
        if i0 <= ix.first:
            first = ix.first
        else:
            steps = -((i0 - ix.first) // -ix.step)
            first = ix.first + steps * ix.step
        r = base**ix.step
        return Fraction(size * r, base ** (first + 1) * (r - 1))
    if isinstance(ix, indexsets.ComplementIndices):
        inner = indexsets.normalize(ix.inner)
        whole = _power_all_tail(base, size, i0)
        inner_tail = _geometric_tail_over(inner, base, size, i0)
        if inner_tail is None:
            return None
        return whole - inner_tail
    return None


def divergence_by_unbounded_quotients(
    constraint: DigitConstraint, i_window: int = DEFAULT_K_WINDOW
) -> Classification:
    """Divergence via a convergent series of forbidden-digit ratios.

    When sum over i in I of |U_i|/d_i converges (certified for quotient
    families growing geometrically or faster along I) and the member set
    is infinite, the reciprocal series diverges.  Reports the smallest
    i0 in I whose tail drops below 1/2 and the resulting per-block
    lower-bound constant delta = (1/2) * prod_{i in I, i < i0}(1 - |U_i|/d_i).
    """
    finiteness = is_finite_set(constraint)
    if finiteness == FINITE:
        raise SetIsFinite("the member set is finite; its reciprocal sum trivially converges")
    if finiteness == UNKNOWN:
        raise SetFinitenessUnknown("cannot certify the member set is infinite")

    if not indexsets.is_infinite(constraint.index_set):
        return Classification(
            verdict=INCONCLUSIVE,
            notes=("the divergence test needs infinitely many constrained positions",),
        )

    seq = constraint.sequence
    if seq.kind in ("constant", "explicit"):
        return Classification(
            verdict=INCONCLUSIVE,
            notes=(
                "forbidden-ratio series diverges: quotients are bounded, so each "
                "ratio is at least 1/d over infinitely many positions",
            ),
        )
    if seq.kind == "factorial":
        g = indexsets.growth(constraint.index_set)
        if g.kind != GROWTH_LOG:
            return Classification(
                verdict=INCONCLUSIVE,
                notes=(
                    "forbidden-ratio series diverges: constrained positions are too "
                    "dense for reciprocal-of-index terms to sum finitely",
                ),
            )

    # Certified convergent; find the smallest i0 in I whose tail is
    # certifiably below 1/2 (the enclosure's upper side decides).
    half = Fraction(1, 2)
    i0 = None
    tail_value = None
    for candidate in _iter_index_members(constraint):
        _, hi = _ratio_tail_bracket(constraint, candidate)
        if hi < half:
            i0 = candidate
            tail_value = hi
            break
    assert i0 is not None

    prod = Fraction(1)
    for i in range(i0):
        if constraint.index_set.contains(i):
            prod *= 1 - _ratio_at(constraint, i)
    delta = prod / 2

    # window spot-check: explicit partial tail terms can never exceed the
    # certified tail value (terms decay geometrically, so a short prefix of
    # the window carries all the weight worth summing)
    ix = indexsets.normalize(constraint.index_set)
    window_members = []
    for i in indexsets.iter_members_between(ix, i0, i_window):
        window_members.append(i)
        if len(window_members) >= 64:
            break
    window_sum = sum_fractions(_ratio_at(constraint, i) for i in window_members)
    if window_sum > tail_value:
        raise AssertionError(
            f"tail certificate inconsistent: window sum {window_sum} exceeds {tail_value}"
        )

    return Classification(
        verdict=DIVERGENT,
        rule_fired=RULE_RATIO_TAIL,
        margin=Margin(delta, "i0", i0, tail_value, i_window),
        notes=(
            f"forbidden-ratio tail from position {i0} is {tail_value} < 1/2; "
            f"per-block reciprocal sums stay above delta = {delta} times each "
            "allowed-ratio product",
            f"window check: {len(window_members)} explicit tail terms sum to "
            f"{window_sum} <= {tail_value}",
        ),
    )


def classify(
    constraint: DigitConstraint,
    delta=None,
    k_window: int = DEFAULT_K_WINDOW,
) -> Classification:
    """Dispatch over the finiteness check and both certified tests.

    Order: a finite member set short-circuits (its reciprocal sum is a
    finite sum); then the bounded-quotient thresholds when a bound is
    declared; then the unbounded-quotient ratio test.  Every attempted
    hypothesis that failed is recorded in the notes.
    """
    attempts: list[str] = []
    finiteness = is_finite_set(constraint)
    if finiteness == FINITE:
        return Classification(
            verdict=FINITE_SET,
            rule_fired=RULE_FINITE,
            notes=("member set is finite: cofinite index set forbids every nonzero digit eventually",),
        )
    attempts.append(f"finiteness check: member set is {finiteness}")

    if constraint.sequence.bound_hint is not None:
        bounded = convergence_by_bounded_quotients(constraint, delta=delta, k_window=k_window)
        if bounded.verdict != INCONCLUSIVE:
            return Classification(
                verdict=bounded.verdict,
                rule_fired=bounded.rule_fired,
                margin=bounded.margin,
                notes=tuple(attempts) + bounded.notes,
            )
        attempts.extend("bounded-quotient test: " + n for n in bounded.notes)
    else:
        attempts.append("bounded-quotient test skipped: no declared quotient bound")

    try:
        unbounded = divergence_by_unbounded_quotients(constraint)
    except (SetIsFinite, SetFinitenessUnknown) as exc:  # pragma: no cover - finite handled above
        attempts.append(f"unbounded-quotient test unavailable: {exc}")
    else:
        if unbounded.verdict == DIVERGENT:
            return Classification(
                verdict=DIVERGENT,
                rule_fired=unbounded.rule_fired,
                margin=unbounded.margin,
                notes=tuple(attempts) + unbounded.notes,
            )
        attempts.extend("unbounded-quotient test: " + n for n in unbounded.notes)

    return Classification(verdict=INCONCLUSIVE, notes=tuple(attempts))
