"""Mixed-radix integer representations driven by quotient rules.

A sequence of integer quotients d_0, d_1, ... (each >= 2) defines place
values g_0 = 1, g_{k+1} = g_k * d_k.  Every positive integer then has a
unique digit vector (c_0, ..., c_k) with 0 <= c_i < d_i, c_k != 0 and
n = sum(c_i * g_i).  Digits are stored least significant first.

Quotients come from closed-form rules rather than stored lists, so any
index is reachable and growth classification stays decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BoundHintViolated,
    DigitOutOfRange,
    EmptyExplicitList,
    InputOutOfRange,
    NonPositiveInput,
    QuotientTooSmall,
    ZeroLeadingDigit,
)

RULE_KINDS = ("constant", "explicit", "power", "factorial")
EXTEND_MODES = ("repeat-last", "cycle")


@dataclass(frozen=True)
class QuotientSequence:
    """A rule generating the quotient at every digit position.

    ``bound_hint`` is a declared uniform bound on all quotients.  It is
    filled automatically where the rule itself guarantees one (constant
    and explicit rules) and must be absent for unbounded families.
    """

    kind: str
    d: int = 0
    values: tuple[int, ...] = ()
    extend: str = "repeat-last"
    base: int = 0
    bound_hint: int | None = None

    def quotient(self, i: int) -> int:
        """Quotient d_i at position i; checks any declared bound."""
        if i < 0:
            raise InputOutOfRange(f"negative digit position {i}")
        if self.kind == "constant":
            q = self.d
        elif self.kind == "explicit":
            vals = self.values
            if i < len(vals):
                q = vals[i]
            elif self.extend == "repeat-last":
                q = vals[-1]
            else:
                q = vals[i % len(vals)]
        elif self.kind == "power":
            q = self.base ** (i + 1)
        else:
            q = i + 2
        if self.bound_hint is not None and q > self.bound_hint:
            raise BoundHintViolated(
                f"quotient {q} at position {i} exceeds declared bound {self.bound_hint}"
            )
        return q

    def base_value(self, k: int) -> int:
        return base_value(self, k)


def make_sequence(
    kind: str,
    *,
    d: int | None = None,
    values: tuple[int, ...] | list[int] | None = None,
    extend: str = "repeat-last",
    base: int | None = None,
    bound_hint: int | None = None,
) -> QuotientSequence:
    """Build and validate a quotient sequence from a rule description.

    Rules: ``constant`` (d_i = d), ``explicit`` (a finite list extended by
    repeating the last value or cycling), ``power`` (d_i = base**(i+1)),
    ``factorial`` (d_i = i + 2).
    """
    if kind not in RULE_KINDS:
        raise ValueError(f"unknown quotient rule {kind!r}; expected one of {RULE_KINDS}")
    if kind == "constant":
        if d is None or d < 2:
            raise QuotientTooSmall(f"constant quotient must be >= 2, got {d}")
        hint = _checked_hint(bound_hint, d)
        return QuotientSequence(kind="constant", d=d, bound_hint=hint)
    if kind == "explicit":
        if not values:
            raise EmptyExplicitList("explicit rule needs at least one quotient")
        vals = tuple(int(v) for v in values)
        small = [v for v in vals if v < 2]
        if small:
            raise QuotientTooSmall(f"explicit quotients must all be >= 2, got {small[0]}")
        if extend not in EXTEND_MODES:
            raise ValueError(f"unknown extension mode {extend!r}; expected one of {EXTEND_MODES}")
        hint = _checked_hint(bound_hint, max(vals))
        return QuotientSequence(kind="explicit", values=vals, extend=extend, bound_hint=hint)
    if kind == "power":
        if base is None or base < 2:
            raise QuotientTooSmall(f"power rule base must be >= 2, got {base}")
        if bound_hint is not None:
            raise BoundHintViolated("power rule has unbounded quotients; no uniform bound exists")
        return QuotientSequence(kind="power", base=base)
    # factorial
    if bound_hint is not None:
        raise BoundHintViolated("factorial rule has unbounded quotients; no uniform bound exists")
    return QuotientSequence(kind="factorial")


def _checked_hint(declared: int | None, intrinsic: int) -> int:
    # The rule itself proves the intrinsic bound, so it is declared, not
    # inferred from a finite prefix.  A stated hint may only widen it.
    if declared is None:
        return intrinsic
    if declared < intrinsic:
        raise BoundHintViolated(
            f"declared bound {declared} is below a quotient the rule produces ({intrinsic})"
        )
    return declared


def constant(d: int, bound_hint: int | None = None) -> QuotientSequence:
    return make_sequence("constant", d=d, bound_hint=bound_hint)


def explicit(values, extend: str = "repeat-last", bound_hint: int | None = None) -> QuotientSequence:
    return make_sequence("explicit", values=values, extend=extend, bound_hint=bound_hint)


def power(base: int) -> QuotientSequence:
    return make_sequence("power", base=base)


def factorial() -> QuotientSequence:
    return make_sequence("factorial")


@dataclass(frozen=True)
class Numeral:
    """Digit vector of a positive integer, least significant digit first."""

    digits: tuple[int, ...]
    sequence: QuotientSequence

    def __post_init__(self):
        if not self.digits:
            raise ZeroLeadingDigit("a numeral needs at least one digit")

    @property
    def top_index(self) -> int:
        return len(self.digits) - 1


@lru_cache(maxsize=None)
def _quotient_prefix(seq: QuotientSequence, n: int) -> tuple[int, ...]:
    """First n quotients as a tuple (cached, grown by doubling)."""
    if n <= 16:
        return tuple(seq.quotient(i) for i in range(n))
    half = _quotient_prefix(seq, n // 2)
    return half + tuple(seq.quotient(i) for i in range(n // 2, n))


@lru_cache(maxsize=None)
def _base_prefix(seq: QuotientSequence, n: int) -> tuple[int, ...]:
    """Place values g_0 .. g_{n-1} as a tuple."""
    quots = _quotient_prefix(seq, n)
    out = [1]
    g = 1
    for q in quots[:-1] if n else ():
        g *= q
        out.append(g)
    return tuple(out)


def base_value(seq: QuotientSequence, k: int) -> int:
    """Place value g_k = d_0 * d_1 * ... * d_{k-1}; g_0 = 1.  Exact."""
    if k < 0:
        raise InputOutOfRange(f"negative index {k}")
    cap = 16
    while cap <= k:
        cap *= 2
    return _base_prefix(seq, cap)[k]


def to_digits(seq: QuotientSequence, n: int) -> Numeral:
    """Digit vector of n, least significant first, by repeated division."""
    if n < 1:
        raise NonPositiveInput(f"expected a positive integer, got {n}")
    digits = []
    append = digits.append
    cap = 16
    quots = _quotient_prefix(seq, cap)
    i = 0
    while n:
        if i == cap:
            cap *= 2
            quots = _quotient_prefix(seq, cap)
        n, c = divmod(n, quots[i])
        append(c)
        i += 1
    return Numeral(tuple(digits), seq)


def from_digits(numeral: Numeral) -> int:
    """Value sum(c_i * g_i) of a validated digit vector."""
    seq = numeral.sequence
    digits = numeral.digits
    if digits[-1] == 0:
        raise ZeroLeadingDigit(f"leading digit of {list(digits)} is zero")
    cap = 16
    while cap < len(digits):
        cap *= 2
    quots = _quotient_prefix(seq, cap)
    gs = _base_prefix(seq, cap)
    total = 0
    for i, c in enumerate(digits):
        if not 0 <= c < quots[i]:
            raise DigitOutOfRange(
                f"digit {c} at position {i} outside [0, {quots[i] - 1}]"
            )
        total += c * gs[i]
    return total


def digit_count(seq: QuotientSequence, n: int) -> int:
    """Number of digits of n, i.e. k + 1 where g_k <= n < g_{k+1}."""
    if n < 1:
        raise NonPositiveInput(f"expected a positive integer, got {n}")
    count = 0
    cap = 16
    quots = _quotient_prefix(seq, cap)
    while n:
        if count == cap:
            cap *= 2
            quots = _quotient_prefix(seq, cap)
        n //= quots[count]
        count += 1
    return count
