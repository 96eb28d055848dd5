import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import kempner_lab as kl
from kempner_lab.errors import (
    BitOutOfRange,
    BudgetExceeded,
    DigitOutOfRange,
    EmptyForbiddenSet,
    ForbiddenSetNotProper,
    NonPositiveInput,
    OverrideOutsideIndexSet,
)


def _decoded_ok(constraint, n):
    """Reference membership: re-decode digits here and apply the raw rule."""
    seq = constraint.sequence
    i = 0
    while n:
        n, c = divmod(n, seq.quotient(i))
        if constraint.index_set.contains(i) and c in constraint.forbidden_at(i):
            return False
        i += 1
    return True


def test_make_constraint_kempner(kempner10):
    assert kempner10.forbidden_at(0) == frozenset({9})
    assert kempner10.forbidden_at(7) == frozenset({9})


def test_make_constraint_rejects_full_set():
    with pytest.raises(ForbiddenSetNotProper):
        kl.make_constraint(kl.constant(10), kl.AllIndices(), default=set(range(10)))


def test_make_constraint_rejects_out_of_range_default():
    # base 2 digits are 0/1 only
    with pytest.raises(DigitOutOfRange):
        kl.make_constraint(kl.power(2), kl.AllIndices(), default={9})


def test_make_constraint_power2_no_zero(power2_no_zero):
    for i in range(6):
        assert power2_no_zero.forbidden_at(i) == frozenset({0})


def test_make_constraint_empty_default():
    with pytest.raises(EmptyForbiddenSet):
        kl.make_constraint(kl.constant(10), kl.AllIndices(), default=set())


def test_override_validation():
    seq = kl.constant(10)
    with pytest.raises(OverrideOutsideIndexSet):
        kl.make_constraint(
            seq, kl.ExplicitIndices(frozenset({2})), default={1}, overrides={5: {1}}
        )
    with pytest.raises(ForbiddenSetNotProper):
        kl.make_constraint(seq, kl.AllIndices(), default={1}, overrides={2: set(range(10))})
    with pytest.raises(EmptyForbiddenSet):
        kl.make_constraint(seq, kl.AllIndices(), default={1}, overrides={2: set()})
    c = kl.make_constraint(seq, kl.AllIndices(), default={9}, overrides={2: {0, 5}})
    assert c.forbidden_at(2) == frozenset({0, 5})
    assert c.forbidden_at(3) == frozenset({9})


def test_fixed_bits_examples():
    odd = kl.fixed_bits({0: 1})
    assert [n for n in range(1, 10) if kl.is_member(odd, n)] == [1, 3, 5, 7, 9]

    second_zero = kl.fixed_bits({1: 0})
    assert [n for n in range(1, 8) if kl.is_member(second_zero, n)] == [1, 4, 5]

    with pytest.raises(BitOutOfRange):
        kl.fixed_bits({})
    with pytest.raises(BitOutOfRange):
        kl.fixed_bits({0: 2})
    with pytest.raises(BitOutOfRange):
        kl.fixed_bits({-1: 0})


def test_fixed_bits_members_match_pinned_digits():
    c = kl.fixed_bits({0: 1, 2: 0, 5: 1})
    seq = c.sequence
    for n in range(1, 4096):
        digits = kl.to_digits(seq, n).digits
        expected = all(
            digits[i] == v for i, v in ((0, 1), (2, 0), (5, 1)) if i < len(digits)
        )
        assert kl.is_member(c, n) == expected


def test_is_member_examples(kempner10, power2_no_zero):
    assert not kl.is_member(kempner10, 1914)
    assert kl.is_member(kempner10, 1814)
    assert kl.is_member(power2_no_zero, 5)
    # n = g_k has least digit 0, forbidden whenever 0 in U_0 and 0 in I
    for k in range(1, 5):
        assert not kl.is_member(power2_no_zero, kl.base_value(power2_no_zero.sequence, k))
    with pytest.raises(NonPositiveInput):
        kl.is_member(kempner10, 0)


@pytest.mark.parametrize(
    "preset", ["kempner10", "power2-no-zero", "div-log", "open-boundary"]
)
def test_membership_matches_direct_decode(preset):
    from conftest import constraint_from_preset

    c = constraint_from_preset(preset)
    for n in range(1, 5000):
        assert kl.is_member(c, n) == _decoded_ok(c, n)


def test_block_count_examples(kempner10, power2_no_zero):
    b1 = kl.block_count_exact(kempner10, 1)
    assert (b1.exact, b1.product_bound, b1.empty) == (72, 81, False)
    b0 = kl.block_count_exact(kempner10, 0)
    assert b0.exact == 8
    p1 = kl.block_count_exact(power2_no_zero, 1)
    assert p1.exact == 3
    assert list(kl.enumerate_block(power2_no_zero, 1, 10)) == [3, 5, 7]


def test_block_empty_condition():
    c = kl.make_constraint(kl.constant(10), kl.AllIndices(), default=set(range(1, 10)))
    b = kl.block_count_exact(c, 0)
    assert b.empty and b.exact == 0
    assert list(kl.enumerate_block(c, 0, 10)) == []

    # empty only at the overridden position
    c2 = kl.make_constraint(
        kl.constant(10), kl.AllIndices(), default={9}, overrides={2: set(range(1, 10))}
    )
    assert not kl.block_count_exact(c2, 1).empty
    assert kl.block_count_exact(c2, 2).empty
    assert kl.block_count_exact(c2, 2).exact == 0
    assert not kl.block_count_exact(c2, 3).empty


@pytest.mark.parametrize(
    "preset", ["kempner10", "power2-no-zero", "div-log", "open-boundary"]
)
def test_block_counts_match_enumeration_and_oracle(preset):
    from conftest import constraint_from_preset

    c = constraint_from_preset(preset)
    k = 0
    while kl.base_value(c.sequence, k + 1) <= 20000:
        block = kl.block_count_exact(c, k)
        members = list(kl.enumerate_block(c, k, 10**6))
        assert len(members) == block.exact
        assert members == sorted(members)
        g_lo = kl.base_value(c.sequence, k)
        g_hi = kl.base_value(c.sequence, k + 1)
        assert all(g_lo <= m < g_hi for m in members)
        assert all(kl.is_member(c, m) for m in members)
        assert members == kl.oracle_members(c, g_lo, g_hi - 1)
        k += 1


def test_count_within_product_bracket_small_blocks(kempner10, power2_no_zero, div_log):
    for c in (kempner10, power2_no_zero, div_log):
        for k in range(12):
            b = kl.block_count_exact(c, k)
            if not b.empty:
                assert b.exact <= b.product_bound <= 2 * b.exact


def test_count_upto_examples(kempner10):
    assert kl.count_upto(kempner10, 99) == 80
    assert kl.count_upto(kempner10, 500) == 405
    assert kl.count_upto(kempner10, 0) == 0


@pytest.mark.parametrize(
    "preset",
    ["kempner10", "power2-no-zero", "div-log", "open-boundary", "fixed-bits", "base-g-no-c"],
)
def test_count_upto_matches_running_oracle(preset):
    from conftest import constraint_from_preset

    c = constraint_from_preset(preset)
    running = 0
    for n in range(1, 3000):
        if _decoded_ok(c, n):
            running += 1
        assert kl.count_upto(c, n) == running


def test_count_upto_skips_empty_middle_block():
    # position 3 forbids every nonzero digit: no 4-digit members, but digit 0
    # at position 3 stays legal inside longer members
    import bisect

    c = kl.make_constraint(
        kl.constant(10), kl.AllIndices(), default={9}, overrides={3: set(range(1, 10))}
    )
    assert kl.block_count_exact(c, 3).exact == 0
    members = kl.oracle_members(c, 1, 100200)
    probes = list(range(990, 1020)) + list(range(9990, 10100)) + list(range(99990, 100200))
    for n in probes:
        assert kl.count_upto(c, n) == bisect.bisect_right(members, n)


def test_count_upto_block_consistency(kempner10, power2_no_zero, div_log):
    for c in (kempner10, power2_no_zero, div_log):
        for K in range(1, 13):
            g_K = kl.base_value(c.sequence, K)
            total = sum(kl.block_count_exact(c, k).exact for k in range(K))
            assert kl.count_upto(c, g_K - 1) == total


@given(n=st.integers(min_value=0, max_value=10**12))
@settings(max_examples=200)
def test_count_upto_monotone_and_member_steps(n):
    from conftest import constraint_from_preset

    c = constraint_from_preset("kempner10")
    a = kl.count_upto(c, n)
    b = kl.count_upto(c, n + 1)
    assert b - a == (1 if kl.is_member(c, n + 1) else 0)


def test_enumerate_block_budget(kempner10):
    gen = kl.enumerate_block(kempner10, 2, 10)
    got = []
    with pytest.raises(BudgetExceeded) as exc_info:
        for value in gen:
            got.append(value)
    assert len(got) == 10
    assert exc_info.value.produced == 10

    # exactly-at-budget streams complete without raising
    assert len(list(kl.enumerate_block(kempner10, 1, 72))) == 72


def test_is_finite_set_certificates(kempner10, power2_no_zero, full_forbidden_base10):
    assert kl.is_finite_set(full_forbidden_base10) == kl.FINITE
    assert kl.is_finite_set(kempner10) == kl.INFINITE
    assert kl.is_finite_set(power2_no_zero) == kl.INFINITE

    # cofinite index set whose default turns full beyond the overrides
    c = kl.make_constraint(
        kl.constant(4),
        kl.ComplementIndices(kl.ExplicitIndices(frozenset({1}))),
        default={1, 2, 3},
        overrides={0: {2}},
    )
    assert kl.is_finite_set(c) == kl.FINITE
    # same shape but a proper default stays infinite
    c2 = kl.make_constraint(
        kl.constant(4),
        kl.ComplementIndices(kl.ExplicitIndices(frozenset({1}))),
        default={2, 3},
    )
    assert kl.is_finite_set(c2) == kl.INFINITE
    # sparse index set can never make the set finite
    c3 = kl.make_constraint(kl.constant(2), kl.PowerIndices(2), default={1})
    assert kl.is_finite_set(c3) == kl.INFINITE


def test_every_preset_matches_oracle_at_scale():
    import bisect

    from conftest import constraint_from_preset
    from kempner_lab.presets import preset_names

    limit = 10**5
    for name in preset_names():
        c = constraint_from_preset(name)
        members = kl.oracle_members(c, 1, limit)
        assert kl.count_upto(c, limit) == len(members)
        for x in range(limit // 16, limit + 1, limit // 16):
            assert kl.count_upto(c, x) == bisect.bisect_right(members, x), (name, x)


def test_is_finite_set_cycling_quotients():
    # a cycle is eventually-full only when every cycled radix agrees
    same = kl.make_constraint(
        kl.explicit([3, 3], extend="cycle"), kl.AllIndices(), default={1, 2}
    )
    assert kl.is_finite_set(same) == kl.FINITE
    mixed = kl.make_constraint(
        kl.explicit([3, 4], extend="cycle"), kl.AllIndices(), default={1, 2}
    )
    assert kl.is_finite_set(mixed) == kl.INFINITE
    tail = kl.make_constraint(
        kl.explicit([4, 3], extend="repeat-last"), kl.AllIndices(), default={1, 2}
    )
    assert kl.is_finite_set(tail) == kl.FINITE


def test_negative_indices_rejected(kempner10):
    from kempner_lab.errors import InputOutOfRange

    with pytest.raises(InputOutOfRange):
        kl.block_count_exact(kempner10, -1)
    with pytest.raises(InputOutOfRange):
        kl.base_value(kempner10.sequence, -2)
    with pytest.raises(InputOutOfRange):
        list(kl.enumerate_block(kempner10, 1, -5))


def test_finite_set_members_actually_stop():
    c = kl.make_constraint(
        kl.constant(3),
        kl.AllIndices(),
        default={1, 2},
        overrides={0: {1}, 1: {2}},
    )
    # members must have digit0 != 1, digit1 != 2, all higher digits = 0
    members = [n for n in range(1, 3**6) if kl.is_member(c, n)]
    assert members == kl.oracle_members(c, 1, 3**6 - 1)
    assert kl.is_finite_set(c) == kl.FINITE
    assert max(members) < kl.base_value(c.sequence, 2)
