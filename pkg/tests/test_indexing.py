import pytest
from hypothesis import given, strategies as st

from walshmax.indexing import (
    blocks,
    boundary_set,
    digits_of,
    index_profile,
    variation,
    window_profile,
)


def variation_by_definition(n: int) -> int:
    """Independent oracle: the defining sum n_0 + sum |n_k - n_(k-1)|."""
    d = [(n >> j) & 1 for j in range(n.bit_length() + 1)]
    total = d[0]
    for k in range(1, len(d)):
        total += abs(d[k] - d[k - 1])
    return total


def blocks_by_scan(n: int) -> list[tuple[int, int]]:
    """Independent oracle: scan the digit string for maximal 1-runs."""
    out = []
    j = 0
    while n >> j:
        if (n >> j) & 1:
            lo = j
            while (n >> j) & 1:
                j += 1
            out.append((lo, j - 1))
        else:
            j += 1
    return out


class TestIndexProfile:
    def test_five(self):
        p = index_profile(5)
        assert p.digits == (1, 0, 1)
        assert (p.low, p.high, p.gap, p.variation) == (0, 2, 2, 4)

    @pytest.mark.parametrize("k", [0, 1, 5, 30, 62])
    def test_powers_of_two(self, k):
        p = index_profile(1 << k)
        assert (p.low, p.high, p.gap, p.variation) == (k, k, 0, 2)

    def test_one(self):
        p = index_profile(1)
        assert (p.low, p.high, p.gap, p.variation) == (0, 0, 0, 2)

    @pytest.mark.parametrize("bad", [0, -1, 1 << 63])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            index_profile(bad)

    @given(st.integers(min_value=1, max_value=(1 << 63) - 1))
    def test_variation_matches_defining_sum(self, n):
        assert index_profile(n).variation == variation_by_definition(n)

    @given(st.integers(min_value=1, max_value=(1 << 63) - 1))
    def test_digits_reassemble(self, n):
        d = digits_of(n)
        assert sum(bit << j for j, bit in enumerate(d)) == n
        assert d[-1] == 1


class TestBlocks:
    @pytest.mark.parametrize(
        "n,expected",
        [(13, [(0, 0), (2, 3)]), (9, [(0, 0), (3, 3)]), (1 << 7, [(7, 7)])],
    )
    def test_examples(self, n, expected):
        assert [(b.lo, b.hi) for b in blocks(n).blocks] == expected

    @given(st.integers(min_value=1, max_value=(1 << 63) - 1))
    def test_against_scan_oracle(self, n):
        dec = blocks(n)
        assert [(b.lo, b.hi) for b in dec.blocks] == blocks_by_scan(n)
        assert dec.reassemble() == n

    @given(st.integers(min_value=1, max_value=(1 << 63) - 1))
    def test_separation_and_endpoints(self, n):
        dec = blocks(n).blocks
        for a, b in zip(dec, dec[1:]):
            assert b.lo >= a.hi + 2
        prof = index_profile(n)
        assert dec[0].lo == prof.low
        assert dec[-1].hi == prof.high

    def test_variation_is_twice_block_count_small_range(self):
        for n in range(1, 1 << 12):
            assert variation(n) == 2 * len(blocks(n).blocks)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            blocks(0)


class TestBoundarySet:
    def test_example_pair(self):
        bs = boundary_set([9, 13], 3)
        assert bs.members == (0, 2, 3)
        assert bs.cardinality == 3

    def test_power_of_two_window(self):
        bs = boundary_set([1 << 5], 5)
        assert bs.members == (5,)
        assert bs.cardinality == 1

    def test_all_ones(self):
        s = 4
        bs = boundary_set([(1 << (s + 1)) - 1], s)
        assert bs.members == (0, s)
        assert bs.cardinality == 2

    def test_top_bit_always_member(self):
        for s in range(1, 9):
            for n in range(1 << s, 1 << (s + 1)):
                assert s in boundary_set([n], s).members

    def test_monotone_under_enlargement(self):
        s = 4
        base = boundary_set([17, 21], s).members
        bigger = boundary_set([17, 21, 27], s).members
        assert set(base) <= set(bigger)

    def test_rejects_outside_window(self):
        with pytest.raises(ValueError):
            boundary_set([7], 3)
        with pytest.raises(ValueError):
            boundary_set([16], 3)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            boundary_set([], 3)


class TestWindowProfile:
    def test_example(self):
        wp = window_profile([9, 13], 3)
        assert (wp.s_minus, wp.s_plus, wp.rho_s) == (0, 3, 3)

    def test_pure_power(self):
        wp = window_profile([1 << 6], 6)
        assert wp.rho_s == 0

    def test_twelve(self):
        wp = window_profile([12], 3)
        assert wp.s_minus == 2
        assert wp.rho_s == 1

    @given(st.integers(min_value=0, max_value=20), st.data())
    def test_singleton_matches_gap(self, s, data):
        n = data.draw(st.integers(min_value=1 << s, max_value=(1 << (s + 1)) - 1))
        assert window_profile([n], s).rho_s == index_profile(n).gap
