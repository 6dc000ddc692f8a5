"""Binary-expansion characters of natural numbers.

Every n >= 1 has a unique expansion n = sum n_j 2^j with digits n_j in {0, 1}.
This module computes the derived quantities the rest of the library keys on:
the lowest and highest set bits, their spread, the digit variation
V(n) = n_0 + sum_k |n_k - n_{k-1}|, the maximal runs of consecutive 1-digits,
and the boundary sets collecting run endpoints over a family of indices
sharing a dyadic window [2^s, 2^(s+1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_INDEX = 1 << 63


def _check_index(n: int) -> None:
    if not isinstance(n, int):
        raise TypeError(f"index must be an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n} (n = 0 has no set bits and zero variation)")
    if n >= MAX_INDEX:
        raise ValueError(f"index must be < 2^63, got {n}")


@dataclass(frozen=True)
class IndexProfile:
    """Digit-level profile of one index.

    low is the least significant set bit, high the most significant,
    gap = high - low, and variation the number of 0/1 transitions in the
    digit sequence (counting the leading transition into n_0).
    """

    n: int
    digits: tuple[int, ...]
    low: int
    high: int
    gap: int
    variation: int


@dataclass(frozen=True)
class Block:
    """A maximal run of 1-digits, bits lo..hi inclusive."""

    lo: int
    hi: int

    def value(self) -> int:
        return (1 << (self.hi + 1)) - (1 << self.lo)


@dataclass(frozen=True)
class BlockDecomposition:
    n: int
    blocks: tuple[Block, ...]

    def reassemble(self) -> int:
        return sum(b.value() for b in self.blocks)


@dataclass(frozen=True)
class BoundarySet:
    """Union of all block endpoints over a family of indices in [2^s, 2^(s+1))."""

    s: int
    members: tuple[int, ...]

    @property
    def cardinality(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class WindowProfile:
    """Spread statistics of an index family confined to one dyadic window."""

    s: int
    indices: tuple[int, ...]
    s_minus: int
    s_plus: int
    rho_s: int


def digits_of(n: int) -> tuple[int, ...]:
    """Binary digits of n, least significant first, up to the top set bit."""
    _check_index(n)
    return tuple((n >> j) & 1 for j in range(n.bit_length()))


def index_profile(n: int) -> IndexProfile:
    """Profile of n: digits, lowest/highest set bit, gap, and variation.

    variation is n_0 + sum_{k>=1} |n_k - n_{k-1}|, which equals twice the
    number of maximal 1-runs of n.
    """
    _check_index(n)
    d = digits_of(n)
    low = (n & -n).bit_length() - 1
    high = n.bit_length() - 1
    # each 1-run contributes one rising and one falling digit transition
    run_tops = n & ~(n >> 1)
    variation = 2 * run_tops.bit_count()
    return IndexProfile(n=n, digits=d, low=low, high=high, gap=high - low, variation=variation)


def blocks(n: int) -> BlockDecomposition:
    """Maximal runs of 1-digits of n, in increasing bit order."""
    _check_index(n)
    out: list[Block] = []
    m = n
    while m:
        lo = (m & -m).bit_length() - 1
        hi = lo
        while (m >> (hi + 1)) & 1:
            hi += 1
        out.append(Block(lo, hi))
        m &= ~((1 << (hi + 1)) - 1)
    return BlockDecomposition(n=n, blocks=tuple(out))


def variation(n: int) -> int:
    """V(n), the digit variation; equals 2 x (number of 1-runs)."""
    _check_index(n)
    return 2 * (n & ~(n >> 1)).bit_count()


def _check_window(indices: Sequence[int], s: int) -> tuple[int, ...]:
    if s < 0:
        raise ValueError(f"window exponent s must be >= 0, got {s}")
    idx = tuple(indices)
    if not idx:
        raise ValueError("window index family must be nonempty")
    lo, hi = 1 << s, 1 << (s + 1)
    for n in idx:
        _check_index(n)
        if not (lo <= n < hi):
            raise ValueError(f"index {n} lies outside the window [2^{s}, 2^{s + 1})")
    return tuple(sorted(idx))


def boundary_set(indices: Iterable[int], s: int) -> BoundarySet:
    """Union of the block endpoints of every index in the window family."""
    idx = _check_window(tuple(indices), s)
    members: set[int] = set()
    for n in idx:
        for b in blocks(n).blocks:
            members.add(b.lo)
            members.add(b.hi)
    return BoundarySet(s=s, members=tuple(sorted(members)))


def window_profile(indices: Iterable[int], s: int) -> WindowProfile:
    """Per-window spread: s_minus = min of low bits, s_plus = s, rho_s = s - s_minus."""
    idx = _check_window(tuple(indices), s)
    s_minus = min(index_profile(n).low for n in idx)
    return WindowProfile(s=s, indices=idx, s_minus=s_minus, s_plus=s, rho_s=s - s_minus)
