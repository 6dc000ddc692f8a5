"""Dyadic martingales, maximal functions, Hardy-space norms, and atoms.

A finite-resolution function f generates the martingale F_m = S_(2^m) f,
which is exactly the conditional expectation of f on the depth-m cosets.
The maximal function F* = max_m |F_m| is a finite pointwise maximum here,
so H_p norms of concrete functions are computed exactly for p = 1.

A p-atom is supported in some I_M, has exactly zero mean there, and is
bounded by 2^(M/p). Finite combinations sum mu_k * a_k build martingales
whose H_1 norm never exceeds sum |mu_k|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dyadic import (
    _INT64_SAFE,
    RationalLike,
    StepFunction,
    _to_fraction,
    int_array,
    lp_norm,
)
from .transform import _reduced


class Martingale:
    """The martingale (F_m) of a finite-resolution terminal function.

    F_m is the block average of the terminal on depth-m cosets, which equals
    the dyadic partial sum S_(2^m) of the terminal; F_N is the terminal
    itself and the sequence is constant beyond m = N.
    """

    __slots__ = ("terminal", "_levels")

    def __init__(self, terminal: StepFunction):
        object.__setattr__(self, "terminal", terminal)
        object.__setattr__(self, "_levels", None)

    def __setattr__(self, *a):
        raise AttributeError("Martingale is immutable")

    @property
    def resolution(self) -> int:
        return self.terminal.resolution

    @property
    def levels(self) -> tuple[StepFunction, ...]:
        """F_0, ..., F_N, each at its natural resolution m."""
        if self._levels is None:
            out: list[StepFunction] = [self.terminal]
            nums, den = self.terminal.rational_ints()
            n = self.resolution
            cur = nums if nums.dtype == object else nums.astype(object)
            for m in range(n - 1, -1, -1):
                cur = cur.reshape(-1, 2).sum(axis=1)
                scale = den << (n - m)
                out.append(StepFunction(m, [Fraction(int(v), scale) for v in cur]))
            out.reverse()
            object.__setattr__(self, "_levels", tuple(out))
        return self._levels

    def __eq__(self, other):
        if not isinstance(other, Martingale):
            return NotImplemented
        return self.terminal == other.terminal

    def __repr__(self) -> str:
        return f"Martingale(resolution={self.resolution})"


def _as_martingale(f) -> Martingale:
    if isinstance(f, Martingale):
        return f
    if isinstance(f, StepFunction):
        return Martingale(f)
    raise TypeError(f"expected Martingale or StepFunction, got {type(f).__name__}")


def maximal_function(f: Martingale | StepFunction) -> StepFunction:
    """F* = pointwise max of |F_m| over all levels (the sup truncates at m = N)."""
    mart = _as_martingale(f)
    terminal = mart.terminal
    n = terminal.resolution
    nums, den = terminal.rational_ints()
    bound = int(np.abs(nums).max(initial=0)) << n
    dtype = object if (nums.dtype == object or bound >= _INT64_SAFE) else np.int64
    cur = nums.astype(dtype)
    # block sums S_m scaled by 2^m share the denominator den * 2^N
    runmax = np.abs(cur) * (1 << n)
    for m in range(n - 1, -1, -1):
        cur = cur.reshape(-1, 2).sum(axis=1)
        runmax = np.maximum(runmax, np.repeat(np.abs(cur) * (1 << m), 1 << (n - m)))
    scale = den << n
    if (den & (den - 1)) == 0:
        if dtype == object:
            runmax = int_array([int(v) for v in runmax])
        r, e = _reduced(runmax, (den.bit_length() - 1) + n)
        return StepFunction.from_dyadic_ints(n, r, e)
    return StepFunction(n, [Fraction(int(v), scale) for v in runmax])


def hp_norm(f: Martingale | StepFunction, p: RationalLike):
    """The Hardy-space norm ||F*||_p; exact for p = 1."""
    return lp_norm(maximal_function(f), p)


@dataclass(frozen=True)
class Atom:
    """A p-atom: zero mean on its support coset I_M, bounded by 2^(M/p)."""

    p: Fraction
    support_depth: int
    values: StepFunction

    def __post_init__(self):
        p = _to_fraction(self.p)
        object.__setattr__(self, "p", p)
        if not (0 < p <= 1):
            raise ValueError(f"atom exponent p must lie in (0, 1], got {p}")
        if self.support_depth < 0:
            raise ValueError(f"support depth must be >= 0, got {self.support_depth}")
        if self.values.resolution < self.support_depth:
            raise ValueError(
                f"atom at resolution {self.values.resolution} cannot be supported "
                f"in a depth-{self.support_depth} coset"
            )


@dataclass(frozen=True)
class AtomCheck:
    """Outcome of validating the three atom conditions exactly."""

    ok: bool
    mean_is_zero: bool
    sup_bounded: bool
    supported: bool
    messages: tuple[str, ...]


def _sup_bound_holds(max_abs: Fraction, m: int, p: Fraction) -> bool:
    # |v| <= 2^(M/p)  <=>  |v|^p_num <= 2^(M * p_den), exactly
    return max_abs ** p.numerator <= Fraction(2) ** (m * p.denominator)


def validate_atom(atom: Atom) -> AtomCheck:
    """Check support, zero mean, and the sup bound; report which condition fails."""
    f = atom.values
    m = atom.support_depth
    n = f.resolution
    inside = 1 << (n - m)
    vals = f.values
    supported = all(v == 0 for v in vals[inside:])
    mean_zero = sum(vals[:inside], start=Fraction(0)) == 0
    max_abs = max((abs(v) for v in vals[:inside]), default=Fraction(0))
    sup_ok = _sup_bound_holds(max_abs, m, atom.p)
    msgs: list[str] = []
    if not supported:
        msgs.append(f"values outside I_{m} are not all zero")
    if not mean_zero:
        msgs.append(f"mean over I_{m} is nonzero")
    if not sup_ok:
        msgs.append(f"sup norm {max_abs} exceeds 2^({m}/{atom.p})")
    return AtomCheck(
        ok=supported and mean_zero and sup_ok,
        mean_is_zero=mean_zero,
        sup_bounded=sup_ok,
        supported=supported,
        messages=tuple(msgs),
    )


def _atom_entropy(seed) -> list[int]:
    if isinstance(seed, int):
        return [seed]
    return [int(s) for s in seed]


def _atom_numerators(seed, height_exp: int, m: int, resolution: int) -> tuple[np.ndarray, int]:
    """Deterministic sampler core shared by random_atom and the batch sweeps.

    Draws one sign per depth-`resolution` coset of I_m, scales to 2^height_exp,
    subtracts the exact mean, and halves once if the correction pushed the sup
    above the bound. Returns numerators over I_m and their exponent.
    """
    q = resolution - m
    rng = np.random.default_rng(_atom_entropy(seed) + [m, resolution])
    signs = rng.integers(0, 2, size=1 << q, dtype=np.int64) * 2 - 1
    total = int(signs.sum())
    nums = (signs << q) - total
    exp = q
    if int(np.abs(nums).max()) > (1 << q):
        exp += 1  # halve: same numerators over one more binary digit
    # fold the height 2^height_exp into numerator or exponent, whichever is exact
    if height_exp >= exp:
        return nums * (1 << (height_exp - exp)), 0
    return nums, exp - height_exp


def random_atom(seed, p: RationalLike, support_depth: int, resolution: int) -> Atom:
    """A deterministic pseudorandom p-atom; always passes validate_atom.

    `seed` may be an int or a tuple of ints (a derived-stream key). Requires
    support_depth < resolution and 2^(support_depth/p) to be an exact power
    of two, so every value stays a dyadic rational.
    """
    pq = _to_fraction(p)
    if not (0 < pq <= 1):
        raise ValueError(f"p must lie in (0, 1], got {p}")
    m = support_depth
    if m < 0:
        raise ValueError(f"support depth must be >= 0, got {m}")
    if m >= resolution:
        raise ValueError(
            f"support depth {m} must be smaller than the resolution {resolution}"
        )
    height = Fraction(m, 1) / pq
    if height.denominator != 1:
        raise ValueError(
            f"2^({m}/{pq}) is not a power of two; pick M divisible by the numerator of p"
        )
    nums, exp = _atom_numerators(seed, int(height), m, resolution)
    full = np.zeros(1 << resolution, dtype=nums.dtype)
    full[: 1 << (resolution - m)] = nums
    r, e = _reduced(full, exp)
    return Atom(p=pq, support_depth=m, values=StepFunction.from_dyadic_ints(resolution, r, e))


@dataclass(frozen=True)
class AtomicCombination:
    """Weights and atoms of a finite atomic decomposition sum mu_k a_k."""

    weights: tuple[Fraction, ...]
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(_to_fraction(w) for w in self.weights))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(self.weights) != len(self.atoms):
            raise ValueError(
                f"{len(self.weights)} weights for {len(self.atoms)} atoms"
            )

    def weight_l1(self) -> Fraction:
        return sum((abs(w) for w in self.weights), start=Fraction(0))


def build_from_atoms(combination: AtomicCombination, resolution: int) -> Martingale:
    """The martingale with terminal sum mu_k a_k; level m is sum mu_k S_(2^m) a_k."""
    total = StepFunction.zero(resolution)
    for w, atom in zip(combination.weights, combination.atoms):
        if atom.values.resolution > resolution:
            raise ValueError(
                f"atom resolution {atom.values.resolution} exceeds target {resolution}"
            )
        total = total + atom.values.scale(w)
    return Martingale(total)
