"""Walsh functions in Paley enumeration, the fast transform, partial sums,
and the two Dirichlet-kernel routes.

w_n(x) = (-1)^(sum_k n_k x_k) is the product of Rademacher functions picked
by the binary digits of n. With coset indices packing x_0 into the most
significant bit, w_n on the depth-N cosets is a Hadamard-matrix row read
through a bit-reversal of the column index. All transforms are integer
butterflies with a final power-of-two scale, so every coefficient is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .dyadic import (
    _INT64_SAFE,
    RationalLike,
    StepFunction,
    _to_fraction,
)

# full sign-matrix kernels are only worth materializing at desk scale
MATRIX_RESOLUTION_CAP = 13


def _bit_reverse(i: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


@lru_cache(maxsize=8)
def bit_reversal_permutation(resolution: int) -> np.ndarray:
    idx = np.arange(1 << resolution, dtype=np.int64)
    out = np.zeros_like(idx)
    for j in range(resolution):
        out |= ((idx >> j) & 1) << (resolution - 1 - j)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def rademacher_rows(resolution: int) -> np.ndarray:
    """Row k is r_k on the depth-`resolution` cosets, k = 0..resolution-1."""
    idx = np.arange(1 << resolution, dtype=np.int64)
    rows = np.empty((resolution, 1 << resolution), dtype=np.int8)
    for k in range(resolution):
        rows[k] = 1 - 2 * ((idx >> (resolution - 1 - k)) & 1)
    rows.setflags(write=False)
    return rows


@lru_cache(maxsize=8)
def shell_indices(resolution: int) -> np.ndarray:
    """Position of the first 1-coordinate per coset; `resolution` for the zero coset."""
    n = 1 << resolution
    idx = np.arange(n, dtype=np.float64)
    bl = np.frexp(idx)[1]  # bit length, exact for these magnitudes
    s = (resolution - bl).astype(np.int64)
    s[0] = resolution
    s.setflags(write=False)
    return s


@lru_cache(maxsize=2)
def walsh_matrix(resolution: int) -> np.ndarray:
    """Sign matrix W[n, i] = w_n(coset i), int8, for resolution <= 13."""
    if resolution > MATRIX_RESOLUTION_CAP:
        raise ValueError(
            f"walsh matrix capped at resolution {MATRIX_RESOLUTION_CAP}, got {resolution}"
        )
    h = np.array([[1]], dtype=np.int8)
    base = np.array([[1, 1], [1, -1]], dtype=np.int8)
    for _ in range(resolution):
        h = np.kron(base, h)
    w = np.ascontiguousarray(h[:, bit_reversal_permutation(resolution)])
    w.setflags(write=False)
    return w


def walsh_eval(n: int, coset_index: int, resolution: int) -> int:
    """w_n at the depth-`resolution` coset, as +1 or -1."""
    if n < 0:
        raise ValueError(f"Walsh index must be >= 0, got {n}")
    if n.bit_length() > resolution:
        raise ValueError(
            f"w_{n} is not constant on depth-{resolution} cosets (needs resolution > {n.bit_length() - 1})"
        )
    if not (0 <= coset_index < (1 << resolution)):
        raise ValueError(f"coset index {coset_index} out of range at resolution {resolution}")
    parity = (n & _bit_reverse(coset_index, resolution)).bit_count() & 1
    return -1 if parity else 1


def walsh_row(n: int, resolution: int) -> np.ndarray:
    """w_n on all depth-`resolution` cosets as an int8 sign vector."""
    if n < 0 or n.bit_length() > resolution:
        raise ValueError(f"Walsh index {n} out of range at resolution {resolution}")
    rows = rademacher_rows(resolution)
    out = np.ones(1 << resolution, dtype=np.int8)
    k = 0
    while n:
        if n & 1:
            out = out * rows[k]
        n >>= 1
        k += 1
    return out


def _fwht(arr: np.ndarray, bound: int) -> np.ndarray:
    """In-place-style integer Walsh-Hadamard butterfly on the last axis.

    `bound` is a proven bound on |input| entries; the output is exact, with a
    promotion to Python-int (object) arrays when int64 could overflow.
    """
    n = arr.shape[-1]
    if arr.dtype == np.int64 and bound * n >= _INT64_SAFE:
        arr = arr.astype(object)
    else:
        arr = arr.copy()
    shape = arr.shape
    flat = arr.reshape(-1, n)
    h = 1
    while h < n:
        blocks = flat.reshape(flat.shape[0], n // (2 * h), 2, h)
        a = blocks[:, :, 0, :] + blocks[:, :, 1, :]
        b = blocks[:, :, 0, :] - blocks[:, :, 1, :]
        flat = np.concatenate((a[:, :, None, :], b[:, :, None, :]), axis=2).reshape(
            flat.shape[0], n
        )
        h *= 2
    return flat.reshape(shape)


def _fwht_float(arr: np.ndarray) -> np.ndarray:
    """Float64 butterfly on the last axis, for the approximate weight paths."""
    n = arr.shape[-1]
    flat = arr.astype(np.float64).reshape(-1, n).copy()
    h = 1
    while h < n:
        blocks = flat.reshape(flat.shape[0], n // (2 * h), 2, h)
        a = blocks[:, :, 0, :] + blocks[:, :, 1, :]
        b = blocks[:, :, 0, :] - blocks[:, :, 1, :]
        flat = np.concatenate((a[:, :, None, :], b[:, :, None, :]), axis=2).reshape(
            flat.shape[0], n
        )
        h *= 2
    return flat.reshape(arr.shape)


def _wht_ints(nums: np.ndarray, resolution: int) -> np.ndarray:
    """Coefficient numerators over denominator 2^(exp + resolution).

    Operates on the last axis, so a batch of functions may be stacked.
    """
    rev = bit_reversal_permutation(resolution)
    bound = int(np.abs(nums).max(initial=0))
    return _fwht(nums[..., rev], bound)


def _inverse_wht_ints(coeff_nums: np.ndarray, resolution: int) -> np.ndarray:
    """Value numerators over the same denominator 2^exp as the coefficients.

    If gamma_k = c_k / 2^E then (sum_k gamma_k w_k)(coset i) = H(c)[rev(i)] / 2^E.
    """
    rev = bit_reversal_permutation(resolution)
    bound = int(np.abs(coeff_nums).max(initial=0))
    return _fwht(coeff_nums, bound)[..., rev]


def _reduced(nums: np.ndarray, exp: int) -> tuple[np.ndarray, int]:
    """Strip common powers of two from (nums / 2^exp) without changing values."""
    if exp == 0:
        return nums, 0
    if nums.dtype == object:
        acc = 0
        for v in nums:
            acc |= abs(int(v))
    else:
        acc = int(np.bitwise_or.reduce(np.abs(nums)))
    if acc == 0:
        return nums, 0
    strip = min(exp, (acc & -acc).bit_length() - 1)
    if strip == 0:
        return nums, exp
    # every entry is divisible by 2^strip, so the arithmetic shift is exact
    return nums >> strip, exp - strip


class Spectrum:
    """Walsh-Fourier coefficients of a depth-N step function, exact.

    coefficients[k] is the integral of f * w_k; entries vanish for k >= 2^N.
    """

    __slots__ = ("resolution", "_coeffs", "_nums", "_exp")

    def __init__(self, resolution: int, coefficients: Iterable[RationalLike]):
        coeffs = tuple(_to_fraction(c) for c in coefficients)
        if len(coeffs) != 1 << resolution:
            raise ValueError(
                f"need 2^{resolution} = {1 << resolution} coefficients, got {len(coeffs)}"
            )
        self._set("resolution", resolution)
        self._set("_coeffs", coeffs)
        self._set("_nums", None)
        self._set("_exp", None)

    def _set(self, k, v):
        object.__setattr__(self, k, v)

    def __setattr__(self, *a):
        raise AttributeError("Spectrum is immutable")

    @classmethod
    def from_dyadic_ints(cls, resolution: int, nums: np.ndarray, exp: int) -> "Spectrum":
        s = cls.__new__(cls)
        s._set("resolution", resolution)
        s._set("_coeffs", None)
        arr = np.asarray(nums)
        arr.setflags(write=False)
        s._set("_nums", arr)
        s._set("_exp", int(exp))
        return s

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        if self._coeffs is None:
            d = 1 << self._exp
            self._set("_coeffs", tuple(Fraction(int(v), d) for v in self._nums))
        return self._coeffs

    def coefficient(self, k: int) -> Fraction:
        if k >= (1 << self.resolution):
            return Fraction(0)
        if self._coeffs is not None:
            return self._coeffs[k]
        return Fraction(int(self._nums[k]), 1 << self._exp)

    def dyadic_ints(self) -> tuple[np.ndarray, int]:
        if self._nums is None:
            helper = StepFunction(self.resolution, self._coeffs)
            nums, exp = helper.dyadic_ints()
            self._set("_nums", nums)
            self._set("_exp", exp)
        return self._nums, self._exp

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.resolution == other.resolution and self.coefficients == other.coefficients

    def __repr__(self) -> str:
        return f"Spectrum(resolution={self.resolution})"


def wht(f: StepFunction) -> Spectrum:
    """Exact Walsh-Hadamard transform: coefficient k is the integral of f * w_k."""
    nums, exp = f.dyadic_ints()
    c = _wht_ints(nums, f.resolution)
    c, e = _reduced(c, exp + f.resolution)
    return Spectrum.from_dyadic_ints(f.resolution, c, e)


def inverse_wht(spectrum: Spectrum) -> StepFunction:
    """Exact inverse transform; inverse_wht(wht(f)) == f."""
    nums, exp = spectrum.dyadic_ints()
    v = _inverse_wht_ints(nums, spectrum.resolution)
    v, e = _reduced(v, exp)
    return StepFunction.from_dyadic_ints(spectrum.resolution, v, e)


def partial_sum(f: StepFunction, n: int) -> StepFunction:
    """S_n f, the first n terms of the Walsh-Fourier series of f; exact.

    Requires 1 <= n <= 2^N: beyond the spectrum length S_n f = f identically,
    and the maximal-operator machinery accounts for that tail analytically.
    """
    size = 1 << f.resolution
    if not (1 <= n <= size):
        raise ValueError(
            f"partial-sum order n={n} out of range [1, 2^{f.resolution}] "
            f"(S_n f = f for every n >= 2^{f.resolution})"
        )
    nums, exp = f.dyadic_ints()
    c = _wht_ints(nums, f.resolution)
    c[n:] = 0
    v = _inverse_wht_ints(c, f.resolution)
    v, e = _reduced(v, exp + f.resolution)
    return StepFunction.from_dyadic_ints(f.resolution, v, e)


def _check_kernel_args(n: int, resolution: int) -> None:
    if n < 1:
        raise ValueError(f"Dirichlet kernel order must be >= 1, got {n}")
    if n.bit_length() > resolution:
        raise ValueError(
            f"D_{n} needs resolution > {n.bit_length() - 1}, got {resolution}"
        )


def dirichlet_direct(n: int, resolution: int) -> StepFunction:
    """D_n by its definition: the literal sum w_0 + ... + w_(n-1)."""
    _check_kernel_args(n, resolution)
    if resolution <= MATRIX_RESOLUTION_CAP:
        w = walsh_matrix(resolution)
        vals = np.sum(w[:n], axis=0, dtype=np.int64)
    else:
        vals = np.zeros(1 << resolution, dtype=np.int64)
        for k in range(n):
            vals += walsh_row(k, resolution)
    return StepFunction.from_dyadic_ints(resolution, vals, 0)


def dirichlet_range(n_max: int, resolution: int):
    """Yield (n, D_n values as an int64 vector) for n = 1..n_max by running
    accumulation of Walsh rows. The yielded array is reused; copy to keep it.
    """
    _check_kernel_args(n_max, resolution)
    acc = np.zeros(1 << resolution, dtype=np.int64)
    use_matrix = resolution <= MATRIX_RESOLUTION_CAP
    w = walsh_matrix(resolution) if use_matrix else None
    for n in range(1, n_max + 1):
        row = w[n - 1] if use_matrix else walsh_row(n - 1, resolution)
        acc += row
        yield n, acc


def _shell_values(n: int) -> list[int]:
    """m_s = (n mod 2^s) - n_s 2^s for s = 0..|n|, then n itself for the rest.

    On the shell of points whose first 1-coordinate is s, D_n = w_n * m_s;
    on the zero coset at any finite resolution D_n = n.
    """
    top = n.bit_length() - 1
    out = []
    for s in range(top + 1):
        out.append((n & ((1 << s) - 1)) - (((n >> s) & 1) << s))
    return out


def dirichlet_closed(n: int, resolution: int) -> StepFunction:
    """D_n via the digit identity D_n = w_n * sum_k n_k r_k D_(2^k); exact.

    Each r_k D_(2^k) equals D_(2^(k+1)) - D_(2^k), so on the shell with first
    1-coordinate at s the inner sum collapses to (n mod 2^s) - n_s 2^s.
    """
    _check_kernel_args(n, resolution)
    shells = shell_indices(resolution)
    table = np.zeros(resolution + 1, dtype=np.int64)
    mvals = _shell_values(n)
    table[: len(mvals)] = mvals
    table[len(mvals):] = n
    vals = walsh_row(n, resolution).astype(np.int64) * table[shells]
    return StepFunction.from_dyadic_ints(resolution, vals, 0)


def dirichlet_l1_norm(n: int) -> Fraction:
    """Exact Lebesgue constant ||D_n||_1, from the shell decomposition of D_n."""
    if n < 1:
        raise ValueError(f"Dirichlet kernel order must be >= 1, got {n}")
    top = n.bit_length() - 1
    mvals = _shell_values(n)
    total = Fraction(0)
    for s, m in enumerate(mvals):
        total += Fraction(abs(m), 1 << (s + 1))
    # beyond the top bit the kernel equals n on I_(top+1)
    total += Fraction(n, 1 << (top + 1))
    return total
