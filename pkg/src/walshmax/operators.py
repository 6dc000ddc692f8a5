"""Weighted maximal operators of Walsh partial sums.

The operator of interest is sup over an index family of |S_n f| / w(n),
evaluated pointwise. Weight families cover the digit variation V(n), the
polynomial weight (n+1)^(1/p-1), the dyadic-gap weight 2^(rho(n)(1/p-1))
and its phi- and log-corrected refinements, the per-window gap weight, the
boundary-set cardinality |A_s|, and explicit tables.

The index family may be unbounded: since S_n f = f exactly once n reaches
2^N, the supremum over n >= 2^N equals |f| divided by the tail infimum of
the weight, which each unbounded family knows in closed form. Sweeps over
integer-weight families (variation, boundary cardinality, integer tables)
are carried out in exact integer arithmetic end to end; fractional-power
weights go through binary64 (relative accuracy about 1e-12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .dyadic import (
    _INT64_SAFE,
    CosetSelector,
    RationalLike,
    StepFunction,
    _to_fraction,
    weak_lp,
)
from .hardy import Atom, validate_atom
from .indexing import boundary_set, index_profile, variation, window_profile
from .transform import (
    MATRIX_RESOLUTION_CAP,
    _wht_ints,
    walsh_matrix,
    walsh_row,
)

Windows = tuple[tuple[int, tuple[int, ...]], ...]


def _freeze_windows(windows: Mapping[int, Iterable[int]]) -> Windows:
    out = []
    for s in sorted(windows):
        members = tuple(sorted(int(n) for n in windows[s]))
        if not members:
            raise ValueError(f"window s={s} has no members")
        lo, hi = 1 << s, 1 << (s + 1)
        for n in members:
            if not (lo <= n < hi):
                raise ValueError(f"index {n} lies outside its window [2^{s}, 2^{s + 1})")
        out.append((int(s), members))
    if not out:
        raise ValueError("window family must be nonempty")
    return tuple(out)


@dataclass(frozen=True)
class WeightFamily:
    """A positive weight w(n) on partial-sum indices, with a tagged formula.

    Use the classmethod constructors. `exact_integer` families evaluate to
    positive integers and drive the all-rational sweep; the others evaluate
    to floats.
    """

    kind: str
    p: Fraction | None = None
    eps: float | None = None
    phi: Callable[[int], float] | None = None
    windows: Windows | None = None
    table: tuple[tuple[int, Fraction], ...] | None = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def variation(cls) -> "WeightFamily":
        """w(n) = V(n), the digit variation; the weight of the main theorem."""
        return cls(kind="variation")

    @classmethod
    def polynomial(cls, p: RationalLike) -> "WeightFamily":
        """w(n) = (n+1)^(1/p-1)."""
        return cls(kind="polynomial", p=_check_p(p))

    @classmethod
    def dyadic_gap(cls, p: RationalLike) -> "WeightFamily":
        """w(n) = 2^(rho(n)(1/p-1)) with rho the spread of the set bits."""
        return cls(kind="dyadic_gap", p=_check_p(p))

    @classmethod
    def gap_phi(cls, p: RationalLike, phi: Callable[[int], float]) -> "WeightFamily":
        """w(n) = 2^(rho(n)(1/p-1)) * phi(rho(n)), phi nondecreasing, phi(0) > 0."""
        return cls(kind="gap_phi", p=_check_p(p), phi=phi)

    @classmethod
    def eps_log(cls, p: RationalLike, eps: float) -> "WeightFamily":
        """w(n) = 2^(rho(1/p-1)) (rho * log2(rho)^(1+eps))^(1/p), defined for rho >= 2."""
        if eps <= 0:
            raise ValueError(f"eps must be > 0 (eps = 0 is the unbounded case), got {eps}")
        return cls(kind="eps_log", p=_check_p(p), eps=float(eps))

    @classmethod
    def window_gap(cls, p: RationalLike, windows: Mapping[int, Iterable[int]]) -> "WeightFamily":
        """w(n) = 2^(rho_s(1/p-1)) where rho_s is the spread of n's declared window."""
        return cls(kind="window_gap", p=_check_p(p), windows=_freeze_windows(windows))

    @classmethod
    def boundary_card(cls, windows: Mapping[int, Iterable[int]]) -> "WeightFamily":
        """w(n) = |A_s|, the boundary-set cardinality of n's declared window."""
        return cls(kind="boundary_card", windows=_freeze_windows(windows))

    @classmethod
    def custom(cls, table: Mapping[int, RationalLike]) -> "WeightFamily":
        entries = []
        for n in sorted(table):
            w = _to_fraction(table[n])
            if n < 1:
                raise ValueError(f"weights are defined for n >= 1, got {n}")
            if w <= 0:
                raise ValueError(f"weight at n={n} must be positive, got {w}")
            entries.append((int(n), w))
        if not entries:
            raise ValueError("custom weight table must be nonempty")
        return cls(kind="custom", table=tuple(entries))

    # -- derived attributes ----------------------------------------------

    @property
    def exact_integer(self) -> bool:
        if self.kind in ("variation", "boundary_card"):
            return True
        if self.kind == "custom":
            return all(w.denominator == 1 for _, w in self.table)
        return False

    @property
    def declared_members(self) -> tuple[int, ...] | None:
        """Indices the family is defined on, when it is declared per-index."""
        if self.windows is not None:
            return tuple(n for _, members in self.windows for n in members)
        if self.table is not None:
            return tuple(n for n, _ in self.table)
        return None

    def admissible(self, n: int) -> bool:
        if n < 1:
            return False
        if self.kind == "eps_log":
            return index_profile(n).gap >= 2
        declared = self.declared_members
        if declared is not None:
            return n in declared
        return True

    def weight(self, n: int) -> Fraction | float:
        """w(n); exact for integer-valued families, binary64 otherwise."""
        if n < 1:
            raise ValueError(f"weights are defined for n >= 1, got {n}")
        k = self.kind
        if k == "variation":
            return Fraction(variation(n))
        if k == "polynomial":
            e = 1 / self.p - 1
            if e.denominator == 1:
                return Fraction(n + 1) ** e.numerator
            return float(n + 1) ** float(e)
        if k == "dyadic_gap":
            return self._gap_power(index_profile(n).gap)
        if k == "gap_phi":
            rho = index_profile(n).gap
            return _as_float(self._gap_power(rho)) * float(self.phi(rho))
        if k == "eps_log":
            rho = index_profile(n).gap
            if rho < 2:
                raise ValueError(
                    f"eps-log weight undefined at n={n}: rho(n)={rho} < 2 gives a nonpositive log"
                )
            base = _as_float(self._gap_power(rho))
            return base * (rho * math.log2(rho) ** (1.0 + self.eps)) ** (1.0 / float(self.p))
        if k == "window_gap":
            s, members = self._window_of(n)
            rho_s = window_profile(members, s).rho_s
            return self._gap_power(rho_s)
        if k == "boundary_card":
            s, members = self._window_of(n)
            return Fraction(boundary_set(members, s).cardinality)
        if k == "custom":
            for m, w in self.table:
                if m == n:
                    return w
            raise ValueError(f"n={n} is not in the custom weight table")
        raise AssertionError(f"unknown weight family {k!r}")

    def _gap_power(self, rho: int) -> Fraction | float:
        e = (1 / self.p - 1) * rho
        if e.denominator == 1:
            return Fraction(2) ** e.numerator
        return 2.0 ** float(e)

    def _window_of(self, n: int) -> tuple[int, tuple[int, ...]]:
        for s, members in self.windows:
            if n in members:
                return s, members
        raise ValueError(f"n={n} is not in any declared window of this family")

    def tail_infimum(self, resolution: int) -> Fraction | float | None:
        """inf of w(n) over n >= 2^resolution, or None for per-index families.

        Closed forms: the variation reaches V = 2 at powers of two, the gap
        weight reaches rho = 0 there, the polynomial weight is increasing so
        the infimum sits at n = 2^resolution, and the eps-log weight is
        increasing in rho >= 2 with arbitrarily large admissible n at rho = 2.
        """
        k = self.kind
        if k == "variation":
            return Fraction(2)
        if k == "polynomial":
            e = 1 / self.p - 1
            if e.denominator == 1:
                return Fraction((1 << resolution) + 1) ** e.numerator
            return float((1 << resolution) + 1) ** float(e)
        if k == "dyadic_gap":
            return Fraction(1)
        if k == "gap_phi":
            v = float(self.phi(0))
            if not v > 0:
                raise ValueError("gap_phi tail needs phi(0) > 0")
            return v
        if k == "eps_log":
            base = _as_float(self._gap_power(2))
            return base * (2.0 * 1.0 ** (1.0 + self.eps)) ** (1.0 / float(self.p))
        return None

    def describe(self) -> str:
        names = {
            "variation": "V(n)",
            "polynomial": f"(n+1)^(1/p-1), p={self.p}",
            "dyadic_gap": f"2^(rho(n)(1/p-1)), p={self.p}",
            "gap_phi": f"2^(rho(n)(1/p-1)) phi(rho(n)), p={self.p}",
            "eps_log": f"2^(rho(1/p-1)) (rho log2^(1+eps) rho)^(1/p), p={self.p}, eps={self.eps}",
            "window_gap": f"2^(rho_s(1/p-1)) per declared window, p={self.p}",
            "boundary_card": "|A_s| per declared window",
            "custom": "explicit table",
        }
        return names[self.kind]


def _check_p(p: RationalLike) -> Fraction:
    q = _to_fraction(p)
    if not (0 < q <= 1):
        raise ValueError(f"weight exponent p must lie in (0, 1], got {p}")
    return q


def _as_float(v: Fraction | float) -> float:
    return float(v)


def weight_value(family: WeightFamily, n: int) -> Fraction | float:
    """w(n) for the family, rejecting indices where the weight is undefined."""
    if n < 1:
        raise ValueError(f"weights are defined for n >= 1, got {n}")
    return family.weight(n)


@dataclass(frozen=True)
class IndexSet:
    """The index family the supremum runs over.

    `full_range` means every n >= 1: the part up to 2^N is swept directly
    and the rest is the analytic tail. Explicit and window families are
    finite, so they have no tail.
    """

    kind: str
    members: tuple[int, ...] | None = None
    windows: Windows | None = None

    @classmethod
    def full_range(cls) -> "IndexSet":
        return cls(kind="full")

    @classmethod
    def explicit(cls, members: Iterable[int]) -> "IndexSet":
        ms = tuple(sorted(set(int(n) for n in members)))
        if not ms:
            raise ValueError("explicit index set must be nonempty")
        if ms[0] < 1:
            raise ValueError(f"indices must be >= 1, got {ms[0]}")
        return cls(kind="explicit", members=ms)

    @classmethod
    def from_windows(cls, windows: Mapping[int, Iterable[int]]) -> "IndexSet":
        frozen = _freeze_windows(windows)
        members = tuple(sorted(n for _, ms in frozen for n in ms))
        return cls(kind="windows", members=members, windows=frozen)

    @property
    def unbounded(self) -> bool:
        return self.kind == "full"

    def swept_members(self, resolution: int, family: WeightFamily) -> tuple[int, ...]:
        """Admissible members at or below 2^resolution, in increasing order."""
        hi = 1 << resolution
        if self.kind == "full":
            declared = family.declared_members
            if declared is not None:
                return tuple(n for n in sorted(set(declared)) if n <= hi and family.admissible(n))
            return tuple(n for n in range(1, hi + 1) if family.admissible(n))
        return tuple(n for n in self.members if n <= hi and family.admissible(n))


def _windows_consistent(family: WeightFamily, idx: IndexSet) -> None:
    if family.windows is None:
        return
    if idx.kind == "windows" and idx.windows != family.windows:
        raise ValueError("index-set windows must match the weight family's declared windows")
    if idx.kind == "full":
        return  # the family's declared members bound the sweep
    if idx.kind == "explicit":
        declared = set(family.declared_members)
        missing = [n for n in idx.members if n not in declared]
        if missing:
            raise ValueError(f"indices {missing} have no declared window in this family")


def _row_source(resolution: int):
    if resolution <= MATRIX_RESOLUTION_CAP:
        w = walsh_matrix(resolution)
        return lambda k: w[k]
    return lambda k: walsh_row(k, resolution)


def variation_table(resolution: int) -> np.ndarray:
    """V(n) for n = 1..2^resolution as an int64 array (index 0 unused)."""
    nn = np.arange(0, (1 << resolution) + 1, dtype=np.int64)
    tops = nn & ~(nn >> 1)
    return 2 * np.bitwise_count(tops).astype(np.int64)


def _tail_divisor(
    family: WeightFamily, idx: IndexSet, resolution: int
) -> Fraction | float | None:
    """The infimum weight governing indices above 2^resolution, if any apply.

    S_n f = f exactly for n >= 2^resolution, so every such index contributes
    |f| / w(n); the sup of those terms is |f| over this divisor.
    """
    hi = 1 << resolution
    if idx.unbounded:
        declared = family.declared_members
        if declared is None:
            return family.tail_infimum(resolution)
        beyond = [n for n in declared if n > hi and family.admissible(n)]
    else:
        beyond = [n for n in idx.members if n > hi and family.admissible(n)]
    if not beyond:
        return None
    return min(family.weight(n) for n in beyond)


def weighted_maximal(
    f: StepFunction,
    family: WeightFamily,
    idx: IndexSet | None = None,
) -> StepFunction:
    """Pointwise sup over the index family of |S_n f| / w(n).

    Indices at or below 2^N are swept directly; any admissible index above
    2^N contributes |f| / w(n) since the partial sum saturates there, and for
    an unbounded family that tail is |f| over the closed-form weight infimum.
    Integer-weight families (variation, boundary cardinality, integer tables)
    are evaluated in exact rational arithmetic; fractional-power weights use
    binary64.
    """
    if idx is None:
        idx = IndexSet.full_range()
    _windows_consistent(family, idx)
    n_res = f.resolution
    members = idx.swept_members(n_res, family)
    tail_div = _tail_divisor(family, idx, n_res)
    if not members and tail_div is None:
        raise ValueError("index set has no admissible member for this weight family")
    nums, exp = f.dyadic_ints()
    cnums = _wht_ints(nums, n_res)
    coeff_exp = exp + n_res

    if family.exact_integer:
        runmax, denom_l = _exact_sweep(cnums, members, family, n_res)
        denom = denom_l << coeff_exp
        out = [Fraction(int(v), denom) for v in runmax]
    else:
        runmax_f = _float_sweep(cnums, members, family, n_res)
        out = [Fraction(math.ldexp(float(v), -coeff_exp)) for v in runmax_f]

    if tail_div is not None:
        if isinstance(tail_div, float):
            tail = [Fraction(abs(float(v)) / tail_div) for v in f.values]
        else:
            t = _to_fraction(tail_div)
            tail = [abs(v) / t for v in f.values]
        out = [max(a, b) for a, b in zip(out, tail)]
    return StepFunction(n_res, out)


def _sparse_members(members: Sequence[int], resolution: int) -> bool:
    # truncated-spectrum evaluation costs ~N 2^N per member; the incremental
    # walk costs one row per index up to the last member
    return len(members) * (resolution + 1) * 2 < members[-1]


def _exact_sweep(
    cnums: np.ndarray, members: Sequence[int], family: WeightFamily, resolution: int
) -> tuple[np.ndarray, int]:
    """Running pointwise max of |S_n| * (L / w(n)) over members, exactly.

    Returns integer numerators over the implicit denominator L * 2^coeff_exp.
    """
    size = 1 << resolution
    if not members:
        return np.zeros(size, dtype=np.int64), 1
    if family.kind == "variation":
        wtab = variation_table(resolution)
        weights = {n: int(wtab[n]) for n in members}
    else:
        weights = {n: int(family.weight(n)) for n in members}
    lcm = math.lcm(*set(weights.values()))
    coeff_bound = sum(abs(int(v)) for v in cnums)
    worst = coeff_bound * (lcm // min(weights.values()))
    dtype = object if (cnums.dtype == object or worst >= _INT64_SAFE) else np.int64
    c = cnums.astype(dtype)
    runmax = np.zeros(size, dtype=dtype)
    if _sparse_members(members, resolution):
        from .transform import _inverse_wht_ints

        for n in members:
            trunc = c.copy()
            trunc[n:] = 0
            s = _inverse_wht_ints(trunc, resolution).astype(dtype)
            runmax = np.maximum(runmax, np.abs(s) * (lcm // weights[n]))
        return runmax, lcm
    rows = _row_source(resolution)
    row_dtype = np.int64 if dtype == np.int64 else object
    s = np.zeros(size, dtype=dtype)
    nz = np.flatnonzero(cnums != 0)
    start = int(nz[0]) + 1 if len(nz) else size + 1  # S_n = 0 before the first live term
    pos = start - 1  # S holds the first `pos` terms
    for n in members:
        if n < start:
            continue  # S_n = 0 there, contributing nothing to the sup
        while pos < n:
            ck = c[pos]
            if ck:
                s = s + ck * rows(pos).astype(row_dtype)
            pos += 1
        runmax = np.maximum(runmax, np.abs(s) * (lcm // weights[n]))
    return runmax, lcm


def _float_sweep(
    cnums: np.ndarray, members: Sequence[int], family: WeightFamily, resolution: int
) -> np.ndarray:
    size = 1 << resolution
    runmax = np.zeros(size, dtype=np.float64)
    if not members:
        return runmax
    inv = {n: 1.0 / float(family.weight(n)) for n in members}
    c = cnums.astype(np.float64)
    if _sparse_members(members, resolution):
        from .transform import _fwht_float, bit_reversal_permutation

        rev = bit_reversal_permutation(resolution)
        for n in members:
            trunc = c.copy()
            trunc[n:] = 0
            s = _fwht_float(trunc)[rev]
            runmax = np.maximum(runmax, np.abs(s) * inv[n])
        return runmax
    rows = _row_source(resolution)
    s = np.zeros(size, dtype=np.float64)
    nz = np.flatnonzero(cnums != 0)
    start = int(nz[0]) + 1 if len(nz) else size + 1
    pos = start - 1
    for n in members:
        if n < start:
            continue
        while pos < n:
            ck = c[pos]
            if ck:
                s = s + ck * rows(pos).astype(np.float64)
            pos += 1
        runmax = np.maximum(runmax, np.abs(s) * inv[n])
    return runmax


def weak_type_statistic(atom: Atom, family: WeightFamily | None = None) -> Fraction:
    """The exact weak-L1 statistic of the weighted maximal function of an atom,
    measured outside the support coset: sup_t t * mu{x outside I_M : sup >= t}.
    """
    if family is None:
        family = WeightFamily.variation()
    check = validate_atom(atom)
    if not check.ok:
        raise ValueError("invalid atom: " + "; ".join(check.messages))
    wm = weighted_maximal(atom.values, family, IndexSet.full_range())
    stat = weak_lp(wm, 1, CosetSelector.outside_zero_coset(atom.support_depth))
    return _to_fraction(stat)


def _variation_runmax_batch(
    cmat: np.ndarray, start: int, resolution: int, value_bound: int
) -> tuple[np.ndarray, int]:
    """Batched exact sweep core: running max over n of |S_n| * (L / V(n)).

    `cmat` holds one row of coefficient numerators per function, all over a
    shared denominator 2^e; rows are swept together over n = start..2^N.
    `value_bound` bounds |numerator| of the underlying functions: since
    every partial-sum value obeys |S_n f| <= ||f||_inf ||D_n||_1 and the
    shell form of D_n gives ||D_n||_1 <= |n| + 2 unconditionally, partial-sum
    numerators stay below value_bound * (N + 2) * 2^N, which decides whether
    the running sums fit int32. Returns the (batch, 2^N) integer maxima over
    the implicit denominator L * 2^e, plus L.
    """
    batch, size = cmat.shape
    if size != 1 << resolution:
        raise ValueError("coefficient matrix width must be 2^resolution")
    wtab = variation_table(resolution)
    lcm = math.lcm(*set(int(v) for v in wtab[1:]))
    snum_bound = value_bound * (resolution + 2) << resolution
    if cmat.dtype != np.int64 or snum_bound * (lcm // 2) >= _INT64_SAFE:
        raise ValueError("batched sweep requires int64-safe coefficient bounds")
    w = walsh_matrix(resolution)
    # one running max per distinct V value, scaled only at the combine step
    classes = sorted(set(int(v) for v in wtab[1:]))
    class_of = {v: j for j, v in enumerate(classes)}
    cls_idx = np.array([0] + [class_of[int(v)] for v in wtab[1:]], dtype=np.int64)
    small = 2 * snum_bound < (1 << 31)
    work_t = np.int32 if small else np.int64
    c = cmat.astype(work_t) if small else cmat
    s = np.zeros((batch, size), dtype=work_t)
    rm = np.zeros((len(classes), batch, size), dtype=work_t)
    tmp = np.empty_like(s)
    prod = np.empty_like(s)
    for n in range(max(1, start), size + 1):
        col = c[:, n - 1]
        if col.any():
            np.multiply(col[:, None], w[n - 1], out=prod)
            s += prod
        k = cls_idx[n]
        np.abs(s, out=tmp)
        np.maximum(rm[k], tmp, out=rm[k])
    runmax = np.zeros((batch, size), dtype=np.int64)
    for j, v in enumerate(classes):
        np.maximum(runmax, rm[j].astype(np.int64) * (lcm // v), out=runmax)
    return runmax, lcm
