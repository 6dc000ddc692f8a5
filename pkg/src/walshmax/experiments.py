"""Experiment drivers: reproducible sweeps with exact results, written as CSV.

Each driver returns an ExperimentReport whose rows are deterministic
functions of (parameters, seed); rerunning with the same seed produces a
byte-identical CSV. Exact rationals are rendered as "num/2^k" when dyadic
and "num/den" otherwise, always next to a 15-significant-digit decimal.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .dyadic import (
    DyadicRational,
    StepFunction,
    _is_pow2,
    lp_norm,
)
from .hardy import _atom_numerators, hp_norm
from .indexing import boundary_set, variation, window_profile
from .operators import (
    IndexSet,
    WeightFamily,
    _variation_runmax_batch,
    weighted_maximal,
)
from .transform import _wht_ints, dirichlet_closed, dirichlet_l1_norm, walsh_matrix

OUTPUT_DIR_ENV = "WALSHMAX_OUTDIR"


def render_exact(value) -> str:
    """Exact rational as 'num/2^k' (dyadic) or 'num/den'."""
    if isinstance(value, DyadicRational):
        return str(value)
    q = Fraction(value)
    if _is_pow2(q.denominator):
        return str(DyadicRational(q.numerator, q.denominator.bit_length() - 1))
    return f"{q.numerator}/{q.denominator}"


def render_decimal(value) -> str:
    return f"{float(value):.15g}"


@dataclass
class ExperimentReport:
    """One experiment's deterministic output table plus run metadata."""

    experiment: str
    params: dict
    columns: tuple[str, ...]
    rows: list[tuple]
    seed: int | None = None
    runtime_s: float = 0.0
    summary: dict = field(default_factory=dict)
    header_notes: tuple[str, ...] = ()

    def to_csv_text(self) -> str:
        lines = [f"# {note}" for note in self.header_notes]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(str(cell) for cell in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(self.to_csv_text())
        return path


def default_report_path(experiment: str, outdir=None) -> Path:
    base = Path(outdir) if outdir else Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    stamp = time.strftime("%Y%m%dT%H%M%S")
    return base / f"{experiment}-{stamp}.csv"


# --- the blow-up family ---------------------------------------------------


def counterexample(n_k: int, resolution: int) -> StepFunction:
    """The kernel difference with unit Hardy norm and blowing-up maximal means:
    2^n_k on I_(n_k+1), -2^n_k on its sibling coset, zero elsewhere.
    """
    if n_k < 3:
        raise ValueError(f"the family is declared for n_k >= 3, got {n_k}")
    if resolution < n_k + 1:
        raise ValueError(
            f"resolution {resolution} too coarse: need at least n_k + 1 = {n_k + 1}"
        )
    vals = np.zeros(1 << resolution, dtype=np.int64)
    half = 1 << (resolution - n_k - 1)
    vals[:half] = 1 << n_k
    vals[half : 2 * half] = -(1 << n_k)
    return StepFunction.from_dyadic_ints(resolution, vals, 0)


FULL_MODE_RESOLUTION_CAP = 13


def blowup_ratio(n_k: int, mode: str = "full", resolution: int | None = None) -> Fraction:
    """||sup_n |S_n f| / V(n)||_1 / ||f||_H1 for the counterexample at n_k.

    full: exact supremum over every index (the swept range plus the tail).
    witness: only the indices 2^n_k + 2^s, s < n_k, giving the exact lower
    bound n_k/8 plus a nonnegative remainder.
    """
    if resolution is None:
        resolution = n_k + 1
    f = counterexample(n_k, resolution)
    if mode == "full":
        if resolution > FULL_MODE_RESOLUTION_CAP:
            raise ValueError(
                f"full mode at resolution {resolution} exceeds the cap "
                f"{FULL_MODE_RESOLUTION_CAP}; use witness mode"
            )
        idx = IndexSet.full_range()
    elif mode == "witness":
        idx = IndexSet.explicit([(1 << n_k) + (1 << s) for s in range(n_k)])
    else:
        raise ValueError(f"mode must be 'full' or 'witness', got {mode!r}")
    wm = weighted_maximal(f, WeightFamily.variation(), idx)
    return Fraction(lp_norm(wm, 1)) / Fraction(hp_norm(f, 1))


# --- weak-type sweep -------------------------------------------------------

_SWEEP_CHUNK = 250


def _weak_stats_chunk(seed: int, m: int, resolution: int, k_lo: int, k_hi: int) -> list[Fraction]:
    """Exact weak-L1 statistics of atoms k_lo..k_hi-1 at support depth m."""
    size = 1 << resolution
    rows = []
    exps = []
    raw = []
    for k in range(k_lo, k_hi):
        nums, exp = _atom_numerators((seed, k), m, m, resolution)
        raw.append(nums)
        exps.append(exp)
    common = max(exps)
    for nums, exp in zip(raw, exps):
        pad = np.zeros(size, dtype=np.int64)
        pad[: 1 << (resolution - m)] = nums << (common - exp)
        rows.append(pad)
    vmat = np.stack(rows)
    value_bound = int(np.abs(vmat).max(initial=0))
    cmat = _wht_ints(vmat, resolution)
    assert not cmat[:, : 1 << m].any(), "atom coefficients below 2^M must vanish"
    runmax, lcm = _variation_runmax_batch(cmat, (1 << m) + 1, resolution, value_bound)
    outside = runmax[:, 1 << (resolution - m) :]
    sel = np.sort(outside, axis=1)[:, ::-1]
    peak = int(sel[:, 0].max(initial=0))
    if peak * sel.shape[1] >= (1 << 62):
        sel = sel.astype(object)
    ranks = np.arange(1, sel.shape[1] + 1, dtype=np.int64)
    best = np.max(sel * ranks, axis=1)
    denom = lcm << (common + 2 * resolution)
    return [Fraction(int(b), denom) for b in best]


def _weak_sweep_task(args) -> tuple[int, int, list[Fraction]]:
    seed, m, resolution, k_lo, k_hi = args
    return m, k_lo, _weak_stats_chunk(seed, m, resolution, k_lo, k_hi)


def weak_type_sweep(
    count: int,
    m_values,
    resolution: int,
    seed: int = 0,
    threads: int = 1,
) -> ExperimentReport:
    """Exact weak-L1 statistics of `count` random 1-atoms per support depth.

    Statistic per atom: sup_t t * mu{x outside I_M : sup_n |S_n a|/V(n) >= t},
    the exact weak-type functional of the variation-weighted maximal operator.
    """
    t0 = time.time()
    m_list = sorted(int(m) for m in m_values)
    for m in m_list:
        if not (0 < m < resolution):
            raise ValueError(f"support depth M={m} must satisfy 0 < M < N={resolution}")
    tasks = []
    for m in m_list:
        for lo in range(0, count, _SWEEP_CHUNK):
            tasks.append((seed, m, resolution, lo, min(lo + _SWEEP_CHUNK, count)))
    results: dict[tuple[int, int], list[Fraction]] = {}
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            for m, lo, stats in ex.map(_weak_sweep_task, tasks):
                results[(m, lo)] = stats
    else:
        for task in tasks:
            m, lo, stats = _weak_sweep_task(task)
            results[(m, lo)] = stats
    rows = []
    per_m_max: dict[int, Fraction] = {}
    for m in m_list:
        for lo in range(0, count, _SWEEP_CHUNK):
            for off, stat in enumerate(results[(m, lo)]):
                k = lo + off
                rows.append((m, k, render_exact(stat), render_decimal(stat)))
                if m not in per_m_max or stat > per_m_max[m]:
                    per_m_max[m] = stat
    global_max = max(per_m_max.values(), default=Fraction(0))
    return ExperimentReport(
        experiment="weaktype-sweep",
        params={"count": count, "M": m_list, "N": resolution, "threads": threads},
        columns=("M", "atom", "stat_exact", "stat_decimal"),
        rows=rows,
        seed=seed,
        runtime_s=time.time() - t0,
        summary={"per_m_max": per_m_max, "global_max": global_max},
    )


# --- Lebesgue-constant sweep ----------------------------------------------


def lebesgue_sweep(
    n_max: int,
    samples: int = 0,
    sample_top_bit: int = 20,
    seed: int = 0,
    strict: bool = True,
) -> ExperimentReport:
    """Exact ||D_n||_1 against the variation bounds V(n)/8 <= ||D_n||_1 <= V(n).

    Exhaustive over n <= n_max (kernels materialized at minimal resolution),
    plus seeded random samples with top bit <= sample_top_bit evaluated by the
    exact shell-sum norm. With strict=True a bound violation raises.
    """
    t0 = time.time()
    rows = []
    per_m_checked = 0

    def one(n: int, norm: Fraction, origin: str):
        nonlocal per_m_checked
        v = variation(n)
        lo_ok = Fraction(v, 8) <= norm
        hi_ok = norm <= v
        if strict and not (lo_ok and hi_ok):
            raise RuntimeError(
                f"Lebesgue bound violated at n={n}: V={v}, ||D_n||_1={norm}"
            )
        rows.append(
            (n, v, render_exact(norm), render_decimal(norm), int(lo_ok), int(hi_ok), origin)
        )
        per_m_checked += 1

    for n in range(1, n_max + 1):
        res = n.bit_length() + 1
        kern = dirichlet_closed(n, res)
        nums, exp = kern.dyadic_ints()
        norm = Fraction(int(np.abs(nums).sum()), 1 << (exp + res))
        one(n, norm, "exhaustive")
    if samples:
        rng = np.random.default_rng([seed, 101])
        draws = rng.integers(1, (1 << sample_top_bit) + 1, size=samples)
        for n in draws:
            one(int(n), dirichlet_l1_norm(int(n)), "sample")
    return ExperimentReport(
        experiment="lebesgue-sweep",
        params={"n_max": n_max, "samples": samples, "sample_top_bit": sample_top_bit},
        columns=("n", "V", "norm_exact", "norm_decimal", "lower_ok", "upper_ok", "origin"),
        rows=rows,
        seed=seed,
        runtime_s=time.time() - t0,
        summary={"checked": per_m_checked},
    )


# --- partial-sum norm sweep -------------------------------------------------


def _random_step_function(rng: np.random.Generator, resolution: int) -> StepFunction:
    nums = rng.integers(-16, 17, size=1 << resolution, dtype=np.int64)
    exp = int(rng.integers(0, 4))
    return StepFunction.from_dyadic_ints(resolution, nums, exp)


def partial_sum_norm_sweep(
    n_max: int,
    trials: int,
    resolution: int = 10,
    seed: int = 0,
) -> ExperimentReport:
    """Empirical constants for ||S_n F||_1 <= c V(n) ||F||_1 on random functions.

    Records, per n <= n_max, the max over trials of ||S_n F||_1/(V(n)||F||_1),
    all in exact arithmetic; the summary carries the overall constant and the
    constant restricted to n <= 512.
    """
    t0 = time.time()
    if n_max > (1 << resolution):
        raise ValueError(
            f"n_max={n_max} exceeds 2^{resolution}; partial sums saturate there"
        )
    size = 1 << resolution
    best: list[Fraction] = [Fraction(0)] * (n_max + 1)
    wmat = walsh_matrix(resolution)
    vtab = [0] + [variation(n) for n in range(1, n_max + 1)]
    for trial in range(trials):
        rng = np.random.default_rng([seed, 202, trial])
        f = _random_step_function(rng, resolution)
        nums, exp = f.dyadic_ints()
        fnorm_num = int(np.abs(nums).sum())  # ||F||_1 = fnorm_num / 2^(exp+N)
        if fnorm_num == 0:
            continue
        cmat = _wht_ints(nums, resolution)
        s = np.zeros(size, dtype=np.int64)
        for n in range(1, n_max + 1):
            ck = cmat[n - 1]
            if ck:
                s = s + ck * wmat[n - 1].astype(np.int64)
            snorm_num = int(np.abs(s).sum())
            # snorm_num/2^(e+2N) against V * fnorm_num/2^(e+N): the 2^e cancel
            ratio = Fraction(snorm_num, (vtab[n] * fnorm_num) << resolution)
            if ratio > best[n]:
                best[n] = ratio
    rows = []
    overall = Fraction(0)
    low_range = Fraction(0)
    for n in range(1, n_max + 1):
        rows.append((n, vtab[n], render_exact(best[n]), render_decimal(best[n])))
        if best[n] > overall:
            overall = best[n]
        if n <= 512 and best[n] > low_range:
            low_range = best[n]
    return ExperimentReport(
        experiment="snorm-sweep",
        params={"n_max": n_max, "trials": trials, "N": resolution},
        columns=("n", "V", "max_ratio_exact", "max_ratio_decimal"),
        rows=rows,
        seed=seed,
        runtime_s=time.time() - t0,
        summary={"constant": overall, "constant_n_le_512": low_range},
    )


# --- conjecture exploration --------------------------------------------------


def window_family_name(kind: str) -> str:
    return {
        "powers": "per-window singleton {2^s}",
        "allones": "per-window singleton {2^(s+1)-1}",
        "random": "seeded random windows",
    }[kind]


def make_window_family(kind: str, s_values, per_window: int = 3, seed: int = 0) -> dict:
    """Canned window families for the boundary-cardinality explorer."""
    windows: dict[int, list[int]] = {}
    for s in s_values:
        if kind == "powers":
            windows[s] = [1 << s]
        elif kind == "allones":
            windows[s] = [(1 << (s + 1)) - 1]
        elif kind == "random":
            rng = np.random.default_rng([seed, 303, s])
            lo, hi = 1 << s, 1 << (s + 1)
            count = min(per_window, hi - lo)
            windows[s] = sorted(int(v) for v in rng.choice(hi - lo, size=count, replace=False) + lo)
        else:
            raise ValueError(f"unknown window family kind {kind!r}")
    return windows


def conjecture_explorer(
    windows: dict,
    resolution: int,
    seed: int = 0,
    trials: int = 5,
) -> ExperimentReport:
    """Boundary-cardinality weights |A_s| and maximal-mean ratios; data only.

    For each declared window this records |A_s| and the window spread, then
    for the kernel-difference family and seeded random functions it records
    ||sup |S_n f| / |A_(|n|)| ||_1 / ||f||_H1 over the declared indices.
    No verdict is drawn from these numbers.
    """
    t0 = time.time()
    family = WeightFamily.boundary_card(windows)
    idx = IndexSet.from_windows(windows)
    rows = []
    for s in sorted(windows):
        members = windows[s]
        bset = boundary_set(members, s)
        prof = window_profile(members, s)
        rows.append(
            ("window", s, len(members), bset.cardinality, prof.rho_s, "", "", "")
        )
    cases = []
    for n_k in range(3, resolution):
        cases.append((f"kernel-diff {n_k}", counterexample(n_k, resolution)))
    for t in range(trials):
        rng = np.random.default_rng([seed, 404, t])
        cases.append((f"random {t}", _random_step_function(rng, resolution)))
    for label, f in cases:
        wm = weighted_maximal(f, family, idx)
        h = Fraction(hp_norm(f, 1))
        if h == 0:
            continue
        ratio = Fraction(lp_norm(wm, 1)) / h
        rows.append(
            ("function", "", "", "", "", label, render_exact(ratio), render_decimal(ratio))
        )
    return ExperimentReport(
        experiment="conjecture-explorer",
        params={"windows": {s: list(m) for s, m in sorted(windows.items())}, "N": resolution, "trials": trials},
        columns=("kind", "s", "members", "a_card", "rho_s", "label", "ratio_exact", "ratio_decimal"),
        rows=rows,
        seed=seed,
        runtime_s=time.time() - t0,
        header_notes=(
            "exploratory: boundary-cardinality weight data only; no claim is verified",
        ),
    )
