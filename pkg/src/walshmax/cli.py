"""Command-line front end.

One subcommand per core computation or experiment. Sweeps write a CSV
(byte-identical under a fixed seed) and, unless --no-figures is given, a
PNG chart next to it. All randomness is controlled by --seed (default 0).

Exit codes: 0 success, 2 invalid arguments or parameters, 1 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import experiments
from .dyadic import (
    lp_norm,
    load_step_function,
    save_step_function,
)
from .experiments import (
    ExperimentReport,
    blowup_ratio,
    conjecture_explorer,
    default_report_path,
    lebesgue_sweep,
    make_window_family,
    partial_sum_norm_sweep,
    render_decimal,
    weak_type_sweep,
)
from .hardy import Atom, hp_norm, validate_atom
from .indexing import blocks, boundary_set, index_profile, window_profile
from .transform import dirichlet_direct, dirichlet_l1_norm, partial_sum


def _positive(kind=int):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return parse


def _fmt(value) -> str:
    """Plain exact rational for terminal display, e.g. 3/2."""
    return str(Fraction(value))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="walshmax",
        description=(
            "Exact Walsh-Fourier analysis on the dyadic group: binary index "
            "combinatorics, Dirichlet kernels, Hardy-space atoms, and weighted "
            "maximal operators of partial sums."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "index",
        help="binary digit profile of n",
        description="Lowest/highest set bit, their gap, and the digit variation V(n).",
    )
    p.add_argument("n", type=_positive())

    p = sub.add_parser(
        "blocks",
        help="maximal 1-runs of n",
        description="Maximal runs of consecutive 1-digits (lo, hi), reassembling to n.",
    )
    p.add_argument("n", type=_positive())

    p = sub.add_parser(
        "boundary",
        help="boundary set of a window family",
        description=(
            "Union of the 1-run endpoints over indices inside [2^s, 2^(s+1)), "
            "with the window spread statistics."
        ),
    )
    p.add_argument("--s", type=int, required=True, help="window exponent")
    p.add_argument("indices", type=_positive(), nargs="+")

    p = sub.add_parser(
        "dirichlet",
        help="Dirichlet kernel and its exact L1 norm",
        description=(
            "The kernel D_n = w_0 + ... + w_(n-1); its L1 norm (the Lebesgue "
            "constant) lies between V(n)/8 and V(n)."
        ),
    )
    p.add_argument("--n", type=_positive(), required=True)
    p.add_argument("--resolution", type=int, default=None, help="default: minimal (|n|+1)")
    p.add_argument("--norm", action="store_true", help="print only the exact L1 norm")
    p.add_argument("--output", type=Path, default=None, help="write the kernel as a fixture file")

    p = sub.add_parser(
        "partial-sum",
        help="n-term partial sum of a fixture function",
        description="S_n f from the exact Walsh spectrum of a step-function fixture.",
    )
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--n", type=_positive(), required=True)
    p.add_argument("--output", type=Path, default=None, help="write S_n f as a fixture file")

    p = sub.add_parser(
        "hpnorm",
        help="Hardy-space norm of a fixture function",
        description="||max_m |S_(2^m) f|||_p; exact for p = 1.",
    )
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--p", type=Fraction, default=Fraction(1))

    p = sub.add_parser(
        "atom-check",
        help="validate the three atom conditions",
        description=(
            "Checks support inside I_M, exactly zero mean, and the sup bound "
            "2^(M/p), reporting which condition fails."
        ),
    )
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--support-depth", type=int, required=True, metavar="M")
    p.add_argument("--p", type=Fraction, default=Fraction(1))

    p = sub.add_parser(
        "blowup",
        help="maximal-mean growth of the kernel-difference family",
        description=(
            "||sup_n |S_n f|/V(n)||_1 / ||f||_H1 for the difference of dyadic "
            "Dirichlet kernels at n_k; witness mode uses only the indices "
            "2^n_k + 2^s and is an exact lower bound of at least n_k/8."
        ),
    )
    p.add_argument("--nk", type=int, required=True)
    p.add_argument("--mode", choices=("auto", "full", "witness"), default="auto")
    p.add_argument("--resolution", type=int, default=None)

    p = sub.add_parser(
        "weaktype-sweep",
        help="weak-L1 statistics of random atoms",
        description=(
            "For seeded random 1-atoms at each support depth M, the exact "
            "statistic sup_t t*mu{outside I_M : sup_n |S_n a|/V(n) >= t}; "
            "uniform boundedness over M is the expected behavior."
        ),
    )
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--m-min", type=int, default=4)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--resolution", type=int, default=12)
    _sweep_common(p)

    p = sub.add_parser(
        "lebesgue-sweep",
        help="Lebesgue constants against the variation bounds",
        description=(
            "Exact ||D_n||_1 for every n up to n-max plus seeded samples, "
            "checking V(n)/8 <= ||D_n||_1 <= V(n)."
        ),
    )
    p.add_argument("--n-max", type=int, default=4096)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--sample-top-bit", type=int, default=20)
    _sweep_common(p)

    p = sub.add_parser(
        "snorm-sweep",
        help="empirical partial-sum norm constants",
        description=(
            "Max over random functions of ||S_n F||_1/(V(n)||F||_1) per n, "
            "the empirical constant of the variation norm bound."
        ),
    )
    p.add_argument("--n-max", type=int, default=2048)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--resolution", type=int, default=10)
    _sweep_common(p)

    p = sub.add_parser(
        "conjecture",
        help="boundary-cardinality weight exploration (data only)",
        description=(
            "Records |A_s| for a declared window family and the maximal-mean "
            "ratios under the |A_s| weight; exploratory, no verdict."
        ),
    )
    p.add_argument("--family", choices=("powers", "allones", "random"), default="powers")
    p.add_argument("--s-min", type=int, default=3)
    p.add_argument("--s-max", type=int, default=8)
    p.add_argument("--per-window", type=int, default=3)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--resolution", type=int, default=10)
    _sweep_common(p)

    return ap


def _sweep_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker cap for parallel sweeps (default: machine parallelism)",
    )
    p.add_argument("--output", type=Path, default=None, help="CSV path (default: <name>-<timestamp>.csv)")
    p.add_argument(
        "--outdir",
        type=Path,
        default=None,
        help=f"output directory (default: ${experiments.OUTPUT_DIR_ENV} or cwd)",
    )
    p.add_argument("--no-figures", action="store_true", help="skip the PNG chart")


def _finish_report(report: ExperimentReport, args) -> None:
    path = args.output or default_report_path(report.experiment, args.outdir)
    report.write_csv(path)
    print(f"{report.experiment}: {len(report.rows)} rows -> {path} "
          f"[seed={report.seed}, {report.runtime_s:.2f}s]")
    if not args.no_figures:
        from .figures import render_figure

        figpath = render_figure(report, Path(path).with_suffix(".png"))
        if figpath is not None:
            print(f"figure -> {figpath}")


def _cmd_index(args) -> int:
    prof = index_profile(args.n)
    print(f"low={prof.low} high={prof.high} rho={prof.gap} V={prof.variation}")
    return 0


def _cmd_blocks(args) -> int:
    dec = blocks(args.n)
    runs = " ".join(f"({b.lo},{b.hi})" for b in dec.blocks)
    print(f"n={args.n} blocks: {runs}")
    return 0


def _cmd_boundary(args) -> int:
    bset = boundary_set(args.indices, args.s)
    prof = window_profile(args.indices, args.s)
    members = ", ".join(str(u) for u in bset.members)
    print(
        f"A_{args.s} = {{{members}}} cardinality={bset.cardinality} "
        f"s_minus={prof.s_minus} s_plus={prof.s_plus} rho_s={prof.rho_s}"
    )
    return 0


def _cmd_dirichlet(args) -> int:
    res = args.resolution if args.resolution is not None else args.n.bit_length() + 1
    norm = dirichlet_l1_norm(args.n)
    if args.norm:
        print(_fmt(norm))
    else:
        prof = index_profile(args.n)
        print(
            f"n={args.n} V={prof.variation} resolution={res} "
            f"norm={_fmt(norm)} ({render_decimal(norm)})"
        )
    if args.output is not None:
        save_step_function(dirichlet_direct(args.n, res), args.output)
        print(f"kernel -> {args.output}")
    return 0


def _cmd_partial_sum(args) -> int:
    f = load_step_function(args.input)
    s = partial_sum(f, args.n)
    norm = lp_norm(s, 1)
    print(f"||S_{args.n} f||_1 = {_fmt(norm)} ({render_decimal(norm)})")
    if args.output is not None:
        save_step_function(s, args.output)
        print(f"partial sum -> {args.output}")
    return 0


def _cmd_hpnorm(args) -> int:
    f = load_step_function(args.input)
    v = hp_norm(f, args.p)
    if args.p == 1:
        print(f"H_1 norm = {_fmt(v)} ({render_decimal(v)})")
    else:
        print(f"H_{args.p} norm = {v!r}")
    return 0


def _cmd_atom_check(args) -> int:
    f = load_step_function(args.input)
    atom = Atom(p=args.p, support_depth=args.support_depth, values=f)
    check = validate_atom(atom)
    verdict = "valid" if check.ok else "INVALID"
    print(
        f"{verdict} atom (p={args.p}, M={args.support_depth}): "
        f"support={'ok' if check.supported else 'FAIL'} "
        f"mean={'ok' if check.mean_is_zero else 'FAIL'} "
        f"sup={'ok' if check.sup_bounded else 'FAIL'}"
    )
    for msg in check.messages:
        print(f"  - {msg}")
    return 0


def _cmd_blowup(args) -> int:
    if args.nk < 3:
        raise ValueError("--nk must be at least 3 (the family starts there)")
    mode = args.mode
    res = args.resolution if args.resolution is not None else args.nk + 1
    if mode == "auto":
        mode = "full" if res <= experiments.FULL_MODE_RESOLUTION_CAP else "witness"
    ratio = blowup_ratio(args.nk, mode, res)
    print(
        f"blowup(nk={args.nk}, mode={mode}, resolution={res}) = "
        f"{_fmt(ratio)} ({render_decimal(ratio)}); exact witness floor nk/8 = "
        f"{_fmt(Fraction(args.nk, 8))}"
    )
    return 0


def _cmd_weaktype(args) -> int:
    if not (0 < args.m_min <= args.m_max):
        raise ValueError("--m-min/--m-max must satisfy 0 < m-min <= m-max")
    report = weak_type_sweep(
        args.count,
        range(args.m_min, args.m_max + 1),
        args.resolution,
        seed=args.seed,
        threads=args.threads,
    )
    _finish_report(report, args)
    for m, stat in sorted(report.summary["per_m_max"].items()):
        print(f"  M={m}: max statistic {_fmt(stat)} ({render_decimal(stat)})")
    gmax = report.summary["global_max"]
    print(f"  global max {_fmt(gmax)} ({render_decimal(gmax)})")
    return 0


def _cmd_lebesgue(args) -> int:
    report = lebesgue_sweep(
        args.n_max,
        samples=args.samples,
        sample_top_bit=args.sample_top_bit,
        seed=args.seed,
    )
    _finish_report(report, args)
    print(f"  all {report.summary['checked']} kernels inside [V/8, V]")
    return 0


def _cmd_snorm(args) -> int:
    report = partial_sum_norm_sweep(
        args.n_max, args.trials, resolution=args.resolution, seed=args.seed
    )
    _finish_report(report, args)
    c = report.summary["constant"]
    c512 = report.summary["constant_n_le_512"]
    print(
        f"  empirical constant {_fmt(c)} ({render_decimal(c)}); "
        f"n<=512 range {_fmt(c512)} ({render_decimal(c512)})"
    )
    return 0


def _cmd_conjecture(args) -> int:
    windows = make_window_family(
        args.family,
        range(args.s_min, args.s_max + 1),
        per_window=args.per_window,
        seed=args.seed,
    )
    if (1 << (args.s_max + 1)) > (1 << args.resolution):
        raise ValueError("--s-max windows exceed 2^resolution; raise --resolution")
    report = conjecture_explorer(
        windows, args.resolution, seed=args.seed, trials=args.trials
    )
    _finish_report(report, args)
    return 0


_HANDLERS = {
    "index": _cmd_index,
    "blocks": _cmd_blocks,
    "boundary": _cmd_boundary,
    "dirichlet": _cmd_dirichlet,
    "partial-sum": _cmd_partial_sum,
    "hpnorm": _cmd_hpnorm,
    "atom-check": _cmd_atom_check,
    "blowup": _cmd_blowup,
    "weaktype-sweep": _cmd_weaktype,
    "lebesgue-sweep": _cmd_lebesgue,
    "snorm-sweep": _cmd_snorm,
    "conjecture": _cmd_conjecture,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
