"""Figure rendering for experiment reports.

Each sweep report gets a chart saved next to its CSV. The CSV remains the
authoritative, byte-deterministic output; figures are a convenience view.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiments import ExperimentReport


def render_figure(report: ExperimentReport, path) -> Path | None:
    """Render the chart matching the report's experiment; returns the path,
    or None when the experiment has no figure or the report is empty.
    """
    renderers = {
        "weaktype-sweep": _weaktype_figure,
        "lebesgue-sweep": _lebesgue_figure,
        "snorm-sweep": _snorm_figure,
        "conjecture-explorer": _conjecture_figure,
    }
    fn = renderers.get(report.experiment)
    if fn is None or not report.rows:
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig = fn(report)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _weaktype_figure(report: ExperimentReport):
    col = report.columns.index("stat_decimal")
    mcol = report.columns.index("M")
    by_m: dict[int, list[float]] = {}
    for row in report.rows:
        by_m.setdefault(int(row[mcol]), []).append(float(row[col]))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ms = sorted(by_m)
    ax.boxplot([by_m[m] for m in ms], positions=ms, widths=0.6)
    ax.plot(ms, [max(by_m[m]) for m in ms], "o-", color="tab:red", label="per-M max")
    ax.set_xlabel("support depth M")
    ax.set_ylabel("weak-L1 statistic")
    ax.set_title("Weak-type statistics of random atoms (variation weight)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _lebesgue_figure(report: ExperimentReport):
    ncol = report.columns.index("n")
    vcol = report.columns.index("V")
    dcol = report.columns.index("norm_decimal")
    ocol = report.columns.index("origin")
    ns, ratios = [], []
    for row in report.rows:
        if row[ocol] != "exhaustive":
            continue
        n, v, norm = int(row[ncol]), int(row[vcol]), float(row[dcol])
        ns.append(n)
        ratios.append(norm / v)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ns, ratios, ",", alpha=0.5)
    ax.axhline(1.0, color="tab:red", lw=1, label="upper bound V(n)")
    ax.axhline(1 / 8, color="tab:green", lw=1, label="lower bound V(n)/8")
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("||D_n||_1 / V(n)")
    ax.set_title("Lebesgue constants against the variation bounds")
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _snorm_figure(report: ExperimentReport):
    ncol = report.columns.index("n")
    rcol = report.columns.index("max_ratio_decimal")
    ns = [int(r[ncol]) for r in report.rows]
    ratios = [float(r[rcol]) for r in report.rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ns, ratios, ".", ms=2)
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("max over trials of ||S_n F||_1 / (V(n) ||F||_1)")
    ax.set_title("Empirical partial-sum norm constants")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _conjecture_figure(report: ExperimentReport):
    kcol = report.columns.index("kind")
    scol = report.columns.index("s")
    acol = report.columns.index("a_card")
    lcol = report.columns.index("label")
    rcol = report.columns.index("ratio_decimal")
    ss, cards = [], []
    labels, ratios = [], []
    for row in report.rows:
        if row[kcol] == "window":
            ss.append(int(row[scol]))
            cards.append(int(row[acol]))
        else:
            labels.append(str(row[lcol]))
            ratios.append(float(row[rcol]))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    ax1.step(ss, cards, where="mid")
    ax1.set_xlabel("window exponent s")
    ax1.set_ylabel("|A_s|")
    ax1.set_title("Boundary-set cardinalities")
    ax1.grid(True, alpha=0.3)
    ax2.bar(range(len(ratios)), ratios)
    ax2.set_xticks(range(len(labels)))
    ax2.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
    ax2.set_ylabel("maximal mean / H1 norm")
    ax2.set_title("Cardinality-weighted maximal ratios (exploratory)")
    ax2.grid(True, alpha=0.3, axis="y")
    fig.tight_layout()
    return fig
