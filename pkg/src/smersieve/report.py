"""Delimited output and figures for sieve statistics."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .sieve import SieveStats

CSV_COLUMNS = ("n", "T", "step_bound", "phi", "rounds", "messages", "msg_bound", "delta")

# reference long-run average of phi printed next to the measured mean
REFERENCE_MEAN_PHI = 2.47


def stats_row(stats: SieveStats) -> tuple[int, ...]:
    """One CSV row. The messages column is the peak per-process send count,
    the quantity the msg_bound column governs; the run total is available as
    SieveStats.total_messages."""
    return (
        stats.n,
        stats.max_pair_steps,
        stats.step_bound,
        stats.phi,
        stats.total_rounds,
        stats.peak_node_messages,
        stats.msg_bound,
        stats.delta,
    )


def write_stats_csv(stats_list: Iterable[SieveStats], sink: IO[str]) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for stats in stats_list:
        writer.writerow(stats_row(stats))


@dataclass(frozen=True)
class PhiSummary:
    count: int
    mean: float
    reference: float
    over_threshold: tuple[int, ...]  # n values with phi >= 5


def phi_summary(stats_list: Sequence[SieveStats]) -> PhiSummary:
    phis = [s.phi for s in stats_list]
    mean = sum(phis) / len(phis) if phis else 0.0
    over = tuple(s.n for s in stats_list if s.phi >= 5)
    return PhiSummary(len(phis), mean, REFERENCE_MEAN_PHI, over)


def render_phi_figures(stats_list: Sequence[SieveStats], prefix: Path) -> list[Path]:
    """Render the scan figures next to the delimited output.

    Writes <prefix>_phi.png (phi against n) and <prefix>_phi_hist.png
    (distribution of phi with the measured mean and the reference mean).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    summary = phi_summary(stats_list)
    ns = [s.n for s in stats_list]
    phis = [s.phi for s in stats_list]

    scatter_path = prefix.with_name(prefix.name + "_phi.png")
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(ns, phis, ".", markersize=2, color="tab:blue")
    ax.axhline(summary.mean, color="tab:orange", lw=1.2, label=f"mean {summary.mean:.2f}")
    ax.axhline(5.0, color="tab:red", lw=1.0, ls="--", label="threshold 5")
    ax.set_xlabel("n")
    ax.set_ylabel("phi(n)")
    ax.set_title("Step-bound gap phi(n) = n + isqrt(n) - T(n)")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(scatter_path, dpi=150)
    plt.close(fig)

    hist_path = prefix.with_name(prefix.name + "_phi_hist.png")
    fig, ax = plt.subplots(figsize=(6, 4))
    lo, hi = min(phis), max(phis)
    ax.hist(phis, bins=range(lo, hi + 2), align="left", color="tab:blue", rwidth=0.85)
    ax.axvline(summary.mean, color="tab:orange", lw=1.2, label=f"mean {summary.mean:.2f}")
    ax.axvline(summary.reference, color="tab:green", lw=1.2, ls="--",
               label=f"reference {summary.reference}")
    ax.set_xlabel("phi")
    ax.set_ylabel("count")
    ax.set_title("Distribution of phi")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(hist_path, dpi=150)
    plt.close(fig)

    return [scatter_path, hist_path]
