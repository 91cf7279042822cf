"""Figures for simulation runs and search-space bounds."""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .partition import coefficient_space_lower_bound  # noqa: E402
from .scenario import CollectResult  # noqa: E402
from .simnet import CAPTURED, FAILED, UP, Network  # noqa: E402

STATUS_COLORS = {UP: "#4c72b0", FAILED: "#c44e52", CAPTURED: "#dd8452"}


def plot_network(net: Network, results: Sequence[CollectResult], path: str | Path) -> Path:
    """Per-node share load coloured by status, and share counts per collected group."""
    path = Path(path)
    fig, (ax_load, ax_groups) = plt.subplots(1, 2, figsize=(12, 4.5), gridspec_kw={"width_ratios": [3, 2]})

    ids = [n.id for n in net.nodes]
    colors = [STATUS_COLORS[n.status] for n in net.nodes]
    ax_load.bar(ids, net.loads(), color=colors, width=0.8)
    ax_load.set_xlabel("sensor id")
    ax_load.set_ylabel("stored shares")
    ax_load.set_title(f"share placement, N={net.size}")
    ax_load.set_xlim(-0.8, net.size - 0.2)
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in STATUS_COLORS.values()]
    ax_load.legend(handles, list(STATUS_COLORS), loc="upper right", frameon=False)

    if results:
        x = range(len(results))
        w = 0.27
        ax_groups.bar([i - w for i in x], [r.report.shares_available for r in results], w, label="available")
        ax_groups.bar(list(x), [r.report.adversary_shares for r in results], w, label="captured")
        ax_groups.bar([i + w for i in x], [r.report.stored for r in results], w, label="stored")
        for i, r in enumerate(results):
            ax_groups.hlines(r.report.shares_needed, i - 1.5 * w, i + 1.5 * w, colors="k", linestyles="--")
        ax_groups.set_xticks(list(x), [f"{i + 1}:{r.scheme}" for i, r in enumerate(results)])
        ax_groups.set_xlim(-1, len(results))
        ax_groups.legend(frameon=False)
    ax_groups.set_ylabel("shares (dashed: threshold k)")
    ax_groups.set_title("collections")
    for ax in (ax_load, ax_groups):
        ax.yaxis.set_major_locator(MaxNLocator(integer=True))

    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_bound(p: int, ks: Sequence[int], path: str | Path) -> Path:
    """Brute-force lower bound and multiset count against k, as log10."""
    path = Path(path)
    bounds = [coefficient_space_lower_bound(p, k) for k in ks]
    fig, ax = plt.subplots(figsize=(6, 4))
    # math.log10 accepts ints far beyond float range
    ax.plot(ks, [math.log10(b[0]) for b in bounds], "o-", label="ceil(p^(k-1)/(k-1)!)")
    ax.plot(ks, [math.log10(b[1]) for b in bounds], "s--", label="C(p+k-2, k-1)")
    ax.set_xlabel("k")
    ax.set_ylabel("log10 coefficient choices")
    ax.set_title(f"brute-force search space, p={p}" if p < 10**6 else f"brute-force search space, {p.bit_length()}-bit p")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
