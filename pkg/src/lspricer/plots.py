"""Matplotlib renderings of the tree, XVA split, and convergence reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .pricer import ValuedTree  # noqa: E402
from .xva import XvaBreakdown  # noqa: E402


def tree_figure(tree: ValuedTree, title: str = "Binomial tree"):
    """Fan plot of the lattice with per-node value and discount rate."""
    lat = tree.lattice
    fig, ax = plt.subplots(figsize=(1.8 * (lat.n_steps + 2), 6))
    annotate = lat.n_steps <= 6
    for i in range(lat.n_steps + 1):
        prices = lat.level_prices(i)
        for j, s in enumerate(prices):
            if i < lat.n_steps:
                for jj in (j, j + 1):
                    ax.plot([i, i + 1], [s, lat.node_price(i + 1, jj)],
                            color="0.75", lw=0.8, zorder=1)
            ax.plot([i], [s], "o", color="tab:blue", ms=4, zorder=2)
            if annotate:
                label = f"S={s:.3f}\nV={tree.values[i][j]:.3f}"
                if i < lat.n_steps:
                    label += f"\nr={tree.rates[i][j]:.2%}"
                ax.annotate(label, (i, s), textcoords="offset points",
                            xytext=(6, 4), fontsize=8)
    ax.set_xlabel("step")
    ax.set_ylabel("stock price")
    ax.set_title(title)
    fig.tight_layout()
    return fig


def xva_figure(breakdown: XvaBreakdown):
    """Bar chart of the four components against the total adjustment."""
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = ["cva", "cfa", "-dva", "-dfa", "CRA"]
    heights = [breakdown.cva, breakdown.cfa, -breakdown.dva, -breakdown.dfa,
               breakdown.cra]
    colors = ["tab:red", "tab:orange", "tab:green", "tab:olive", "tab:blue"]
    ax.bar(labels, heights, color=colors)
    ax.axhline(0.0, color="0.4", lw=0.8)
    ax.set_ylabel("adjustment")
    ax.set_title(f"XVA decomposition ({breakdown.method})")
    fig.tight_layout()
    return fig


def convergence_figure(steps, errors, pde_error: float | None = None):
    """Log-log tree error against step count, with the PDE error as a line."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(steps, errors, "o-", label="|tree - closed form|")
    if pde_error is not None:
        ax.axhline(pde_error, color="tab:red", ls="--",
                   label="|PDE - closed form|")
    ax.set_xlabel("steps")
    ax.set_ylabel("absolute error")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig


def save_figure(fig, path) -> None:
    fig.savefig(path, dpi=150)
    plt.close(fig)
