"""Residual-history figures for the command-line reports.

matplotlib is imported lazily with the Agg backend so headless runs
and library users who never plot pay nothing for it.
"""

from __future__ import annotations

from collections.abc import Sequence


def save_residual_plot(
    path: str,
    series: Sequence[tuple[str, Sequence[float]]],
    title: str | None = None,
    xlabel: str = "iteration",
    ylabel: str = "residual norm",
) -> None:
    """Render residual histories on a log scale and save to path.

    series is a list of (label, residual_norms) pairs; each history is
    plotted against its iteration index. Zero entries are clipped to the
    smallest positive value so exact convergence does not break the log
    axis.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, norms in series:
        values = [float(v) for v in norms]
        positive = [v for v in values if v > 0.0]
        floor = min(positive) if positive else 1.0
        clipped = [v if v > 0.0 else floor for v in values]
        ax.semilogy(range(len(clipped)), clipped, label=label, linewidth=1.4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if series:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
