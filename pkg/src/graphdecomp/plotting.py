"""Static figures written next to experiment CSV files."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_rows(rows, path) -> Path | None:
    """Treewidth and clustering against graph order, one marker per row."""
    if not rows:
        return None
    path = Path(path)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ns = [r.n for r in rows]
    ax1.plot(ns, [r.tw_hi for r in rows], "o-", label="upper")
    ax1.plot(ns, [r.tw_lo for r in rows], "s--", label="lower")
    ax1.set_xlabel("vertices")
    ax1.set_ylabel("treewidth")
    ax1.legend(frameon=False)
    ax2.plot(ns, [r.clustering for r in rows], "o-", color="tab:red")
    ax2.set_xlabel("vertices")
    ax2.set_ylabel("clustering")
    fig.suptitle(f"{rows[0].pipeline} on {rows[0].family}")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_bounds(bounds, path) -> Path | None:
    """Measured treewidth ratio next to clustering^h on log axes (qualitative)."""
    if not bounds:
        return None
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    xs = range(len(bounds))
    ax.semilogy(xs, [float(b["ratio"]) for b in bounds], "o-", label="tw(G) / tw(G')")
    ax.semilogy(xs, [max(b["clustering_pow_h"], 1) for b in bounds], "s--", label="clustering^h")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([b["graph_id"].split("-", 1)[-1] for b in bounds], rotation=30, fontsize=7)
    ax.set_title("qualitative comparison")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
