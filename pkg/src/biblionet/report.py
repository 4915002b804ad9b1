"""Figure rendering for the CLI report paths.

Every function draws one figure to a file and returns the path.  Rendering
is headless (Agg); figures are illustrative companions to the delimited
outputs, not data carriers, so nothing here feeds back into analysis.
"""
from __future__ import annotations

import warnings

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection
from scipy.cluster import hierarchy as scipy_hierarchy

from .geo import ContingencyTable, CountryActivity, CountryClassification
from .network import KeywordGraph
from .themes import ThemeModel, word_cloud

_DPI = 150


def save_activity_figure(activity: CountryActivity, path: str) -> str:
    """Horizontal bars of authored vs studied paper counts per country."""
    countries = activity.countries()
    authored = [activity.authored.get(c, 0) for c in countries]
    studied = [activity.studied.get(c, 0) for c in countries]
    height = max(2.5, 0.35 * len(countries) + 1.5)
    fig, ax = plt.subplots(figsize=(7, height))
    y = np.arange(len(countries))
    ax.barh(y + 0.2, authored, height=0.38, label="authored", color="#33658a")
    ax.barh(y - 0.2, studied, height=0.38, label="studied", color="#f26419")
    ax.set_yticks(y)
    ax.set_yticklabels(countries)
    ax.invert_yaxis()
    ax.set_xlabel("papers")
    ax.set_title(
        f"Country activity {activity.period.from_year}-{activity.period.to_year}"
    )
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_residual_figure(
    table: ContingencyTable, residuals: np.ndarray, path: str
) -> str:
    """Country x column heatmap of standardized residuals, diverging palette
    centered at zero with the +-2 bands where labels flip."""
    limit = max(2.5, float(np.abs(residuals).max()))
    fig, ax = plt.subplots(
        figsize=(1.0 + 0.8 * len(table.cols), 1.2 + 0.4 * len(table.rows))
    )
    image = ax.imshow(residuals, cmap="RdBu_r", vmin=-limit, vmax=limit, aspect="auto")
    ax.set_xticks(range(len(table.cols)))
    ax.set_xticklabels(table.cols, rotation=30, ha="right")
    ax.set_yticks(range(len(table.rows)))
    ax.set_yticklabels(table.rows)
    for i in range(len(table.rows)):
        for j in range(len(table.cols)):
            ax.text(
                j, i, f"{residuals[i, j]:.2f}",
                ha="center", va="center", fontsize=7,
            )
    fig.colorbar(image, ax=ax, label="standardized residual")
    ax.set_title("Representation residuals")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _linkage_matrix(classification: CountryClassification) -> np.ndarray:
    n = len(classification.countries)
    sizes = {i: 1 for i in range(n)}
    z = np.zeros((len(classification.merges), 4), dtype=np.float64)
    for i, (a, b, height) in enumerate(classification.merges):
        size = sizes[a] + sizes[b]
        sizes[n + i] = size
        z[i] = (a, b, height, size)
    return z


def save_dendrogram_figure(classification: CountryClassification, path: str) -> str:
    """Agglomeration tree over countries; leaf order follows the merges."""
    fig, ax = plt.subplots(figsize=(1.0 + 0.45 * len(classification.countries), 4.5))
    if classification.merges:
        # All-zero merge heights collapse the y axis; scipy warns while
        # auto-expanding, so silence that one case and set the limits here.
        all_zero = max(classification.heights) == 0.0
        with warnings.catch_warnings():
            if all_zero:
                warnings.filterwarnings(
                    "ignore", message="Attempting to set identical low and high ylims"
                )
            scipy_hierarchy.dendrogram(
                _linkage_matrix(classification),
                labels=list(classification.countries),
                ax=ax,
                color_threshold=0.0,
                above_threshold_color="#33658a",
            )
        if all_zero:
            ax.set_ylim(0.0, 1.0)
        ax.set_ylabel("merge height")
        ax.set_title(f"Country classification (k={classification.k})")
        fig.tight_layout()
    else:
        ax.text(0.5, 0.5, "single country, nothing to merge", ha="center", va="center")
        ax.set_axis_off()
        ax.set_title(f"Country classification (k={classification.k})")
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_network_figure(
    graph: KeywordGraph,
    partition: dict[str, int],
    positions: dict[str, tuple[float, float]],
    path: str,
    max_labels: int = 25,
) -> str:
    """Spatialized keyword network: edges faded by weight, nodes sized by
    document frequency and colored by community, heaviest nodes labeled."""
    order = sorted(graph.nodes)
    fig, ax = plt.subplots(figsize=(8, 8))
    if graph.edges:
        max_w = max(graph.edges.values())
        segments = [
            (positions[a], positions[b]) for (a, b) in graph.edges
        ]
        alphas = [0.15 + 0.55 * (w / max_w) for w in graph.edges.values()]
        lines = LineCollection(segments, colors=[(0.3, 0.3, 0.3, a) for a in alphas], linewidths=0.8)
        ax.add_collection(lines)
    if order:
        xs = [positions[u][0] for u in order]
        ys = [positions[u][1] for u in order]
        freq = np.array([graph.nodes[u] for u in order], dtype=np.float64)
        sizes = 20.0 + 180.0 * freq / freq.max()
        colors = [partition[u] % 20 for u in order]
        ax.scatter(
            xs, ys, s=sizes, c=colors, cmap="tab20", vmin=0, vmax=19,
            zorder=2, edgecolors="white", linewidths=0.5,
        )
        for u in sorted(order, key=lambda u: -graph.nodes[u])[:max_labels]:
            ax.annotate(
                u, positions[u], fontsize=7, ha="center", va="bottom",
                xytext=(0, 4), textcoords="offset points",
            )
    else:
        ax.text(0.5, 0.5, "empty graph", ha="center", va="center")
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-0.05, 1.05)
    ax.set_axis_off()
    ax.set_title("Keyword co-occurrence network")
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def save_clouds_figure(model: ThemeModel, path: str, top_n: int = 12) -> str:
    """Grid of word clouds, one panel per theme; term size tracks in-theme
    frequency, panel title carries the document count."""
    ncols = int(np.ceil(np.sqrt(model.k)))
    nrows = int(np.ceil(model.k / ncols))
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.6 * nrows), squeeze=False)
    cmap = plt.get_cmap("tab10")
    for theme in model.themes:
        ax = axes[theme.id // ncols][theme.id % ncols]
        cloud = word_cloud(model, theme.id, top_n=top_n)
        color = cmap((cloud.color_rank - 1) % 10)
        for rank, entry in enumerate(cloud.entries):
            ax.text(
                0.5,
                1.0 - (rank + 0.5) / max(len(cloud.entries), 1),
                entry.term,
                fontsize=6.0 + 12.0 * float(entry.relative_size),
                color=color,
                ha="center",
                va="center",
            )
        ax.set_title(f"theme {theme.id} ({cloud.doc_count} docs)", fontsize=9)
        ax.set_axis_off()
    for idx in range(model.k, nrows * ncols):
        axes[idx // ncols][idx % ncols].set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
