"""Matplotlib rendering for covers and count tables."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from .counting import count_recurrence
from .covers import SaturatedCover, iter_saturated_covers
from .grid import GridShape, points

EDGE_COLOR = "#1a1a2e"
SKELETON_COLOR = "#c8c8d0"
POINT_COLOR = "#16213e"


def draw_cover(cover: SaturatedCover, ax) -> None:
    """Draw one cover onto an axes: admitted edges solid over a faint
    grid skeleton."""
    m, n = cover.shape
    for i in range(m + 1):
        ax.plot([i, i], [0, n], color=SKELETON_COLOR, lw=0.8, zorder=1)
    for j in range(n + 1):
        ax.plot([0, m], [j, j], color=SKELETON_COLOR, lw=0.8, zorder=1)
    for pt in cover.horizontal:
        ax.plot([pt.i, pt.i + 1], [pt.j, pt.j], color=EDGE_COLOR, lw=2.6, zorder=2)
    for pt in cover.vertical:
        ax.plot([pt.i, pt.i], [pt.j, pt.j + 1], color=EDGE_COLOR, lw=2.6, zorder=2)
    xs = [p.i for p in points(cover.shape)]
    ys = [p.j for p in points(cover.shape)]
    ax.scatter(xs, ys, s=26, color=POINT_COLOR, zorder=3)
    ax.set_xlim(-0.45, m + 0.45)
    ax.set_ylim(-0.45, n + 0.45)
    ax.set_aspect("equal")
    ax.axis("off")


def save_cover(cover: SaturatedCover, path: str | Path) -> Path:
    m, n = cover.shape
    fig = Figure(figsize=(1.2 + 0.9 * m, 1.2 + 0.9 * n))
    draw_cover(cover, fig.add_subplot(111))
    return _save(fig, path)


def save_gallery(shape: GridShape, path: str | Path, columns: int = 8) -> Path:
    """One panel per saturated cover of the shape, in enumeration order."""
    covers = list(iter_saturated_covers(shape))
    cols = min(columns, len(covers)) or 1
    rows = math.ceil(len(covers) / cols) or 1
    m, n = shape
    fig = Figure(figsize=(cols * (0.7 + 0.55 * m), rows * (0.8 + 0.55 * n)))
    for idx, cover in enumerate(covers):
        ax = fig.add_subplot(rows, cols, idx + 1)
        draw_cover(cover, ax)
        ax.set_title(str(idx), fontsize=7, pad=2)
    fig.suptitle(f"saturated covers on a {m} x {n} grid: {len(covers)}")
    return _save(fig, path)


def save_count_heatmap(max_m: int, max_n: int, path: str | Path) -> Path:
    """Log-scale heatmap of saturated counts with annotated cells."""
    table = [
        [count_recurrence(m, n) for n in range(max_n + 1)]
        for m in range(max_m + 1)
    ]
    logs = [[math.log10(v) for v in row] for row in table]
    fig = Figure(figsize=(1.6 + 0.85 * (max_n + 1), 1.3 + 0.7 * (max_m + 1)))
    ax = fig.add_subplot(111)
    im = ax.imshow(logs, cmap="viridis", origin="lower", aspect="auto")
    for m in range(max_m + 1):
        for n in range(max_n + 1):
            v = table[m][n]
            label = str(v) if v < 10 ** 7 else f"1e{math.log10(v):.1f}"
            ax.text(n, m, label, ha="center", va="center", fontsize=7,
                    color="white" if logs[m][n] < max(map(max, logs)) * 0.6 else "black")
    ax.set_xlabel("n")
    ax.set_ylabel("m")
    ax.set_xticks(range(max_n + 1))
    ax.set_yticks(range(max_m + 1))
    ax.set_title("saturated transfer systems")
    fig.colorbar(im, ax=ax, label="log10 count")
    return _save(fig, path)


def _save(fig: Figure, path: str | Path) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=160, bbox_inches="tight")
    plt.close("all")
    return out
