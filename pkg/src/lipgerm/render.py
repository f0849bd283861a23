"""SVG rendering of plane links and reduction snapshots.

Figures are written with matplotlib's SVG backend; the report helpers
also emit a tab-separated table of the plotted link next to the figures
so the numbers behind every picture stay machine-readable.
"""

from __future__ import annotations

import os
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .germ import PolygonalGerm, plane_link  # noqa: E402


def render_link(
    g: PolygonalGerm,
    t: float,
    path: str,
    title: Optional[str] = None,
) -> str:
    link = plane_link(g, t, check=False)
    fig, ax = plt.subplots(figsize=(5, 5))
    for ci, (pts, closed) in enumerate(link.components):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if closed:
            xs = xs + [xs[0]]
            ys = ys + [ys[0]]
        ax.plot(xs, ys, marker="o", markersize=3, label=f"component {ci}")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(title or f"plane link at t = {t:g}")
    ax.legend(loc="best", fontsize=8)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def write_link_table(g: PolygonalGerm, t: float, path: str) -> str:
    """Tab-separated vertex table matching a rendered link figure."""
    link = plane_link(g, t, check=False)
    rows = ["component\tclosed\tvertex\tx\ty"]
    for ci, (pts, closed) in enumerate(link.components):
        for vi, (x, y) in enumerate(pts):
            rows.append(f"{ci}\t{int(closed)}\t{vi}\t{x!r}\t{y!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")
    return path


def render_report(g: PolygonalGerm, t: float, outdir: str, stem: str = "link") -> List[str]:
    """Figure plus its delimited data table, side by side."""
    os.makedirs(outdir, exist_ok=True)
    svg = render_link(g, t, os.path.join(outdir, stem + ".svg"))
    tsv = write_link_table(g, t, os.path.join(outdir, stem + ".tsv"))
    return [svg, tsv]


def render_reduction(
    germs: Sequence[PolygonalGerm],
    t: float,
    outdir: str,
    labels: Optional[Sequence[str]] = None,
) -> List[str]:
    """One snapshot per pipeline stage (initial germ first)."""
    os.makedirs(outdir, exist_ok=True)
    out = []
    for i, g in enumerate(germs):
        label = labels[i] if labels else f"step {i}"
        path = os.path.join(outdir, f"step_{i:03d}.svg")
        out.append(render_link(g, t, path, title=label))
    return out
