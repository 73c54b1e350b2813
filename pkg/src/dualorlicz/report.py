"""Result persistence: delimited output plus rendered figures.

CSV files are the machine contract and are byte-identical for identical
configs and seeds (floats are written with shortest round-trip repr, no
timestamps).  Figures are a convenience rendered next to each CSV; they
never feed back into any computation.
"""

from __future__ import annotations

import csv
from pathlib import Path


def format_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: Path, header: list[str], rows: list[dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(row[col]) for col in header])
    return path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_body_figure(path: Path, bodies_on_grid: list, title: str = "") -> Path | None:
    """Radial outlines of n = 2 bodies (skipped silently for n != 2)."""
    if not bodies_on_grid or bodies_on_grid[0].grid.dimension != 2:
        return None
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    for bog in bodies_on_grid:
        pts = bog.grid.nodes * bog.rho.values[:, None]
        closed = list(range(len(pts))) + [0]
        ax.plot(pts[closed, 0], pts[closed, 1], label=bog.body.label[:40])
    ax.axhline(0, color="gray", lw=0.4)
    ax.axvline(0, color="gray", lw=0.4)
    ax.set_aspect("equal")
    ax.legend(fontsize=7, loc="upper right")
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_trace_figure(path: Path, trace: list, sense: str = "inf") -> Path | None:
    """Objective vs. evaluation index for an optimizer run."""
    if not trace:
        return None
    plt = _pyplot()
    idx = [t[0] for t in trace]
    obj = [t[1] for t in trace]
    best = []
    cur = obj[0]
    for v in obj:
        cur = min(cur, v) if sense == "inf" else max(cur, v)
        best.append(cur)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(idx, obj, ".", ms=1.5, alpha=0.35, label="objective")
    ax.plot(idx, best, "-", lw=1.2, label="best so far")
    ax.set_xlabel("evaluation")
    ax.set_ylabel("objective")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_sweep_figure(path: Path, xs: list, series: dict, xlabel: str) -> Path | None:
    if not xs:
        return None
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for name, ys in series.items():
        ax.plot(xs, ys, "o-", ms=3, lw=1.0, label=name)
    ax.set_xlabel(xlabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_margin_figure(path: Path, reports: list) -> Path | None:
    """Minimum margin per check, on a symlog scale."""
    if not reports:
        return None
    plt = _pyplot()
    names = [r.check_id for r in reports]
    margins = [r.min_margin if r.rows else 0.0 for r in reports]
    colors = ["tab:green" if r.verdict == "pass" else
              ("tab:blue" if r.verdict == "recorded" else "tab:red") for r in reports]
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(names) + 1.2))
    ax.barh(range(len(names)), margins, color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xscale("symlog", linthresh=1e-12)
    ax.axvline(0, color="k", lw=0.6)
    ax.set_xlabel("minimum margin")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
