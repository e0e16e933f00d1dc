"""Figures for verification reports, written next to a CSV of the plotted numbers."""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .exactalg import dot  # noqa: E402

# fixed metadata keeps PNG bytes stable across runs
_PNG_META = {"Software": None}


def _style(ax, title: str, xlabel: str, ylabel: str) -> None:
    ax.set_title(title, fontsize=11)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)


def _slug(text: str) -> str:
    keep = [c if c.isalnum() or c in "-_." else "_" for c in text]
    return "".join(keep).strip("_") or "dataset"


def cancellation_figure(report: dict, outdir: str, stem: str | None = None) -> tuple[str, str]:
    """Plot both partition sums across the tested window; returns (png, csv) paths."""
    os.makedirs(outdir, exist_ok=True)
    stem = stem or _slug(f"{report['dataset']}_{report['theorem']}_{report['witnesses'].get('mode', '')}")
    png, csv_path = os.path.join(outdir, stem + ".png"), os.path.join(outdir, stem + ".csv")
    rows = report["witnesses"].get("counts", [])
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "sum_plus", "sum_minus"])
        for l, plus, minus in rows:
            writer.writerow([" ".join(map(str, l)) if isinstance(l, list) else l, plus, minus])

    xs = list(range(len(rows))) if rows and isinstance(rows[0][0], list) else [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.plot(xs, [r[1] for r in rows], "o-", ms=3, label="sum over Q+")
    ax.plot(xs, [r[2] for r in rows], "x--", ms=4, label="sum over Q-")
    xlabel = "tested exponent (ordered by degree)" if rows and isinstance(rows[0][0], list) else "l"
    _style(ax, f"{report['dataset']}: {report['verdict']}", xlabel, "count")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(png, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return png, csv_path


def moment_figure(fps, partition, outdir: str, stem: str) -> str | None:
    """Moment images of the fixed points coloured by partition class (rank 1 or 2)."""
    if fps.rank > 2:
        return None
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, stem + ".png")
    fig, ax = plt.subplots(figsize=(4.0, 4.0))
    for names, marker, label in ((partition.Q_plus, "o", "Q+"), (partition.Q_minus, "s", "Q-")):
        pts = [fps.point(n).moment for n in names]
        xs = [p[0] for p in pts]
        ys = [p[1] if fps.rank == 2 else 0 for p in pts]
        ax.scatter(xs, ys, marker=marker, s=40, label=label)
        for n, x, y in zip(names, xs, ys):
            ax.annotate(n, (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)
    for p in fps.points:
        for w in p.weights:
            x0, y0 = p.moment[0], p.moment[1] if fps.rank == 2 else 0
            dx, dy = w[0], w[1] if fps.rank == 2 else 0
            scale = 0.25 / max(1, abs(dx), abs(dy))
            ax.arrow(x0, y0, dx * scale, dy * scale, head_width=0.03, length_includes_head=True, alpha=0.5)
    _style(ax, "moment images", "J1", "J2" if fps.rank == 2 else "")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return path


def degree_profile(rows, w) -> list[tuple[int, int, int]]:
    """Aggregate vector-exponent count rows by degree <w, l>."""
    acc: dict[int, list[int]] = {}
    for l, plus, minus in rows:
        d = dot(w, l)
        slot = acc.setdefault(d, [0, 0])
        slot[0] += plus
        slot[1] += minus
    return [(d, a, b) for d, (a, b) in sorted(acc.items())]
