"""SVG rendering of CDF curves with matplotlib (static, byte-stable output)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SIZE_PX = 800
DPI = 72


def render_curves(curves: Sequence[tuple[str, Sequence[float], Sequence[float]]], path,
                  title: str = "") -> Path:
    """One polyline per ``(label, xs, Fs)`` on the unit square, written as SVG."""
    path = Path(path)
    with plt.rc_context({"svg.hashsalt": "singcdf", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(SIZE_PX / DPI, SIZE_PX / DPI), dpi=DPI)
        cmap = plt.get_cmap("viridis")
        for i, (label, xs, fs) in enumerate(curves):
            color = cmap(i / max(1, len(curves) - 1))
            ax.plot(xs, fs, lw=1.2, color=color, label=label)
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("F(x)")
        if title:
            ax.set_title(title)
        if len(curves) > 1:
            ax.legend(loc="upper left", fontsize=9, frameon=False)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
