"""Deterministic SVG line charts for result records."""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import PlotError  # noqa: E402

KINDS = {
    # kind: (x label, y label, log x, log y)
    "defect-path": ("path step", "defect", False, True),
    "flow-residual": ("flow step", "|F|_L2", False, True),
    "cs-convergence": ("N", "|CS(N) - CS(2N)|", True, True),
}

_RC = {
    "svg.hashsalt": "flatcs",
    "svg.fonttype": "none",
    "path.simplify": False,
    "font.family": "DejaVu Sans",
}


def series_of(record, kind):
    """``(x, y)`` arrays for ``kind`` from a record's outputs; raises :class:`PlotError`."""
    outputs = getattr(record, "outputs", record) or {}
    series = (outputs.get("series") or {}).get(kind)
    if not series or not series.get("y"):
        raise PlotError(f"record has no {kind!r} series")
    y = np.asarray(series["y"], dtype=float)
    x = np.asarray(series.get("x") or np.arange(len(y)), dtype=float)
    if x.shape != y.shape:
        raise PlotError(f"{kind!r} series has mismatched x and y")
    return x, y


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def plot(record, kind, path):
    """Write an SVG line chart of the ``kind`` series of ``record`` to ``path``."""
    if kind not in KINDS:
        raise PlotError(f"unknown plot kind {kind!r}")
    x, y = series_of(record, kind)
    xlabel, ylabel, logx, logy = KINDS[kind]
    if logy and np.any(y <= 0):
        # zeros cannot be drawn on a log axis; floor them at the smallest positive value
        pos = y[y > 0]
        y = np.where(y > 0, y, pos.min() if len(pos) else 1.0)
        logy = bool(len(pos)) and not np.allclose(y, y[0])
    elif logy and np.allclose(y, y[0]):
        logy = False
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(x, y, marker="o", markersize=3, linewidth=1.2)
        if logx:
            ax.set_xscale("log", base=2)
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if kind == "cs-convergence" and len(x) >= 2 and np.all(y > 0):
            ax.set_title(f"slope {loglog_slope(x, y):.2f}")
        ax.grid(True, linewidth=0.3)
        fig.tight_layout()
        path = Path(path)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
