"""Self-contained SVG plots: the gamma_3 curve and sweep ratio summaries.

SVG is written directly (axes, ticks, polylines, labels) so reproducing the
figures needs no plotting dependency.  Each file embeds the sampled data as
a JSON <metadata> block, which makes the plotted values machine-checkable.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from .constants import GAMMA3_PIECEWISE

__all__ = ["GAMMA3_SAMPLES", "PlotFrame", "sample_gamma3_curve", "emit_plot"]

# sample count for the gamma_3 curve: 600 intervals, endpoints included so
# the integer abscissas 0, 1, 2, 3 are hit exactly
GAMMA3_SAMPLES = 601

_WIDTH, _HEIGHT = 720, 480
_ML, _MR, _MT, _MB = 70, 24, 30, 56
_FACT9 = math.factorial(9)


@dataclass(frozen=True)
class PlotFrame:
    """Affine data -> pixel mapping for one axes rectangle."""

    x0: float
    x1: float
    y0: float
    y1: float

    def px(self, x: float) -> float:
        return _ML + (x - self.x0) / (self.x1 - self.x0) * (_WIDTH - _ML - _MR)

    def py(self, y: float) -> float:
        return _MT + (self.y1 - y) / (self.y1 - self.y0) * (_HEIGHT - _MT - _MB)


def sample_gamma3_curve(n: int = GAMMA3_SAMPLES) -> Tuple[List[float], List[float]]:
    """(c, 9! * gamma_3(c)) on a uniform grid over [0, 3]."""
    xs = [3.0 * i / (n - 1) for i in range(n)]
    ys = [_FACT9 * GAMMA3_PIECEWISE.eval_float(c) for c in xs]
    return xs, ys


def _ticks(lo: float, hi: float, target: int = 6) -> List[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(round(t, 10))
        t += step
    return out


def _svg_header(meta: Dict[str, object]) -> List[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f"<metadata>{json.dumps(meta, sort_keys=True)}</metadata>",
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]


def _axes(frame: PlotFrame, xlabel: str, ylabel: str, title: str) -> List[str]:
    parts = []
    ax_x0, ax_x1 = _ML, _WIDTH - _MR
    ax_y0, ax_y1 = _MT, _HEIGHT - _MB
    parts.append(
        f'<rect x="{ax_x0}" y="{ax_y0}" width="{ax_x1 - ax_x0}" height="{ax_y1 - ax_y0}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    for t in _ticks(frame.x0, frame.x1):
        px = frame.px(t)
        parts.append(f'<line x1="{px:.2f}" y1="{ax_y1}" x2="{px:.2f}" y2="{ax_y1 + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{px:.2f}" y="{ax_y1 + 20}" font-size="12" text-anchor="middle">{t:g}</text>'
        )
    for t in _ticks(frame.y0, frame.y1):
        py = frame.py(t)
        parts.append(f'<line x1="{ax_x0 - 5}" y1="{py:.2f}" x2="{ax_x0}" y2="{py:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{ax_x0 - 8}" y="{py + 4:.2f}" font-size="12" text-anchor="end">{t:g}</text>'
        )
    parts.append(
        f'<text x="{(ax_x0 + ax_x1) / 2:.1f}" y="{_HEIGHT - 12}" font-size="14" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{(ax_y0 + ax_y1) / 2:.1f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {(ax_y0 + ax_y1) / 2:.1f})">{ylabel}</text>'
    )
    parts.append(
        f'<text x="{(ax_x0 + ax_x1) / 2:.1f}" y="20" font-size="15" text-anchor="middle">{title}</text>'
    )
    return parts


def _polyline(frame: PlotFrame, xs: Sequence[float], ys: Sequence[float], color: str) -> str:
    pts = " ".join(f"{frame.px(x):.3f},{frame.py(y):.3f}" for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'


def _emit_gamma3(out_path: Path) -> None:
    xs, ys = sample_gamma3_curve()
    frame = PlotFrame(x0=0.0, x1=3.0, y0=0.0, y1=max(ys) * 1.06)
    meta = {"target": "gamma3", "x": xs, "y": ys}
    parts = _svg_header(meta)
    parts += _axes(frame, "c", "9! gamma_3(c)", "Scaled piecewise polynomial 9! gamma_3(c)")
    parts.append(_polyline(frame, xs, ys, "#1f5fbf"))
    parts.append("</svg>")
    out_path.write_text("\n".join(parts) + "\n")


_SERIES_COLORS = ("#1f5fbf", "#bf3f1f", "#1f8f4f", "#7f3fbf", "#bf8f1f", "#3f3f3f")


def _emit_ratio_csv(out_path: Path, csv_path: Path) -> None:
    rows: List[Dict[str, str]] = []
    with open(csv_path, newline="") as f:
        for row in csv.DictReader(f):
            rows.append(row)
    series: Dict[Tuple[str, str, str], List[Tuple[float, float]]] = {}
    for row in rows:
        if not row.get("ratio"):
            continue
        key = (row["k"], row["c"], row["cutoff"])
        series.setdefault(key, []).append((float(row["d"]), float(row["ratio"])))
    meta = {"target": "ratio-csv", "source": str(csv_path), "points": sum(len(v) for v in series.values())}
    parts = _svg_header(meta)
    if series:
        all_d = [d for pts in series.values() for d, _ in pts]
        all_r = [r for pts in series.values() for _, r in pts]
        frame = PlotFrame(
            x0=math.log10(min(all_d)) - 0.1,
            x1=math.log10(max(all_d)) + 0.1,
            y0=0.0,
            y1=max(all_r) * 1.06 if max(all_r) > 0 else 1.0,
        )
        parts += _axes(frame, "log10 d", "variance / main term", "Measured-to-conjectured ratio")
        for i, (key, pts) in enumerate(sorted(series.items())):
            pts.sort()
            xs = [math.log10(d) for d, _ in pts]
            ys = [r for _, r in pts]
            color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
            parts.append(_polyline(frame, xs, ys, color))
            for x, y in zip(xs, ys):
                parts.append(
                    f'<circle cx="{frame.px(x):.2f}" cy="{frame.py(y):.2f}" r="3" fill="{color}"/>'
                )
            k, c, cutoff = key
            parts.append(
                f'<text x="{_WIDTH - _MR - 8}" y="{_MT + 18 + 16 * i}" font-size="12" '
                f'text-anchor="end" fill="{color}">k={k} c={c} {cutoff}</text>'
            )
    else:
        frame = PlotFrame(x0=0.0, x1=1.0, y0=0.0, y1=1.0)
        parts += _axes(frame, "log10 d", "variance / main term", "Measured-to-conjectured ratio (no data)")
    parts.append("</svg>")
    out_path.write_text("\n".join(parts) + "\n")


def emit_plot(target: str, out_path: str | Path, csv_path: str | Path | None = None) -> Path:
    """Write one SVG; target is 'gamma3' or 'ratio-csv' (needs a sweep CSV)."""
    out = Path(out_path)
    if out.parent and not out.parent.exists():
        raise ValueError(f"output directory {out.parent} does not exist")
    if target == "gamma3":
        _emit_gamma3(out)
    elif target == "ratio-csv":
        if csv_path is None:
            raise ValueError("ratio-csv needs the path of a sweep summary CSV")
        if not Path(csv_path).exists():
            raise ValueError(f"sweep CSV {csv_path} does not exist")
        _emit_ratio_csv(out, Path(csv_path))
    else:
        raise ValueError(f"unknown plot target {target!r}; use gamma3 or ratio-csv")
    return out
