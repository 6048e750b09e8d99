"""Result serialisation: CSV tables, a JSON run record and plain SVG line charts."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Dict, Iterable, Sequence, Tuple
from xml.sax.saxutils import escape

from .errors import EmptySeries, NonFiniteValue

HEADERS = {
    "recovery": ("replicate", "acceptance", "cue", "share"),
    "comparison": ("fraction", "replicate", "model", "accuracy"),
    "tradeoff": ("epsilon", "phi", "replicate", "n_proposals", "mcp", "mcp_per_proposal"),
}


def _fmt(value) -> str:
    # repr() round-trips floats and never uses locale separators.
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    width = len(header)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in tuple(row)[:width]])
    return path


def write_csv(results: Dict[str, object], out_dir) -> Dict[str, Path]:
    """Write one CSV per result kind (``recovery``, ``comparison``, ``tradeoff``).

    ``results`` maps a kind to a result object with a ``rows`` attribute or
    to a plain list of rows.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for kind, result in results.items():
        if kind not in HEADERS:
            raise ValueError(f"unknown result kind {kind!r}")
        rows = getattr(result, "rows", result)
        paths[kind] = write_table(out / f"{kind}.csv", HEADERS[kind], rows)
    return paths


def write_run_json(config: dict, out_dir, summary: dict = None) -> Path:
    path = Path(out_dir) / "run.json"
    record = {"config": config}
    if summary is not None:
        record["summary"] = summary
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_run_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


WIDTH, HEIGHT = 800, 500
MARGIN = dict(left=70, right=170, top=30, bottom=55)
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    step = (hi - lo) / n
    return [lo + i * step for i in range(n + 1)]


def _label(v) -> str:
    return f"{v:.3g}"


def write_svg_chart(series: Dict[str, Sequence[Tuple[float, float]]], x_label: str, y_label: str,
                    out_path, log_y: bool = False, title: str = "") -> Path:
    """Standalone SVG line chart, one polyline per series, legend in dict order."""
    if not series:
        raise EmptySeries("no series to plot")
    clean = {}
    for name, points in series.items():
        points = [(float(x), float(y)) for x, y in points]
        if not points:
            raise EmptySeries(f"series {name!r} is empty")
        for x, y in points:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise NonFiniteValue(f"series {name!r} has non-finite point ({x}, {y})")
            if log_y and y <= 0:
                raise NonFiniteValue(f"series {name!r} has y={y}, undefined on a log axis")
        if log_y:
            points = [(x, math.log10(y)) for x, y in points]
        clean[name] = points

    xs = [x for pts in clean.values() for x, _ in pts]
    ys = [y for pts in clean.values() for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN["top"] + (1 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
           f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>')
    bottom = MARGIN["top"] + ph
    out.append(f'<line x1="{MARGIN["left"]}" y1="{bottom:.1f}" x2="{MARGIN["left"] + pw}" '
               f'y2="{bottom:.1f}" stroke="black"/>')
    out.append(f'<line x1="{MARGIN["left"]}" y1="{MARGIN["top"]}" x2="{MARGIN["left"]}" '
               f'y2="{bottom:.1f}" stroke="black"/>')
    for t in _ticks(x0, x1):
        out.append(f'<text x="{sx(t):.1f}" y="{bottom + 16:.1f}" text-anchor="middle">{_label(t)}</text>')
    for t in _ticks(y0, y1):
        text = _label(10 ** t) if log_y else _label(t)
        out.append(f'<text x="{MARGIN["left"] - 6}" y="{sy(t) + 4:.1f}" text-anchor="end">{text}</text>')
        out.append(f'<line x1="{MARGIN["left"]}" y1="{sy(t):.1f}" x2="{MARGIN["left"] + pw}" '
                   f'y2="{sy(t):.1f}" stroke="#e0e0e0"/>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 12}" '
               f'text-anchor="middle">{escape(x_label)}</text>')
    y_text = escape(y_label + (" (log scale)" if log_y else ""))
    out.append(f'<text x="16" y="{MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MARGIN["top"] + ph / 2:.1f})">{y_text}</text>')
    for i, (name, pts) in enumerate(clean.items()):
        colour = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{coords}"/>')
        ly = MARGIN["top"] + 10 + 18 * i
        lx = MARGIN["left"] + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text class="legend" x="{lx + 26}" y="{ly + 4}">{escape(str(name))}</text>')
    out.append("</svg>")
    path = Path(out_path)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path


def recovery_series(result, cue_names=None) -> Dict[str, list]:
    """Mean importance-share trace per cue, ordered by final share (largest first)."""
    shares = result.shares().mean(axis=0)
    k = shares.shape[1]
    names = list(cue_names or [f"c{i + 1}" for i in range(k)])
    order = sorted(range(k), key=lambda c: -shares[-1, c])
    return {names[c]: [(a + 1, float(shares[a, c])) for a in range(shares.shape[0])]
            for c in order}


def comparison_series(result) -> Dict[str, list]:
    from .experiments import MODELS
    return {m: sorted(result.mean_by(m).items()) for m in MODELS if result.mean_by(m)}


def tradeoff_series(result, column: int) -> Dict[str, list]:
    """One line per phi, x = epsilon, y = mean of ``column`` over uncensored replicates."""
    eps = sorted({r[0] for r in result.rows})
    phis = sorted({r[1] for r in result.rows})
    out = {}
    for p in phis:
        pts = [(e, result.cell_mean(column, e, p)) for e in eps]
        pts = [(e, v) for e, v in pts if math.isfinite(v)]
        if pts:
            out[f"phi={p:g}"] = pts
    return out
