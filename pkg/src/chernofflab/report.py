"""Output helpers: atomic file writes, CSV rows, JSON, log-log SVG plots."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=_default)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def write_atomic(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _cell(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if v is not None else ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


# -- SVG ----------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_W, _H = 640, 440
_L, _R, _T, _B = 70, 180, 30, 50


def loglog_svg(series: Sequence[tuple[str, Sequence[float], Sequence[float], bool]],
               title: str = "", xlabel: str = "n", ylabel: str = "defect") -> str:
    """Standalone SVG with log-log axes.

    ``series`` holds ``(label, xs, ys, dashed)``; non-positive values are
    skipped.  Solid lines are measured defects, dashed lines bound curves.
    """
    pts = [(x, y) for _, xs, ys, _ in series for x, y in zip(xs, ys) if x > 0 and y > 0]
    if not pts:
        return _svg_frame(title, "<text x='100' y='100'>no positive data</text>")
    lx = [math.log10(x) for x, _ in pts]
    ly = [math.log10(y) for _, y in pts]
    x0, x1 = math.floor(min(lx)), math.ceil(max(lx))
    y0, y1 = math.floor(min(ly)), math.ceil(max(ly))
    x1 = max(x1, x0 + 1)
    y1 = max(y1, y0 + 1)
    pw, ph = _W - _L - _R, _H - _T - _B

    def X(v):
        return _L + (math.log10(v) - x0) / (x1 - x0) * pw

    def Y(v):
        return _T + ph - (math.log10(v) - y0) / (y1 - y0) * ph

    parts = [f"<rect x='{_L}' y='{_T}' width='{pw}' height='{ph}' fill='none' stroke='#444'/>"]
    for k in range(x0, x1 + 1):
        px = _L + (k - x0) / (x1 - x0) * pw
        parts.append(f"<line x1='{px:.2f}' y1='{_T}' x2='{px:.2f}' y2='{_T + ph}' stroke='#ddd'/>")
        parts.append(f"<text x='{px:.2f}' y='{_T + ph + 18}' text-anchor='middle' font-size='12'>1e{k}</text>")
    for k in range(y0, y1 + 1):
        py = _T + ph - (k - y0) / (y1 - y0) * ph
        parts.append(f"<line x1='{_L}' y1='{py:.2f}' x2='{_L + pw}' y2='{py:.2f}' stroke='#ddd'/>")
        parts.append(f"<text x='{_L - 6}' y='{py + 4:.2f}' text-anchor='end' font-size='12'>1e{k}</text>")
    parts.append(f"<text x='{_L + pw / 2}' y='{_H - 10}' text-anchor='middle' font-size='13'>{_esc(xlabel)}</text>")
    parts.append(
        f"<text x='16' y='{_T + ph / 2}' text-anchor='middle' font-size='13' "
        f"transform='rotate(-90 16 {_T + ph / 2})'>{_esc(ylabel)}</text>"
    )
    for i, (label, xs, ys, dashed) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{X(x):.2f},{Y(y):.2f}" for x, y in zip(xs, ys) if x > 0 and y > 0)
        dash = " stroke-dasharray='6,4'" if dashed else ""
        if coords:
            parts.append(f"<polyline points='{coords}' fill='none' stroke='{color}' stroke-width='1.8'{dash}/>")
        ly_ = _T + 14 + 18 * i
        parts.append(f"<line x1='{_W - _R + 10}' y1='{ly_}' x2='{_W - _R + 34}' y2='{ly_}' stroke='{color}' stroke-width='2'{dash}/>")
        parts.append(f"<text x='{_W - _R + 40}' y='{ly_ + 4}' font-size='12'>{_esc(label)}</text>")
    return _svg_frame(title, "\n".join(parts))


def _svg_frame(title: str, body: str) -> str:
    return (
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{_W}' height='{_H}' "
        f"viewBox='0 0 {_W} {_H}' font-family='sans-serif'>\n"
        f"<rect width='100%' height='100%' fill='white'/>\n"
        f"<text x='{_L}' y='20' font-size='14'>{_esc(title)}</text>\n{body}\n</svg>\n"
    )


def _esc(s: str) -> str:
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
