"""Dependency-free SVG rendering of the experiment figures."""
from __future__ import annotations

import csv
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#222222", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")
W, H, PAD = 640, 400, 50


def _scale(v, lo, hi, a, b):
    span = hi - lo if hi > lo else 1.0
    return a + (np.asarray(v, dtype=float) - lo) / span * (b - a)


def line_plot(path, xs, series: dict, title: str = "") -> Path:
    xs = np.asarray(xs, dtype=float)
    ys_all = np.concatenate([np.asarray(v, dtype=float) for v in series.values()])
    ylo, yhi = float(ys_all.min()), float(ys_all.max())
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
             f'<rect width="{W}" height="{H}" fill="white"/>',
             f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>']
    for i, (name, ys) in enumerate(series.items()):
        px = _scale(xs, xs.min(), xs.max(), PAD, W - PAD)
        py = _scale(ys, ylo, yhi, H - PAD, PAD)
        pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in zip(px, py))
        color = COLORS[i % len(COLORS)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{W - PAD + 4}" y="{PAD + 16 * i}" font-size="11" fill="{color}">{escape(name)}</text>')
    parts.append(f'<text x="{PAD}" y="{H - 15}" font-size="11">x in [{xs.min():.3g}, {xs.max():.3g}], '
                 f'y in [{ylo:.3g}, {yhi:.3g}]</text>')
    parts.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(parts))
    return path


def heatmap_from_csv(csv_path, path, polygon=None) -> Path:
    """Side-by-side sign maps of the two prediction columns of a boundary CSV."""
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], np.array(rows[1:], dtype=float)
    side = int(round(np.sqrt(len(data))))
    cell = (H - 2 * PAD) / side
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * H}" height="{H}">',
             f'<rect width="{2 * H}" height="{H}" fill="white"/>']
    for panel, col in enumerate((2, 3)):
        ox = panel * H + PAD
        parts.append(f'<text x="{ox}" y="{PAD - 10}" font-size="12">{escape(header[col])}</text>')
        for (x0, x1), v in zip(data[:, :2], data[:, col]):
            cx = ox + _scale(x0, -1, 1, 0, H - 2 * PAD - cell)
            cy = PAD + _scale(x1, -1, 1, H - 2 * PAD - cell, 0)
            fill = "#9ecae1" if v >= 0 else "#fdd0a2"
            parts.append(f'<rect x="{cx:.1f}" y="{cy:.1f}" width="{cell + 0.5:.1f}" height="{cell + 0.5:.1f}" fill="{fill}"/>')
        if polygon is not None:
            poly = np.asarray(polygon, dtype=float)
            pts = " ".join(
                f"{ox + cell / 2 + _scale(a, -1, 1, 0, H - 2 * PAD - cell):.1f},"
                f"{PAD + cell / 2 + _scale(b, -1, 1, H - 2 * PAD - cell, 0):.1f}"
                for a, b in poly
            )
            parts.append(f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    parts.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(parts))
    return path
