"""Deterministic SVG scatter plots of the embedding, colored by cluster or gold label."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

import numpy as np

from .density import OUTLIER

VIEWPORT = 800
MARGIN = 60
OUTLIER_COLOR = "#999999"
PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
)


def _to_px(v: float) -> float:
    # coords in [-1, 1] map into the margined viewport, y flipped
    return MARGIN + (v + 1.0) / 2.0 * (VIEWPORT - 2 * MARGIN)


def scatter_svg(
    coords: np.ndarray,
    labels: Optional[Sequence] = None,
    gold: Optional[Mapping[str, str]] = None,
    users: Optional[Sequence[str]] = None,
) -> str:
    """800x800 SVG, one circle per user. Cluster ids (or gold labels) pick palette
    colors in sorted order; outliers and unlabeled users are gray."""
    coords = np.asarray(coords, dtype=np.float64).reshape(-1, 2)
    n = coords.shape[0]

    if gold is not None:
        if users is None:
            raise ValueError("gold coloring needs the user list")
        keys = [gold.get(u) for u in users]
        classes = sorted({k for k in keys if k is not None})
    elif labels is not None:
        keys = [int(l) for l in labels]
        classes = sorted({k for k in keys if k != OUTLIER})
    else:
        keys = [0] * n
        classes = [0] if n else []

    color_of = {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(classes)}

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEWPORT}" height="{VIEWPORT}" '
        f'viewBox="0 0 {VIEWPORT} {VIEWPORT}">',
        f'<rect width="{VIEWPORT}" height="{VIEWPORT}" fill="white"/>',
    ]
    for i in range(n):
        key = keys[i]
        is_outlier = key is None or (labels is not None and gold is None and key == OUTLIER)
        color = OUTLIER_COLOR if is_outlier else color_of[key]
        x, y = _to_px(coords[i, 0]), VIEWPORT - _to_px(coords[i, 1])
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}" fill-opacity="0.7"/>')

    # legend, top-right
    for i, c in enumerate(classes):
        ly = 20 + 18 * i
        parts.append(f'<circle cx="{VIEWPORT - 130}" cy="{ly}" r="5" fill="{color_of[c]}"/>')
        parts.append(
            f'<text x="{VIEWPORT - 118}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="12">{c}</text>'
        )
    if classes:
        ly = 20 + 18 * len(classes)
        parts.append(f'<circle cx="{VIEWPORT - 130}" cy="{ly}" r="5" fill="{OUTLIER_COLOR}"/>')
        parts.append(
            f'<text x="{VIEWPORT - 118}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="12">outlier</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_scatter(coords, labels, path, gold=None, users=None) -> None:
    with open(path, "w") as f:
        f.write(scatter_svg(coords, labels=labels, gold=gold, users=users))
