"""Rejection sampling of centers inside a circular placement region."""

from __future__ import annotations

MAX_ATTEMPTS = 100


def place_center(draw, region: tuple[float, float, float] | None) -> tuple[float, float]:
    """Call `draw` until the point lands inside the region disc.

    `region` is (cx, cy, radius) or None for unconstrained placement. After
    MAX_ATTEMPTS rejections the region center is used, so a degenerate region
    never stalls a synthesis run.
    """
    if region is None:
        x, y = draw()
        return float(x), float(y)
    cx, cy, radius = region
    for _ in range(MAX_ATTEMPTS):
        x, y = draw()
        if (x - cx) ** 2 + (y - cy) ** 2 <= radius**2:
            return float(x), float(y)
    return float(cx), float(cy)
