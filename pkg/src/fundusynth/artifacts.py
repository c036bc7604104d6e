"""Additive dust/grain artifacts: defocused discs, their sampler, and ground-truth masks.

Each artifact is a hard disc of radius r/4 smoothed by a Gaussian of spread
sigma and scaled by a luminance bias; layers sum onto the image without
intermediate clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image_core import (
    ImageF,
    ParameterError,
    ShapeError,
    convolve_gaussian,
    gaussian_kernel,
    round_half_away,
)
from .placement import place_center
from .seeding import SeededStream


@dataclass(frozen=True)
class ArtifactSpec:
    """One undesired object: center (x, y), object radius, spread, luminance bias."""

    center: tuple[float, float]
    radius: float
    sigma: float
    bias: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ParameterError(f"artifact radius must be > 0, got {self.radius}")
        if self.sigma <= 0:
            raise ParameterError(f"artifact sigma must be > 0, got {self.sigma}")
        if abs(self.bias) > 1:
            raise ParameterError(f"artifact bias must be in [-1, 1], got {self.bias}")
        if not all(np.isfinite(v) for v in self.center):
            raise ParameterError(f"artifact center must be finite, got {self.center}")


def render_artifact_layer(width: int, height: int, spec: ArtifactSpec) -> ImageF:
    """Single-channel signed layer: unit disc of radius spec.radius / 4, smoothed, scaled."""
    if width < 1 or height < 1:
        raise ShapeError(f"layer dimensions must be >= 1, got {width}x{height}")
    cx, cy = spec.center
    xs = np.arange(width, dtype=np.float64) - cx
    ys = np.arange(height, dtype=np.float64) - cy
    disc = (xs[None, :] ** 2 + ys[:, None] ** 2) < (spec.radius / 4.0) ** 2
    layer = ImageF(disc.astype(np.float64)[None])
    radius = round_half_away(min(3.0 * spec.sigma, float(max(width, height))))
    if radius > 0:
        layer = convolve_gaussian(layer, gaussian_kernel(radius, spec.sigma))
    return ImageF(spec.bias * layer.data)


def apply_artifacts(img: ImageF, specs: list[ArtifactSpec]) -> ImageF:
    """Add every rendered layer to the image, accumulating in list order."""
    if not specs:
        return img.copy()
    total = np.zeros((img.height, img.width))
    for spec in specs:
        total += render_artifact_layer(img.width, img.height, spec).data[0]
    return ImageF(img.data + total[None, :, :])


def ground_truth_mask(width: int, height: int, specs: list[ArtifactSpec]) -> ImageF:
    """Binary union of discs of radius r/4 + 2*sigma around each artifact center."""
    mask = np.zeros((height, width), dtype=bool)
    xs = np.arange(width, dtype=np.float64)
    ys = np.arange(height, dtype=np.float64)
    for spec in specs:
        cx, cy = spec.center
        r = spec.radius / 4.0 + 2.0 * spec.sigma
        mask |= ((xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2) < r**2
    return ImageF(mask.astype(np.float64)[None])


def sample_artifacts(
    stream: SeededStream,
    width: int,
    height: int | None = None,
    region: tuple[float, float, float] | None = None,
) -> list[ArtifactSpec]:
    """Draw 10..25 artifact specs with size-linked spread and bias.

    Per artifact: radius uniform in [0.025w, 0.05w], sigma = 5 + 0.8r, bias
    1 - exp(-(0.5 + 0.04r) * 0.012r). Centers land in the placement region
    (whole image when region is None).
    """
    if width < 16:
        raise ParameterError(f"width must be >= 16, got {width}")
    rng = stream.rng
    w = float(width)
    h = float(height if height is not None else width)
    if region is None:
        x0, x1, y0, y1 = 0.0, w, 0.0, h
    else:
        cx, cy, rmax = region
        x0, x1 = max(0.0, cx - rmax), min(w, cx + rmax)
        y0, y1 = max(0.0, cy - rmax), min(h, cy + rmax)
        if x0 >= x1 or y0 >= y1:
            x0 = x1 = cx
            y0 = y1 = cy

    def draw():
        return rng.uniform(x0, x1), rng.uniform(y0, y1)

    specs = []
    count = int(rng.integers(10, 26))
    for _ in range(count):
        r = float(rng.uniform(0.025 * w, 0.05 * w))
        sigma = 5.0 + 0.8 * r
        bias = 1.0 - math.exp(-(0.5 + 0.04 * r) * (0.012 * r))
        center = place_center(draw, region)
        specs.append(ArtifactSpec(center=center, radius=r, sigma=sigma, bias=bias))
    return specs
