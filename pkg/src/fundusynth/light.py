"""Light transmission disturbance: global tone jitter plus a local illumination panel.

The panel is a flat over-/under-intensity disc smoothed by a Gaussian; applied
as x' = clip_saturate(contrast * (panel + x) + brightness, saturation) with a
single clamp at the very end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image_core import (
    ImageF,
    ParameterError,
    ShapeError,
    clip_saturate,
    convolve_gaussian,
    gaussian_kernel,
    round_half_away,
)
from .placement import place_center
from .seeding import SeededStream

# The three fixed light-leak color biases (warm, cyan, white).
LEAK_BIASES = (
    (0.63, 0.80, 0.35),
    (0.56, 0.93, 0.93),
    (1.0, 1.0, 1.0),
)


@dataclass(frozen=True)
class GlobalToneParams:
    """Contrast/brightness/saturation jitter applied with the panel."""

    contrast: float = 1.0
    brightness: float = 0.0
    saturation: float = 1.0

    def __post_init__(self):
        if self.contrast <= 0:
            raise ParameterError(f"contrast must be > 0, got {self.contrast}")
        if self.saturation < 0:
            raise ParameterError(f"saturation must be >= 0, got {self.saturation}")
        if not -1.0 <= self.brightness <= 1.0:
            raise ParameterError(f"brightness must be in [-1, 1], got {self.brightness}")


NEUTRAL_TONE = GlobalToneParams()


@dataclass(frozen=True)
class IlluminationPanelParams:
    """A bias disc at `center` (x, y) with radius `radius`, smoothed by `sigma`."""

    center: tuple[float, float]
    radius: float
    sigma: float
    bias: tuple[float, float, float]

    def __post_init__(self):
        if self.radius <= 0:
            raise ParameterError(f"panel radius must be > 0, got {self.radius}")
        if self.sigma <= 0:
            raise ParameterError(f"panel sigma must be > 0, got {self.sigma}")
        if not all(np.isfinite(v) for v in self.center):
            raise ParameterError(f"panel center must be finite, got {self.center}")
        if len(self.bias) != 3:
            raise ParameterError("panel bias must be an RGB triple")


def build_panel(width: int, height: int, p: IlluminationPanelParams) -> ImageF:
    """Rasterize the bias disc and smooth it. Entries may be negative."""
    if width < 1 or height < 1:
        raise ShapeError(f"panel dimensions must be >= 1, got {width}x{height}")
    cx, cy = p.center
    xs = np.arange(width, dtype=np.float64) - cx
    ys = np.arange(height, dtype=np.float64) - cy
    disc = (xs[None, :] ** 2 + ys[:, None] ** 2) < p.radius**2
    unit = ImageF(disc.astype(np.float64)[None])
    radius = round_half_away(min(3.0 * p.sigma, float(max(width, height))))
    if radius > 0:
        unit = convolve_gaussian(unit, gaussian_kernel(radius, p.sigma))
    field = unit.data[0]
    return ImageF(np.stack([b * field for b in p.bias]))


def apply_light_disturbance(img: ImageF, panel: ImageF, tone: GlobalToneParams) -> ImageF:
    """contrast * (panel + x) + brightness, then saturation and one final clamp."""
    if panel.data.shape != img.data.shape:
        raise ShapeError(
            f"panel shape {panel.data.shape} does not match image shape {img.data.shape}"
        )
    shifted = tone.contrast * (panel.data + img.data) + tone.brightness
    return clip_saturate(ImageF(shifted), tone.saturation)


def sample_light_leak(
    stream: SeededStream, width: int, region: tuple[float, float, float] | None = None
) -> tuple[IlluminationPanelParams, GlobalToneParams]:
    """Draw a bright leak panel plus tone jitter for an image of size `width`.

    Panel radius spans [0.75w, w], its center lands in [0.375r, 0.625r] per
    axis (optionally constrained to `region`), and the color bias is one of
    the three fixed triples. Tone: contrast/saturation in [0.5, 1.5],
    brightness in [-0.5, 0.5].
    """
    if width < 16:
        raise ParameterError(f"width must be >= 16, got {width}")
    rng = stream.rng
    w = float(width)
    r_l = float(rng.uniform(0.75 * w, w))

    def draw():
        return rng.uniform(0.375 * r_l, 0.625 * r_l), rng.uniform(0.375 * r_l, 0.625 * r_l)

    a, b = place_center(draw, region)
    bias = LEAK_BIASES[int(rng.integers(0, len(LEAK_BIASES)))]
    # Smoothing spread scales the 0.66-weighted distances from the panel
    # center to the near and far image edge; the floor keeps the kernel
    # usable when the center sits close to an edge.
    lo, hi = sorted((0.66 * min(a, b), 0.66 * (w - max(a, b))))
    lo = max(lo, 0.05 * w)
    hi = max(hi, lo)
    sigma = float(rng.uniform(lo, hi))
    tone = GlobalToneParams(
        contrast=float(rng.uniform(0.5, 1.5)),
        brightness=float(rng.uniform(-0.5, 0.5)),
        saturation=float(rng.uniform(0.5, 1.5)),
    )
    panel = IlluminationPanelParams(center=(a, b), radius=r_l, sigma=sigma, bias=bias)
    return panel, tone


def sample_uneven_exposure(
    stream: SeededStream, width: int, region: tuple[float, float, float] | None = None
) -> tuple[IlluminationPanelParams, GlobalToneParams]:
    """Draw a darkening panel for a locally under-exposed patch; tone stays neutral.

    Panel radius spans [0.3w, 0.5w] with sigma in [0.55r, 0.75r]; the bias is
    a gray level in [-0.5, -0.1] and the center lands in the central half of
    the image.
    """
    if width < 16:
        raise ParameterError(f"width must be >= 16, got {width}")
    rng = stream.rng
    w = float(width)
    r_l = float(rng.uniform(0.3 * w, 0.5 * w))
    sigma = float(rng.uniform(0.55 * r_l, 0.75 * r_l))
    u = float(rng.uniform(-0.5, -0.1))

    def draw():
        return rng.uniform(0.25 * w, 0.75 * w), rng.uniform(0.25 * w, 0.75 * w)

    a, b = place_center(draw, region)
    panel = IlluminationPanelParams(center=(a, b), radius=r_l, sigma=sigma, bias=(u, u, u))
    return panel, NEUTRAL_TONE
