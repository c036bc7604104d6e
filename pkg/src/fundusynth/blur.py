"""Defocus blur with additive sensor noise, plus the thin-lens blur radius."""

from __future__ import annotations

from dataclasses import dataclass

from .image_core import (
    ImageF,
    ParameterError,
    convolve_gaussian,
    gaussian_kernel,
    round_half_away,
)
from .seeding import SeededStream


@dataclass(frozen=True)
class BlurParams:
    """Gaussian blur radius/sigma in pixels and additive noise level."""

    radius: float
    sigma: float
    noise_std: float = 0.01

    def __post_init__(self):
        if self.radius < 0:
            raise ParameterError(f"blur radius must be >= 0, got {self.radius}")
        if self.sigma <= 0:
            raise ParameterError(f"blur sigma must be > 0, got {self.sigma}")
        if self.noise_std < 0:
            raise ParameterError(f"noise std must be >= 0, got {self.noise_std}")


@dataclass(frozen=True)
class LensConfig:
    """Optical system description, all lengths in consistent units (e.g. mm)."""

    focal_length: float
    f_number: float
    object_distance: float
    image_distance: float

    def __post_init__(self):
        for name in ("focal_length", "f_number", "object_distance", "image_distance"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)}")


def blur_radius(lens: LensConfig) -> float:
    """Signed defocus radius (F*v0 - D*(F - v0)) / (D*f).

    The sign indicates which side of focus the sensor sits on; consumers use
    the absolute value as a kernel radius.
    """
    numerator = lens.focal_length * lens.image_distance - lens.object_distance * (
        lens.focal_length - lens.image_distance
    )
    return numerator / (lens.object_distance * lens.f_number)


def apply_defocus(
    img: ImageF, p: BlurParams, stream: SeededStream, min_radius: int = 0
) -> ImageF:
    """Gaussian blur plus i.i.d. per-pixel Gaussian noise; no clamping here.

    The kernel radius is round(p.radius), ties away from zero; `min_radius`
    lets the pipeline force at least one tap when the blur factor is active.
    """
    taps_radius = max(round_half_away(p.radius), min_radius)
    out = convolve_gaussian(img, gaussian_kernel(taps_radius, p.sigma))
    if p.noise_std > 0:
        noise = stream.rng.normal(0.0, p.noise_std, size=out.data.shape)
        out = ImageF(out.data + noise)
    return out


def sample_blur(stream: SeededStream, width: int, noise_std: float = 0.01) -> BlurParams:
    """Draw blur parameters: sigma = 0.03w fixed, radius uniform in [0.01w, 0.015w]."""
    if width < 16:
        raise ParameterError(f"width must be >= 16, got {width}")
    rng = stream.rng
    w = float(width)
    return BlurParams(
        radius=float(rng.uniform(0.01 * w, 0.015 * w)),
        sigma=0.03 * w,
        noise_std=noise_std,
    )
