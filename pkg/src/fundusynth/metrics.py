"""Image-quality metrics (PSNR, SSIM) and reference loss terms.

All losses use the mean-per-element convention so values are independent of
image resolution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

from .image_core import DecodeError, ImageF, ParameterError, ShapeError, gaussian_kernel, load_image

logger = logging.getLogger(__name__)

# Standard single-scale SSIM configuration: 11x11 Gaussian window, sigma 1.5,
# K1/K2 stabilizers, dynamic range 1.0.
_SSIM_RADIUS = 5
_SSIM_SIGMA = 1.5
_SSIM_C1 = 0.01**2
_SSIM_C2 = 0.03**2

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


def _check_same_shape(a: ImageF, b: ImageF) -> None:
    if a.data.shape != b.data.shape:
        raise ShapeError(f"image shapes differ: {a.data.shape} vs {b.data.shape}")


def psnr(a: ImageF, b: ImageF) -> float:
    """10 * log10(1 / MSE) on the [0, 1] domain; identical images give +inf."""
    _check_same_shape(a, b)
    mse = float(np.mean((a.data - b.data) ** 2))
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(1.0 / mse))


def ssim(a: ImageF, b: ImageF) -> float:
    """Single-scale SSIM, computed per channel and averaged.

    Local statistics come from a Gaussian-weighted 11x11 window evaluated at
    every fully-interior position; means, variances and covariance use the
    weighted-population convention.
    """
    _check_same_shape(a, b)
    if min(a.height, a.width) < 2 * _SSIM_RADIUS + 1:
        raise ShapeError(
            f"image {a.width}x{a.height} is smaller than the "
            f"{2 * _SSIM_RADIUS + 1}x{2 * _SSIM_RADIUS + 1} SSIM window"
        )
    taps = gaussian_kernel(_SSIM_RADIUS, _SSIM_SIGMA).weights
    window = np.outer(taps, taps)

    def local_mean(plane):
        return fftconvolve(plane, window, mode="valid")

    values = []
    for c in range(a.channels):
        pa, pb = a.data[c], b.data[c]
        mu_a = local_mean(pa)
        mu_b = local_mean(pb)
        var_a = local_mean(pa * pa) - mu_a**2
        var_b = local_mean(pb * pb) - mu_b**2
        cov = local_mean(pa * pb) - mu_a * mu_b
        score = ((2.0 * mu_a * mu_b + _SSIM_C1) * (2.0 * cov + _SSIM_C2)) / (
            (mu_a**2 + mu_b**2 + _SSIM_C1) * (var_a + var_b + _SSIM_C2)
        )
        values.append(float(score.mean()))
    return float(np.mean(values))


def content_loss(pred: ImageF, gt: ImageF) -> float:
    """Mean squared error between a prediction and its ground truth."""
    _check_same_shape(pred, gt)
    return float(np.mean((gt.data - pred.data) ** 2))


def mask_loss(pred_mask: ImageF, gt_mask: ImageF) -> float:
    """Mean squared error between a predicted and ground-truth artifact mask."""
    _check_same_shape(pred_mask, gt_mask)
    return float(np.mean((gt_mask.data - pred_mask.data) ** 2))


def masked_content_loss(pred: ImageF, gt: ImageF, mask: ImageF) -> float:
    """Mean of (mask * (gt - pred))^2; the mask broadcasts across channels."""
    _check_same_shape(pred, gt)
    if (mask.height, mask.width) != (pred.height, pred.width):
        raise ShapeError(
            f"mask {mask.width}x{mask.height} does not match image {pred.width}x{pred.height}"
        )
    if mask.channels not in (1, pred.channels):
        raise ShapeError(f"mask must have 1 or {pred.channels} channels, got {mask.channels}")
    diff = gt.data - pred.data
    return float(np.mean((mask.data * diff) ** 2))


@dataclass(frozen=True)
class LossWeights:
    """Balance weights for the combined training objective."""

    masked: float = 10.0
    content: float = 1.0
    aux: float = 0.1

    def __post_init__(self):
        for name in ("masked", "content", "aux"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} weight must be >= 0, got {getattr(self, name)}")


def total_loss(
    mask_term: float,
    masked_terms,
    content_terms,
    aux_term: float,
    weights: LossWeights = LossWeights(),
) -> float:
    """mask_term + sum_s(masked * masked[s] + content * content[s]) + aux * aux_term.

    The per-scale sequences must have equal length >= 1 (typically the 0.5x
    and 1x scales).
    """
    masked_terms = list(masked_terms)
    content_terms = list(content_terms)
    if len(masked_terms) != len(content_terms) or not masked_terms:
        raise ParameterError(
            f"per-scale loss lists must have equal length >= 1, "
            f"got {len(masked_terms)} and {len(content_terms)}"
        )
    total = float(mask_term)
    for m_term, c_term in zip(masked_terms, content_terms):
        total += weights.masked * float(m_term) + weights.content * float(c_term)
    total += weights.aux * float(aux_term)
    return total


def _psnr_json(value: float):
    return "inf" if value == float("inf") else value


def evaluate_dirs(ref_dir, test_dir) -> tuple[dict, int]:
    """Score test images against references paired by identical filename.

    Returns (report, skipped); the report is the JSON-ready quality report
    with per-pair rows plus dataset means. Pairs with mismatched dimensions
    or unreadable files are skipped with a logged warning.
    """
    ref_dir = Path(ref_dir)
    test_dir = Path(test_dir)
    names = sorted(
        p.name
        for p in ref_dir.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES and (test_dir / p.name).is_file()
    )
    if not names:
        raise ParameterError(f"no matching filenames between {ref_dir} and {test_dir}")
    pairs = []
    skipped = 0
    for name in names:
        try:
            ref = load_image(ref_dir / name)
            test = load_image(test_dir / name)
            pairs.append({"id": name, "psnr": psnr(ref, test), "ssim": ssim(ref, test)})
        except (DecodeError, ShapeError) as exc:
            logger.warning("skipping pair %s: %s", name, exc)
            skipped += 1
    if not pairs:
        raise ParameterError(f"no comparable pairs between {ref_dir} and {test_dir}")
    mean_psnr = float(np.mean([row["psnr"] for row in pairs]))
    mean_ssim = float(np.mean([row["ssim"] for row in pairs]))
    report = {
        "pairs": [
            {"id": row["id"], "psnr": _psnr_json(row["psnr"]), "ssim": row["ssim"]}
            for row in pairs
        ],
        "mean_psnr": _psnr_json(mean_psnr),
        "mean_ssim": mean_ssim,
        "count": len(pairs),
    }
    return report, skipped
