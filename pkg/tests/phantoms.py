"""Synthetic fundus-like test images: circular FOV, radial falloff, vessels, optic disc."""

import functools

import numpy as np

from fundusynth import ImageF, convolve_gaussian, gaussian_kernel

FOV_FRACTION = 0.47


@functools.lru_cache(maxsize=64)
def fundus_phantom(seed: int, size: int = 256) -> ImageF:
    """Deterministic phantom with enough vessel detail that blurring is measurable.

    The returned image is cached and shared; callers must not mutate it.
    """
    rng = np.random.default_rng(seed)
    h = w = size
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    cx = cy = (size - 1) / 2.0
    r_fov = FOV_FRACTION * size
    dist = np.hypot(xx - cx, yy - cy)
    fov = dist < r_fov
    fall = np.clip(dist / r_fov, 0.0, 1.0) ** 2
    base = np.stack([0.62 - 0.22 * fall, 0.34 - 0.12 * fall, 0.16 - 0.05 * fall])

    side = -1 if seed % 2 else 1
    ox = cx + side * 0.55 * r_fov
    oy = cy + rng.uniform(-0.1, 0.1) * r_fov
    blob = np.exp(-((xx - ox) ** 2 + (yy - oy) ** 2) / (2.0 * (0.09 * size) ** 2))
    base += np.stack([0.28 * blob, 0.30 * blob, 0.18 * blob])

    vessel = np.zeros((h, w))
    for _ in range(14):
        ang0 = rng.uniform(0, 2 * np.pi)
        curv = rng.uniform(-1.5, 1.5)
        length = rng.uniform(0.5, 1.05) * r_fov
        half_width = int(rng.integers(1, 3))
        t = np.linspace(0.0, 1.0, max(int(4 * length), 8))
        ang = ang0 + curv * t
        px = np.round(ox + t * length * np.cos(ang)).astype(int)
        py = np.round(oy + t * length * np.sin(ang)).astype(int)
        ok = (px >= 0) & (px < w) & (py >= 0) & (py < h)
        for dx in range(-half_width, half_width + 1):
            for dy in range(-half_width, half_width + 1):
                vessel[np.clip(py[ok] + dy, 0, h - 1), np.clip(px[ok] + dx, 0, w - 1)] = 1.0
    vessel = convolve_gaussian(ImageF(vessel[None]), gaussian_kernel(2, 0.9)).data[0]
    base *= 1.0 - 0.55 * np.clip(vessel, 0.0, 1.0)[None]

    texture = rng.normal(0.0, 0.02, (h, w))
    texture = convolve_gaussian(ImageF(texture[None]), gaussian_kernel(1, 0.6)).data[0]
    base += texture[None]
    base *= fov[None]
    return ImageF(np.clip(base, 0.0, 1.0))
