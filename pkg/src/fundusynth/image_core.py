"""Float image container, 8-bit codecs, Gaussian kernels and separable convolution.

Images are planar float64 arrays shaped (channels, height, width) with values
nominally in [0, 1]. All math happens in this continuous domain; conversion to
8-bit happens only at the file boundary.
"""

from __future__ import annotations

import io
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy.ndimage import correlate1d
from scipy.signal import fftconvolve


class ParameterError(ValueError):
    """An operation received a parameter outside its documented domain."""


class ShapeError(ValueError):
    """Operands have incompatible dimensions or an unsupported layout."""


class DecodeError(Exception):
    """An image file could not be decoded."""


# Rec. 601 luminance weights.
_LUMA = np.array([0.299, 0.587, 0.114])

# Kernels at or above this tap count take the FFT path of the separable
# convolution; both paths compute the same mirror-padded result.
_FFT_MIN_TAPS = 32

_PIL_CONVERT_TO_RGB = {"P", "PA", "RGBA", "LA", "1", "CMYK", "YCbCr"}


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero (matches the codec)."""
    if x >= 0:
        return int(np.floor(x + 0.5))
    return -int(np.floor(-x + 0.5))


@dataclass(frozen=True)
class ImageF:
    """Planar (channel-major) float image. Treat the array as read-only."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.data, dtype=np.float64))
        if arr.ndim != 3:
            raise ShapeError(f"expected (channels, height, width), got shape {arr.shape}")
        c, h, w = arr.shape
        if c < 1 or h < 1 or w < 1:
            raise ShapeError(f"empty image: shape {arr.shape}")
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def copy(self) -> "ImageF":
        return ImageF(self.data.copy())

    @classmethod
    def full(cls, width: int, height: int, channels: int = 3, value: float = 0.0) -> "ImageF":
        return cls(np.full((channels, height, width), float(value)))


@dataclass(frozen=True)
class GaussianKernel:
    """Normalized symmetric 1-D Gaussian, 2*radius + 1 taps."""

    radius: int
    sigma: float
    weights: np.ndarray


def gaussian_kernel(radius: int, sigma: float) -> GaussianKernel:
    """Truncated Gaussian taps, renormalized to sum to one."""
    if sigma <= 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    if radius < 0:
        raise ParameterError(f"radius must be >= 0, got {radius}")
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    weights = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    weights /= weights.sum()
    return GaussianKernel(radius=int(radius), sigma=float(sigma), weights=weights)


def _correlate_axis(plane: np.ndarray, weights: np.ndarray, axis: int) -> np.ndarray:
    taps = weights.size
    if taps >= _FFT_MIN_TAPS and plane.shape[axis] > 1:
        r = taps // 2
        pad = [(0, 0), (0, 0)]
        pad[axis] = (r, r)
        padded = np.pad(plane, pad, mode="reflect")
        shape = [1, 1]
        shape[axis] = taps
        return fftconvolve(padded, weights.reshape(shape), mode="valid")
    return correlate1d(plane, weights, axis=axis, mode="mirror")


def convolve_gaussian(img: ImageF, kernel: GaussianKernel) -> ImageF:
    """Separable blur, horizontal then vertical pass per channel.

    Borders are mirror-padded without repeating the edge sample, so constant
    images pass through unchanged. A radius-0 kernel is the exact identity.
    """
    if kernel.radius == 0:
        return img.copy()
    out = np.empty_like(img.data)
    for c in range(img.channels):
        row_pass = _correlate_axis(img.data[c], kernel.weights, axis=1)
        out[c] = _correlate_axis(row_pass, kernel.weights, axis=0)
    return ImageF(out)


def clip_saturate(img: ImageF, s: float) -> ImageF:
    """Luminance-anchored saturation scaling followed by a clamp to [0, 1].

    Each channel moves to lum + s * (v - lum). s == 1 leaves in-range pixels
    bit-identical; s == 0 collapses to grayscale.
    """
    if s < 0:
        raise ParameterError(f"saturation factor must be >= 0, got {s}")
    if img.channels not in (1, 3):
        raise ShapeError(f"saturation needs 1 or 3 channels, got {img.channels}")
    x = img.data
    if s == 1.0 or img.channels == 1:
        out = x
    else:
        lum = np.einsum("c,chw->hw", _LUMA, x)[None, :, :]
        out = lum + s * (x - lum)
    return ImageF(np.clip(out, 0.0, 1.0))


def decode_image(data: bytes, name: str = "<bytes>") -> ImageF:
    """Decode 8-bit PNG/JPEG bytes to a 3-channel float image (v / 255).

    Grayscale inputs are expanded to three identical channels.
    """
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            if im.mode in _PIL_CONVERT_TO_RGB:
                im = im.convert("RGB")
            if im.mode == "L":
                plane = np.asarray(im, dtype=np.float64) / 255.0
                planes = np.stack([plane, plane, plane])
            elif im.mode == "RGB":
                rgb = np.asarray(im, dtype=np.float64) / 255.0
                planes = rgb.transpose(2, 0, 1)
            else:
                raise DecodeError(f"{name}: unsupported image mode {im.mode!r}")
    except DecodeError:
        raise
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"{name}: cannot decode image ({exc})") from exc
    return ImageF(planes)


def encode_image(img: ImageF) -> bytes:
    """Encode to 8-bit PNG. Values are clamped, then rounded ties-away-from-zero."""
    if img.channels not in (1, 3):
        raise ParameterError(f"unsupported layout: {img.channels} channels (want 1 or 3)")
    clamped = np.clip(img.data, 0.0, 1.0)
    u8 = np.floor(clamped * 255.0 + 0.5).astype(np.uint8)
    if img.channels == 1:
        pil = Image.fromarray(u8[0], mode="L")
    else:
        pil = Image.fromarray(np.ascontiguousarray(u8.transpose(1, 2, 0)), mode="RGB")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def load_image(path) -> ImageF:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise DecodeError(f"{p}: cannot read file ({exc})") from exc
    return decode_image(data, name=str(p))


def write_bytes_atomic(path, data: bytes) -> None:
    """Write via a temp file in the target directory, then rename into place."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=f".{p.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, p)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_image(path, img: ImageF) -> None:
    """Encode to PNG and write atomically."""
    write_bytes_atomic(path, encode_image(img))
