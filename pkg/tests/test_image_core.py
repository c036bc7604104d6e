import io

import numpy as np
import pytest
from PIL import Image

from fundusynth import (
    DecodeError,
    ImageF,
    ParameterError,
    ShapeError,
    clip_saturate,
    convolve_gaussian,
    decode_image,
    encode_image,
    gaussian_kernel,
)
from oracles import conv2d_reflect, gauss2d


def png_bytes(arr: np.ndarray, mode: str) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(arr, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


class TestDecode:
    def test_single_pixel(self):
        data = png_bytes(np.array([[[255, 0, 128]]], dtype=np.uint8), "RGB")
        img = decode_image(data)
        assert img.data.shape == (3, 1, 1)
        assert img.data[0, 0, 0] == 1.0
        assert img.data[1, 0, 0] == 0.0
        assert img.data[2, 0, 0] == 128 / 255.0
        assert img.data[2, 0, 0] == pytest.approx(0.50196, abs=1e-5)

    def test_black_pixel(self):
        img = decode_image(png_bytes(np.zeros((1, 1, 3), dtype=np.uint8), "RGB"))
        assert np.all(img.data == 0.0)

    def test_grayscale_expands_to_three_planes(self):
        gray = np.array([[10, 200], [0, 255]], dtype=np.uint8)
        img = decode_image(png_bytes(gray, "L"))
        assert img.channels == 3
        assert np.array_equal(img.data[0], img.data[1])
        assert np.array_equal(img.data[0], img.data[2])
        assert img.data[0, 0, 1] == 200 / 255.0

    def test_garbage_names_source(self):
        with pytest.raises(DecodeError, match="bad.png"):
            decode_image(b"not an image", name="bad.png")

    def test_jpeg_reads(self):
        rng = np.random.default_rng(1)
        src = rng.integers(0, 256, (32, 32, 3), dtype=np.uint8)
        buf = io.BytesIO()
        Image.fromarray(src, mode="RGB").save(buf, format="JPEG", quality=95)
        img = decode_image(buf.getvalue())
        assert img.data.shape == (3, 32, 32)
        assert 0.0 <= img.data.min() and img.data.max() <= 1.0

    def test_sixteen_bit_depth_rejected(self):
        buf = io.BytesIO()
        Image.fromarray(np.full((4, 4), 40_000, dtype=np.uint16)).save(buf, format="PNG")
        with pytest.raises(DecodeError, match="mode"):
            decode_image(buf.getvalue())


class TestEncode:
    def test_exact_inverse_of_decode_value(self):
        img = ImageF(np.full((1, 1, 1), 128 / 255.0))
        assert np.asarray(Image.open(io.BytesIO(encode_image(img))))[0, 0] == 128

    def test_clamps_out_of_range(self):
        img = ImageF(np.array([[[1.7]], [[-0.3]], [[0.2]]]))
        px = np.asarray(Image.open(io.BytesIO(encode_image(img))))[0, 0]
        assert list(px) == [255, 0, 51]

    def test_ties_round_away_from_zero(self):
        img = ImageF(np.full((1, 1, 1), 0.5))  # 127.5 -> 128
        assert np.asarray(Image.open(io.BytesIO(encode_image(img))))[0, 0] == 128

    def test_rejects_two_channel_layout(self):
        with pytest.raises(ParameterError, match="layout"):
            encode_image(ImageF(np.zeros((2, 4, 4))))

    def test_roundtrip_every_gray_value(self):
        gray = np.arange(256, dtype=np.uint8).reshape(16, 16)
        img = decode_image(png_bytes(gray, "L"))
        out = np.asarray(Image.open(io.BytesIO(encode_image(img))))
        assert np.array_equal(out, np.stack([gray] * 3, axis=-1))

    def test_roundtrip_random_rgb(self):
        rng = np.random.default_rng(0)
        src = rng.integers(0, 256, (24, 31, 3), dtype=np.uint8)
        img = decode_image(png_bytes(src, "RGB"))
        out = np.asarray(Image.open(io.BytesIO(encode_image(img))))
        assert np.array_equal(out, src)


class TestGaussianKernel:
    def test_radius_zero_single_tap(self):
        assert list(gaussian_kernel(0, 3.0).weights) == [1.0]

    def test_radius_one_half_sigma(self):
        # direct evaluation: exp(-i^2 / (2 * 0.25)) then normalize
        raw = np.exp(-np.array([1.0, 0.0, 1.0]) / 0.5)
        expected = raw / raw.sum()
        assert gaussian_kernel(1, 0.5).weights == pytest.approx(expected, abs=1e-12)
        assert gaussian_kernel(1, 0.5).weights == pytest.approx([0.1065, 0.7870, 0.1065], abs=1e-4)

    def test_radius_two_symmetric_unit_sum(self):
        k = gaussian_kernel(2, 1.0)
        assert k.weights.size == 5
        assert abs(k.weights.sum() - 1.0) < 1e-12
        assert np.array_equal(k.weights, k.weights[::-1])

    def test_rejects_bad_sigma(self):
        with pytest.raises(ParameterError):
            gaussian_kernel(2, 0.0)
        with pytest.raises(ParameterError):
            gaussian_kernel(-1, 1.0)

    def test_normalization_and_symmetry_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            radius = int(rng.integers(0, 16))
            sigma = float(rng.uniform(1e-3, 10.0))
            k = gaussian_kernel(radius, sigma)
            assert abs(k.weights.sum() - 1.0) < 1e-6
            assert np.array_equal(k.weights, k.weights[::-1])
            assert np.all(k.weights >= 0)


class TestConvolveGaussian:
    def test_constant_preserved(self):
        img = ImageF.full(17, 13, 3, 0.37)
        out = convolve_gaussian(img, gaussian_kernel(3, 1.2))
        assert np.max(np.abs(out.data - 0.37)) < 1e-12

    def test_constant_preserved_fft_path(self):
        img = ImageF.full(40, 40, 1, 0.61)
        out = convolve_gaussian(img, gaussian_kernel(36, 12.0))
        assert np.max(np.abs(out.data - 0.61)) < 1e-12

    def test_radius_zero_is_identity(self, random_image):
        img = random_image(1)
        out = convolve_gaussian(img, gaussian_kernel(0, 2.0))
        assert np.array_equal(out.data, img.data)

    def test_matches_brute_force(self, random_image):
        rng = np.random.default_rng(5)
        for _ in range(10):
            img = random_image(int(rng.integers(0, 1 << 31)))
            radius = int(rng.integers(1, 7))
            sigma = float(rng.uniform(0.3, 3.0))
            out = convolve_gaussian(img, gaussian_kernel(radius, sigma))
            kern2d = gauss2d(radius, sigma)
            for c in range(3):
                ref = conv2d_reflect(img.data[c], kern2d)
                assert np.max(np.abs(out.data[c] - ref)) < 1e-5

    def test_fft_path_matches_brute_force(self):
        rng = np.random.default_rng(6)
        img = ImageF(rng.random((1, 48, 40)))
        out = convolve_gaussian(img, gaussian_kernel(20, 7.0))  # 41 taps: FFT path
        ref = conv2d_reflect(img.data[0], gauss2d(20, 7.0))
        assert np.max(np.abs(out.data[0] - ref)) < 1e-10

    def test_output_within_input_range(self, random_image):
        rng = np.random.default_rng(7)
        for _ in range(20):
            img = random_image(int(rng.integers(0, 1 << 31)))
            radius = int(rng.integers(0, 12))
            sigma = float(rng.uniform(0.2, 8.0))
            out = convolve_gaussian(img, gaussian_kernel(radius, sigma))
            assert out.data.min() >= img.data.min() - 1e-9
            assert out.data.max() <= img.data.max() + 1e-9

    def test_single_row_image(self):
        img = ImageF(np.linspace(0, 1, 9).reshape(1, 1, 9))
        out = convolve_gaussian(img, gaussian_kernel(2, 1.0))
        assert out.data.shape == img.data.shape
        assert out.data.min() >= img.data.min() - 1e-9


class TestClipSaturate:
    def test_identity_at_unit_saturation(self, random_image):
        img = random_image(2)
        assert np.array_equal(clip_saturate(img, 1.0).data, img.data)

    def test_zero_saturation_is_luminance(self):
        img = ImageF(np.array([0.8, 0.2, 0.2]).reshape(3, 1, 1))
        out = clip_saturate(img, 0.0)
        lum = 0.299 * 0.8 + 0.587 * 0.2 + 0.114 * 0.2
        assert out.data.ravel() == pytest.approx([lum] * 3, abs=1e-12)

    def test_oversaturation_worked_example(self):
        # lum = 0.3794; R -> 0.3794 + 1.5 * 0.4206 = 1.0103, clamped;
        # G, B -> 0.3794 - 1.5 * 0.1794 = 0.1103
        img = ImageF(np.array([0.8, 0.2, 0.2]).reshape(3, 1, 1))
        out = clip_saturate(img, 1.5)
        assert out.data[0, 0, 0] == 1.0
        assert out.data[1, 0, 0] == pytest.approx(0.1103, abs=1e-4)
        assert out.data[2, 0, 0] == pytest.approx(0.1103, abs=1e-4)

    def test_output_always_in_range(self, random_image):
        img = ImageF(random_image(3).data * 3.0 - 1.0)
        for s in (0.0, 0.5, 1.0, 2.5):
            out = clip_saturate(img, s)
            assert out.data.min() >= 0.0
            assert out.data.max() <= 1.0

    def test_single_channel_only_clamps(self):
        img = ImageF(np.array([[[-0.5, 0.4, 1.5]]]))
        assert list(clip_saturate(img, 0.3).data.ravel()) == [0.0, 0.4, 1.0]

    def test_rejects_negative_factor(self, random_image):
        with pytest.raises(ParameterError):
            clip_saturate(random_image(4), -0.1)


class TestImageF:
    def test_rejects_bad_shapes(self):
        with pytest.raises(ShapeError):
            ImageF(np.zeros((4, 4)))
        with pytest.raises(ShapeError):
            ImageF(np.zeros((3, 0, 4)))
