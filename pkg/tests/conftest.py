import numpy as np
import pytest

from fundusynth import ImageF, save_image
from phantoms import fundus_phantom


@pytest.fixture
def make_phantom():
    """Factory for cached deterministic fundus-like images."""
    return fundus_phantom


@pytest.fixture
def random_image():
    def make(seed: int, width: int = 32, height: int = 32, channels: int = 3) -> ImageF:
        rng = np.random.default_rng(seed)
        return ImageF(rng.random((channels, height, width)))

    return make


@pytest.fixture
def clean_dir(tmp_path, make_phantom):
    """Directory with three small clean phantoms saved as PNGs."""
    d = tmp_path / "clean"
    d.mkdir()
    for i in range(3):
        save_image(d / f"eye{i}.png", make_phantom(i, 128))
    return d
