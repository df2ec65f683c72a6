import numpy as np
import pytest

from snowgt.video_tensor import VideoTensor, save_frames


def textured_background(seed, m=64, n=64, lo=0.35, hi=0.95):
    """Blocky high-contrast scene stand-in used across desnow experiments."""
    rng = np.random.default_rng(seed + 1000)
    base = rng.random((m // 4, n // 4))
    img = np.kron(base, np.ones((4, 4)))
    return lo + (hi - lo) * (img - img.min()) / (img.max() - img.min())


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


@pytest.fixture
def random_tensor(rng):
    return VideoTensor.from_array(rng.random((6, 5, 8, 1)))


@pytest.fixture
def frame_dir(tmp_path, rng):
    """A tiny grayscale frame directory on disk."""
    tensor = VideoTensor.from_array(rng.random((8, 10, 5)))
    directory = tmp_path / "clip"
    save_frames(tensor, directory)
    return directory
