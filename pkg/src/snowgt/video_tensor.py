"""Video frame sequences as a dense [0, 1] tensor with three slice modes.

The tensor is indexed ``(row, col, frame, channel)``. A *horizontal* slice
fixes a row and is a (frames x cols) matrix with time as the row axis; a
*lateral* slice fixes a column (frames x rows); a *frontal* slice is an
ordinary frame (rows x cols). Color data is handled as independent
single-channel planes throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import (
    BoundsError,
    DimensionMismatchError,
    FrameLoadError,
    InsufficientFramesError,
    ParameterError,
)

SLICE_MODES = ("horizontal", "lateral", "frontal")

FRAME_NAME = "frame_{:06d}.png"

_IMAGE_SUFFIXES = {".png", ".bmp", ".jpg", ".jpeg", ".tif", ".tiff"}


@dataclass(frozen=True)
class VideoTensor:
    """Dense video of shape (rows, cols, frames, channels), values in [0, 1].

    Instances are immutable; every operation returns a new tensor. The
    underlying array is marked read-only on construction.
    """

    data: np.ndarray

    def __post_init__(self):
        a = self.data
        if a.ndim != 4:
            raise DimensionMismatchError(
                f"expected 4-D (rows, cols, frames, channels) array, got ndim={a.ndim}"
            )
        m, n, k, c = a.shape
        if m < 2 or n < 2 or k < 2:
            raise ParameterError(f"tensor must be at least 2x2x2, got {m}x{n}x{k}")
        if c not in (1, 3):
            raise ParameterError(f"channels must be 1 or 3, got {c}")
        if not np.isfinite(a).all():
            raise ParameterError("tensor contains non-finite values")
        a.setflags(write=False)

    @classmethod
    def from_array(cls, arr, clamp=True) -> "VideoTensor":
        """Build a tensor from (rows, cols, frames) or (rows, cols, frames, c) data."""
        a = np.asarray(arr, dtype=np.float64)
        if a.ndim == 3:
            a = a[..., np.newaxis]
        if clamp:
            if not np.isfinite(a).all():
                raise ParameterError("input contains non-finite values")
            a = np.clip(a, 0.0, 1.0)
        return cls(a)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def frames(self) -> int:
        return self.data.shape[2]

    @property
    def channels(self) -> int:
        return self.data.shape[3]

    def frame(self, t: int) -> np.ndarray:
        """Frame ``t`` as (rows, cols) for grayscale or (rows, cols, 3) for color."""
        if not 0 <= t < self.frames:
            raise BoundsError(f"frame {t} out of range [0, {self.frames})")
        img = np.array(self.data[:, :, t, :])
        return img[:, :, 0] if self.channels == 1 else img


@dataclass
class SliceView:
    """One 2-D section of a video tensor.

    ``matrix`` is a copy; mutating it never aliases the source tensor.
    Shapes by mode: horizontal (frames x cols), lateral (frames x rows),
    frontal (rows x cols).
    """

    mode: str
    index: int
    channel: int
    matrix: np.ndarray


def list_frame_files(directory) -> list[Path]:
    """Image files of a frame directory in lexicographic (frame) order."""
    directory = Path(directory)
    files = [
        p
        for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES
    ]
    return sorted(files, key=lambda p: p.name)


def _read_frame(path: Path, channels: int) -> np.ndarray:
    try:
        with Image.open(path) as img:
            img = img.convert("L" if channels == 1 else "RGB")
            arr = np.asarray(img, dtype=np.float64)
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise FrameLoadError(f"cannot read frame {path}: {exc}") from exc
    except Exception as exc:  # PIL raises e.g. UnidentifiedImageError
        raise FrameLoadError(f"cannot decode frame {path}: {exc}") from exc
    return arr / 255.0


def probe_channels(directory) -> int:
    """Return 3 if the first frame in ``directory`` is color, else 1."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FrameLoadError(f"not a directory: {directory}")
    files = list_frame_files(directory)
    if not files:
        raise InsufficientFramesError(f"no image files in {directory}")
    try:
        with Image.open(files[0]) as img:
            return 3 if img.mode in ("RGB", "RGBA", "P", "CMYK", "YCbCr") else 1
    except OSError as exc:
        raise FrameLoadError(f"cannot read frame {files[0]}: {exc}") from exc


def load_frames(directory, channels: int = 1) -> VideoTensor:
    """Load a lexicographically ordered frame directory into a tensor.

    8-bit pixel values map to [0, 1] via v / 255. All frames must share
    one resolution; at least two frames are required.
    """
    if channels not in (1, 3):
        raise ParameterError(f"channels must be 1 or 3, got {channels}")
    directory = Path(directory)
    if not directory.is_dir():
        raise FrameLoadError(f"not a directory: {directory}")
    files = list_frame_files(directory)
    if len(files) < 2:
        raise InsufficientFramesError(
            f"need at least 2 frames, found {len(files)} in {directory}"
        )
    first = _read_frame(files[0], channels)
    shape = first.shape[:2]
    planes = np.empty(shape + (len(files),) + (channels,), dtype=np.float64)
    for t, path in enumerate(files):
        arr = _read_frame(path, channels)
        if arr.shape[:2] != shape:
            raise DimensionMismatchError(
                f"frame {path.name} is {arr.shape[1]}x{arr.shape[0]}, "
                f"expected {shape[1]}x{shape[0]}"
            )
        planes[:, :, t, :] = arr if channels == 3 else arr[:, :, np.newaxis]
    return VideoTensor.from_array(planes)


def save_frames(tensor: VideoTensor, directory) -> list[Path]:
    """Write every frame as 8-bit PNG files named frame_000000.png, ..."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for t in range(tensor.frames):
        path = directory / FRAME_NAME.format(t)
        save_image(tensor.frame(t), path)
        written.append(path)
    return written


def save_image(image: np.ndarray, path) -> Path:
    """Write one [0, 1] image as an 8-bit PNG (grayscale or RGB)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arr = np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0)
    quantized = np.round(arr * 255.0).astype(np.uint8)
    mode = "L" if quantized.ndim == 2 else "RGB"
    Image.fromarray(quantized, mode=mode).save(path, format="PNG")
    return path


def load_image(path) -> np.ndarray:
    """Read one image file as float64 in [0, 1]; color stays 3-channel."""
    path = Path(path)
    try:
        with Image.open(path) as img:
            if img.mode in ("L", "I;16", "I", "1"):
                arr = np.asarray(img.convert("L"), dtype=np.float64)
            else:
                arr = np.asarray(img.convert("RGB"), dtype=np.float64)
    except OSError as exc:
        raise FrameLoadError(f"cannot read image {path}: {exc}") from exc
    return arr / 255.0


def _check_mode(mode: str):
    if mode not in SLICE_MODES:
        raise ParameterError(f"unknown slice mode {mode!r}; expected one of {SLICE_MODES}")


def slice_count(tensor: VideoTensor, mode: str) -> int:
    """Number of slices the given mode partitions the tensor into."""
    _check_mode(mode)
    return {
        "horizontal": tensor.rows,
        "lateral": tensor.cols,
        "frontal": tensor.frames,
    }[mode]


def extract_slice(tensor: VideoTensor, mode: str, index: int, channel: int = 0) -> SliceView:
    """Copy out one slice; element (a, b) of a horizontal slice is t[index, b, a]."""
    _check_mode(mode)
    bound = slice_count(tensor, mode)
    if not 0 <= index < bound:
        raise BoundsError(f"{mode} index {index} out of range [0, {bound})")
    if not 0 <= channel < tensor.channels:
        raise BoundsError(f"channel {channel} out of range [0, {tensor.channels})")
    d = tensor.data
    if mode == "horizontal":
        matrix = d[index, :, :, channel].T.copy()  # (frames, cols)
    elif mode == "lateral":
        matrix = d[:, index, :, channel].T.copy()  # (frames, rows)
    else:
        matrix = d[:, :, index, channel].copy()  # (rows, cols)
    return SliceView(mode=mode, index=index, channel=channel, matrix=matrix)


def _expected_slice_shape(tensor: VideoTensor, mode: str) -> tuple[int, int]:
    return {
        "horizontal": (tensor.frames, tensor.cols),
        "lateral": (tensor.frames, tensor.rows),
        "frontal": (tensor.rows, tensor.cols),
    }[mode]


def replace_slice(tensor: VideoTensor, view: SliceView) -> VideoTensor:
    """Return a tensor equal to ``tensor`` except for the entries under ``view``.

    Replacement values are clamped to [0, 1].
    """
    _check_mode(view.mode)
    bound = slice_count(tensor, view.mode)
    if not 0 <= view.index < bound:
        raise BoundsError(f"{view.mode} index {view.index} out of range [0, {bound})")
    if not 0 <= view.channel < tensor.channels:
        raise BoundsError(f"channel {view.channel} out of range [0, {tensor.channels})")
    matrix = np.asarray(view.matrix, dtype=np.float64)
    expected = _expected_slice_shape(tensor, view.mode)
    if matrix.shape != expected:
        raise DimensionMismatchError(
            f"{view.mode} slice must be {expected}, got {matrix.shape}"
        )
    data = tensor.data.copy()
    _assign_slice(data, view.mode, view.index, view.channel, np.clip(matrix, 0.0, 1.0))
    return VideoTensor(data)


def _assign_slice(data: np.ndarray, mode: str, index: int, channel: int, matrix: np.ndarray):
    # Internal helper shared with the video-level reconstruction loop, which
    # mutates a private buffer instead of copying the tensor per slice.
    if mode == "horizontal":
        data[index, :, :, channel] = matrix.T
    elif mode == "lateral":
        data[:, index, :, channel] = matrix.T
    else:
        data[:, :, index, channel] = matrix


def split_quadrants(frame: np.ndarray):
    """Split an image into (top-left, top-right, bottom-left, bottom-right).

    Odd dimensions give the extra row/column to the top/left sub-images, so
    joining the four pieces back together is always bit-exact.
    """
    frame = np.asarray(frame)
    if frame.ndim not in (2, 3):
        raise DimensionMismatchError(f"expected 2-D or 3-channel image, got ndim={frame.ndim}")
    m, n = frame.shape[:2]
    if m < 2 or n < 2:
        raise ParameterError(f"image must be at least 2x2, got {m}x{n}")
    rs = (m + 1) // 2
    cs = (n + 1) // 2
    return (
        frame[:rs, :cs].copy(),
        frame[:rs, cs:].copy(),
        frame[rs:, :cs].copy(),
        frame[rs:, cs:].copy(),
    )


def join_quadrants(tl, tr, bl, br) -> np.ndarray:
    """Inverse of :func:`split_quadrants`."""
    top = np.concatenate([tl, tr], axis=1)
    bottom = np.concatenate([bl, br], axis=1)
    return np.concatenate([top, bottom], axis=0)
