"""Additive snow/rain layer synthesis and residual mask extraction.

The degradation model is X = clamp(C + N): a clean background plus an
additive particle layer. Generators are pure functions of their inputs
and seed, and every particle footprint is recorded so exact ground-truth
masks come for free. Particles are rendered with solid footprints (a
pixel is either covered at the particle's opacity or untouched), which
keeps the layer and its mask consistent at every threshold up to the
minimum particle opacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, ParameterError
from .video_tensor import VideoTensor

DEFAULT_TAU = 0.05


@dataclass
class SnowMask:
    """Binary particle mask plus the threshold that produced it.

    tau == 0.0 marks an exact ground-truth footprint from particle records.
    """

    data: np.ndarray
    tau: float

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=bool)

    @property
    def popcount(self) -> int:
        return int(self.data.sum())

    @property
    def fraction(self) -> float:
        return float(self.data.mean())


@dataclass
class SnowParticle:
    y: float
    x: float
    diameter: float
    opacity: float
    vy: float
    vx: float

    def to_dict(self) -> dict:
        return {
            "y": self.y, "x": self.x, "diameter": self.diameter,
            "opacity": self.opacity, "vy": self.vy, "vx": self.vx,
        }


@dataclass
class RainStreak:
    y: float
    x: float
    length: float
    orientation_deg: float
    opacity: float
    thickness: float

    def to_dict(self) -> dict:
        return {
            "y": self.y, "x": self.x, "length": self.length,
            "orientation_deg": self.orientation_deg,
            "opacity": self.opacity, "thickness": self.thickness,
        }


@dataclass
class DegradationLayer:
    """One rendered additive layer in [0, 1] with its particle records."""

    data: np.ndarray
    kind: str  # "snow" | "rain"
    particles: list = field(default_factory=list)


@dataclass
class SnowSynthesis:
    video: VideoTensor
    masks: list[SnowMask]
    layers: list[np.ndarray]
    particles: list[SnowParticle]


@dataclass
class RainSynthesis:
    image: np.ndarray
    mask: SnowMask
    layer: DegradationLayer


def _layer_array(layer) -> np.ndarray:
    return layer.data if isinstance(layer, DegradationLayer) else np.asarray(layer)


def compose(clean: np.ndarray, layer) -> np.ndarray:
    """X = clamp(C + N, 0, 1); opacity-1 particles fully occlude."""
    clean = np.asarray(clean, dtype=np.float64)
    n = _layer_array(layer).astype(np.float64)
    if n.shape != clean.shape[: n.ndim] or n.ndim > clean.ndim:
        raise DimensionMismatchError(f"layer shape {n.shape} does not match image {clean.shape}")
    if clean.ndim == 3 and n.ndim == 2:
        n = n[:, :, np.newaxis]
    return np.clip(clean + n, 0.0, 1.0)


def residual(degraded: np.ndarray, clean_estimate: np.ndarray) -> np.ndarray:
    """Signed difference X - C_est in [-1, 1]; no clamping."""
    degraded = np.asarray(degraded, dtype=np.float64)
    clean_estimate = np.asarray(clean_estimate, dtype=np.float64)
    if degraded.shape != clean_estimate.shape:
        raise DimensionMismatchError(
            f"shapes differ: {degraded.shape} vs {clean_estimate.shape}"
        )
    return degraded - clean_estimate


def binarize(res: np.ndarray, tau: float = DEFAULT_TAU) -> SnowMask:
    """Mask of pixels whose residual magnitude (max over channels) reaches tau."""
    if not 0.0 < tau < 1.0:
        raise ParameterError(f"tau must be in (0, 1), got {tau}")
    res = np.asarray(res, dtype=np.float64)
    magnitude = np.abs(res)
    if magnitude.ndim == 3:
        magnitude = magnitude.max(axis=2)
    return SnowMask(data=magnitude >= tau, tau=tau)


def _stamp_disc(layer, mask, cy, cx, radius, opacity):
    """Add one solid disc at (cy, cx), wrapping around the borders."""
    m, n = layer.shape
    r = int(math.ceil(radius))
    rows = (np.arange(int(math.floor(cy)) - r, int(math.ceil(cy)) + r + 1))
    cols = (np.arange(int(math.floor(cx)) - r, int(math.ceil(cx)) + r + 1))
    dy = rows[:, None] - cy
    dx = cols[None, :] - cx
    inside = dy * dy + dx * dx <= radius * radius
    if not inside.any():
        return
    rr = np.mod(rows, m)
    cc = np.mod(cols, n)
    sub_r, sub_c = np.nonzero(inside)
    np.add.at(layer, (rr[sub_r], cc[sub_c]), opacity)
    mask[rr[sub_r], cc[sub_c]] = True


def synth_snow_video(
    background: np.ndarray,
    frames: int,
    density: float,
    size_range: tuple[float, float] = (1.0, 3.0),
    opacity_range: tuple[float, float] = (0.6, 1.0),
    fall_speed: float = 2.0,
    seed: int = 0,
) -> SnowSynthesis:
    """Deterministic falling-snow video over a static background.

    density is the target per-frame fraction of covered pixels. Particles
    keep a constant per-particle velocity and wrap at the borders, so
    coverage is stationary over time. Also returns the exact per-frame
    ground-truth masks and additive layers.
    """
    background = np.asarray(background, dtype=np.float64)
    m, n = background.shape[:2]
    if not 0.0 < density <= 1.0:
        raise ParameterError(f"density must be in (0, 1], got {density}")
    if frames < 4:
        raise ParameterError(f"need at least 4 frames, got {frames}")
    lo, hi = size_range
    if not 0.0 < lo <= hi:
        raise ParameterError(f"bad size range {size_range}")
    if hi >= min(m, n):
        raise ParameterError(
            f"max particle size {hi} does not fit a {m}x{n} background"
        )
    op_lo, op_hi = opacity_range
    if not 0.0 < op_lo <= op_hi <= 1.0:
        raise ParameterError(f"bad opacity range {opacity_range}")

    # Expected solid-disc footprint over uniformly random subpixel centers
    # is exactly pi*(s/2)^2, so this count calibrates mean coverage.
    mean_area = math.pi / 4.0 * (lo * lo + lo * hi + hi * hi) / 3.0
    count = max(1, round(density * m * n / mean_area))

    rng = np.random.default_rng(seed)
    particles = [
        SnowParticle(
            y=float(rng.uniform(0, m)),
            x=float(rng.uniform(0, n)),
            diameter=float(rng.uniform(lo, hi)),
            opacity=float(rng.uniform(op_lo, op_hi)),
            vy=float(fall_speed * rng.uniform(0.75, 1.25)),
            vx=float(fall_speed * rng.uniform(-0.2, 0.2)),
        )
        for _ in range(count)
    ]

    layers = []
    masks = []
    video = np.empty((m, n, frames) + ((background.shape[2],) if background.ndim == 3 else ()))
    for t in range(frames):
        layer = np.zeros((m, n))
        mask = np.zeros((m, n), dtype=bool)
        for p in particles:
            cy = (p.y + p.vy * t) % m
            cx = (p.x + p.vx * t) % n
            _stamp_disc(layer, mask, cy, cx, p.diameter / 2.0, p.opacity)
        np.clip(layer, 0.0, 1.0, out=layer)
        layers.append(layer)
        masks.append(SnowMask(data=mask, tau=0.0))
        video[:, :, t, ...] = compose(background, layer)
    return SnowSynthesis(
        video=VideoTensor.from_array(video),
        masks=masks,
        layers=layers,
        particles=particles,
    )


def _stamp_segment(layer, mask, streak: RainStreak):
    """Add one solid capsule (segment with round caps); no wrapping."""
    m, n = layer.shape
    theta = math.radians(streak.orientation_deg)
    # Orientation measured from the horizontal axis; 90 degrees is vertical.
    dy = math.sin(theta) * streak.length / 2.0
    dx = math.cos(theta) * streak.length / 2.0
    y0, x0 = streak.y - dy, streak.x - dx
    y1, x1 = streak.y + dy, streak.x + dx
    half = streak.thickness / 2.0
    rmin = max(0, int(math.floor(min(y0, y1) - half)))
    rmax = min(m - 1, int(math.ceil(max(y0, y1) + half)))
    cmin = max(0, int(math.floor(min(x0, x1) - half)))
    cmax = min(n - 1, int(math.ceil(max(x0, x1) + half)))
    if rmin > rmax or cmin > cmax:
        return
    yy, xx = np.meshgrid(
        np.arange(rmin, rmax + 1), np.arange(cmin, cmax + 1), indexing="ij"
    )
    # Point-to-segment distance.
    sy, sx = y1 - y0, x1 - x0
    seg_sq = sy * sy + sx * sx
    if seg_sq == 0:
        t = np.zeros_like(yy, dtype=float)
    else:
        t = np.clip(((yy - y0) * sy + (xx - x0) * sx) / seg_sq, 0.0, 1.0)
    dist_sq = (yy - (y0 + t * sy)) ** 2 + (xx - (x0 + t * sx)) ** 2
    inside = dist_sq <= half * half
    if not inside.any():
        return
    region = layer[rmin : rmax + 1, cmin : cmax + 1]
    region[inside] += streak.opacity
    mask[rmin : rmax + 1, cmin : cmax + 1] |= inside


def synth_rain_streaks(
    background: np.ndarray,
    orientation_deg: float = 90.0,
    length_px: float = 9.0,
    density: float = 0.02,
    opacity: float = 0.8,
    seed: int = 0,
    thickness: float = 1.0,
    orientation_jitter_deg: float = 2.0,
) -> RainSynthesis:
    """Oriented rain streaks composed onto a single image.

    90 degrees falls straight down. density is the target covered-pixel
    fraction; streak centers are uniform and clipped at the borders.
    """
    background = np.asarray(background, dtype=np.float64)
    m, n = background.shape[:2]
    if not 0.0 <= density <= 1.0:
        raise ParameterError(f"density must be in [0, 1], got {density}")
    if not 0.0 < opacity <= 1.0:
        raise ParameterError(f"opacity must be in (0, 1], got {opacity}")
    if length_px < 1.0 or thickness <= 0.0:
        raise ParameterError(f"bad streak geometry: length={length_px}, thickness={thickness}")
    if length_px >= min(m, n):
        raise ParameterError(f"streak length {length_px} does not fit a {m}x{n} background")

    mean_area = length_px * thickness + math.pi / 4.0 * thickness * thickness
    count = round(density * m * n / mean_area)

    rng = np.random.default_rng(seed)
    streaks = [
        RainStreak(
            y=float(rng.uniform(0, m)),
            x=float(rng.uniform(0, n)),
            length=float(length_px * rng.uniform(0.8, 1.2)),
            orientation_deg=float(
                orientation_deg + rng.uniform(-orientation_jitter_deg, orientation_jitter_deg)
            ),
            opacity=float(opacity),
            thickness=float(thickness),
        )
        for _ in range(count)
    ]

    layer = np.zeros((m, n))
    mask = np.zeros((m, n), dtype=bool)
    for streak in streaks:
        _stamp_segment(layer, mask, streak)
    np.clip(layer, 0.0, 1.0, out=layer)
    deg_layer = DegradationLayer(data=layer, kind="rain", particles=streaks)
    return RainSynthesis(
        image=compose(background, layer),
        mask=SnowMask(data=mask, tau=0.0),
        layer=deg_layer,
    )
