"""Slice-wise SVD decomposition and temporal filtering for video desnowing.

Each spatiotemporal slice (time on the row axis) is factored as U S V^T.
The leading rank-1 projection is the stationary background; projections
2..q carry structured motion; the remainder is treated as noise. Falling
snow shows up as short-term, high-temporal-frequency content, so applying
an ideal low/bandpass filter to the left singular vectors of the motion
block and resumming removes it while the background and noise terms pass
through untouched.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .errors import BoundsError, NumericFailureError, ParameterError
from .video_tensor import (
    SliceView,
    VideoTensor,
    _assign_slice,
    extract_slice,
    slice_count,
)

# Relative singular-value cutoff for the effective rank, matching the
# numpy.linalg.matrix_rank convention.
_EPS = np.finfo(np.float64).eps


@dataclass
class SliceSvd:
    """Thin SVD factors of one slice.

    u: (k, p) left singular vectors (temporal), s: (p,) non-increasing
    singular values, v: (n, p) right singular vectors (spatial),
    d: effective rank (singular values above the numeric cutoff),
    with p = min(k, n).
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    d: int

    @property
    def p(self) -> int:
        return int(self.s.size)


@dataclass(frozen=True)
class BandpassSpec:
    """Ideal temporal filter window as fractions of the Nyquist frequency.

    A DFT bin b of a length-k signal is retained iff
    low <= 2*min(b, k-b)/k <= high; zeroing is applied to symmetric bin
    pairs so filtered signals stay real. The DC bin survives only when
    low == 0.
    """

    low: float = 0.0
    high: float = 0.1

    def __post_init__(self):
        if not (0.0 <= self.low <= self.high <= 1.0):
            raise ParameterError(
                f"band must satisfy 0 <= low <= high <= 1, got ({self.low}, {self.high})"
            )

    def retained_bins(self, k: int) -> np.ndarray:
        b = np.arange(k)
        frac = 2.0 * np.minimum(b, k - b) / k
        return (self.low <= frac) & (frac <= self.high)

    @classmethod
    def parse(cls, text: str) -> "BandpassSpec":
        """Parse 'LOW:HIGH', e.g. '0.0:0.1'."""
        parts = text.split(":")
        if len(parts) != 2:
            raise ParameterError(f"band must look like '0.0:0.1', got {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ParameterError(f"bad band {text!r}: {exc}") from exc

    def __str__(self) -> str:
        return f"{self.low:g}:{self.high:g}"


@dataclass(frozen=True)
class QRule:
    """Rule choosing the foreground rank boundary q from a decomposition.

    kind 'energy': smallest q with cumulative squared singular values
    reaching the given fraction of the total. kind 'fixed': a constant
    rank. Either way q is clamped to [2, d] (q = 1 only when d <= 1, in
    which case the slice has no foreground).
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind == "energy":
            if not 0.0 < self.value <= 1.0:
                raise ParameterError(f"energy fraction must be in (0, 1], got {self.value}")
        elif self.kind == "fixed":
            if self.value != int(self.value) or self.value < 2:
                raise ParameterError(f"fixed rank must be an integer >= 2, got {self.value}")
        else:
            raise ParameterError(f"unknown q rule kind {self.kind!r}")

    @classmethod
    def energy(cls, fraction: float = 0.999) -> "QRule":
        return cls("energy", fraction)

    @classmethod
    def fixed(cls, rank: int) -> "QRule":
        return cls("fixed", rank)

    @classmethod
    def parse(cls, text: str) -> "QRule":
        """Parse 'energy:0.999' or 'fixed:R'."""
        parts = text.split(":")
        if len(parts) != 2:
            raise ParameterError(f"q rule must look like 'energy:0.999' or 'fixed:4', got {text!r}")
        kind, raw = parts
        try:
            return cls(kind, float(raw))
        except ValueError as exc:
            raise ParameterError(f"bad q rule {text!r}: {exc}") from exc

    def select(self, svd: SliceSvd) -> int:
        if svd.d <= 1:
            return 1
        if self.kind == "fixed":
            return min(int(self.value), svd.d)
        energy = svd.s[: svd.d] ** 2
        total = float(energy.sum())
        cumulative = np.cumsum(energy)
        q = int(np.searchsorted(cumulative, self.value * total)) + 1
        return min(max(q, 2), svd.d)

    def __str__(self) -> str:
        if self.kind == "fixed":
            return f"fixed:{int(self.value)}"
        return f"energy:{self.value:g}"


@dataclass
class ComponentSplit:
    """Additive background / foreground / noise decomposition of a slice."""

    q: int
    background: np.ndarray
    foreground: np.ndarray
    noise: np.ndarray


DEFAULT_Q_RULE = QRule.energy(0.999)
DEFAULT_BAND = BandpassSpec(0.0, 0.1)


def slice_svd(view) -> SliceSvd:
    """Thin SVD of a slice with a deterministic sign convention.

    Accepts a SliceView or a bare 2-D array. Each column pair (u_l, v_l)
    is oriented so the largest-magnitude entry of v_l is positive (ties
    broken by lowest index), which makes repeated runs bit-identical.
    """
    if isinstance(view, SliceView):
        matrix = view.matrix
        where = f"{view.mode} slice {view.index} channel {view.channel}"
    else:
        matrix = np.asarray(view, dtype=np.float64)
        where = "matrix"
    if matrix.ndim != 2:
        raise ParameterError(f"slice must be 2-D, got ndim={matrix.ndim}")
    if not np.isfinite(matrix).all():
        raise ParameterError(f"{where} contains non-finite values")

    try:
        u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        if isinstance(view, SliceView):
            raise NumericFailureError(
                f"SVD failed to converge on {where}: {exc}",
                mode=view.mode,
                index=view.index,
                channel=view.channel,
            ) from exc
        raise NumericFailureError(f"SVD failed to converge: {exc}") from exc

    v = vt.T
    # Sign convention: make the dominant entry of each right vector positive.
    anchor = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[anchor, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    u = u * signs
    v = v * signs

    cutoff = s[0] * max(matrix.shape) * _EPS if s.size else 0.0
    d = int(np.count_nonzero(s > cutoff))
    return SliceSvd(u=u, s=s, v=v, d=d)


def rank_projection(svd: SliceSvd, l: int) -> np.ndarray:
    """The single rank-1 term u_l s_l v_l^T (1-indexed, 1 <= l <= p)."""
    if not 1 <= l <= svd.p:
        raise BoundsError(f"projection index {l} out of range [1, {svd.p}]")
    i = l - 1
    return svd.s[i] * np.outer(svd.u[:, i], svd.v[:, i])


def reconstruct(svd: SliceSvd) -> np.ndarray:
    """Resum all projections: U diag(S) V^T."""
    return (svd.u * svd.s) @ svd.v.T


def split_components(svd: SliceSvd, q_rule: QRule = DEFAULT_Q_RULE) -> ComponentSplit:
    """Split a decomposed slice into background (l=1), foreground (2..q), noise (q+1..d).

    A slice of effective rank <= 1 has zero foreground and noise and q = 1.
    """
    q = q_rule.select(svd)
    background = rank_projection(svd, 1)
    foreground = _band_sum(svd.u, svd.s, svd.v, 1, q)
    noise = _band_sum(svd.u, svd.s, svd.v, q, svd.d)
    return ComponentSplit(q=q, background=background, foreground=foreground, noise=noise)


def _band_sum(u, s, v, start, stop) -> np.ndarray:
    """Sum of projections for 0-based column range [start, stop)."""
    if stop <= start:
        return np.zeros((u.shape[0], v.shape[0]))
    return (u[:, start:stop] * s[start:stop]) @ v[:, start:stop].T


def filter_left_vectors(svd: SliceSvd, q: int, spec: BandpassSpec) -> SliceSvd:
    """Apply the ideal temporal filter to left singular vectors 2..q.

    Vectors 1 and q+1.. are untouched. The returned factors are no longer
    orthonormal in U; they are only meant for resumming.
    """
    if q > svd.d:
        raise BoundsError(f"q={q} exceeds effective rank d={svd.d}")
    u = svd.u.copy()
    if q >= 2:
        keep = spec.retained_bins(u.shape[0])
        spectrum = np.fft.fft(u[:, 1:q], axis=0)
        spectrum[~keep, :] = 0.0
        u[:, 1:q] = np.fft.ifft(spectrum, axis=0).real
    return dc_replace(svd, u=u)


def desnow_slice(
    svd: SliceSvd,
    q: int,
    spec: BandpassSpec,
    include_noise: bool = True,
) -> np.ndarray:
    """Reconstruct one slice with the motion block temporally filtered.

    Returns background + filtered foreground (+ noise unless dropped).
    With an all-pass band this reproduces the original slice to numerical
    precision.
    """
    filtered = filter_left_vectors(svd, q, spec)
    out = _band_sum(filtered.u, filtered.s, filtered.v, 1, q)
    out += rank_projection(svd, 1)
    if include_noise:
        out += _band_sum(svd.u, svd.s, svd.v, q, svd.d)
    return out


def desnow_video(
    tensor: VideoTensor,
    mode: str = "horizontal",
    q_rule: QRule = DEFAULT_Q_RULE,
    spec: BandpassSpec = DEFAULT_BAND,
    drop_noise: bool = False,
) -> VideoTensor:
    """Desnow a whole video by filtering every slice of one spatiotemporal mode.

    Every slice is decomposed, filtered, and written back independently per
    channel; the result is clamped to [0, 1]. Identical inputs and
    parameters give bit-identical outputs.
    """
    if mode not in ("horizontal", "lateral"):
        raise ParameterError(
            f"desnowing needs a spatiotemporal mode ('horizontal' or 'lateral'), got {mode!r}"
        )
    if tensor.frames < 4:
        warnings.warn(
            f"only {tensor.frames} frames: temporal filtering is degenerate below 4",
            stacklevel=2,
        )
    out = tensor.data.copy()
    for channel in range(tensor.channels):
        for index in range(slice_count(tensor, mode)):
            view = extract_slice(tensor, mode, index, channel)
            svd = slice_svd(view)
            q = q_rule.select(svd)
            cleaned = desnow_slice(svd, q, spec, include_noise=not drop_noise)
            _assign_slice(out, mode, index, channel, np.clip(cleaned, 0.0, 1.0))
    return VideoTensor(out)
