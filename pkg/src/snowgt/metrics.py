"""Deterministic image-pair quality metrics and loss terms.

Covers PSNR, global-statistics SSIM, the precision/recall/F-measure mask
loss, gradient-magnitude maps with vertical emphasis, plain L1, and the
composite generator objectives with the adversarial term replaced by an
externally supplied scalar. All functions are pure; color images are
reduced per-channel.

Note on SSIM: the denominator uses the sum of variances
(sigma_a^2 + sigma_b^2 + c2). A product there would break the identity
ssim(a, a) == 1, so the sum form is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .degrade import DEFAULT_TAU, SnowMask, binarize, residual
from .errors import DimensionMismatchError, ParameterError


@dataclass(frozen=True)
class LossWeights:
    """Weights and constants for the loss suite.

    lam: L1 regularization weight; lam_f: F-measure loss weight;
    lam_gd: gradient-loss weight; alpha: vertical-gradient emphasis
    (>= 1); c1, c2: SSIM stabilizers on the [0, 1] range; tau: residual
    binarization threshold.
    """

    lam: float = 100.0
    lam_f: float = 10.0
    lam_gd: float = 10.0
    alpha: float = 4.0
    c1: float = 0.01**2
    c2: float = 0.03**2
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if min(self.lam, self.lam_f, self.lam_gd) < 0:
            raise ParameterError("weights must be non-negative")
        if self.alpha < 1:
            raise ParameterError(f"alpha must be >= 1, got {self.alpha}")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ParameterError("c1 and c2 must be positive")
        if not 0.0 < self.tau < 1.0:
            raise ParameterError(f"tau must be in (0, 1), got {self.tau}")

    def to_dict(self) -> dict:
        return {
            "lam": self.lam, "lam_f": self.lam_f, "lam_gd": self.lam_gd,
            "alpha": self.alpha, "c1": self.c1, "c2": self.c2, "tau": self.tau,
        }


@dataclass(frozen=True)
class MaskConfusion:
    """Pixel-wise confusion counts between a predicted and a reference mask."""

    tp: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn) < 0:
            raise ParameterError("confusion counts must be non-negative")


class PrecisionRecallF(NamedTuple):
    precision: float
    recall: float
    f_measure: float


class FMeasureLoss(NamedTuple):
    """Both readings of the mask loss: the paper-form similarity weight
    and its (1 - F) minimization counterpart."""

    similarity: float
    dissimilarity: float
    f_measure: float
    precision: float
    recall: float


def _as_pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; identical images give math.inf."""
    a, b = _as_pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def _ssim_single(a, b, c1, c2) -> float:
    mu_a = float(a.mean())
    mu_b = float(b.mean())
    var_a = float(((a - mu_a) ** 2).mean())
    var_b = float(((b - mu_b) ** 2).mean())
    cov = float(((a - mu_a) * (b - mu_b)).mean())
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return num / den


def ssim(a: np.ndarray, b: np.ndarray, c1: float = 0.01**2, c2: float = 0.03**2) -> float:
    """Global-statistics structural similarity over the whole image.

    Uses image-wide means, variances, and covariance (no windowing).
    Color images take the mean of the per-channel values. Result lies in
    [-1, 1] and equals exactly 1 iff the statistics coincide.
    """
    if c1 <= 0 or c2 <= 0:
        raise ParameterError("c1 and c2 must be positive")
    a, b = _as_pair(a, b)
    if a.ndim == 2:
        return _ssim_single(a, b, c1, c2)
    if a.ndim == 3:
        vals = [_ssim_single(a[:, :, ch], b[:, :, ch], c1, c2) for ch in range(a.shape[2])]
        return float(np.mean(vals))
    raise DimensionMismatchError(f"expected 2-D or 3-channel images, got ndim={a.ndim}")


def l1(a: np.ndarray, b: np.ndarray) -> float:
    """Mean absolute difference (per-pixel mean keeps weights resolution-independent)."""
    a, b = _as_pair(a, b)
    return float(np.mean(np.abs(a - b)))


def _mask_data(mask) -> np.ndarray:
    data = mask.data if isinstance(mask, SnowMask) else np.asarray(mask)
    return data.astype(bool)


def mask_confusion(pred, ref) -> MaskConfusion:
    """Count TP/FP/FN pixels between a predicted and a reference mask."""
    p = _mask_data(pred)
    r = _mask_data(ref)
    if p.shape != r.shape:
        raise DimensionMismatchError(f"mask shapes differ: {p.shape} vs {r.shape}")
    return MaskConfusion(
        tp=int(np.count_nonzero(p & r)),
        fp=int(np.count_nonzero(p & ~r)),
        fn=int(np.count_nonzero(~p & r)),
    )


def f_measure(c: MaskConfusion) -> PrecisionRecallF:
    """Precision, recall, and their harmonic mean.

    Outputs are named by formula (precision = TP/(TP+FP)). Two empty
    masks agree perfectly and score 1; an empty side against a non-empty
    one scores 0.
    """
    if c.tp == 0 and c.fp == 0 and c.fn == 0:
        return PrecisionRecallF(1.0, 1.0, 1.0)
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp > 0 else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn > 0 else 0.0
    if precision + recall == 0.0:
        return PrecisionRecallF(precision, recall, 0.0)
    return PrecisionRecallF(
        precision, recall, 2.0 * precision * recall / (precision + recall)
    )


def loss_f(
    degraded: np.ndarray,
    clean: np.ndarray,
    estimate: np.ndarray,
    tau: float = DEFAULT_TAU,
    lam_f: float = 10.0,
) -> FMeasureLoss:
    """Mask-similarity loss between true and estimated residuals.

    Both residuals (degraded - clean, degraded - estimate) are binarized
    at tau; the F-measure between the masks is scaled by lam_f. The
    similarity form rises with agreement; the dissimilarity form
    lam_f * (1 - F) is the usual minimization reading.
    """
    ref_mask = binarize(residual(degraded, clean), tau)
    pred_mask = binarize(residual(degraded, estimate), tau)
    prf = f_measure(mask_confusion(pred_mask, ref_mask))
    return FMeasureLoss(
        similarity=lam_f * prf.f_measure,
        dissimilarity=lam_f * (1.0 - prf.f_measure),
        f_measure=prf.f_measure,
        precision=prf.precision,
        recall=prf.recall,
    )


def _grad_single(img: np.ndarray, alpha: float) -> np.ndarray:
    padded = np.pad(img, 1, mode="edge")
    gx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    gy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    return np.sqrt(gx * gx + alpha * gy * gy)


def gradient_magnitude(img: np.ndarray, alpha: float = 4.0) -> np.ndarray:
    """sqrt((d/dx)^2 + alpha * (d/dy)^2) with central differences.

    Borders are replicated before differencing. alpha > 1 emphasizes
    vertical structure (rain-streak geometry). Color images return the
    mean of the per-channel maps.
    """
    if alpha < 1:
        raise ParameterError(f"alpha must be >= 1, got {alpha}")
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        return _grad_single(img, alpha)
    if img.ndim == 3:
        maps = [_grad_single(img[:, :, ch], alpha) for ch in range(img.shape[2])]
        return np.mean(maps, axis=0)
    raise DimensionMismatchError(f"expected 2-D or 3-channel image, got ndim={img.ndim}")


def gradient_l1_loss(
    a: np.ndarray, b: np.ndarray, alpha: float = 4.0, lam_gd: float = 10.0
) -> float:
    """lam_gd times the mean absolute difference of the two gradient maps."""
    a, b = _as_pair(a, b)
    return lam_gd * float(np.mean(np.abs(gradient_magnitude(a, alpha) - gradient_magnitude(b, alpha))))


@dataclass(frozen=True)
class CompositeLosses:
    """Itemized generator objectives with the adversarial term externalized.

    loss_s guides the desnower (L1 + mask F-measure), loss_gd the first
    deraining stage (L1 + gradient loss, on the first-stage estimate),
    loss_gr the refiner (L1 + SSIM). Each composite equals
    adversarial + its itemized terms.
    """

    adversarial: float
    l1_refined: float
    l1_first_stage: float
    f_measure: float
    f_term: float
    gradient_l1: float
    gradient_term: float
    ssim: float
    ssim_term: float
    loss_s: float
    loss_gd: float
    loss_gr: float


def composite_losses(
    degraded: np.ndarray,
    clean: np.ndarray,
    refined: np.ndarray,
    first_stage: np.ndarray,
    weights: LossWeights = LossWeights(),
    adversarial: float = 0.0,
) -> CompositeLosses:
    """Evaluate the three composite objectives on one image set."""
    l1_refined = l1(clean, refined)
    l1_first = l1(clean, first_stage)
    fl = loss_f(degraded, clean, refined, tau=weights.tau, lam_f=weights.lam_f)
    grad = float(
        np.mean(
            np.abs(
                gradient_magnitude(clean, weights.alpha)
                - gradient_magnitude(first_stage, weights.alpha)
            )
        )
    )
    ssim_val = ssim(clean, refined, weights.c1, weights.c2)
    gradient_term = weights.lam_gd * grad
    return CompositeLosses(
        adversarial=adversarial,
        l1_refined=l1_refined,
        l1_first_stage=l1_first,
        f_measure=fl.f_measure,
        f_term=fl.similarity,
        gradient_l1=grad,
        gradient_term=gradient_term,
        ssim=ssim_val,
        ssim_term=ssim_val,
        loss_s=adversarial + weights.lam * l1_refined + fl.similarity,
        loss_gd=adversarial + weights.lam * l1_first + gradient_term,
        loss_gr=adversarial + weights.lam * l1_refined + ssim_val,
    )


@dataclass
class ImageMetrics:
    """Per-image row of an evaluation report."""

    name: str
    psnr: float
    ssim: float
    l1: float
    gradient_l1: float
    f_measure: Optional[float] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    loss_f: Optional[float] = None
    loss_gradient: float = 0.0
    loss_ssim: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "psnr": json_float(self.psnr),
            "ssim": self.ssim,
            "l1": self.l1,
            "gradient_l1": self.gradient_l1,
            "f_measure": self.f_measure,
            "precision": self.precision,
            "recall": self.recall,
            "loss_f": self.loss_f,
            "loss_gradient": self.loss_gradient,
            "loss_ssim": self.loss_ssim,
        }


def json_float(x: Optional[float]):
    """Strict-JSON representation: infinities become the string 'inf'."""
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def evaluate_pair(
    name: str,
    pred: np.ndarray,
    gt: np.ndarray,
    degraded: Optional[np.ndarray] = None,
    weights: LossWeights = LossWeights(),
) -> ImageMetrics:
    """All metrics for one prediction/ground-truth pair.

    The F-measure family needs the degraded source image to build the two
    residual masks; without it those fields stay None.
    """
    row = ImageMetrics(
        name=name,
        psnr=psnr(pred, gt),
        ssim=ssim(pred, gt, weights.c1, weights.c2),
        l1=l1(pred, gt),
        gradient_l1=gradient_l1_loss(gt, pred, weights.alpha, 1.0),
    )
    row.loss_gradient = weights.lam_gd * row.gradient_l1
    row.loss_ssim = row.ssim
    if degraded is not None:
        fl = loss_f(degraded, gt, pred, tau=weights.tau, lam_f=weights.lam_f)
        row.f_measure = fl.f_measure
        row.precision = fl.precision
        row.recall = fl.recall
        row.loss_f = fl.similarity
    return row


def aggregate_report(rows: list[ImageMetrics], weights: LossWeights) -> dict:
    """Assemble the report dict: per-image rows, field means, and weights.

    Rows are sorted by name so corpus means are order-independent; a mean
    over any infinite PSNR is itself infinite (encoded as 'inf').
    """
    rows = sorted(rows, key=lambda r: r.name)
    mean: dict = {}
    fields = [
        "psnr", "ssim", "l1", "gradient_l1", "f_measure",
        "precision", "recall", "loss_f", "loss_gradient", "loss_ssim",
    ]
    for field_name in fields:
        values = [getattr(r, field_name) for r in rows]
        if not values or any(v is None for v in values):
            mean[field_name] = None
        else:
            mean[field_name] = json_float(float(np.mean(values)))
    return {
        "per_image": [r.to_dict() for r in rows],
        "mean": mean,
        "weights": weights.to_dict(),
    }
