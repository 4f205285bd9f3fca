"""Evaluation metrics: distortion, capacity, analyzer classification quality,
residual concentration, and rate-distortion sweeps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analyzer import make_route
from .codec import StegoConfig, encode
from .errors import (
    CapacityExceeded,
    DegenerateTruth,
    DimMismatch,
    EmptyInput,
    LengthMismatch,
    NoPositives,
    TooFewSamples,
)
from .image_io import QMap

__all__ = [
    "RateDistortionPoint",
    "RocCurve",
    "psnr",
    "embedding_rate",
    "precision_recall_at_match",
    "roc_auc",
    "residual_variance",
    "five_number_summary",
    "xorshift_bits",
    "rd_sweep",
]


@dataclass(frozen=True)
class RateDistortionPoint:
    target_bpp: float
    actual_bpp: float | None
    psnr_db: float | None  # None when the point failed, inf for identical images
    error: str | None = None


@dataclass(frozen=True)
class RocCurve:
    points: list  # (false positive rate, true positive rate) per threshold step
    auc: float


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """10*log10(255^2 / MSE); inf for identical images."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimMismatch(f"{a.shape} vs {b.shape}")
    mse = np.mean((a - b) ** 2)
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(255.0**2 / mse))


def embedding_rate(message_bits: int, img: np.ndarray) -> float:
    """Message bits per cover pixel; header and register overhead excluded."""
    img = np.asarray(img)
    return message_bits / img.size


def precision_recall_at_match(scores: np.ndarray, truth: np.ndarray) -> tuple[float, float]:
    """Precision and recall when exactly as many pixels are marked predictable
    as there are true carriers; the two are then equal by construction."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth).astype(bool)
    if scores.shape != truth.shape:
        raise LengthMismatch(f"{scores.shape} vs {truth.shape}")
    n_pos = int(truth.sum())
    if n_pos == 0:
        raise NoPositives("truth plane has no positive samples")
    route = make_route(scores)
    predicted = np.zeros(len(scores), dtype=bool)
    predicted[route[:n_pos]] = True
    tp = int((predicted & truth).sum())
    precision = tp / n_pos  # TP / (TP + FP): n_pos pixels were marked
    recall = tp / n_pos  # TP / (TP + FN): n_pos true carriers exist
    return precision, recall


def roc_auc(scores: np.ndarray, truth: np.ndarray) -> RocCurve:
    """ROC curve over all distinct score thresholds with trapezoidal AUC.

    Equal scores are grouped into a single threshold step, which makes the
    AUC equal to the normalised Mann-Whitney rank statistic.
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth).astype(bool)
    if scores.shape != truth.shape:
        raise LengthMismatch(f"{scores.shape} vs {truth.shape}")
    n_pos = int(truth.sum())
    n_neg = len(truth) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateTruth(f"need both classes, got {n_pos} positives / {n_neg} negatives")
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    t = truth[order].astype(np.int64)
    # last index of each tie group of equal scores
    distinct = np.nonzero(np.diff(s))[0]
    steps = np.concatenate([distinct, [len(s) - 1]])
    tps = np.concatenate([[0], np.cumsum(t)[steps]])
    fps = np.concatenate([[0], steps + 1 - np.cumsum(t)[steps]])
    tpr = tps / n_pos
    fpr = fps / n_neg
    auc = float(np.trapezoid(tpr, fpr))
    return RocCurve(points=list(zip(fpr.tolist(), tpr.tolist())), auc=auc)


def residual_variance(res: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Population variance of (optionally masked) residuals."""
    res = np.asarray(res, dtype=np.float64)
    if mask is not None:
        mask = np.asarray(mask).astype(bool)
        if mask.shape != res.shape:
            raise LengthMismatch(f"{mask.shape} vs {res.shape}")
        res = res[mask]
    if res.size < 2:
        raise TooFewSamples(f"need at least 2 residuals, got {res.size}")
    return float(np.var(res))


def five_number_summary(values) -> tuple[float, float, float, float, float]:
    """Min, quartiles by linear interpolation between order statistics, max."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EmptyInput("no values")
    q = np.percentile(values, [0, 25, 50, 75, 100], method="linear")
    return tuple(float(x) for x in q)


_XORSHIFT_MULT = 0x2545F4914F6CDD1D
_MASK64 = (1 << 64) - 1
DEFAULT_SWEEP_SEED = 0x9E3779B97F4A7C15


def xorshift_bits(seed: int, n: int) -> np.ndarray:
    """Deterministic message bits from an xorshift64* generator.

    Each 64-bit output contributes its bits MSB-first. The generator is
    specified exactly (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D) so
    sweeps are reproducible across platforms and implementations.
    """
    x = seed & _MASK64
    if x == 0:
        x = DEFAULT_SWEEP_SEED
    words = []
    for _ in range((n + 63) // 64):
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        words.append((x * _XORSHIFT_MULT) & _MASK64)
    if not words:
        return np.zeros(0, dtype=np.uint8)
    raw = b"".join(w.to_bytes(8, "big") for w in words)
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:n]


def rd_sweep(
    img: np.ndarray,
    cfg: StegoConfig,
    rates,
    seed: int = DEFAULT_SWEEP_SEED,
    pred_map: QMap | None = None,
    score_map: QMap | None = None,
) -> list[RateDistortionPoint]:
    """Embed a pseudorandom message at each target rate and record PSNR.

    Capacity failures are recorded per point, not raised. Points come back
    sorted by target rate.
    """
    img = np.asarray(img)
    points = []
    for rate in sorted(rates):
        n_bits = int(np.ceil(rate * img.size))
        msg = xorshift_bits(seed, n_bits)
        try:
            stego = encode(img, msg, cfg, pred_map=pred_map, score_map=score_map)
        except CapacityExceeded as exc:
            points.append(RateDistortionPoint(target_bpp=float(rate), actual_bpp=None,
                                              psnr_db=None, error=str(exc)))
            continue
        points.append(RateDistortionPoint(
            target_bpp=float(rate),
            actual_bpp=embedding_rate(n_bits, img),
            psnr_db=psnr(img, stego),
        ))
    return points
