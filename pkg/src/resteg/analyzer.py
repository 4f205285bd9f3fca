"""Predictability scoring and the deterministic embedding route.

Scores follow one convention throughout: larger means more predictable.
Measures of complexity or uncertainty (local variance, learned sigma^2) are
negated or inverted on ingestion so a single descending sort yields the
route. Ties are broken by ascending raster index, so the route is a pure
function of the scores and reproducible at the extraction endpoint.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, NonFiniteValue, WrongKind
from .image_io import MapKind, QMap
from .lattice import Lattice
from .predictor import neighbour_sums

__all__ = [
    "analyze_local_variance",
    "analyze_external",
    "ground_truth_map",
    "ground_truth_full_image",
    "make_route",
    "binarize_at_proportion",
]


def analyze_local_variance(img: np.ndarray, lat: Lattice) -> np.ndarray:
    """Negated population variance of each query pixel's context neighbourhood.

    Variance is over the in-bounds 4-connected neighbours (N in {2, 3, 4} at
    borders). A flat neighbourhood scores 0, the maximum.
    """
    img = np.asarray(img, dtype=np.int64)
    s, sq, n = neighbour_sums(img, lat.query_rows, lat.query_cols)
    mean = s / n
    var = sq / n - mean * mean
    return -var


def analyze_external(qmap: QMap, lat: Lattice) -> np.ndarray:
    """Gather an external score map at the query positions, used verbatim."""
    if qmap.kind != MapKind.SCORE:
        raise WrongKind(f"need a Score map, got {qmap.kind.name}")
    if qmap.values.shape != (lat.height, lat.width):
        raise DimMismatch(f"map is {qmap.values.shape}, image is {(lat.height, lat.width)}")
    scores = qmap.values[lat.query_rows, lat.query_cols].astype(np.float64)
    if not np.all(np.isfinite(scores)):
        raise NonFiniteValue("score map contains NaN or Inf")
    return scores


def ground_truth_map(res: np.ndarray, alpha: int) -> np.ndarray:
    """1 where |residual| < alpha (a carrier), else 0.

    This is both the supervised training target at query pixels and the
    oracle route score.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    return (np.abs(np.asarray(res)) < alpha).astype(np.uint8)


def ground_truth_full_image(res: np.ndarray, lat: Lattice, alpha: int) -> np.ndarray:
    """Full-image binary target: query residuals thresholded directly, context
    residuals approximated by the mean of in-bounds query-neighbour residuals
    and then thresholded identically.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    res_img = np.zeros((lat.height, lat.width), dtype=np.float64)
    res_img[lat.query_rows, lat.query_cols] = res
    crows, ccols = np.nonzero(lat.context_mask)
    # every 4-neighbour of a context pixel is a query pixel
    h, w = lat.height, lat.width
    padded = np.zeros((h + 2, w + 2), dtype=np.float64)
    padded[1:-1, 1:-1] = res_img
    valid = np.zeros((h + 2, w + 2), dtype=np.float64)
    valid[1:-1, 1:-1] = 1.0
    r, c = crows + 1, ccols + 1
    s = padded[r - 1, c] + padded[r + 1, c] + padded[r, c - 1] + padded[r, c + 1]
    n = valid[r - 1, c] + valid[r + 1, c] + valid[r, c - 1] + valid[r, c + 1]
    interp = s / n
    out = np.zeros((h, w), dtype=np.uint8)
    out[lat.query_rows, lat.query_cols] = ground_truth_map(
        res_img[lat.query_rows, lat.query_cols], alpha
    )
    out[crows, ccols] = (np.abs(interp) < alpha).astype(np.uint8)
    return out


def make_route(scores: np.ndarray) -> np.ndarray:
    """Permutation of query indices: descending score, ties by raster index."""
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise NonFiniteValue("scores contain NaN or Inf")
    return np.argsort(-scores, kind="stable")


def binarize_at_proportion(scores: np.ndarray, p: float) -> np.ndarray:
    """Mark the top floor(p * n) scored pixels as 1 in route order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"proportion must be in [0, 1], got {p}")
    route = make_route(scores)
    k = int(np.floor(p * len(route)))
    out = np.zeros(len(route), dtype=np.uint8)
    out[route[:k]] = 1
    return out
