"""Integer intensity prediction for query pixels from context pixels only.

Two sources are supported: a built-in 4-neighbour interpolator and externally
supplied prediction maps (QMAP). Predictions are integers; real-valued model
outputs must be quantised with the same round-half-up rule before they reach
the codec, since the modulation operates on integer residuals.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, LengthMismatch, WrongKind
from .image_io import MapKind, QMap
from .lattice import Lattice

__all__ = ["neighbour_sums", "predict_interp", "predict_external", "residuals"]


def neighbour_sums(values: np.ndarray, rows: np.ndarray, cols: np.ndarray):
    """Sum, sum of squares and count of in-bounds 4-neighbours at (rows, cols)."""
    h, w = values.shape
    padded = np.zeros((h + 2, w + 2), dtype=np.int64)
    padded[1:-1, 1:-1] = values
    valid = np.zeros((h + 2, w + 2), dtype=np.int64)
    valid[1:-1, 1:-1] = 1
    r, c = rows + 1, cols + 1
    s = padded[r - 1, c] + padded[r + 1, c] + padded[r, c - 1] + padded[r, c + 1]
    sq = (
        padded[r - 1, c] ** 2
        + padded[r + 1, c] ** 2
        + padded[r, c - 1] ** 2
        + padded[r, c + 1] ** 2
    )
    n = valid[r - 1, c] + valid[r + 1, c] + valid[r, c - 1] + valid[r, c + 1]
    return s, sq, n


def predict_interp(img: np.ndarray, lat: Lattice) -> np.ndarray:
    """Round-half-up mean of each query pixel's in-bounds context neighbours.

    Border pixels average over their 2 or 3 in-bounds neighbours. Reads
    context cells only, so the output is unchanged by any modification of
    query pixels.
    """
    img = np.asarray(img, dtype=np.int64)
    s, _, n = neighbour_sums(img, lat.query_rows, lat.query_cols)
    # floor(s/n + 1/2) in exact integer arithmetic
    return ((2 * s + n) // (2 * n)).astype(np.int64)


def predict_external(qmap: QMap, lat: Lattice) -> np.ndarray:
    """Gather an external prediction map at the query positions."""
    if qmap.kind != MapKind.PREDICTION:
        raise WrongKind(f"need a Prediction map, got {qmap.kind.name}")
    if qmap.values.shape != (lat.height, lat.width):
        raise DimMismatch(
            f"map is {qmap.values.shape}, image is {(lat.height, lat.width)}"
        )
    return qmap.values[lat.query_rows, lat.query_cols].astype(np.int64)


def residuals(query_values: np.ndarray, pred: np.ndarray) -> np.ndarray:
    """Signed residuals query - prediction; range within [-255, 255]."""
    query_values = np.asarray(query_values, dtype=np.int64)
    pred = np.asarray(pred, dtype=np.int64)
    if query_values.shape != pred.shape:
        raise LengthMismatch(f"{query_values.shape} vs {pred.shape}")
    return query_values - pred
