"""Chequerboard partition of an image into context and query pixels.

Context cells are those with even coordinate parity ((row + col) % 2 == 0),
including the top-left corner; this choice is a format constant shared by
the embedding and extraction endpoints. Every query pixel's in-bounds
4-connected neighbours are context pixels, which is what makes context-only
prediction possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CountMismatch, ImageTooSmall

__all__ = ["Lattice", "make_lattice", "split", "merge", "masked_context_image"]


@dataclass(frozen=True)
class Lattice:
    height: int
    width: int
    context_mask: np.ndarray  # bool (H, W), True at context cells
    query_rows: np.ndarray  # query coordinates in raster order
    query_cols: np.ndarray

    @property
    def n_context(self) -> int:
        return self.height * self.width - self.n_query

    @property
    def n_query(self) -> int:
        return len(self.query_rows)

    def context_idx(self) -> np.ndarray:
        rows, cols = np.nonzero(self.context_mask)
        return np.stack([rows, cols], axis=1)

    def query_idx(self) -> np.ndarray:
        return np.stack([self.query_rows, self.query_cols], axis=1)


def make_lattice(height: int, width: int) -> Lattice:
    if height < 2 or width < 2:
        raise ImageTooSmall(f"need at least 2x2, got {height}x{width}")
    rr, cc = np.meshgrid(np.arange(height), np.arange(width), indexing="ij")
    context_mask = (rr + cc) % 2 == 0
    qr, qc = np.nonzero(~context_mask)
    return Lattice(height=height, width=width, context_mask=context_mask,
                   query_rows=qr, query_cols=qc)


def split(img: np.ndarray) -> tuple[np.ndarray, np.ndarray, Lattice]:
    """Return (context values, query values, lattice), each in raster order."""
    img = np.asarray(img)
    lat = make_lattice(*img.shape)
    return img[lat.context_mask].copy(), img[~lat.context_mask].copy(), lat


def merge(context_values: np.ndarray, query_values: np.ndarray, lat: Lattice) -> np.ndarray:
    context_values = np.asarray(context_values)
    query_values = np.asarray(query_values)
    if len(context_values) != lat.n_context:
        raise CountMismatch(f"{len(context_values)} context values, lattice has {lat.n_context}")
    if len(query_values) != lat.n_query:
        raise CountMismatch(f"{len(query_values)} query values, lattice has {lat.n_query}")
    out = np.empty((lat.height, lat.width), dtype=np.uint8)
    out[lat.context_mask] = context_values
    out[~lat.context_mask] = query_values
    return out


def masked_context_image(img: np.ndarray, lat: Lattice) -> np.ndarray:
    """Zero the query cells: the canonical predictor input."""
    img = np.asarray(img)
    out = img.copy()
    out[~lat.context_mask] = 0
    return out
