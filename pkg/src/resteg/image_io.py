"""Bit-exact readers/writers for greyscale images (PGM) and value maps (QMAP).

Images are plain 2-D numpy uint8 arrays in row-major order. QMAP is the
interchange format for externally supplied prediction maps (integer
intensities) and score maps (32-bit floats): both endpoints of the stego
channel must read the identical file, so the on-disk representation is fixed
down to the byte.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import (
    BadDims,
    BadMagic,
    MalformedHeader,
    MaxvalUnsupported,
    NonFiniteValue,
    TruncatedData,
    WrongKind,
)

__all__ = [
    "MapKind",
    "QMap",
    "read_pgm",
    "write_pgm",
    "read_map",
    "write_map",
]

_WHITESPACE = b" \t\n\r\x0b\x0c"


class MapKind(IntEnum):
    PREDICTION = 0
    SCORE = 1


@dataclass(frozen=True)
class QMap:
    kind: MapKind
    values: np.ndarray  # (height, width); uint8 for PREDICTION, float32 for SCORE

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def _validate_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise BadDims(f"expected a 2-D image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if np.any(img < 0) or np.any(img > 255):
            raise BadDims("pixel values outside [0, 255]")
        img = img.astype(np.uint8)
    return img


class _TokenReader:
    """Whitespace/comment tolerant tokenizer over a PGM header."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip_space(self) -> None:
        while self.pos < len(self.data):
            c = self.data[self.pos : self.pos + 1]
            if c == b"#":
                nl = self.data.find(b"\n", self.pos)
                self.pos = len(self.data) if nl < 0 else nl + 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                return

    def token(self) -> bytes:
        self._skip_space()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            self.pos += 1
        if self.pos == start:
            raise MalformedHeader("unexpected end of header")
        return self.data[start : self.pos]

    def int_token(self, what: str) -> int:
        tok = self.token()
        try:
            return int(tok)
        except ValueError:
            raise MalformedHeader(f"bad {what}: {tok!r}") from None


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a binary (P5) or ASCII (P2) PGM with maxval 255.

    Trailing bytes beyond the declared raster are ignored, per PGM convention.
    """
    rd = _TokenReader(data)
    magic = rd.token()
    if magic not in (b"P5", b"P2"):
        raise MalformedHeader(f"not a PGM: magic {magic!r}")
    width = rd.int_token("width")
    height = rd.int_token("height")
    maxval = rd.int_token("maxval")
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise MaxvalUnsupported(f"maxval {maxval} unsupported (need 255)")
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if rd.pos >= len(data) or data[rd.pos : rd.pos + 1] not in _WHITESPACE:
            raise MalformedHeader("missing raster separator")
        start = rd.pos + 1
        raster = data[start : start + n]
        if len(raster) < n:
            raise TruncatedData(f"raster has {len(raster)} bytes, need {n}")
        pixels = np.frombuffer(raster, dtype=np.uint8, count=n)
    else:
        vals = []
        for _ in range(n):
            try:
                vals.append(rd.int_token("pixel"))
            except MalformedHeader:
                raise TruncatedData(f"raster has {len(vals)} values, need {n}") from None
        pixels = np.array(vals, dtype=np.int64)
        if np.any(pixels < 0) or np.any(pixels > 255):
            raise MalformedHeader("P2 pixel value out of range")
        pixels = pixels.astype(np.uint8)
    return pixels.reshape(height, width).copy()


def write_pgm(img: np.ndarray) -> bytes:
    """Serialize to canonical binary P5 form; inverse of read_pgm."""
    img = _validate_image(img)
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


# QMAP layout: magic "QMAP" | version u8 = 1 | kind u8 | reserved u16 = 0
#              | width u32 LE | height u32 LE | row-major payload.
_QMAP_HEADER = struct.Struct("<4sBBHII")
_QMAP_MAGIC = b"QMAP"
_QMAP_VERSION = 1


def read_map(data: bytes) -> QMap:
    if len(data) < _QMAP_HEADER.size:
        raise TruncatedData(f"QMAP header needs {_QMAP_HEADER.size} bytes, got {len(data)}")
    magic, version, kind, reserved, width, height = _QMAP_HEADER.unpack_from(data)
    if magic != _QMAP_MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != _QMAP_VERSION:
        raise BadMagic(f"unsupported QMAP version {version}")
    try:
        kind = MapKind(kind)
    except ValueError:
        raise WrongKind(f"unknown map kind {kind}") from None
    if reserved != 0:
        raise MalformedHeader(f"reserved field must be 0, got {reserved}")
    if width < 1 or height < 1:
        raise BadDims(f"bad dimensions {width}x{height}")
    n = width * height
    itemsize = 1 if kind == MapKind.PREDICTION else 4
    payload = data[_QMAP_HEADER.size :]
    if len(payload) < n * itemsize:
        raise TruncatedData(f"payload has {len(payload)} bytes, need {n * itemsize}")
    if len(payload) > n * itemsize:
        raise BadDims(f"{len(payload) - n * itemsize} trailing bytes after payload")
    if kind == MapKind.PREDICTION:
        values = np.frombuffer(payload, dtype=np.uint8, count=n)
    else:
        values = np.frombuffer(payload, dtype="<f4", count=n)
        if not np.all(np.isfinite(values)):
            raise NonFiniteValue("score map contains NaN or Inf")
    return QMap(kind=kind, values=values.reshape(height, width).copy())


def write_map(m: QMap) -> bytes:
    values = np.asarray(m.values)
    if values.ndim != 2:
        raise BadDims(f"expected a 2-D map, got shape {values.shape}")
    h, w = values.shape
    if m.kind == MapKind.PREDICTION:
        if values.dtype != np.uint8:
            if np.any(values < 0) or np.any(values > 255) or np.any(values != np.floor(values)):
                raise BadDims("prediction values must be integers in [0, 255]")
            values = values.astype(np.uint8)
        payload = values.tobytes()
    elif m.kind == MapKind.SCORE:
        values = values.astype("<f4")
        if not np.all(np.isfinite(values)):
            raise NonFiniteValue("score map contains NaN or Inf")
        payload = values.tobytes()
    else:
        raise WrongKind(f"unknown map kind {m.kind}")
    header = _QMAP_HEADER.pack(_QMAP_MAGIC, _QMAP_VERSION, int(m.kind), 0, w, h)
    return header + payload
