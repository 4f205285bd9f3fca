"""Bit sequence helpers. Bits are numpy uint8 arrays of 0/1 values; byte
packing is MSB-first."""

from __future__ import annotations

import numpy as np

__all__ = ["bytes_to_bits", "bits_to_bytes", "int_to_bits", "bits_to_int"]


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits: np.ndarray) -> bytes:
    """Pack to bytes, zero-padding the final partial byte."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Big-endian fixed-width encoding of a non-negative integer."""
    if value < 0 or value >= 1 << width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits: np.ndarray) -> int:
    out = 0
    for b in np.asarray(bits, dtype=np.uint8):
        out = (out << 1) | int(b)
    return out
