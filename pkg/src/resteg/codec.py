"""The reversible core: overflow scaling, payload framing, residual
modulation along the predictability route, and the full embed/extract
pipelines.

The stego channel is parameterised by alpha, which separates carrier
residuals (|eps| < alpha, modulated to hold payload bits) from non-carrier
residuals (shifted by alpha so the two populations never collide). Framing
is a 32-bit big-endian length field, the message, the overflow register,
and a single 0 pad bit; the pad guarantees the 2-bit lookahead of the
zero-residual branch never starves. All of this is a format contract: the
extraction endpoint recomputes predictions, scores and route from the
untouched context pixels and inverts every step exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analyzer import (
    analyze_external,
    analyze_local_variance,
    ground_truth_map,
    make_route,
)
from .bits import bits_to_int, int_to_bits
from .errors import (
    CapacityExceeded,
    ConfigError,
    FrameUnderflow,
    PayloadTooLarge,
    RegisterLengthMismatch,
)
from .image_io import MapKind, QMap
from .lattice import Lattice, merge, split
from .predictor import predict_external, predict_interp, residuals

__all__ = [
    "ANALYZERS",
    "PREDICTORS",
    "StegoConfig",
    "scale_down",
    "scale_up",
    "modulate_one",
    "demodulate_one",
    "frame_payload",
    "encode_register",
    "decode_register",
    "encode",
    "decode",
    "capacity_walk",
    "oracle_route_map",
]

ANALYZERS = ("lv", "map", "oracle", "raster")
PREDICTORS = ("interp", "map")

FRAME_OVERHEAD_BITS = 33  # 32-bit length header + 1 pad bit


@dataclass(frozen=True)
class StegoConfig:
    alpha: int = 2
    analyzer: str = "lv"
    predictor: str = "interp"

    def __post_init__(self):
        if not isinstance(self.alpha, int) or not 1 <= self.alpha <= 63:
            raise ConfigError(f"alpha must be an integer in [1, 63], got {self.alpha}")
        if self.analyzer not in ANALYZERS:
            raise ConfigError(f"unknown analyzer {self.analyzer!r}")
        if self.predictor not in PREDICTORS:
            raise ConfigError(f"unknown predictor {self.predictor!r}")


def _ambiguity_mask(img: np.ndarray, alpha: int) -> np.ndarray:
    """Pixels whose value could be either scaled or original."""
    v = np.asarray(img, dtype=np.int64)
    low = (v >= alpha) & (v <= 2 * alpha - 1)
    high = (v >= 255 - 2 * alpha + 1) & (v <= 255 - alpha)
    return low | high


def scale_down(img: np.ndarray, alpha: int) -> tuple[np.ndarray, np.ndarray]:
    """Move near-saturated pixels inward by alpha; return (processed image,
    overflow register).

    The register holds one bit per ambiguous-valued pixel of the result, in
    raster order: 1 if that pixel was just scaled, 0 if it naturally sits in
    an ambiguity band.
    """
    img = np.asarray(img, dtype=np.int64)
    low = img <= alpha - 1
    high = img >= 255 - alpha + 1
    xbar = img + alpha * low - alpha * high
    amb = _ambiguity_mask(xbar, alpha)
    flags = (low | high)[amb].astype(np.uint8)
    return xbar.astype(np.uint8), flags


def scale_up(xbar: np.ndarray, flags: np.ndarray, alpha: int) -> np.ndarray:
    """Inverse of scale_down given the overflow register."""
    xbar = np.asarray(xbar, dtype=np.int64)
    flags = np.asarray(flags, dtype=np.uint8)
    amb = _ambiguity_mask(xbar, alpha)
    n_amb = int(amb.sum())
    if len(flags) != n_amb:
        raise RegisterLengthMismatch(f"register has {len(flags)} bits, image has {n_amb} ambiguous pixels")
    rows, cols = np.nonzero(amb)
    sel = flags == 1
    r, c = rows[sel], cols[sel]
    out = xbar.copy()
    vals = out[r, c]
    lowband = vals <= 2 * alpha - 1
    out[r, c] = np.where(lowband, vals - alpha, vals + alpha)
    return out.astype(np.uint8)


def modulate_one(eps: int, alpha: int, pending_bits) -> tuple[int, int]:
    """Modulate one residual; returns (modulated residual, bits consumed).

    Zero residuals hold 1 or 2 bits, other carriers hold exactly 1, and
    non-carriers are shifted outward by alpha without consuming any.
    """
    if eps == 0:
        if pending_bits[0] == 0:
            return 0, 1
        return (-1, 2) if pending_bits[1] == 0 else (1, 2)
    sgn = 1 if eps > 0 else -1
    if abs(eps) < alpha:
        if pending_bits[0] == 0:
            return 2 * eps, 1
        return 2 * eps + sgn, 1
    return eps + sgn * alpha, 0


def demodulate_one(eps_mod: int, alpha: int) -> tuple[int, list[int]]:
    """Exact inverse of modulate_one; returns (residual, extracted bits)."""
    if eps_mod == 0:
        return 0, [0]
    sgn = 1 if eps_mod > 0 else -1
    a = abs(eps_mod)
    if a == 1:
        return 0, [1, 0 if sgn < 0 else 1]
    if a <= 2 * alpha - 1:
        if eps_mod % 2 == 0:
            return eps_mod // 2, [0]
        return (eps_mod - sgn) // 2, [1]
    return eps_mod - sgn * alpha, []


def frame_payload(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """32-bit big-endian length of m+v, then m, then v, then one 0 pad bit.

    Generic framing of two bit sequences; the pipeline passes the encoded
    overflow register first and the message second.
    """
    m = np.asarray(m, dtype=np.uint8)
    v = np.asarray(v, dtype=np.uint8)
    total = len(m) + len(v)
    if total >= 1 << 32:
        raise PayloadTooLarge(f"{total} payload bits exceed the 32-bit length field")
    return np.concatenate([int_to_bits(total, 32), m, v, np.zeros(1, dtype=np.uint8)])


# Overflow register coding. A fully saturated image flags every pixel, and a
# raw register (one bit per ambiguous pixel) can then exceed the image's
# entire embedding capacity. The register is therefore stored under a 2-bit
# mode tag: 00 raw, 01 all-zeros, 10 all-ones, 11 run-length with
# Elias-gamma run lengths. The stream is self-delimiting given the flag
# count, which the extractor recovers by counting ambiguous pixels.

_REG_RAW = (0, 0)
_REG_ZEROS = (0, 1)
_REG_ONES = (1, 0)
_REG_RLE = (1, 1)


def _gamma_encode(n: int) -> list[int]:
    b = bin(n)[2:]
    return [0] * (len(b) - 1) + [int(c) for c in b]


def _gamma_decode(bits: list[int], pos: int) -> tuple[int, int]:
    zeros = 0
    while pos < len(bits) and bits[pos] == 0:
        zeros += 1
        pos += 1
    if pos + zeros + 1 > len(bits):
        raise FrameUnderflow("truncated run length in register stream")
    n = 1
    pos += 1
    for _ in range(zeros):
        n = (n << 1) | bits[pos]
        pos += 1
    return n, pos


def encode_register(flags: np.ndarray) -> np.ndarray:
    flags = np.asarray(flags, dtype=np.uint8)
    if len(flags) == 0:
        return flags
    if not flags.any():
        return np.array(_REG_ZEROS, dtype=np.uint8)
    if flags.all():
        return np.array(_REG_ONES, dtype=np.uint8)
    rle: list[int] = [*_REG_RLE, int(flags[0])]
    boundaries = np.nonzero(np.diff(flags))[0]
    run_starts = np.concatenate([[0], boundaries + 1, [len(flags)]])
    for length in np.diff(run_starts):
        rle.extend(_gamma_encode(int(length)))
    if len(rle) < 2 + len(flags):
        return np.array(rle, dtype=np.uint8)
    return np.concatenate([np.array(_REG_RAW, dtype=np.uint8), flags])


def decode_register(payload: list[int], n_flags: int) -> tuple[np.ndarray, int]:
    """Parse an encoded register of n_flags flags from the start of payload.

    Returns (flags, bits consumed). Raises FrameUnderflow on any malformed
    stream, so a mismatched configuration degrades to a clean error.
    """
    if n_flags == 0:
        return np.zeros(0, dtype=np.uint8), 0
    if len(payload) < 2:
        raise FrameUnderflow("payload too short for register mode tag")
    mode = (payload[0], payload[1])
    pos = 2
    if mode == _REG_ZEROS:
        return np.zeros(n_flags, dtype=np.uint8), pos
    if mode == _REG_ONES:
        return np.ones(n_flags, dtype=np.uint8), pos
    if mode == _REG_RAW:
        if pos + n_flags > len(payload):
            raise FrameUnderflow("truncated raw register")
        return np.array(payload[pos : pos + n_flags], dtype=np.uint8), pos + n_flags
    if pos >= len(payload):
        raise FrameUnderflow("truncated register stream")
    value = payload[pos]
    pos += 1
    flags: list[int] = []
    while len(flags) < n_flags:
        length, pos = _gamma_decode(payload, pos)
        if len(flags) + length > n_flags:
            raise FrameUnderflow("register run overruns the flag count")
        flags.extend([value] * length)
        value ^= 1
    return np.array(flags, dtype=np.uint8), pos


def _predictions(image: np.ndarray, lat: Lattice, cfg: StegoConfig, pred_map: QMap | None) -> np.ndarray:
    if cfg.predictor == "interp":
        return predict_interp(image, lat)
    if pred_map is None:
        raise ConfigError("predictor 'map' requires a prediction map")
    return predict_external(pred_map, lat)


def _scores(
    image: np.ndarray,
    lat: Lattice,
    eps: np.ndarray | None,
    cfg: StegoConfig,
    score_map: QMap | None,
) -> np.ndarray:
    if cfg.analyzer == "lv":
        return analyze_local_variance(image, lat)
    if cfg.analyzer == "raster":
        return np.zeros(lat.n_query, dtype=np.float64)
    if cfg.analyzer == "map":
        if score_map is None:
            raise ConfigError("analyzer 'map' requires a score map")
        return analyze_external(score_map, lat)
    # oracle: at the embedding end the true residuals are in hand; at the
    # extraction end they are not recoverable, so the exported oracle map
    # must be supplied as a score map.
    if eps is not None:
        return ground_truth_map(eps, cfg.alpha).astype(np.float64)
    if score_map is None:
        raise ConfigError(
            "the oracle route cannot be recomputed from a stego image; "
            "supply the oracle score map exported at embedding time"
        )
    return analyze_external(score_map, lat)


def encode(
    img: np.ndarray,
    message_bits: np.ndarray,
    cfg: StegoConfig,
    pred_map: QMap | None = None,
    score_map: QMap | None = None,
) -> np.ndarray:
    """Embed message_bits into img; returns the stego image."""
    img = np.asarray(img)
    xbar, reg = scale_down(img, cfg.alpha)
    ctx, qry, lat = split(xbar)
    y = _predictions(xbar, lat, cfg, pred_map)
    eps = residuals(qry, y)
    scores = _scores(xbar, lat, eps, cfg, score_map)
    route = make_route(scores)
    framed = frame_payload(encode_register(reg), message_bits).tolist()
    n_framed = len(framed)
    eps_out = eps.copy()
    eps_list = eps.tolist()
    t = 0
    for qi in route:
        if t == n_framed:
            break
        e_mod, used = modulate_one(eps_list[qi], cfg.alpha, framed[t : t + 2])
        eps_out[qi] = e_mod
        t += used
    if t < n_framed:
        raise CapacityExceeded(f"route exhausted with {n_framed - t} of {n_framed} framed bits left")
    stego_q = y + eps_out
    return merge(ctx, stego_q, lat)


def decode(
    stego: np.ndarray,
    cfg: StegoConfig,
    pred_map: QMap | None = None,
    score_map: QMap | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Extract (original image, message bits) from a stego image.

    Predictions, scores and the route are recomputed from the context
    pixels, which embedding leaves untouched. Raises FrameUnderflow when the
    route runs out before the framed payload is complete (corrupted stego or
    mismatched configuration); never crashes on garbage input.
    """
    stego = np.asarray(stego)
    ctx, qry_mod, lat = split(stego)
    y = _predictions(stego, lat, cfg, pred_map)
    eps_mod = residuals(qry_mod, y)
    scores = _scores(stego, lat, None, cfg, score_map)
    route = make_route(scores)
    eps = eps_mod.copy()
    eps_mod_list = eps_mod.tolist()
    collected: list[int] = []
    total = None  # framed bit count, known once the 32-bit header is in
    for qi in route:
        if total is not None and len(collected) >= total:
            break
        e, got = demodulate_one(eps_mod_list[qi], cfg.alpha)
        eps[qi] = e
        collected.extend(got)
        if total is None and len(collected) >= 32:
            total = FRAME_OVERHEAD_BITS + bits_to_int(collected[:32])
    if total is None or len(collected) < total:
        raise FrameUnderflow("route exhausted before the framed payload was recovered")
    payload_len = total - FRAME_OVERHEAD_BITS
    payload = collected[32 : 32 + payload_len]
    xbar = merge(ctx, np.clip(y + eps, 0, 255), lat)
    n_reg = int(_ambiguity_mask(xbar, cfg.alpha).sum())
    v, used = decode_register(payload, n_reg)
    m = np.array(payload[used:], dtype=np.uint8)
    return scale_up(xbar, v, cfg.alpha), m


def capacity_walk(
    img: np.ndarray,
    cfg: StegoConfig,
    pred_map: QMap | None = None,
    score_map: QMap | None = None,
) -> tuple[int, int, int]:
    """Walk the pipeline without a message.

    Returns (min_bits, zero_count, carrier_count): the guaranteed worst-case
    framed-bit capacity (every residual contributing its 1-bit floor), the
    number of zero residuals (each holds 1.5 bits on average) and the total
    carrier count.
    """
    img = np.asarray(img)
    xbar, _reg = scale_down(img, cfg.alpha)
    _ctx, qry, lat = split(xbar)
    y = _predictions(xbar, lat, cfg, pred_map)
    eps = residuals(qry, y)
    zeros = int(np.count_nonzero(eps == 0))
    carriers = int(np.count_nonzero(np.abs(eps) < cfg.alpha))
    min_bits = zeros + (carriers - zeros)
    return min_bits, zeros, carriers


def oracle_route_map(img: np.ndarray, cfg: StegoConfig, pred_map: QMap | None = None) -> QMap:
    """Full-image Score map carrying the oracle route scores at query cells.

    Computed on the overflow-scaled image, exactly as the embedding pipeline
    sees it, so extraction with this map reproduces the oracle route.
    """
    img = np.asarray(img)
    xbar, _reg = scale_down(img, cfg.alpha)
    _ctx, qry, lat = split(xbar)
    y = _predictions(xbar, lat, cfg, pred_map)
    eps = residuals(qry, y)
    scores = ground_truth_map(eps, cfg.alpha).astype(np.float32)
    full = np.zeros((lat.height, lat.width), dtype=np.float32)
    full[lat.query_rows, lat.query_cols] = scores
    return QMap(kind=MapKind.SCORE, values=full)
