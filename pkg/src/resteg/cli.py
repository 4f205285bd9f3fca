"""Command-line surface: embed, extract, analyze, capacity, sweep, gen-truth.

Output on stdout is machine-parseable key=value lines. Exit codes: 0 ok,
1 usage error, 2 capacity/frame failure, 3 I/O or file format error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import codec, metrics
from .analyzer import analyze_local_variance, ground_truth_full_image
from .bits import bits_to_bytes, bytes_to_bits
from .codec import StegoConfig
from .errors import (
    CapacityExceeded,
    ConfigError,
    FrameUnderflow,
    PayloadTooLarge,
    RestegError,
)
from .image_io import MapKind, QMap, read_map, read_pgm, write_map, write_pgm
from .lattice import split
from .predictor import residuals

USAGE_ERROR = 1
CAPACITY_ERROR = 2
IO_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="resteg", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_cfg(sp, analyzer_required=True):
        sp.add_argument("--alpha", type=int, default=2, help="stego-channel parameter (1..63)")
        sp.add_argument("--analyzer", choices=codec.ANALYZERS, default="lv")
        sp.add_argument("--predictor", choices=codec.PREDICTORS, default="interp")
        sp.add_argument("--score-map", type=Path, help="QMAP Score file for --analyzer map/oracle")
        sp.add_argument("--pred-map", type=Path, help="QMAP Prediction file for --predictor map")

    sp = sub.add_parser("embed", help="embed a message into a cover image")
    sp.add_argument("--cover", type=Path, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--message", type=Path, help="message file (raw bytes)")
    g.add_argument("--hex", help="message as a hex string")
    add_cfg(sp)
    sp.add_argument("--export-score-map", type=Path,
                    help="write the route score map (needed to extract an oracle embedding)")
    sp.add_argument("--out", type=Path, required=True)

    sp = sub.add_parser("extract", help="extract the message and restore the cover")
    sp.add_argument("--stego", type=Path, required=True)
    add_cfg(sp)
    sp.add_argument("--out-image", type=Path, required=True)
    sp.add_argument("--out-message", type=Path, required=True)

    sp = sub.add_parser("analyze", help="write a full-image route score map")
    sp.add_argument("--cover", type=Path, required=True)
    add_cfg(sp)
    sp.add_argument("--out", type=Path, required=True)

    sp = sub.add_parser("capacity", help="report embedding capacity of a cover")
    sp.add_argument("--cover", type=Path, required=True)
    add_cfg(sp)

    sp = sub.add_parser("sweep", help="rate-distortion sweep to CSV")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--cover", type=Path)
    g.add_argument("--corpus", type=Path, help="directory of .pgm covers")
    sp.add_argument("--alphas", default="2", help="comma-separated alpha values")
    sp.add_argument("--rates", required=True, help="comma-separated target bpp values")
    sp.add_argument("--analyzers", default="lv", help="comma-separated analyzer names")
    sp.add_argument("--predictor", choices=codec.PREDICTORS, default="interp")
    sp.add_argument("--pred-map", type=Path)
    sp.add_argument("--seed", type=int, default=metrics.DEFAULT_SWEEP_SEED)
    sp.add_argument("--out", type=Path, required=True)

    sp = sub.add_parser("gen-truth", help="write the full-image ground-truth map")
    sp.add_argument("--cover", type=Path, required=True)
    sp.add_argument("--alpha", type=int, default=2)
    sp.add_argument("--pred-map", type=Path)
    sp.add_argument("--out", type=Path, required=True)

    return p


def _load_pgm(path: Path) -> np.ndarray:
    return read_pgm(path.read_bytes())


def _load_map(path: Path | None) -> QMap | None:
    return None if path is None else read_map(path.read_bytes())


def _make_config(args) -> StegoConfig:
    return StegoConfig(alpha=args.alpha, analyzer=args.analyzer, predictor=args.predictor)


def _check_map_flags(args) -> None:
    if args.analyzer == "map" and args.score_map is None:
        raise ConfigError("--analyzer map requires --score-map")
    if args.predictor == "map" and args.pred_map is None:
        raise ConfigError("--predictor map requires --pred-map")


def _message_bits(args) -> np.ndarray:
    if args.hex is not None:
        try:
            data = bytes.fromhex(args.hex)
        except ValueError:
            raise ConfigError(f"--hex is not valid hex: {args.hex!r}") from None
    else:
        data = args.message.read_bytes()
    return bytes_to_bits(data)


def _cmd_embed(args) -> int:
    _check_map_flags(args)
    cfg = _make_config(args)
    cover = _load_pgm(args.cover)
    pred_map = _load_map(args.pred_map)
    score_map = _load_map(args.score_map)
    msg = _message_bits(args)
    stego = codec.encode(cover, msg, cfg, pred_map=pred_map, score_map=score_map)
    args.out.write_bytes(write_pgm(stego))
    if args.export_score_map is not None:
        if cfg.analyzer == "oracle":
            route_map = codec.oracle_route_map(cover, cfg, pred_map=pred_map)
        else:
            route_map = _route_map_for(cover, cfg, pred_map, score_map)
        args.export_score_map.write_bytes(write_map(route_map))
    min_bits, zeros, carriers = codec.capacity_walk(cover, cfg, pred_map=pred_map,
                                                    score_map=score_map)
    _, reg = codec.scale_down(cover, cfg.alpha)
    print(f"message_bits={len(msg)}")
    print(f"bpp={metrics.embedding_rate(len(msg), cover):.6f}")
    print(f"psnr_db={metrics.psnr(cover, stego):.4f}")
    print(f"min_bits={min_bits}")
    print(f"zero_residuals={zeros}")
    print(f"carriers={carriers}")
    print(f"register_bits={len(reg)}")
    return 0


def _route_map_for(cover: np.ndarray, cfg: StegoConfig, pred_map, score_map) -> QMap:
    xbar, _ = codec.scale_down(cover, cfg.alpha)
    _ctx, _qry, lat = split(xbar)
    if cfg.analyzer == "map":
        return score_map
    if cfg.analyzer == "raster":
        scores = np.zeros(lat.n_query, dtype=np.float32)
    else:
        scores = analyze_local_variance(xbar, lat).astype(np.float32)
    full = np.zeros((lat.height, lat.width), dtype=np.float32)
    full[lat.query_rows, lat.query_cols] = scores
    return QMap(kind=MapKind.SCORE, values=full)


def _cmd_extract(args) -> int:
    if args.analyzer == "oracle" and args.score_map is None:
        raise ConfigError("extracting an oracle embedding requires the exported --score-map")
    _check_map_flags(args)
    cfg = _make_config(args)
    stego = _load_pgm(args.stego)
    restored, msg = codec.decode(stego, cfg, pred_map=_load_map(args.pred_map),
                                 score_map=_load_map(args.score_map))
    out_bytes = write_pgm(restored)
    args.out_image.write_bytes(out_bytes)
    args.out_message.write_bytes(bits_to_bytes(msg))
    print(f"message_bits={len(msg)}")
    print(f"restored_sha256={hashlib.sha256(out_bytes).hexdigest()}")
    return 0


def _cmd_analyze(args) -> int:
    _check_map_flags(args)
    cfg = _make_config(args)
    cover = _load_pgm(args.cover)
    pred_map = _load_map(args.pred_map)
    if cfg.analyzer == "oracle":
        qmap = codec.oracle_route_map(cover, cfg, pred_map=pred_map)
    else:
        qmap = _route_map_for(cover, cfg, pred_map, _load_map(args.score_map))
    args.out.write_bytes(write_map(qmap))
    print(f"width={qmap.width}")
    print(f"height={qmap.height}")
    return 0


def _cmd_capacity(args) -> int:
    _check_map_flags(args)
    cfg = _make_config(args)
    cover = _load_pgm(args.cover)
    min_bits, zeros, carriers = codec.capacity_walk(
        cover, cfg, pred_map=_load_map(args.pred_map), score_map=_load_map(args.score_map))
    _, reg = codec.scale_down(cover, cfg.alpha)
    expected = int(1.5 * zeros) + (carriers - zeros) - codec.FRAME_OVERHEAD_BITS - len(reg)
    print(f"min_bits={min_bits}")
    print(f"zero_residuals={zeros}")
    print(f"carriers={carriers}")
    print(f"register_bits={len(reg)}")
    print(f"expected_message_capacity={max(expected, 0)}")
    return 0


def _parse_list(raw: str, conv, what: str):
    try:
        return [conv(tok) for tok in raw.split(",") if tok]
    except ValueError:
        raise ConfigError(f"bad {what} list: {raw!r}") from None


def _cmd_sweep(args) -> int:
    alphas = _parse_list(args.alphas, int, "alpha")
    rates = _parse_list(args.rates, float, "rate")
    analyzers = _parse_list(args.analyzers, str, "analyzer")
    for a in analyzers:
        if a not in codec.ANALYZERS:
            raise ConfigError(f"unknown analyzer {a!r}")
    if "map" in analyzers:
        raise ConfigError("sweep does not take external score maps; use lv/oracle/raster")
    if args.corpus is not None:
        images = sorted(args.corpus.glob("*.pgm"))
        if not images:
            raise ConfigError(f"no .pgm files in {args.corpus}")
    else:
        images = [args.cover]
    pred_map = _load_map(args.pred_map)
    lines = ["image,analyzer,alpha,target_bpp,actual_bpp,psnr_db"]
    for path in images:
        cover = _load_pgm(path)
        for analyzer in analyzers:
            for alpha in alphas:
                cfg = StegoConfig(alpha=alpha, analyzer=analyzer, predictor=args.predictor)
                for pt in metrics.rd_sweep(cover, cfg, rates, seed=args.seed,
                                           pred_map=pred_map):
                    actual = "" if pt.actual_bpp is None else f"{pt.actual_bpp:.6f}"
                    p = "" if pt.psnr_db is None else (
                        "inf" if pt.psnr_db == float("inf") else f"{pt.psnr_db:.4f}")
                    lines.append(f"{path.name},{analyzer},{alpha},{pt.target_bpp:g},{actual},{p}")
    args.out.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    print(f"rows={len(lines) - 1}")
    return 0


def _cmd_gen_truth(args) -> int:
    cover = _load_pgm(args.cover)
    pred_map = _load_map(args.pred_map)
    _ctx, qry, lat = split(cover)
    if pred_map is not None:
        from .predictor import predict_external
        y = predict_external(pred_map, lat)
    else:
        from .predictor import predict_interp
        y = predict_interp(cover, lat)
    truth = ground_truth_full_image(residuals(qry, y), lat, args.alpha)
    qmap = QMap(kind=MapKind.SCORE, values=truth.astype(np.float32))
    args.out.write_bytes(write_map(qmap))
    print(f"carrier_fraction={truth[lat.query_rows, lat.query_cols].mean():.6f}")
    return 0


_COMMANDS = {
    "embed": _cmd_embed,
    "extract": _cmd_extract,
    "analyze": _cmd_analyze,
    "capacity": _cmd_capacity,
    "sweep": _cmd_sweep,
    "gen-truth": _cmd_gen_truth,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (CapacityExceeded, FrameUnderflow, PayloadTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAPACITY_ERROR
    except (OSError, RestegError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
