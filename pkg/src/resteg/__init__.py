"""resteg: reversible image steganography by adaptive residual modulation."""

from .codec import (
    StegoConfig,
    capacity_walk,
    decode,
    demodulate_one,
    encode,
    frame_payload,
    modulate_one,
    oracle_route_map,
    scale_down,
    scale_up,
)
from .image_io import MapKind, QMap, read_map, read_pgm, write_map, write_pgm
from .lattice import Lattice, make_lattice, masked_context_image, merge, split
from .metrics import (
    RateDistortionPoint,
    RocCurve,
    embedding_rate,
    five_number_summary,
    precision_recall_at_match,
    psnr,
    rd_sweep,
    residual_variance,
    roc_auc,
)

__version__ = "0.1.0"
