"""Grayscale PGM steganography by pixel-value differencing.

Two schemes share one payload format and block order: the classic
difference-based embedder (``pvd``), whose stego pixels can leave the
8-bit range near 0/255, and an adaptive variant (``apvd``) that keeps
every pixel in range at identical capacity.
"""

from .apvd import (
    ApvdReport,
    BlockOutcome,
    apvd_embed_block,
    apvd_embed_image,
    apvd_extract_block,
    apvd_extract_image,
    mark_flag,
    read_flag_and_adjust,
)
from .codec import (
    BitCursor,
    CapacityError,
    PayloadError,
    Range,
    RangeTable,
    TruncatedPayload,
    build_range_table,
    deframe_payload,
    frame_payload,
)
from .imagery import GrayImage, PgmError, block_sequence, load_pgm, save_pgm, synthetic_cover
from .metrics import ComparisonRow, QualityReport, capacity, compare, psnr
from .pvd import (
    PvdResult,
    WidePixelPair,
    pvd_embed_block,
    pvd_embed_image,
    pvd_extract_block,
    pvd_extract_image,
)

__version__ = "0.1.0"

__all__ = [
    "ApvdReport",
    "BitCursor",
    "BlockOutcome",
    "CapacityError",
    "ComparisonRow",
    "GrayImage",
    "PayloadError",
    "PgmError",
    "PvdResult",
    "QualityReport",
    "Range",
    "RangeTable",
    "TruncatedPayload",
    "WidePixelPair",
    "apvd_embed_block",
    "apvd_embed_image",
    "apvd_extract_block",
    "apvd_extract_image",
    "block_sequence",
    "build_range_table",
    "capacity",
    "compare",
    "deframe_payload",
    "frame_payload",
    "load_pgm",
    "mark_flag",
    "psnr",
    "pvd_embed_block",
    "pvd_embed_image",
    "pvd_extract_block",
    "pvd_extract_image",
    "read_flag_and_adjust",
    "save_pgm",
    "synthetic_cover",
]
