"""Image-quality and payload metrics: MSE/PSNR, capacity, method comparison."""

import math
from dataclasses import dataclass
from typing import Sequence

from .codec import HEADER_BITS, RangeTable, frame_payload
from .imagery import GrayImage, block_sequence

PEAK_SQUARED = 255 * 255


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float  # math.inf for identical images
    max_abs_diff: int
    changed_pixel_count: int


@dataclass(frozen=True)
class ComparisonRow:
    cover: str
    method: str
    capacity_bytes: int
    psnr_db: float
    violations: int


def mse_psnr(a: Sequence[int], b: Sequence[int]) -> tuple[float, float]:
    """MSE and PSNR between two equal-length intensity sequences.

    The squared-error sum is accumulated in exact integer arithmetic;
    the only division happens at the end.  PSNR uses the 8-bit peak 255
    and is math.inf for identical inputs.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    ssd = sum((x - y) * (x - y) for x, y in zip(a, b))
    if ssd == 0:
        return 0.0, math.inf
    n = len(a)
    return ssd / n, 10.0 * math.log10(PEAK_SQUARED * n / ssd)


def psnr(a: GrayImage, b: GrayImage) -> QualityReport:
    """Quality of image b relative to a (symmetric); dimensions must match."""
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError(
            f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    mse, psnr_db = mse_psnr(a.pixels, b.pixels)
    diffs = [abs(x - y) for x, y in zip(a.pixels, b.pixels)]
    return QualityReport(
        mse=mse,
        psnr_db=psnr_db,
        max_abs_diff=max(diffs),
        changed_pixel_count=sum(1 for d in diffs if d),
    )


def format_db(value: float) -> str:
    """Serialize PSNR for reports; identical images yield the string 'inf'."""
    return "inf" if math.isinf(value) else f"{value:.2f}"


def capacity(cover: GrayImage, table: RangeTable) -> tuple[int, int]:
    """(raw bits, net payload bytes) hidable in the cover.

    Raw capacity is the sum of t over all blocks and is identical for
    both methods; net bytes account for the length header (and are
    clamped at zero for covers too small to hold even the header).
    """
    raw = sum(table.locate(abs(q - p)).bits for _, (p, q) in block_sequence(cover))
    return raw, max(0, (raw - HEADER_BITS) // 8)


def compare(
    cover: GrayImage, payload: bytes, table: RangeTable, name: str = "cover"
) -> list[ComparisonRow]:
    """Embed the same payload with both methods and report one row each.

    The violating method's PSNR is computed against its unclamped wide
    raster, measuring the distortion the arithmetic actually produced.
    """
    # imported here: these modules sit above metrics in the layering
    from .apvd import apvd_embed_image
    from .pvd import pvd_embed_image

    _, net_bytes = capacity(cover, table)
    framed = frame_payload(payload)
    base = pvd_embed_image(cover, framed, table)
    adaptive = apvd_embed_image(cover, payload, table)
    assert base.bits_embedded == adaptive.bits_embedded  # capacity parity
    _, base_psnr = mse_psnr(cover.pixels, base.stego)
    return [
        ComparisonRow(name, "pvd", net_bytes, base_psnr, base.violations),
        ComparisonRow(name, "apvd", net_bytes, adaptive.psnr_db, 0),
    ]


def rows_to_csv(rows: Sequence[ComparisonRow]) -> str:
    lines = ["cover,method,capacity_bytes,psnr_db,violations"]
    for r in rows:
        lines.append(
            f"{r.cover},{r.method},{r.capacity_bytes},{format_db(r.psnr_db)},{r.violations}"
        )
    return "\n".join(lines) + "\n"


def rows_to_table(rows: Sequence[ComparisonRow]) -> str:
    header = ("cover", "method", "capacity_bytes", "psnr_db", "violations")
    cells = [header] + [
        (r.cover, r.method, str(r.capacity_bytes), format_db(r.psnr_db), str(r.violations))
        for r in rows
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"
