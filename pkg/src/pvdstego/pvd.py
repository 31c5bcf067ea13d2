"""Baseline pixel-value-differencing embed/extract.

A block's difference d = |q - p| selects a range [l, u] hiding t bits;
the chunk value b is embedded by forcing the new difference d' = l + b
onto the pair, splitting the change m = |d' - d| between the two pixels
(ceil-half on the pixel moving away from the other, floor-half on its
partner).  The scheme is reproduced as defined, including its flaw: near
0/255 a stego pixel can leave the gray range.  Violations are counted
and surfaced, never silently repaired; the adaptive variant in
:mod:`pvdstego.apvd` exists to eliminate them.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .codec import (
    BitCursor,
    CapacityError,
    FrameCollector,
    RangeTable,
    TruncatedPayload,
)
from .imagery import GrayImage, block_sequence

# stego values stay within this window even when they leave [0, 255]
WIDE_MIN, WIDE_MAX = -64, 319


class WidePixelPair(NamedTuple):
    first: int
    second: int


def adjust_pair(p: int, q: int, d: int, d_new: int) -> tuple[int, int]:
    """Split m = |d_new - d| across the pair so that |q' - p'| = d_new."""
    m = d_new - d if d_new > d else d - d_new
    half_down = m >> 1  # floor(m/2)
    half_up = m - half_down  # ceil(m/2)
    if d_new > d:
        if p >= q:
            return p + half_up, q - half_down
        return p - half_down, q + half_up
    if p >= q:
        return p - half_up, q + half_down
    return p + half_down, q - half_up


def embed_pair(p: int, q: int, chunk: int, lower: int) -> tuple[int, int]:
    """Embed an already-read chunk value into one pixel pair."""
    d = abs(q - p)
    return adjust_pair(p, q, d, lower + chunk)


def pvd_embed_block(
    p: int, q: int, cursor: BitCursor, table: RangeTable
) -> WidePixelPair:
    """Read t bits for the block's range and embed them; may leave [0, 255]."""
    rng = table.locate(abs(q - p))
    chunk = cursor.read(rng.bits)
    first, second = embed_pair(p, q, chunk, rng.lower)
    assert WIDE_MIN <= first <= WIDE_MAX and WIDE_MIN <= second <= WIDE_MAX
    return WidePixelPair(first, second)


def extract_pair(p2: int, q2: int, table: RangeTable) -> tuple[int, int]:
    """Return (chunk value, t) recovered from a stego pair."""
    d_new = abs(q2 - p2)
    rng = table.locate(d_new)
    return d_new - rng.lower, rng.bits


def pvd_extract_block(p2: int, q2: int, table: RangeTable) -> str:
    """Recover the block's t bits, MSB-first."""
    value, t = extract_pair(p2, q2, table)
    return format(value, f"0{t}b")


def raw_bit_capacity(cover: GrayImage, table: RangeTable) -> int:
    """Total hidable bits: the sum of t over all blocks of the cover."""
    locate = table.locate
    px = cover.pixels
    return sum(
        locate(abs(px[i + 1] - px[i])).bits for i in range(0, 2 * ((len(px)) // 2), 2)
    )


@dataclass
class PvdResult:
    """Embedding trace: wide stego raster plus violation statistics."""

    stego: list[int]
    violations: int
    bits_embedded: int
    blocks_used: int

    def __post_init__(self):
        assert self.violations == sum(1 for v in self.stego if not 0 <= v <= 255)


def pvd_embed_image(cover: GrayImage, payload: str, table: RangeTable) -> PvdResult:
    """Embed a bit stream block by block until it is exhausted.

    The caller frames the stream (see codec.frame_payload); the final
    chunk is zero-filled to its block's t.  Untouched blocks and any odd
    trailing pixel are copied verbatim.
    """
    needed = len(payload)
    available = raw_bit_capacity(cover, table)
    if needed > available:
        raise CapacityError(needed, available)
    cursor = BitCursor(payload)
    stego = list(cover.pixels)
    violations = 0
    bits_embedded = 0
    blocks_used = 0
    for idx, (p, q) in block_sequence(cover):
        if cursor.exhausted:
            break
        rng = table.locate(abs(q - p))
        take = min(rng.bits, cursor.remaining)
        chunk = cursor.read_padded(rng.bits)
        first, second = embed_pair(p, q, chunk, rng.lower)
        stego[idx.first] = first
        stego[idx.second] = second
        violations += (not 0 <= first <= 255) + (not 0 <= second <= 255)
        bits_embedded += take
        blocks_used += 1
    return PvdResult(stego, violations, bits_embedded, blocks_used)


def pvd_extract_image(
    stego: Sequence[int], table: RangeTable, bit_budget: int | None = None
) -> str:
    """Concatenate per-block extractions from a (possibly wide) raster.

    With the default bit_budget the stream is cut by its own length
    header; an explicit budget returns exactly that many leading bits.
    """
    if bit_budget is None:
        collector = FrameCollector()
        for i in range(0, 2 * (len(stego) // 2), 2):
            if collector.push(pvd_extract_block(stego[i], stego[i + 1], table)):
                break
        return collector.framed()
    parts: list[str] = []
    length = 0
    for i in range(0, 2 * (len(stego) // 2), 2):
        if length >= bit_budget:
            break
        chunk = pvd_extract_block(stego[i], stego[i + 1], table)
        parts.append(chunk)
        length += len(chunk)
    if length < bit_budget:
        raise TruncatedPayload(
            f"requested {bit_budget} bits but the raster holds only {length}"
        )
    return "".join(parts)[:bit_budget]


def clamp_raster(stego: Sequence[int]) -> bytes:
    """Clamp a wide raster into [0, 255] for PGM persistence.

    Lossy whenever violations are present; extraction from a clamped
    raster can return corrupted data.
    """
    return bytes(min(255, max(0, v)) for v in stego)
