"""Adaptive pixel-value differencing: overflow-safe embed and extract.

Embedding runs the baseline scheme first.  When a stego pixel would
leave [0, 255] the block falls back, in order:

1. if the chunk's MSB is 1, drop it and re-embed the remaining t-1 bits
   (the dropped bit is recorded in a per-block flag);
2. if the pair is still out of range, keep the violating pixel at its
   cover value and land the entire difference change on the other pixel.

Every data-carrying block is then marked: a small +-1/+-2 adjustment
forces the first pixel's LSB to equal the flag while keeping the pair's
recoverable difference intact, with boundary sub-cases so the
adjustment itself can never leave the gray range.  Extraction undoes the
mark (LSB 0 -> first+1, LSB 1 -> first-1), recovers the difference, and
restores a dropped MSB as '1'.

One marked state is unrecoverable: the pair (0, 255) with flag 0 cannot
be adjusted without leaving the range, so the mark step leaves it alone
and extraction of that block comes back off by one.  These "lossy
corner" blocks are counted, reported, and never silently repaired.

Branch and mark-case labels used in reports:

* branch: ``plain`` | ``discard_resolved`` | ``one_sided`` |
  ``discard_then_one_sided``
* mark case: ``keep/<LSBs>`` or ``drop/<LSBs>`` with the LSB pattern of
  the pre-mark pair, plus ``-top`` / ``-bottom`` / ``-corner`` for the
  boundary sub-cases.
"""

from dataclasses import dataclass

from .codec import (
    BitCursor,
    CapacityError,
    FrameCollector,
    Range,
    RangeTable,
    deframe_payload,
    frame_payload,
)
from .imagery import GrayImage, block_sequence
from .metrics import mse_psnr
from .pvd import adjust_pair, raw_bit_capacity

BRANCH_PLAIN = "plain"
BRANCH_DISCARD_RESOLVED = "discard_resolved"
BRANCH_ONE_SIDED = "one_sided"
BRANCH_DISCARD_THEN_ONE_SIDED = "discard_then_one_sided"
BRANCHES = (
    BRANCH_PLAIN,
    BRANCH_DISCARD_RESOLVED,
    BRANCH_ONE_SIDED,
    BRANCH_DISCARD_THEN_ONE_SIDED,
)

LOSSY_MARK_CASE = "keep/01-corner"


@dataclass
class BlockOutcome:
    """Per-block embedding trace, before the flag mark is applied."""

    pixels: tuple[int, int]
    flag: int
    branch: str
    distortion: tuple[int, int]
    mark_case: str | None = None  # set once the block is marked


def one_sided_pair(
    p: int, q: int, attempt: tuple[int, int], d: int, d_new: int
) -> tuple[int, int]:
    """Resolve a boundary violation by moving only the safe pixel.

    The pixel that crossed the range is restored to its cover value and
    its partner absorbs the whole change m, so |q' - p'| = d_new still
    holds.  Only one pixel of a block can ever cross, and only on the
    difference-increasing path.
    """
    m = abs(d_new - d)
    ap, aq = attempt
    # exactly one pixel can cross, in one direction
    assert (ap > 255) + (ap < 0) + (aq > 255) + (aq < 0) == 1
    if aq > 255:  # second crossed the upper bound
        out = (p - m, q)
    elif ap < 0:  # first crossed the lower bound
        out = (p, q + m)
    elif ap > 255:  # first crossed the upper bound
        out = (p, q - m)
    else:  # second crossed the lower bound
        out = (p + m, q)
    assert 0 <= out[0] <= 255 and 0 <= out[1] <= 255
    return out


def embed_block_values(
    p: int, q: int, chunk: int, rng: Range
) -> tuple[tuple[int, int], int, str]:
    """Embed one chunk with overflow handling; no cursor, no marking.

    Returns (pixels, flag, branch) with pixels guaranteed in [0, 255].
    """
    d = abs(q - p)
    lower = rng.lower
    attempt = adjust_pair(p, q, d, lower + chunk)
    if 0 <= attempt[0] <= 255 and 0 <= attempt[1] <= 255:
        return attempt, 0, BRANCH_PLAIN
    t = rng.bits
    if chunk >> (t - 1):
        # MSB is 1: drop it, re-embed the remaining t-1 bits
        d_new = lower + chunk - (1 << (t - 1))
        retry = adjust_pair(p, q, d, d_new)
        if 0 <= retry[0] <= 255 and 0 <= retry[1] <= 255:
            return retry, 1, BRANCH_DISCARD_RESOLVED
        return one_sided_pair(p, q, retry, d, d_new), 1, BRANCH_DISCARD_THEN_ONE_SIDED
    # MSB is 0: nothing to drop, the retry would repeat the same pair
    return one_sided_pair(p, q, attempt, d, lower + chunk), 0, BRANCH_ONE_SIDED


def apvd_embed_block(
    p: int, q: int, cursor: BitCursor, table: RangeTable
) -> BlockOutcome:
    """Read the block's t bits and embed them overflow-safely."""
    rng = table.locate(abs(q - p))
    chunk = cursor.read(rng.bits)
    pixels, flag, branch = embed_block_values(p, q, chunk, rng)
    return BlockOutcome(
        pixels=pixels,
        flag=flag,
        branch=branch,
        distortion=(abs(pixels[0] - p), abs(pixels[1] - q)),
    )


def _mark_with_case(
    pixels: tuple[int, int], flag: int
) -> tuple[tuple[int, int], str]:
    """Apply the flag-marking table; returns adjusted pair and case label."""
    p, q = pixels
    if flag == 0:
        if p & 1 == 0:
            if q & 1 == 0:
                return (p, q + 1), "keep/00"
            if q < 255 and p >= 0:
                return (p, q + 1), "keep/01"
            if p > 0 and q == 255:
                return (p - 2, q - 1), "keep/01-top"
            # p == 0, q == 255: no in-range adjustment exists; lossy
            return (p, q), LOSSY_MARK_CASE
        if q & 1 == 0:
            return (p - 1, q), "keep/10"
        return (p - 1, q), "keep/11"
    if p & 1 == 0:
        if q & 1 == 0:
            return (p + 1, q), "drop/00"
        return (p + 1, q), "drop/01"
    if q & 1 == 0:
        if q > 0 and p <= 255:
            return (p, q - 1), "drop/10"
        if p < 255 and q == 0:
            return (p + 2, q + 1), "drop/10-bottom"
        raise ValueError(f"pair {pixels} cannot arise from a discard branch")
    return (p, q - 1), "drop/11"


def mark_flag(pixels: tuple[int, int], flag: int) -> tuple[int, int]:
    """Adjust a block so the first pixel's LSB records the flag.

    Applied to every data-carrying block.  The pair (0, 255) with flag 0
    is the single case left untouched (its mismatched LSB makes the
    block extract off by one).
    """
    marked, _ = _mark_with_case(pixels, flag)
    assert 0 <= marked[0] <= 255 and 0 <= marked[1] <= 255
    return marked


def read_flag_and_adjust(pixels: tuple[int, int]) -> tuple[int, int]:
    """Recover the flag from the first pixel's LSB and undo the mark."""
    first = pixels[0]
    flag = first & 1
    return flag, (first - 1 if flag else first + 1)


def extract_block_value(first: int, second: int, table: RangeTable) -> tuple[int, int]:
    """Return (chunk value, t) for a marked stego pair."""
    flag, adjusted = read_flag_and_adjust((first, second))
    d = abs(adjusted - second)
    rng = table.locate(d)
    value = d - rng.lower
    if flag:
        value |= 1 << (rng.bits - 1)  # restore the dropped MSB
    return value, rng.bits


def apvd_extract_block(pixels: tuple[int, int], table: RangeTable) -> str:
    """Recover the block's t bits, MSB-first; always exactly t bits."""
    value, t = extract_block_value(pixels[0], pixels[1], table)
    return format(value, f"0{t}b")


@dataclass
class ApvdReport:
    """One embed run: stego image plus branch and quality statistics."""

    stego: GrayImage
    bits_embedded: int
    blocks_used: int
    branch_counts: dict[str, int]
    mark_case_counts: dict[str, int]
    lossy_corner_count: int
    mse: float
    psnr_db: float


def apvd_embed_image(cover: GrayImage, payload: bytes, table: RangeTable) -> ApvdReport:
    """Frame the payload and embed it block by block; stego stays 8-bit."""
    framed = frame_payload(payload)
    available = raw_bit_capacity(cover, table)
    if len(framed) > available:
        raise CapacityError(len(framed), available)
    cursor = BitCursor(framed)
    stego = bytearray(cover.pixels)
    branch_counts = dict.fromkeys(BRANCHES, 0)
    mark_case_counts: dict[str, int] = {}
    bits_embedded = 0
    blocks_used = 0
    for idx, (p, q) in block_sequence(cover):
        if cursor.exhausted:
            break
        rng = table.locate(abs(q - p))
        take = min(rng.bits, cursor.remaining)
        chunk = cursor.read_padded(rng.bits)
        pixels, flag, branch = embed_block_values(p, q, chunk, rng)
        marked, case = _mark_with_case(pixels, flag)
        stego[idx.first], stego[idx.second] = marked
        branch_counts[branch] += 1
        mark_case_counts[case] = mark_case_counts.get(case, 0) + 1
        bits_embedded += take
        blocks_used += 1
    image = GrayImage(cover.width, cover.height, bytes(stego))
    mse, psnr_db = mse_psnr(cover.pixels, image.pixels)
    return ApvdReport(
        stego=image,
        bits_embedded=bits_embedded,
        blocks_used=blocks_used,
        branch_counts=branch_counts,
        mark_case_counts=mark_case_counts,
        lossy_corner_count=mark_case_counts.get(LOSSY_MARK_CASE, 0),
        mse=mse,
        psnr_db=psnr_db,
    )


def apvd_extract_image(stego: GrayImage, table: RangeTable) -> bytes:
    """Read marked blocks until the framed stream completes, then deframe."""
    collector = FrameCollector()
    for _, (first, second) in block_sequence(stego):
        if collector.push(apvd_extract_block((first, second), table)):
            break
    return deframe_payload(collector.framed())
