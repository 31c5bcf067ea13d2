"""Grayscale raster type, Netpbm PGM codec and the shared block order.

Only 8-bit PGM (P2 ascii / P5 binary, maxval 255) is supported.  Both
the embedders and the extractors walk the raster in flat row-major
order, pairing consecutive pixels into non-overlapping two-pixel blocks;
an odd trailing pixel belongs to no block and is never modified.
"""

import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence


class PgmError(ValueError):
    """Raised for malformed or unsupported PGM data."""


@dataclass(frozen=True)
class GrayImage:
    """Immutable 8-bit grayscale raster, pixels in flat row-major order."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"pixel count {len(self.pixels)} does not match {self.width}x{self.height}"
            )

    @classmethod
    def from_pixels(cls, width: int, height: int, pixels: Sequence[int]) -> "GrayImage":
        """Build an image from any integer sequence, validating [0, 255]."""
        bad = [v for v in pixels if not 0 <= v <= 255]
        if bad:
            raise ValueError(f"pixel value {bad[0]} outside [0, 255]")
        return cls(width, height, bytes(pixels))


class BlockIndex(NamedTuple):
    """Flat offsets of one two-pixel block."""

    ordinal: int
    first: int
    second: int


def block_count(img: GrayImage) -> int:
    return (img.width * img.height) // 2


def block_sequence(img: GrayImage) -> Iterator[tuple[BlockIndex, tuple[int, int]]]:
    """Yield (index, (p, q)) for consecutive non-overlapping pixel pairs.

    Pairs are formed over the whole flat raster, so a block may straddle
    a row boundary; an odd final pixel is skipped.
    """
    px = img.pixels
    for ordinal in range(block_count(img)):
        first = 2 * ordinal
        yield BlockIndex(ordinal, first, first + 1), (px[first], px[first + 1])


# --- PGM codec -------------------------------------------------------------

_WHITESPACE = b" \t\r\n\x0b\x0c"


class _Scanner:
    """Token scanner over PGM header/ascii data, skipping '#' comments."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = self.data[self.pos : self.pos + 1]
            if c in (b"#",):
                while self.pos < n and data[self.pos : self.pos + 1] not in (b"\n", b"\r"):
                    self.pos += 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                return

    def token(self, what: str) -> bytes:
        self.skip_separators()
        start = self.pos
        n = len(self.data)
        while self.pos < n and self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            if self.data[self.pos : self.pos + 1] == b"#":
                break
            self.pos += 1
        if self.pos == start:
            raise PgmError(f"truncated header: missing {what}")
        return self.data[start : self.pos]

    def int_token(self, what: str) -> int:
        tok = self.token(what)
        if not tok.isdigit():
            raise PgmError(f"malformed {what}: {tok!r}")
        return int(tok)


def load_pgm(data: bytes) -> GrayImage:
    """Decode a P2 (ascii) or P5 (binary) PGM with maxval 255."""
    sc = _Scanner(data)
    magic = sc.token("magic number")
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"unsupported magic {magic!r}, expected P2 or P5")
    width = sc.int_token("width")
    height = sc.int_token("height")
    if width == 0 or height == 0:
        raise PgmError(f"zero image dimension: {width}x{height}")
    maxval = sc.int_token("maxval")
    if maxval != 255:
        raise PgmError(f"unsupported maxval {maxval}, only 255 is supported")
    count = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        if sc.pos >= len(data) or data[sc.pos : sc.pos + 1] not in _WHITESPACE:
            raise PgmError("missing whitespace after maxval")
        sc.pos += 1
        raster = data[sc.pos : sc.pos + count]
        if len(raster) < count:
            raise PgmError(f"truncated pixel data: got {len(raster)} of {count} bytes")
        trailer = data[sc.pos + count :]
        if trailer.strip(_WHITESPACE):
            raise PgmError("trailing data after pixel raster")
        return GrayImage(width, height, raster)

    values = bytearray()
    for _ in range(count):
        v = sc.int_token("pixel value")
        if v > 255:
            raise PgmError(f"pixel value {v} exceeds maxval 255")
        values.append(v)
    sc.skip_separators()
    if sc.pos != len(data):
        raise PgmError("trailing data after pixel raster")
    return GrayImage(width, height, bytes(values))


def save_pgm(img: GrayImage, variant: str = "binary") -> bytes:
    """Encode an image as PGM; load_pgm(save_pgm(img)) is the identity.

    The binary variant emits exactly one newline between maxval and the
    raster; the ascii variant wraps lines below 70 characters.  Comments
    are never emitted.
    """
    header = f"{'P5' if variant == 'binary' else 'P2'}\n{img.width} {img.height}\n255\n"
    if variant == "binary":
        return header.encode("ascii") + img.pixels
    if variant != "ascii":
        raise ValueError(f"unknown variant {variant!r}, expected 'ascii' or 'binary'")
    lines = []
    px = img.pixels
    for i in range(0, len(px), 17):  # 17 values of <= 4 chars keeps lines under 70
        lines.append(" ".join(str(v) for v in px[i : i + 17]))
    return header.encode("ascii") + ("\n".join(lines) + "\n").encode("ascii")


# --- bundled synthetic covers ---------------------------------------------

SYNTHETIC_KINDS = ("gradient", "noise", "checkerboard")


def synthetic_cover(kind: str, width: int = 512, height: int = 512, seed: int = 0) -> GrayImage:
    """Deterministic test covers standing in for scanned photographs."""
    if kind == "gradient":
        span = max(1, width + height - 2)
        px = bytes(
            ((x + y) * 255) // span for y in range(height) for x in range(width)
        )
    elif kind == "noise":
        rng = random.Random(seed)
        px = bytes(rng.randrange(256) for _ in range(width * height))
    elif kind == "checkerboard":
        px = bytes(
            255 if (x + y) % 2 else 0 for y in range(height) for x in range(width)
        )
    else:
        raise ValueError(f"unknown synthetic cover {kind!r}, expected one of {SYNTHETIC_KINDS}")
    return GrayImage(width, height, px)
