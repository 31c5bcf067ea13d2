"""Quantization range table, bit-capacity arithmetic and payload framing.

Bit streams are plain strings of '0'/'1', MSB-first within each source
byte.  The payload wire format is a 32-bit big-endian bit-count header
followed by the message bits; any zero bits an embedder appends past the
end of the stream to fill its final chunk are dropped again on deframing.
"""

from dataclasses import dataclass

DEFAULT_WIDTHS = (8, 8, 16, 32, 64, 128)

HEADER_BITS = 32


class CapacityError(ValueError):
    """Payload does not fit into the carrier image."""

    def __init__(self, needed_bits: int, available_bits: int):
        super().__init__(
            f"payload needs {needed_bits} bits but the cover image "
            f"holds at most {available_bits} bits"
        )
        self.needed_bits = needed_bits
        self.available_bits = available_bits


class BitstreamExhausted(ValueError):
    """A strict chunk read ran past the end of the bit stream."""


class PayloadError(ValueError):
    """The framed payload stream is malformed."""


class TruncatedPayload(PayloadError):
    """The header declares more payload bits than are available."""


@dataclass(frozen=True)
class Range:
    """One quantization range [lower, upper]; hides `bits` bits per block."""

    lower: int
    upper: int

    @property
    def width(self) -> int:
        return self.upper - self.lower + 1

    @property
    def bits(self) -> int:
        return self.width.bit_length() - 1

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 255:
            raise ValueError(f"range bounds out of order or outside [0,255]: {self}")
        w = self.width
        if w < 2 or w & (w - 1):
            raise ValueError(f"range width {w} is not a power of two >= 2")


class RangeTable:
    """Contiguous ranges partitioning the difference domain [0, 255]."""

    def __init__(self, ranges: list[Range]):
        if not ranges:
            raise ValueError("range table is empty")
        if ranges[0].lower != 0 or ranges[-1].upper != 255:
            raise ValueError("ranges must start at 0 and end at 255")
        for prev, cur in zip(ranges, ranges[1:]):
            if cur.lower != prev.upper + 1:
                raise ValueError(f"ranges not contiguous at {prev} -> {cur}")
        self.ranges = tuple(ranges)
        # O(1) lookup by difference value
        self._by_diff = []
        for rng in self.ranges:
            self._by_diff.extend([rng] * rng.width)

    def locate(self, d: int) -> Range:
        """Return the unique range containing the difference d in [0, 255]."""
        return self._by_diff[d]

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(r.width for r in self.ranges)

    def __eq__(self, other):
        return isinstance(other, RangeTable) and self.ranges == other.ranges

    def __repr__(self):
        return f"RangeTable(widths={','.join(map(str, self.widths))})"


def build_range_table(widths=DEFAULT_WIDTHS) -> RangeTable:
    """Build the prefix-sum partition of [0, 255] from a list of widths.

    Every width must be a power of two >= 2 and the widths must sum to
    256, so each range hides exactly log2(width) bits.
    """
    total = sum(widths)
    if total != 256:
        raise ValueError(f"range widths must sum to 256, got {total}")
    ranges = []
    lower = 0
    for w in widths:
        ranges.append(Range(lower, lower + w - 1))  # Range validates power of two
        lower += w
    return RangeTable(ranges)


def parse_widths(text: str) -> tuple[int, ...]:
    """Parse a comma-separated width list such as "8,8,16,32,64,128"."""
    try:
        widths = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"invalid width list {text!r}") from None
    return widths


class BitCursor:
    """Sequential MSB-first reader over a '0'/'1' string."""

    def __init__(self, bits: str):
        if bits.strip("01"):
            raise ValueError("bit stream may only contain '0' and '1'")
        self.bits = bits
        self.position = 0

    @property
    def remaining(self) -> int:
        return len(self.bits) - self.position

    @property
    def exhausted(self) -> bool:
        return self.position >= len(self.bits)

    def read(self, t: int) -> int:
        """Read exactly t bits as an MSB-first integer, e.g. '010' -> 2."""
        if self.remaining < t:
            raise BitstreamExhausted(
                f"need {t} bits but only {self.remaining} remain"
            )
        chunk = self.bits[self.position : self.position + t]
        self.position += t
        return int(chunk, 2)

    def read_padded(self, t: int) -> int:
        """Read up to t bits, zero-filling on the right past stream end.

        Used for the final chunk of an embedding pass: the extractor
        discards the filler via the length header.
        """
        chunk = self.bits[self.position : self.position + t]
        self.position += len(chunk)
        return int(chunk.ljust(t, "0"), 2)


def bits_from_bytes(data: bytes) -> str:
    return "".join(format(byte, "08b") for byte in data)


def bytes_from_bits(bits: str) -> bytes:
    if len(bits) % 8:
        raise PayloadError(f"bit count {len(bits)} is not a multiple of 8")
    return bytes(int(bits[i : i + 8], 2) for i in range(0, len(bits), 8))


def frame_payload(message: bytes) -> str:
    """Prefix the message bits with a 32-bit big-endian bit-count header."""
    nbits = len(message) * 8
    if nbits >= 1 << HEADER_BITS:
        raise ValueError("message too long for the 32-bit length header")
    return format(nbits, "032b") + bits_from_bytes(message)


def deframe_payload(bits: str) -> bytes:
    """Recover the message bytes from a framed bit stream.

    Bits past the declared length (embedder fill) are ignored.
    """
    if len(bits) < HEADER_BITS:
        raise TruncatedPayload(
            f"stream holds {len(bits)} bits, shorter than the {HEADER_BITS}-bit header"
        )
    declared = int(bits[:HEADER_BITS], 2)
    if declared > len(bits) - HEADER_BITS:
        raise TruncatedPayload(
            f"header declares {declared} payload bits but only "
            f"{len(bits) - HEADER_BITS} are available"
        )
    return bytes_from_bits(bits[HEADER_BITS : HEADER_BITS + declared])


class FrameCollector:
    """Accumulates per-block chunks until a framed stream is complete.

    Drives extraction: push each block's bits and stop as soon as the
    header plus the declared payload length have been gathered.
    """

    def __init__(self):
        self._parts: list[str] = []
        self._length = 0
        self.target: int | None = None

    def push(self, chunk: str) -> bool:
        """Add one block's bits; return True once the stream is complete."""
        self._parts.append(chunk)
        self._length += len(chunk)
        if self.target is None and self._length >= HEADER_BITS:
            head = "".join(self._parts)
            self.target = HEADER_BITS + int(head[:HEADER_BITS], 2)
        return self.target is not None and self._length >= self.target

    @property
    def complete(self) -> bool:
        return self.target is not None and self._length >= self.target

    def framed(self) -> str:
        """Return the completed stream, trimmed of trailing block fill."""
        if not self.complete:
            declared = "unknown" if self.target is None else self.target - HEADER_BITS
            raise TruncatedPayload(
                f"stego image ran out of blocks after {self._length} bits "
                f"(declared payload: {declared} bits)"
            )
        return "".join(self._parts)[: self.target]
