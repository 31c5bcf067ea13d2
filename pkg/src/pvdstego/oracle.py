"""Exhaustive block-level verification of both embedding schemes.

Sweeps every pixel pair (p, q) in [0, 255]^2 and every admissible chunk
for that pair's range (about 4 million cases for the default table) and
checks, per case:

* baseline: the pair realizes the new difference exactly, stays inside
  the wide window, never leaves [0, 255] on the difference-decreasing
  path, and round-trips whenever it stays in range;
* adaptive: the marked output is always inside [0, 255], the flag and
  difference survive the mark, a difference-increasing violation is the
  only way into the one-sided fallback, a set flag implies the chunk's
  MSB was 1, and extraction returns the exact chunk -- except for the
  counted lossy-corner blocks, which must be off by exactly one.

The sweep is embarrassingly parallel over first-pixel values; use
jobs > 1 to fan out across processes.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import apvd, pvd
from .codec import RangeTable, build_range_table

FAIL_LIMIT = 5  # per sweep span; enough to diagnose, cheap to carry


@dataclass
class OracleResult:
    total_cases: int
    failures: list[str]
    lossy_corner_count: int
    lossy_corner_cases: list[tuple[int, int, int]]
    branch_counts: dict[str, int]
    mark_case_counts: dict[str, int]
    baseline_in_range_cases: int
    elapsed_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class _Partial:
    total: int = 0
    failures: list[str] = field(default_factory=list)
    corner: list[tuple[int, int, int]] = field(default_factory=list)
    branches: dict[str, int] = field(default_factory=lambda: dict.fromkeys(apvd.BRANCHES, 0))
    marks: dict[str, int] = field(default_factory=dict)
    baseline_in_range: int = 0


def expected_case_count(table: RangeTable) -> int:
    """Case count derived arithmetically, independent of the sweep loop."""
    total = 0
    for d in range(256):
        pairs = 256 if d == 0 else 2 * (256 - d)
        total += pairs << table.locate(d).bits
    return total


def _check_pair(p: int, q: int, table: RangeTable, out: _Partial) -> None:
    d = abs(q - p)
    rng = table.locate(d)
    t = rng.bits
    lower = rng.lower
    half = 1 << (t - 1)
    failures = out.failures
    branches = out.branches
    marks = out.marks

    def fail(chunk, message):
        if len(failures) < FAIL_LIMIT:
            failures.append(f"(p={p}, q={q}, chunk={chunk:0{t}b}): {message}")

    for chunk in range(1 << t):
        out.total += 1
        d_new = lower + chunk

        # baseline scheme
        a1, a2 = pvd.adjust_pair(p, q, d, d_new)
        if abs(a2 - a1) != d_new:
            fail(chunk, f"baseline pair ({a1},{a2}) does not realize d'={d_new}")
        if not (pvd.WIDE_MIN <= a1 <= pvd.WIDE_MAX and pvd.WIDE_MIN <= a2 <= pvd.WIDE_MAX):
            fail(chunk, f"baseline pair ({a1},{a2}) outside wide window")
        in_range = 0 <= a1 <= 255 and 0 <= a2 <= 255
        if d_new <= d and not in_range:
            fail(chunk, f"difference-decreasing baseline left range: ({a1},{a2})")
        if in_range:
            out.baseline_in_range += 1
            value, t_back = pvd.extract_pair(a1, a2, table)
            if value != chunk or t_back != t:
                fail(chunk, f"baseline round trip gave {value} over {t_back} bits")

        # adaptive scheme
        (b1, b2), flag, branch = apvd.embed_block_values(p, q, chunk, rng)
        branches[branch] += 1
        if not (0 <= b1 <= 255 and 0 <= b2 <= 255):
            fail(chunk, f"adaptive pre-mark pair ({b1},{b2}) out of range")
        realized = lower + (chunk - half if flag else chunk)
        if abs(b2 - b1) != realized:
            fail(chunk, f"adaptive pair ({b1},{b2}) does not realize d'={realized}")
        if flag and not chunk >> (t - 1):
            fail(chunk, "flag set although the chunk MSB was 0")
        if branch in (apvd.BRANCH_ONE_SIDED, apvd.BRANCH_DISCARD_THEN_ONE_SIDED):
            if realized <= d:
                fail(chunk, f"one-sided fallback fired although d'={realized} <= d={d}")

        marked, case = apvd._mark_with_case((b1, b2), flag)
        marks[case] = marks.get(case, 0) + 1
        m1, m2 = marked
        if not (0 <= m1 <= 255 and 0 <= m2 <= 255):
            fail(chunk, f"marked pair ({m1},{m2}) out of range")

        flag_back, adjusted = apvd.read_flag_and_adjust(marked)
        value, t_back = apvd.extract_block_value(m1, m2, table)
        if case == apvd.LOSSY_MARK_CASE:
            out.corner.append((p, q, chunk))
            # documented loss: the unmarkable (0, 255) block reads one low
            if flag_back != 0 or abs(adjusted - m2) != realized - 1:
                fail(chunk, f"lossy corner recovered d={abs(adjusted - m2)}")
            if value != chunk - 1 or t_back != t:
                fail(chunk, f"lossy corner extracted {value}, expected {chunk - 1}")
        else:
            if flag_back != flag:
                fail(chunk, f"flag came back as {flag_back}, embedded {flag}")
            if abs(adjusted - m2) != realized:
                fail(chunk, f"difference recovery gave {abs(adjusted - m2)}, expected {realized}")
            if value != chunk or t_back != t:
                fail(chunk, f"round trip extracted {value} over {t_back} bits")


def _sweep_span(widths: tuple[int, ...], p_start: int, p_stop: int) -> _Partial:
    table = build_range_table(widths)
    out = _Partial()
    for p in range(p_start, p_stop):
        for q in range(256):
            _check_pair(p, q, table, out)
    return out


def _merge(parts: list[_Partial]) -> _Partial:
    merged = _Partial()
    for part in parts:
        merged.total += part.total
        merged.failures.extend(part.failures)
        merged.corner.extend(part.corner)
        merged.baseline_in_range += part.baseline_in_range
        for k, v in part.branches.items():
            merged.branches[k] = merged.branches.get(k, 0) + v
        for k, v in part.marks.items():
            merged.marks[k] = merged.marks.get(k, 0) + v
    return merged


def run(table: RangeTable, jobs: int = 1) -> OracleResult:
    """Run the full sweep; jobs > 1 fans out over worker processes."""
    started = time.perf_counter()
    widths = table.widths
    if jobs <= 1:
        merged = _sweep_span(widths, 0, 256)
    else:
        step = max(1, 256 // (jobs * 4))
        spans = [(widths, lo, min(256, lo + step)) for lo in range(0, 256, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            merged = _merge(list(pool.map(_sweep_span, *zip(*spans))))
    merged.corner.sort()
    return OracleResult(
        total_cases=merged.total,
        failures=merged.failures[:FAIL_LIMIT],
        lossy_corner_count=len(merged.corner),
        lossy_corner_cases=merged.corner,
        branch_counts=merged.branches,
        mark_case_counts=merged.marks,
        baseline_in_range_cases=merged.baseline_in_range,
        elapsed_seconds=time.perf_counter() - started,
    )
