import json

import pytest

from pvdstego.cli import (
    EXIT_CAPACITY,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    main,
)
from pvdstego.codec import build_range_table
from pvdstego.imagery import GrayImage, save_pgm, synthetic_cover
from pvdstego.metrics import capacity

TABLE = build_range_table()


@pytest.fixture
def cover_path(tmp_path):
    cover = synthetic_cover("noise", width=48, height=48, seed=7)
    path = tmp_path / "cover.pgm"
    path.write_bytes(save_pgm(cover))
    return path


def _write_payload(tmp_path, data: bytes):
    path = tmp_path / "payload.bin"
    path.write_bytes(data)
    return path


def test_embed_extract_round_trip(tmp_path, cover_path, capsys):
    payload = _write_payload(tmp_path, b"meet at the fountain at noon")
    stego = tmp_path / "stego.pgm"
    recovered = tmp_path / "recovered.bin"

    assert main([
        "embed", "--method", "apvd",
        "--cover", str(cover_path), "--payload", str(payload), "--out", str(stego),
    ]) == EXIT_OK
    out = capsys.readouterr()
    assert "embedded" in out.out and "violations 0" in out.out

    sidecar = json.loads((tmp_path / "stego.pgm.json").read_text())
    assert sidecar["method"] == "apvd"
    assert sidecar["violations"] == 0
    assert sidecar["bits_embedded"] == 32 + 8 * 28
    assert sum(sidecar["branch_counts"].values()) == sidecar["blocks_used"]
    assert sidecar["lossy_corner_count"] == 0

    assert main([
        "extract", "--method", "apvd",
        "--cover", str(stego), "--out", str(recovered),
    ]) == EXIT_OK
    assert recovered.read_bytes() == payload.read_bytes()


def test_embed_pvd_warns_and_clamps(tmp_path, capsys):
    # a striped bright cover pushes the baseline out of [0, 255]
    cover = GrayImage(16, 16, bytes([254, 255] * 128))
    cover_file = tmp_path / "stripes.pgm"
    cover_file.write_bytes(save_pgm(cover))
    payload = _write_payload(tmp_path, b"\xff" * 8)
    stego = tmp_path / "stego.pgm"

    assert main([
        "embed", "--method", "pvd",
        "--cover", str(cover_file), "--payload", str(payload), "--out", str(stego),
    ]) == EXIT_OK
    err = capsys.readouterr().err
    assert "clamping" in err

    sidecar = json.loads((tmp_path / "stego.pgm.json").read_text())
    assert sidecar["method"] == "pvd"
    assert sidecar["violations"] >= 1
    assert sidecar["clamped"] is True


def test_embed_pvd_round_trip_without_violations(tmp_path, capsys):
    # mid-gray flat cover: d' <= 7 keeps every stego value near 128
    cover = GrayImage(48, 48, bytes([128] * (48 * 48)))
    cover_file = tmp_path / "smooth.pgm"
    cover_file.write_bytes(save_pgm(cover))
    payload = _write_payload(tmp_path, b"plain baseline works on smooth covers")
    stego = tmp_path / "stego.pgm"
    recovered = tmp_path / "recovered.bin"

    assert main([
        "embed", "--method", "pvd",
        "--cover", str(cover_file), "--payload", str(payload), "--out", str(stego),
    ]) == EXIT_OK
    assert json.loads((tmp_path / "stego.pgm.json").read_text())["violations"] == 0
    assert main([
        "extract", "--method", "pvd",
        "--cover", str(stego), "--out", str(recovered),
    ]) == EXIT_OK
    assert recovered.read_bytes() == payload.read_bytes()
    capsys.readouterr()


def test_embed_capacity_exceeded(tmp_path, capsys):
    cover = GrayImage(4, 4, bytes([128] * 16))
    cover_file = tmp_path / "tiny.pgm"
    cover_file.write_bytes(save_pgm(cover))
    payload = _write_payload(tmp_path, b"x" * 100)

    code = main([
        "embed", "--cover", str(cover_file),
        "--payload", str(payload), "--out", str(tmp_path / "s.pgm"),
    ])
    assert code == EXIT_CAPACITY
    assert "capacity exceeded" in capsys.readouterr().err


def test_extract_garbage_is_a_clean_error(tmp_path, capsys):
    blank = GrayImage(8, 8, bytes(64))
    stego_file = tmp_path / "blank.pgm"
    stego_file.write_bytes(save_pgm(blank))
    code = main([
        "extract", "--cover", str(stego_file), "--out", str(tmp_path / "r.bin"),
    ])
    assert code == EXIT_IO
    assert "error" in capsys.readouterr().err


def test_missing_cover_file(tmp_path, capsys):
    code = main([
        "extract", "--cover", str(tmp_path / "nope.pgm"),
        "--out", str(tmp_path / "r.bin"),
    ])
    assert code == EXIT_IO
    assert "i/o error" in capsys.readouterr().err


def test_malformed_pgm(tmp_path, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P6\n2 2\n255\n" + bytes(12))
    code = main(["capacity", "--cover", str(bad)])
    assert code == EXIT_IO
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["transmogrify"],
        ["embed", "--payload", "p", "--out", "s"],  # missing --cover
        ["embed", "--method", "rot13", "--cover", "c", "--payload", "p", "--out", "s"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    capsys.readouterr()


@pytest.mark.parametrize("widths", ["8,8", "7,9,16,32,64,128", "8,x,16"])
def test_bad_widths(tmp_path, cover_path, widths, capsys):
    code = main(["capacity", "--cover", str(cover_path), "--widths", widths])
    assert code == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_capacity_json(tmp_path, cover_path, capsys):
    assert main(["capacity", "--cover", str(cover_path), "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    cover = synthetic_cover("noise", width=48, height=48, seed=7)
    raw, net = capacity(cover, TABLE)
    assert payload == {"cover": str(cover_path), "raw_bits": raw, "net_bytes": net}


def test_custom_widths_round_trip(tmp_path, cover_path):
    payload = _write_payload(tmp_path, b"alternate table")
    stego = tmp_path / "stego.pgm"
    recovered = tmp_path / "recovered.bin"
    widths = "4,4,8,16,32,64,128"
    assert main([
        "embed", "--cover", str(cover_path), "--payload", str(payload),
        "--out", str(stego), "--widths", widths,
    ]) == EXIT_OK
    assert main([
        "extract", "--cover", str(stego), "--out", str(recovered),
        "--widths", widths,
    ]) == EXIT_OK
    assert recovered.read_bytes() == payload.read_bytes()


def test_compare_bundled_synthetics_csv(capsys):
    assert main(["compare", "--size", "32", "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "cover,method,capacity_bytes,psnr_db,violations"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 6  # three bundled covers x two methods
    by_cover = {}
    for cover, method, cap, _, violations in rows:
        by_cover.setdefault(cover, []).append((method, cap, violations))
    for cover, entries in by_cover.items():
        (m1, cap1, _), (m2, cap2, v2) = entries
        assert {m1, m2} == {"pvd", "apvd"}
        assert cap1 == cap2  # same hiding capacity for both methods
        assert v2 == "0"  # adaptive row is violation-free


def test_compare_json_and_file_cover(tmp_path, capsys):
    cover = synthetic_cover("checkerboard", width=32, height=32, seed=2)
    cover_file = tmp_path / "board.pgm"
    cover_file.write_bytes(save_pgm(cover))
    payload = _write_payload(tmp_path, b"hi")
    assert main([
        "compare", "--cover", str(cover_file),
        "--payload", str(payload), "--format", "json",
    ]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert [r["method"] for r in rows] == ["pvd", "apvd"]
    assert all(r["cover"] == "board" for r in rows)


def test_compare_directory_of_covers(tmp_path, capsys):
    for kind in ("gradient", "noise"):
        img = synthetic_cover(kind, width=16, height=16, seed=4)
        (tmp_path / f"{kind}.pgm").write_bytes(save_pgm(img))
    assert main(["compare", "--cover", str(tmp_path), "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 + 4  # header + two covers x two methods
    assert {line.split(",")[0] for line in lines[1:]} == {"gradient", "noise"}


def test_selftest_small_table(capsys):
    widths = ",".join(["8"] * 32)  # every block hides 3 bits: cheap sweep
    assert main(["selftest", "--widths", widths]) == EXIT_OK
    out = capsys.readouterr().out
    assert "cases checked: 524288" in out
    assert "selftest passed" in out


def test_selftest_parallel_matches_serial(capsys):
    widths = ",".join(["8"] * 32)
    assert main(["selftest", "--widths", widths]) == EXIT_OK
    serial = capsys.readouterr().out
    assert main(["selftest", "--widths", widths, "--jobs", "2"]) == EXIT_OK
    parallel = capsys.readouterr().out

    def counts(text):
        return sorted(
            line.strip() for line in text.splitlines()
            if ":" in line and "elapsed" not in line
        )

    assert counts(serial) == counts(parallel)


def test_selftest_single_bit_table(capsys):
    widths = ",".join(["2"] * 128)  # t = 1 everywhere: exercises the MSB-only edge
    assert main(["selftest", "--widths", widths]) == EXIT_OK
    out = capsys.readouterr().out
    assert "cases checked: 131072" in out
    assert "selftest passed" in out
