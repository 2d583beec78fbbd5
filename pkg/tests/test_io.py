"""Deterministic CSV formatting."""
import numpy as np

from pilotwave.io import format_value, write_csv, write_summary


def test_format_value_types():
    assert format_value(3) == "3"
    assert format_value(np.int64(-7)) == "-7"
    assert format_value(True) == "1"
    assert format_value(0.5) == "5.0000000000000000e-01"
    assert format_value(np.float64(1.0) / 3.0) == "3.3333333333333331e-01"
    assert format_value("label") == "label"


def test_float_formatting_is_lossless():
    for x in (0.1, 1e-300, -2.5e17, np.pi):
        assert float(format_value(x)) == x


def test_write_csv_round_trip(tmp_path):
    path = tmp_path / "sub" / "data.csv"
    out = write_csv(str(path), ("a", "b"), [(1, 0.5), (2, -1.0)])
    text = open(out).read()
    assert text == ("a,b\n"
                    "1,5.0000000000000000e-01\n"
                    "2,-1.0000000000000000e+00\n")


def test_write_csv_byte_identical(tmp_path):
    rows = [(i, np.sin(i)) for i in range(50)]
    p1 = write_csv(str(tmp_path / "one.csv"), ("i", "x"), rows)
    p2 = write_csv(str(tmp_path / "two.csv"), ("i", "x"), rows)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_write_summary(tmp_path):
    out = write_summary(str(tmp_path / "s.csv"), [("seed", 3), ("v", 0.25)])
    lines = open(out).read().splitlines()
    assert lines[0] == "key,value"
    assert lines[1] == "seed,3"
    assert lines[2] == "v,2.5000000000000000e-01"
