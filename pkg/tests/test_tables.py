import json
import math

from vrpl.tables import format_float, read_csv, round_floats, write_csv, write_json


def test_format_float():
    assert format_float(0.1) == "0.1"
    assert format_float(math.pi) == "3.14159265359"
    assert format_float(1.0) == "1"
    assert format_float(1e-15) == "1e-15"
    # Idempotent: re-formatting the parsed value reproduces the string.
    for x in (math.pi, 2.0 / 3.0, 1.23456789e-7, 12345.6789):
        s = format_float(x)
        assert format_float(float(s)) == s


def test_csv_round_trip(tmp_path):
    p = tmp_path / "t.csv"
    rows = [[0.5, "label", True, 3], [math.pi, "x,y", False, -1]]
    write_csv(p, ["a", "b", "c", "d"], rows)
    header, back = read_csv(p)
    assert header == ["a", "b", "c", "d"]
    assert back == [
        ["0.5", "label", "true", "3"],
        ["3.14159265359", "x,y", "false", "-1"],
    ]


def test_round_floats_nested():
    doc = {"a": math.pi, "b": [1.0 / 3.0, {"c": math.inf}], "d": "keep", "e": True}
    out = round_floats(doc)
    assert out["a"] == float("3.14159265359")
    assert out["b"][0] == float("0.333333333333")
    assert out["b"][1]["c"] is None
    assert out["d"] == "keep"
    assert out["e"] is True


def test_write_json_deterministic(tmp_path):
    doc = {"z": 0.1, "a": [1.5, 2.5]}
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    write_json(p1, doc)
    write_json(p2, dict(reversed(list(doc.items()))))
    # Sorted keys make key order irrelevant.
    assert p1.read_bytes() == p2.read_bytes()
    assert json.loads(p1.read_text())["a"] == [1.5, 2.5]
    assert p1.read_text().endswith("\n")
