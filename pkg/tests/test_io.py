import json

import numpy as np
import pytest

from meanclass.errors import ParseError
from meanclass.io import dumps, format_csv, parse_csv, plotdata, read_csv, write_csv


def test_csv_roundtrip(tmp_path):
    t = np.linspace(0, 1, 11)
    v = np.exp(1j * t) * 1 / 3
    p = tmp_path / "x.csv"
    write_csv(p, t, v)
    assert p.read_text().splitlines()[0] == "t,re,im"
    tab = read_csv(p)
    assert np.array_equal(tab.values, v)
    assert tab.grid.n == 11


@pytest.mark.parametrize(
    "text, line",
    [
        ("time,re,im\n0,1,0\n", 1),
        ("t,re,im\n0,1,0\n1,2\n", 3),
        ("t,re,im\n0,1,0\n1,x,0\n", 3),
        ("t,re,im\n0,1,0\n1,nan,0\n", 3),
        ("t,re,im\n0,1,0\n1,1,0\n3,1,0\n", 4),
        ("t,re,im\n0,1,0\n-1,1,0\n", 3),
        ("t,re,im\n", 2),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_csv(text)
    assert f"line {line}" in str(exc.value)


def test_dumps_handles_numpy_and_complex():
    out = json.loads(dumps({"a": np.float64(1.5), "b": np.arange(3), "c": 1 + 2j}))
    assert out["a"] == 1.5 and out["b"] == [0, 1, 2]


def test_plotdata():
    assert plotdata([[1, 2], [3, 4]]).splitlines() == ["1 3", "2 4"]


def test_format_csv_exact_floats():
    text = format_csv(np.array([0.1]), np.array([1 / 3 + 0.2j]))
    assert parse_csv(text).values[0] == 1 / 3 + 0.2j
