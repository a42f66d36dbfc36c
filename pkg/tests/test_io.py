import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from springlinkage.io import Table, from_csv, from_json, render, to_csv, to_json, to_svg

finite = st.floats(allow_nan=False, allow_infinity=False)


def _table(values):
    return Table("demo", ["x", "y"], [[float(i), v] for i, v in enumerate(values)], {"a": 1.5, "b": None})


@given(st.lists(finite, min_size=1, max_size=20))
def test_json_round_trip_is_exact(values):
    t = _table(values)
    back = from_json(to_json(t))
    assert back.rows == t.rows and back.params == t.params and back.columns == t.columns


@given(st.lists(finite, min_size=1, max_size=20))
def test_csv_round_trip_is_exact(values):
    t = _table(values)
    assert from_csv(to_csv(t)).rows == t.rows


def test_csv_layout():
    text = to_csv(Table("demo", ["x", "y"], [[0.1, None], [1.0, math.inf]], {"z": 2}, ["note"]))
    lines = text.split("\n")
    assert lines[0] == "# springlinkage demo"
    assert lines[1] == '# params: {"z":2}'
    assert lines[2] == "# note"
    assert lines[3] == "x,y"
    assert lines[4] == "0.1,"
    assert "\r" not in text and text.endswith("\n")


def test_output_is_deterministic():
    t = _table([0.25, 0.5])
    assert to_json(t) == to_json(_table([0.25, 0.5]))
    assert to_svg(t, "x", "y") == to_svg(_table([0.25, 0.5]), "x", "y")


def test_svg_carries_params_and_is_svg():
    svg = to_svg(_table([1.0, 2.0, 3.0]), "x", ["y"])
    assert "<svg" in svg and "params:" in svg


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        Table("demo", ["x"], [[1.0, 2.0]])


def test_render_dispatch():
    t = _table([1.0])
    assert render(t, "csv") == to_csv(t)
    with pytest.raises(ValueError):
        render(t, "svg")
    with pytest.raises(ValueError):
        render(t, "xml")
