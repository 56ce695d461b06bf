import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavity_herald.config import RunConfig, load_config
from cavity_herald.errors import ConfigurationError
from cavity_herald.io import format_number, parse_table, render_table, round_significant

cell = st.one_of(st.integers(-10**6, 10**6), st.floats(allow_nan=False, allow_infinity=False),
                 st.booleans(), st.sampled_from(["ok", "infeasible"]))


@given(st.lists(st.tuples(cell, cell, cell), min_size=1, max_size=5))
def test_csv_round_trip_is_byte_identical(rows):
    columns = ["a", "b", "c"]
    text = render_table(columns, rows, {"command": "test", "x": 0.1})
    meta, cols, parsed = parse_table(text)
    assert cols == columns and meta["command"] == "test"
    assert render_table(cols, parsed, meta) == text


def test_number_formatting():
    assert format_number(1 / 3) == "0.333333333333"
    assert format_number(True) == "true"
    assert format_number(math.nan) == "nan"
    assert format_number(-math.inf) == "-inf"
    assert format_number(None) == ""
    assert round_significant(1.23456789012345e-7) == 1.23456789012e-7


def test_json_format():
    doc = json.loads(render_table(["a"], [[1.0]], {"k": 1}, fmt="json"))
    assert doc == {"meta": {"k": 1}, "columns": ["a"], "rows": [{"a": 1.0}]}
    with pytest.raises(ValueError):
        render_table(["a"], [[1]], fmt="xml")


def test_config_round_trip(tmp_path):
    cfg = RunConfig().override({"protocol.cooperativity": 2.5, "imperfections.eta_i": 0.99, "seed": 4})
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert load_config(path) == cfg


@pytest.mark.parametrize("data", [
    {"bogus": 1},
    {"protocol": {"cooperativityy": 2}},
    {"protocol": []},
    {"seed": "seven"},
    {"output": {"format": "xml"}},
    {"protocol": {"optimize": "speed"}},
    {"protocol": {"root": "both"}},
])
def test_config_is_strict(data):
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict(data)


def test_config_read_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigurationError):
        load_config(bad)
    with pytest.raises(ConfigurationError):
        RunConfig().override({"protocol.bogus": 1})
