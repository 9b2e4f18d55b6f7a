"""Pinned-precision JSON emitter."""

import json
import math

import pytest

from chsh_selftest import jsonio


def test_round_trips_doubles_at_17_digits():
    vals = [0.1, 1 / 3, 2 ** 0.5, 2.828427124746190, 1e-300, -0.0]
    text = jsonio.dumps({"v": vals}, float_digits=17)
    back = json.loads(text)
    assert back["v"] == vals


def test_12_digit_mode_truncates():
    text = jsonio.dumps({"x": math.sqrt(2)}, float_digits=12)
    assert "1.41421356237" in text
    assert "1.4142135623730951" not in text


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        jsonio.dumps({"x": math.inf})
    with pytest.raises(ValueError):
        jsonio.dumps({"x": math.nan})


def test_flat_numeric_lists_stay_on_one_line():
    text = jsonio.dumps({"row": [1.0, 2.0, 3.0]})
    assert "[1, 2, 3]" in text


def test_nested_structure():
    doc = {"a": {"b": [1, 2]}, "c": "s", "d": True, "e": None}
    assert json.loads(jsonio.dumps(doc)) == doc
