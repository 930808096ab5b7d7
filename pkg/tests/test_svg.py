import pytest

from gfw_opt.errors import EmptySeries
from gfw_opt.svg import render_svg


def test_single_series():
    out = render_svg({"a": [(0, 1), (1, 2), (2, 2.5)]}, "k", "f", "t")
    assert out.startswith("<svg") and out.endswith("</svg>\n")
    assert out.count("<polyline") == 1
    assert '>a</text>' in out


def test_two_series_deterministic():
    s = {"x": [(0, 0), (1, 1)], "y & z": [(0, 1), (1, float("nan")), (2, 0)]}
    a = render_svg(s)
    assert a == render_svg(s)
    assert a.count("<polyline") == 2
    assert "y &amp; z" in a


def test_constant_series():
    assert "<polyline" in render_svg({"c": [(0, 5.0), (1, 5.0)]})


@pytest.mark.parametrize("series", [{}, {"a": [(0, 1)]}, {"a": [(0, 1), (1, float("inf"))]}])
def test_empty(series):
    with pytest.raises(EmptySeries):
        render_svg(series)
