import os
from fractions import Fraction

import pytest

from plaidkite.plaid import plaid_polygons
from plaidkite.graph import build_graph
from plaidkite.render import RenderSpec, render_svg, render_png, _fmt, \
    EmptyRender


def test_fmt_rounds_to_nanogrid():
    assert _fmt(Fraction(1, 2)) == "0.5"
    assert _fmt(Fraction(1, 3)) == "0.333333333"
    assert _fmt(Fraction(-1, 3)) == "-0.333333333"
    assert _fmt(7) == "7"
    assert _fmt(Fraction(2, 3)) == "0.666666667"
    assert _fmt(Fraction(1, 10 ** 12)) == "0"


def test_svg_is_deterministic(p12):
    comps = plaid_polygons(p12, (0, 0, 3, 3))
    fam = build_graph(p12, (-2, -2, 3, 3))
    spec = RenderSpec(p12, (0, 0, 3, 3),
                      layers=("plaid", "graph", "grid-points", "labels"))
    a = render_svg(spec, plaid_components=comps, graph_family=fam)
    b = render_svg(spec, plaid_components=comps, graph_family=fam)
    assert a == b
    assert a.startswith('<?xml version="1.0"')
    assert 'version="1.1"' in a
    assert "<polygon" in a or "<polyline" in a


def test_y_axis_is_flipped(p12):
    comps = [[(0, 0), (1, 0), (1, 1)]]
    spec = RenderSpec(p12, (0, 0, 2, 2), layers=("plaid",), pitch=10)
    svg = render_svg(spec, plaid_components=comps)
    # plaid point (0, 0) lands at svg (0, 20): bottom-left becomes
    # bottom of the flipped canvas
    assert 'points="0,20 10,20 10,10"' in svg


def test_png_written(tmp_path, p12):
    comps = plaid_polygons(p12, (0, 0, 3, 3))
    spec = RenderSpec(p12, (0, 0, 3, 3), layers=("plaid",))
    out = tmp_path / "fig.png"
    render_png(spec, str(out), plaid_components=comps)
    assert out.exists() and out.stat().st_size > 0


def test_bad_specs_rejected(p12):
    with pytest.raises(EmptyRender):
        RenderSpec(p12, (0, 0, 0, 3))
    with pytest.raises(EmptyRender):
        RenderSpec(p12, (0, 0, 3, 3), layers=())
    with pytest.raises(EmptyRender):
        RenderSpec(p12, (0, 0, 3, 3), layers=("nonsense",))
