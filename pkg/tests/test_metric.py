import math
from fractions import Fraction

import pytest

from lipgerm.germ import arc, make_polygonal_germ
from lipgerm.metric import (
    component_edge_exponents,
    edge_exponents,
    inner_exponent,
    is_lne,
    limit_angle,
    lne_constant,
    tord,
    tord_inner,
)
from lipgerm.puiseux import fit_slope


def test_tord_simple():
    tv = tord(arc("t", "0"), arc("t", "t^2"))
    assert tv.exponent == 2
    assert tv.coefficient_sq == 1


def test_tord_needs_sqrt():
    tv = tord(arc("t", "0"), arc("t + t^3", "t^3"))
    assert tv.exponent == 3
    assert tv.coefficient_sq == 2
    assert tv.coefficient() == pytest.approx(math.sqrt(2))


def test_tord_same_arc_infinite():
    a = arc("t", "t^2")
    assert tord(a, a).is_infinite


def test_tord_matches_loglog_slope():
    g1 = arc("t + t^2", "t")
    g2 = arc("t", "t + t^3")
    tv = tord(g1, g2)
    ts = [2.0 ** -k for k in range(6, 16)]
    vals = []
    for t in ts:
        dx = g1.eval(t)[0] - g2.eval(t)[0]
        dy = g1.eval(t)[1] - g2.eval(t)[1]
        vals.append(math.hypot(dx, dy))
    assert fit_slope(ts, vals) == pytest.approx(float(tv.exponent), abs=0.05)


def test_edge_exponents_square(square_germ):
    assert edge_exponents(square_germ) == [[1, 1, 1, 1]]


def test_inner_exponent_open_chain(chain_23_germ):
    comp = chain_23_germ.components[0]
    exps = component_edge_exponents(comp)
    assert exps == [2, 3]
    # between the chain endpoints the inner path runs through both edges
    assert inner_exponent(comp, 0, 2, exps) == 2


def test_inner_exponent_closed_takes_better_path():
    # triangle with edge exponents 1, 2, 1: between vertices 0 and 2 the
    # direct edge (exp 1) beats the path through vertex 1
    g = make_polygonal_germ(
        [([arc("0", "0"), arc("t", "0"), arc("t", "t^2")], True)]
    )
    comp = g.components[0]
    exps = component_edge_exponents(comp)
    assert inner_exponent(comp, 0, 2, exps) == max(
        min(exps[0], exps[1]), exps[2]
    )


def test_tord_inner_equals_tord_on_lne(square_germ):
    for i in range(4):
        for j in range(i + 1, 4):
            assert tord(
                square_germ.components[0].vertices[i],
                square_germ.components[0].vertices[j],
            ).exponent == tord_inner(square_germ, i, j).exponent


def test_limit_angle_cases():
    o = arc("0", "0")
    assert limit_angle(arc("t", "0"), o, arc("0", "t")) == pytest.approx(math.pi / 2)
    assert limit_angle(arc("t", "0"), o, arc("-t", "0")) == math.pi
    # same limit direction, distinct arcs
    assert limit_angle(arc("t", "0"), o, arc("t + t^2", "0")) == 0.0


def test_is_lne_square(square_germ):
    v = is_lne(square_germ)
    assert v.status == "LNE"
    assert bool(v)


def test_is_lne_open_chain(chain_23_germ):
    assert is_lne(chain_23_germ).status == "LNE"


def test_lne_constant_flat_on_square(square_germ):
    cs = [lne_constant(square_germ, t) for t in square_germ.t_grid(8)]
    assert max(cs) <= 2 * sorted(cs)[len(cs) // 2]


def test_is_lne_pinch(pinch_germ):
    v = is_lne(pinch_germ)
    assert v.status == "NotLNE"
    w = v.witness
    assert w["kind"] == "vertex-pair"
    assert w["pair"] == (0, 2)
    assert w["outer_exponent"] > w["inner_exponent"]
    # the sampled inner/outer ratio doubles with every t-halving
    ratios = [r for _, r in v.witness_ratios]
    for r0, r1 in zip(ratios, ratios[1:]):
        assert r1 / r0 > 1.8


def test_not_lne_witness_exponents(pinch_germ):
    w = is_lne(pinch_germ).witness
    assert w["outer_exponent"] == 2
    assert w["inner_exponent"] == 1
