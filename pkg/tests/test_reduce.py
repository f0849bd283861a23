from fractions import Fraction

import pytest

from lipgerm.germ import arc, make_polygonal_germ
from lipgerm.metric import component_edge_exponents, tord
from lipgerm.reduce import (
    NotLNEInput,
    PreconditionFailed,
    circumradius_exponent,
    classify_connected,
    drop_vertex,
    format_trace,
    germ_invariants,
    remove_collinear,
    slide_vertex,
)


def pentagon():
    pts = [(2, 0), (1, 2), (-1, 1), (-2, -1), (1, -2)]
    return make_polygonal_germ([([arc(x, y) for x, y in pts], True)])


def hexagon_mixed():
    # one vertex split off at a deeper scale: edge exponents 1,2,1,1,1,1
    vs = [
        arc("t", "0"),
        arc("t + t^2", "t^2"),
        arc("t", "t"),
        arc("-t", "t"),
        arc("-t", "-t"),
        arc("t", "-t"),
    ]
    return make_polygonal_germ([(vs, True)])


def test_square_is_cone(square_germ):
    form, trace = classify_connected(square_germ)
    assert form.kind == "Horn"
    assert form.exponent == 1
    assert "cone" in str(form)
    assert trace.moves


def test_chain_23_is_hoelder_triangle(chain_23_germ):
    form, trace = classify_connected(chain_23_germ)
    assert form.kind == "HolderTriangle"
    assert form.exponent == 2
    comp = chain_23_germ.components[0]
    assert form.exponent == tord(comp.vertices[0], comp.vertices[-1]).exponent


def test_pentagon_reduces():
    form, trace = classify_connected(pentagon())
    assert form.kind == "Horn" and form.exponent == 1
    # pipeline ends on a 3-gon before reading off the form
    assert len(trace.final.single_component().vertices) == 3


def test_hexagon_mixed_exponents():
    g = hexagon_mixed()
    exps = component_edge_exponents(g.components[0])
    assert sorted(exps) == [1, 1, 1, 1, 1, 2]
    form, _ = classify_connected(g)
    assert form.kind == "Horn" and form.exponent == 1


def test_scaled_polygon_horn_exponent():
    beta = Fraction(2)
    vs = [arc("t^2", "0"), arc("0", "t^2"), arc("-t^2", "0"), arc("0", "-t^2")]
    g = make_polygonal_germ([(vs, True)])
    form, _ = classify_connected(g)
    assert form.kind == "Horn"
    assert form.exponent == beta
    assert "cone" not in str(form)


def test_determinism(square_germ):
    runs = [classify_connected(square_germ) for _ in range(2)]
    (f1, t1), (f2, t2) = runs
    assert str(f1) == str(f2)
    assert [(m.kind, m.vertex) for m in t1.moves] == [
        (m.kind, m.vertex) for m in t2.moves
    ]
    assert format_trace(t1) == format_trace(t2)


def test_moves_preserve_invariants():
    for g in (pentagon(), hexagon_mixed()):
        inv0 = germ_invariants(g)
        _, trace = classify_connected(g)
        for mv in trace.moves:
            inv = germ_invariants(mv.germ_after)
            assert inv["lne"] == inv0["lne"] == "LNE"
            assert inv["min_edge_exponent"] == inv0["min_edge_exponent"]
            assert inv["closed"] == inv0["closed"]


def test_remove_collinear():
    # middle vertex exactly on the segment between its neighbors
    vs = [arc("0", "0"), arc("t", "t"), arc("2*t", "2*t"), arc("3*t", "t")]
    g = make_polygonal_germ([(vs, False)])
    g2, mv = remove_collinear(g, 1)
    assert mv.kind == "CollinearRemoval"
    assert len(g2.single_component().vertices) == 3
    assert mv.certificate.clear


def test_remove_collinear_requires_pi():
    g = make_polygonal_germ(
        [([arc("0", "0"), arc("t", "t"), arc("2*t", "0")], False)]
    )
    from lipgerm.reduce import AngleNotPi

    with pytest.raises(AngleNotPi):
        remove_collinear(g, 1)


def test_drop_vertex_requires_strict_gap(square_germ):
    with pytest.raises(PreconditionFailed):
        drop_vertex(square_germ, 1)  # all edge tords equal: not licensed


def test_drop_vertex_on_deep_wedge():
    # wedge edges with tords 2 (in) and 1 (out): vertex 1 drops
    vs = [arc("0", "0"), arc("t^2", "t^2"), arc("2*t", "0")]
    g = make_polygonal_germ([(vs, False)])
    g2, mv = drop_vertex(g, 1)
    assert mv.kind == "VertexDrop"
    assert [v.same_as(w) for v, w in zip(g2.single_component().vertices, (vs[0], vs[2]))]


def test_slide_vertex_keeps_count(square_germ):
    g2, mv = slide_vertex(square_germ, 1, toward="prev")
    assert mv.kind == "VertexSlide"
    assert len(g2.single_component().vertices) == 4
    assert 0 < mv.params["sigma"] <= Fraction(1, 4)


def test_not_lne_input_rejected(pinch_germ):
    with pytest.raises(NotLNEInput):
        classify_connected(pinch_germ)


def test_circumradius_exponent_matches_horn():
    vs = [arc("t^2", "0"), arc("0", "t^2"), arc("-t^2", "-t^2")]
    g = make_polygonal_germ([(vs, True)])
    comp = g.components[0]
    assert circumradius_exponent(comp) == 2
    form, trace = classify_connected(g)
    assert form.exponent == circumradius_exponent(trace.final.single_component())


def test_trace_snapshots_chain():
    g = pentagon()
    _, trace = classify_connected(g)
    cur = g
    for mv in trace.moves:
        after = mv.germ_after
        n_cur = len(cur.single_component().vertices)
        n_after = len(after.single_component().vertices)
        assert n_after <= n_cur + 1  # substitutions may add one temporarily
        cur = after
    assert trace.final is trace.moves[-1].germ_after
