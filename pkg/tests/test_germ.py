import math
from fractions import Fraction

import pytest

from lipgerm.germ import (
    ConeViolation,
    DuplicateVertex,
    GermFormatError,
    InvalidT,
    TooFewVertices,
    arc,
    certified_t_max,
    link_is_simple,
    make_polygonal_germ,
    parse_germ,
    plane_link,
    synchronized_view,
    tangent_direction,
    write_germ,
)


def test_arc_constructor_forms():
    a = arc(2, -1)
    assert a.eval(0.5) == (1.0, -0.5)
    b = arc("t + t^2", "0")
    assert b.eval(0.5) == (0.75, 0.0)
    assert arc(Fraction(1, 2), 0).tangent_coefficients() == (Fraction(1, 2), 0)


def test_cone_violation():
    with pytest.raises(ConeViolation):
        make_polygonal_germ([([arc("t^{1/2}", "0"), arc("t", "0")], False)])


def test_too_few_vertices():
    with pytest.raises(TooFewVertices):
        make_polygonal_germ([([arc(1, 0), arc(0, 1)], True)])
    with pytest.raises(TooFewVertices):
        make_polygonal_germ([([arc(1, 0)], False)])


def test_duplicate_consecutive_vertices():
    with pytest.raises(DuplicateVertex):
        make_polygonal_germ([([arc(1, 0), arc(1, 0), arc(0, 1)], True)])


def test_cone_opening_bounds_link(square_germ):
    a = float(square_germ.cone_opening)
    for t in square_germ.t_grid(6):
        link = plane_link(square_germ, t)
        for pts, _ in link.components:
            for x, y in pts:
                assert math.hypot(x, y) <= a * t + 1e-12


def test_plane_link_square_simple(square_germ):
    t = square_germ.t_grid(0)[0]
    link = plane_link(square_germ, t)
    assert link_is_simple(link)
    (pts, closed), = link.components
    assert closed and len(pts) == 4


def test_plane_link_rejects_bowtie():
    g = make_polygonal_germ(
        [([arc(1, 1), arc(-1, -1), arc(-1, 1), arc(1, -1)], True)]
    )
    with pytest.raises(InvalidT):
        plane_link(g, 0.125)


def test_t_grid_halves(square_germ):
    grid = square_germ.t_grid(5)
    assert len(grid) == 6
    for a, b in zip(grid, grid[1:]):
        assert b == pytest.approx(a / 2)
    assert grid[0] == certified_t_max(square_germ)


def test_germ_file_roundtrip(square_germ, chain_23_germ):
    for g in (square_germ, chain_23_germ):
        g2 = parse_germ(write_germ(g))
        assert len(g2.components) == len(g.components)
        for c1, c2 in zip(g.components, g2.components):
            assert c1.closed == c2.closed
            assert all(v1.same_as(v2) for v1, v2 in zip(c1.vertices, c2.vertices))


def test_germ_file_errors():
    with pytest.raises(GermFormatError):
        parse_germ("not a germ file\n")
    with pytest.raises(GermFormatError):
        parse_germ("lipgerm v1\nx = t; y = 0\n")  # vertex before any component


def test_germ_file_comments_allowed():
    text = (
        "lipgerm v1\n"
        "# a square\n"
        "component closed\n"
        "x = 1*t; y = 1*t\n"
        "x = -1*t; y = 1*t\n"
        "x = -1*t; y = -1*t\n"
        "x = 1*t; y = -1*t\n"
    )
    g = parse_germ(text)
    assert g.components[0].closed
    assert len(g.components[0].vertices) == 4


def test_tangent_direction_normalized():
    d = tangent_direction(arc(3, 4))
    assert math.hypot(*d) == pytest.approx(1.0)
    assert d[0] / d[2] == pytest.approx(3.0)
    assert d[1] / d[2] == pytest.approx(4.0)


def test_synchronized_view_values():
    chain = [arc("0", "0"), arc("t", "t"), arc("2*t", "0")]
    fam = synchronized_view(chain, 0.0)
    t = 1 / 8
    x0, x1 = fam.x_interval(t)
    assert (x0, x1) == (pytest.approx(0.0), pytest.approx(2 * t))
    # vertex values and the midpoint of the first edge
    assert fam.value(t, t) == pytest.approx(t)
    assert fam.value(0.5 * t, t) == pytest.approx(0.5 * t)
    assert not fam.m_unbounded
    assert fam.M >= 1.0


def test_synchronized_view_unbounded_slope():
    # edge rising like t over a run of t^2: slope t^-1 -> infinity
    chain = [arc("0", "0"), arc("t^2", "t")]
    fam = synchronized_view(chain, 0.0)
    assert fam.m_unbounded


def test_synchronized_view_rejects_non_monotone():
    from lipgerm.germ import NotSynchronizable

    with pytest.raises(NotSynchronizable):
        synchronized_view([arc("0", "0"), arc("0", "t"), arc("t", "t")], 0.0)
