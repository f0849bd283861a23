import pytest

from lipgerm.germ import arc, make_polygonal_germ


@pytest.fixture
def square_germ():
    return make_polygonal_germ(
        [([arc(1, 1), arc(-1, 1), arc(-1, -1), arc(1, -1)], True)]
    )


@pytest.fixture
def chain_23_germ():
    # open chain with edge tangency orders 2 and 3
    return make_polygonal_germ(
        [([arc("0", "0"), arc("t^2", "0"), arc("t^2 + t^3", "t^3")], False)]
    )


@pytest.fixture
def pinch_germ():
    # outer distance between the end arcs is ~t^2, inner distance ~t
    return make_polygonal_germ(
        [([arc("t", "t^2"), arc("0", "0"), arc("t", "-t^2")], False)]
    )


def counterexample_pair():
    """The slit-inside / slit-outside pair with identical edge invariants
    but different slit-bearing region area growth."""
    A = arc("0", "0")
    B = arc("t^2", "t^2")
    C = arc("t^2", "-t^2")
    D1 = arc("t^3", "0")
    D2 = arc("-t^3", "0")
    X1 = make_polygonal_germ([([A, B, C], True), ([A, D1], False)])
    X2 = make_polygonal_germ([([A, B, C], True), ([A, D2], False)])
    return X1, X2


@pytest.fixture
def x1x2():
    return counterexample_pair()
