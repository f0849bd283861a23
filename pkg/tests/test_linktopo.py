import itertools
import random
from fractions import Fraction

import pytest

from lipgerm import linktopo as lt
from lipgerm.germ import arc, make_polygonal_germ


def square(scale=1, shift=0):
    s = Fraction(scale)
    pts = [(s + shift, s), (-s + shift, s), (-s + shift, -s), (s + shift, -s)]
    return [arc(x, y) for x, y in pts]


def test_single_square_two_faces(square_germ):
    rg = lt.arrangement(square_germ)
    assert len(rg.faces) == 2
    outer = rg.faces[0]
    inner = rg.faces[1]
    assert outer.polygon is None and outer.area_exponent == 2
    assert inner.polygon == 0 and inner.area_exponent == 2
    assert inner.parent == 0


def test_counterexample_arrangement(x1x2):
    X1, X2 = x1x2
    rg1 = lt.arrangement(X1)
    rg2 = lt.arrangement(X2)
    assert len(rg1.faces) == len(rg2.faces) == 2
    # slit inside the triangle face for the first germ, outside for the second
    assert rg1.faces[1].slits == [1] and rg1.faces[0].slits == []
    assert rg2.faces[0].slits == [1] and rg2.faces[1].slits == []
    # triangle face area grows like t^4, the outer face like the disk
    assert rg1.faces[1].area_exponent == 4
    assert rg1.faces[0].area_exponent == 2


def test_counterexample_inequivalent(x1x2):
    X1, X2 = x1x2
    v = lt.decide_equivalence(X1, X2)
    assert v.status == "Inequivalent"
    assert "slit-bearing face area exponent differs" in v.witness
    assert "4" in v.witness and "2" in v.witness


def test_extended_tree_requires_closed(x1x2):
    with pytest.raises(lt.HasOpenComponents):
        lt.extended_tree(x1x2[0])


def test_nested_vs_disjoint_squares():
    nested = make_polygonal_germ([(square(3), True), (square(1), True)])
    disjoint = make_polygonal_germ(
        [(square(1), True), (square(1, shift=5), True)]
    )
    v = lt.decide_equivalence(nested, disjoint)
    assert v.status == "Inequivalent"
    relabeled = make_polygonal_germ([(square(1), True), (square(3), True)])
    assert lt.decide_equivalence(nested, relabeled).status == "Equivalent"
    assert lt.decide_equivalence(disjoint, disjoint).status == "Equivalent"


def test_area_exponent_matches_numeric(square_germ):
    rg = lt.arrangement(square_germ)
    from lipgerm.puiseux import fit_slope

    grid = square_germ.t_grid(8)
    # inner face of the unit square link: area (2t)^2
    areas = [(2 * t) ** 2 for t in grid]
    assert fit_slope(grid, areas) == pytest.approx(float(rg.faces[1].area_exponent), abs=0.05)


def test_not_lne_rejected(pinch_germ, square_germ):
    with pytest.raises(lt.NotLNEInput):
        lt.decide_equivalence(pinch_germ, square_germ)


# ---------------------------------------------------------------------------
# labeled tree isomorphism vs brute force
# ---------------------------------------------------------------------------


def brute_force_isomorphic(T1: lt.ExtendedTree, T2: lt.ExtendedTree) -> bool:
    n = T1.size
    if n != T2.size:
        return False
    E1 = {(u, v) for u in range(n) for v in T1.adjacency[u]}
    E2 = {(u, v) for u in range(n) for v in T2.adjacency[u]}
    for perm in itertools.permutations(range(n)):
        if all(T1.labels[v] == T2.labels[perm[v]] for v in range(n)) and all(
            (perm[u], perm[v]) in E2 for (u, v) in E1
        ):
            return True
    return False


def random_labeled_tree(rng, n, labels=(0, 1, 2)):
    adj = [[] for _ in range(n)]
    for v in range(1, n):
        u = rng.randrange(v)
        adj[u].append(v)
        adj[v].append(u)
    return lt.ExtendedTree(adj, [(rng.choice(labels),) for _ in range(n)])


def permuted_copy(rng, T):
    n = T.size
    perm = list(range(n))
    rng.shuffle(perm)
    adj = [[] for _ in range(n)]
    for u in range(n):
        for v in T.adjacency[u]:
            adj[perm[u]].append(perm[v])
    labels = [None] * n
    for v in range(n):
        labels[perm[v]] = T.labels[v]
    return lt.ExtendedTree(adj, labels)


def test_tree_isomorphism_against_brute_force():
    rng = random.Random(5)
    for trial in range(150):
        n = rng.randint(1, 7)
        T1 = random_labeled_tree(rng, n)
        if trial % 2 == 0:
            T2 = permuted_copy(rng, T1)
        else:
            T2 = random_labeled_tree(rng, n)
        assert lt.tree_isomorphic(T1, T2) == brute_force_isomorphic(T1, T2)


def test_tree_isomorphism_label_sensitivity():
    path = lt.ExtendedTree([[1], [0, 2], [1]], [(0,), (1,), (0,)])
    path2 = lt.ExtendedTree([[1], [0, 2], [1]], [(1,), (0,), (0,)])
    assert not lt.tree_isomorphic(path, path2)
    assert lt.tree_isomorphic(path, permuted_copy(random.Random(0), path))


def test_separating_cones_disjoint():
    disjoint = make_polygonal_germ(
        [(square(1), True), (square(1, shift=5), True)]
    )
    rings, eps = lt.separating_cones(disjoint)
    assert len(rings) == 2
    assert eps > 0
    from shapely.geometry import Polygon

    p0, p1 = Polygon(rings[0]), Polygon(rings[1])
    assert not p0.intersects(p1)


def test_separating_cones_halves_epsilon_when_close():
    near = make_polygonal_germ(
        [(square(1), True), (square(1, shift=Fraction(21, 10)), True)]
    )
    rings, eps = lt.separating_cones(near, eps=2.0)
    assert eps < 2.0
    from shapely.geometry import Polygon

    assert not Polygon(rings[0]).intersects(Polygon(rings[1]))
