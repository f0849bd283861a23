import random
from fractions import Fraction

from lipgerm import fuzz
from lipgerm.germ import write_germ
from lipgerm.metric import is_lne, tord
from lipgerm.reduce import classify_connected


def germ_text(g):
    return write_germ(g)


def test_seed_determinism():
    a = fuzz.sample_cases(123, n_closed=4, n_open=3, n_pinch=2)
    b = fuzz.sample_cases(123, n_closed=4, n_open=3, n_pinch=2)
    assert [c.seed_tag for c in a] == [c.seed_tag for c in b]
    assert [germ_text(c.germ) for c in a] == [germ_text(c.germ) for c in b]
    c = fuzz.sample_cases(124, n_closed=4, n_open=3, n_pinch=2)
    assert [germ_text(x.germ) for x in a] != [germ_text(x.germ) for x in c]


def test_closed_cases_are_lne_horns():
    rng = random.Random(9)
    for _ in range(8):
        case = fuzz.random_closed_lne(rng)
        assert is_lne(case.germ).status == "LNE"
        form, _ = classify_connected(case.germ)
        assert form.kind == "Horn"
        assert form.exponent == case.expected_exponent


def test_collinear_variant_has_exact_collinear_triple():
    rng = random.Random(2)
    case = fuzz.random_closed_lne(rng, variant="collinear")
    assert case.kind == "closed-collinear"
    vs = case.germ.components[0].vertices
    pts = [(v.x.leading().coefficient, v.y.leading().coefficient) for v in vs]
    found = any(
        fuzz._cross(pts[i], pts[(i + 1) % len(pts)], pts[(i + 2) % len(pts)]) == 0
        for i in range(len(pts))
    )
    assert found
    form, _ = classify_connected(case.germ)
    assert form.kind == "Horn" and form.exponent == case.expected_exponent


def test_cluster_variant_mixes_edge_exponents():
    rng = random.Random(4)
    case = fuzz.random_closed_lne(rng, variant="cluster")
    assert case.kind == "closed-cluster"
    vs = case.germ.components[0].vertices
    exps = {
        tord(vs[i], vs[(i + 1) % len(vs)]).exponent for i in range(len(vs))
    }
    assert len(exps) >= 2
    assert min(exps) == case.expected_exponent
    form, _ = classify_connected(case.germ)
    assert form.kind == "Horn" and form.exponent == case.expected_exponent


def test_open_cases_are_hoelder_triangles():
    rng = random.Random(17)
    for _ in range(8):
        case = fuzz.random_open_lne(rng)
        assert is_lne(case.germ).status == "LNE"
        form, _ = classify_connected(case.germ)
        assert form.kind == "HolderTriangle"
        assert form.exponent == case.expected_exponent


def test_pinch_cases_are_not_lne():
    rng = random.Random(23)
    for _ in range(6):
        case, delta = fuzz.random_pinch_not_lne(rng)
        assert delta in fuzz.DELTAS
        verdict = is_lne(case.germ)
        assert verdict.status == "NotLNE"
        assert verdict.witness["pair"] == (0, 2)
        gap = verdict.witness["inner_exponent"] - verdict.witness["outer_exponent"]
        assert gap == -delta
