import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pathcoalg import (Quiver, QuiverError, compose, count_paths, factorizations,
                       find_all_forbidden, find_forbidden, paths_up_to, scc, serial_shape,
                       shape_class, to_dot, validate, weak_components)
from pathcoalg.quiver import FORBIDDEN_PATTERNS


@pytest.fixture
def a3():
    return Quiver(["1", "2", "3"], [("alpha", "1", "2"), ("beta", "2", "3")])


@st.composite
def quivers(draw, max_vertices=4, max_arrows=6):
    n = draw(st.integers(1, max_vertices))
    verts = [str(i) for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.sampled_from(verts), st.sampled_from(verts)),
                          max_size=max_arrows))
    return Quiver(verts, [(f"x{i}", s, t) for i, (s, t) in enumerate(pairs)])


def test_written_order(a3):
    p = a3.path("beta", "alpha")
    assert (p.source, p.target) == ("1", "3")
    assert p.walk == ("alpha", "beta")
    assert a3.walk(["alpha", "beta"]) == p
    assert str(p) == "beta*alpha"
    assert str(a3.trivial("2")) == "e[2]"


def test_bad_composition(a3):
    with pytest.raises(QuiverError):
        a3.path("alpha", "beta")
    assert not a3.is_path(["alpha", "beta"])


def test_validate_collects_every_problem():
    q = Quiver(["1", "1"], [("a", "1", "9"), ("a", "1", "1")])
    with pytest.raises(QuiverError) as err:
        validate(q)
    assert len(err.value.problems) == 3


def test_factorizations_of_a3_path(a3):
    p = a3.path("beta", "alpha")
    cuts = [(str(e), str(t)) for e, t in factorizations(a3, p)]
    assert cuts == [("e[3]", "beta*alpha"), ("beta", "alpha"), ("beta*alpha", "e[1]")]


def test_paths_up_to_a3(a3):
    assert [str(p) for p in paths_up_to(a3, 5)] == [
        "e[1]", "e[2]", "e[3]", "alpha", "beta", "beta*alpha"]


@given(quivers(), st.integers(0, 4))
@settings(max_examples=60, deadline=None)
def test_path_count_matches_enumeration(q, n):
    paths = paths_up_to(q, n)
    counts = count_paths(q, n)
    assert [sum(1 for p in paths if len(p) == k) for k in range(n + 1)] == counts
    assert len(set(paths)) == len(paths)


@given(quivers(), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_factorizations_recompose(q, n):
    for p in paths_up_to(q, n):
        cuts = list(factorizations(q, p))
        assert len(cuts) == len(p) + 1
        for eta, tau in cuts:
            assert compose(q, eta, tau) == p


def _reach(q):
    succ = {v: {a.tgt for a in q.out_arrows(v)} for v in q.vertices}
    out = {}
    for v in q.vertices:
        seen, todo = {v}, [v]
        while todo:
            for w in succ[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        out[v] = seen
    return out


@given(quivers(max_vertices=6, max_arrows=9))
@settings(max_examples=80, deadline=None)
def test_scc_against_reachability(q):
    reach = _reach(q)
    res = scc(q)
    for comp in res.components:
        for u, v in itertools.product(comp, repeat=2):
            assert v in reach[u]
    for u, v in itertools.product(q.vertices, repeat=2):
        same = res.component_of(u) == res.component_of(v)
        assert same == (v in reach[u] and u in reach[v])
    assert sorted(v for c in res.weak_components for v in c) == sorted(q.vertices)


def test_scc_examples(a3):
    assert scc(a3).strongly_connected == (False,)
    cyc = Quiver("123", [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])
    assert scc(cyc).strongly_connected == (True,)
    two = Quiver("12", [])
    assert [tuple(c) for c in weak_components(two)] == [("1",), ("2",)]


def test_shape_examples(a3):
    assert str(shape_class(a3)[0]) == "A3"
    cyc = Quiver("123", [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])
    assert str(shape_class(cyc)[0]) == "A~2"
    kron = Quiver("12", [("a", "1", "2"), ("b", "1", "2")])
    assert str(shape_class(kron)[0]) == "A~1"
    loop = Quiver("1", [("a", "1", "1")])
    assert shape_class(loop)[0].family == "Other"


def test_shape_ignores_orientation():
    star = [("c", "1"), ("c", "2"), ("c", "3"), ("c", "4")]
    for flips in itertools.product([False, True], repeat=4):
        arrows = [(f"a{i}", *((v, u) if f else (u, v))) for i, ((u, v), f) in enumerate(zip(star, flips))]
        assert str(shape_class(Quiver(["c", "1", "2", "3", "4"], arrows))[0]) == "D~4"


@pytest.mark.parametrize("tag", sorted(FORBIDDEN_PATTERNS))
def test_each_pattern_finds_itself(tag):
    pat = FORBIDDEN_PATTERNS[tag]
    hits = find_all_forbidden(pat)
    assert any(h.pattern == tag and not h.opposite for h in hits)
    assert all(h.verify(pat) for h in hits)


def test_opposite_pattern_detected():
    q = Quiver("uvw", [("a", "v", "u"), ("b", "v", "u"), ("c", "w", "u")])
    hit = find_forbidden(q)
    assert hit.pattern == "B2~" and hit.opposite and hit.verify(q)


def test_three_loops_embed_into_four():
    q = Quiver("x", [(f"l{i}", "x", "x") for i in range(4)])
    tags = {h.pattern for h in find_all_forbidden(q)}
    assert "L3" in tags


def test_tame_quiver_has_no_pattern(a3):
    assert find_forbidden(a3) is None


def test_serial_shape(a3):
    assert serial_shape(a3)
    fork = Quiver("123", [("a", "1", "2"), ("b", "1", "3")])
    assert not serial_shape(fork)
    with pytest.raises(QuiverError):
        serial_shape(a3, {"alpha": 2})


def test_dot(a3):
    text = to_dot(a3)
    assert text.startswith("digraph Q {") and '"1" -> "2" [label="alpha"];' in text
