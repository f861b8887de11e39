import pytest
from hypothesis import given, settings, strategies as st

from corpus import corpus, load
from pathcoalg import (ConsistencyError, MonomialCoalgebra, MonomialError, PathAutomaton, Quiver,
                       Subspace, admissible_core, analyze, enumerate_paths, gabriel_quiver,
                       hereditary, hereditary_closure, is_cosemisimple, is_subcoalgebra, prime,
                       scc, semiprime, serial, shape_class, string, string_check, truncate, wedge_linear,
                       wild_obstructions)

TWO = Quiver(["x"], [("a", "x", "x"), ("b", "x", "x")])
A3 = Quiver(["1", "2", "3"], [("alpha", "1", "2"), ("beta", "2", "3")])
CYC = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])


def pat(states, accepting, transitions, initial=None, q=TWO):
    return MonomialCoalgebra.pattern(q, PathAutomaton(states, transitions, accepting, initial))


R = pat(["sa", "sb"], ["sa", "sb"], [("sa", "a", "sa"), ("sb", "b", "sb")])
ALT = pat(["A", "B"], ["A", "B"], [("A", "b", "B"), ("B", "a", "A")])
# b^m a: a first, then any number of b
BMA = pat(["s", "t"], ["s", "t"], [("s", "a", "t"), ("t", "b", "t")], initial=["s", "t"])
MIXED = MonomialCoalgebra.generated_by(TWO, [TWO.path("a", "a"), TWO.path("b", "a")])


def paths_of(m, n):
    return {str(p) for p in enumerate_paths(m, n)}


def span(m, n):
    return Subspace.span_paths(m.quiver, n, enumerate_paths(m, n))


def reverify(c, v):
    """Independent re-check of a No witness with linear wedges."""
    n = v.truncation
    ct = truncate(c, n)
    a = v.witness["A"]
    b = v.witness.get("B", a)
    for x in (a, b):
        sx = span(x, n)
        assert is_subcoalgebra(sx, c.quiver, n)[0]
        assert sx <= ct.space and sx != ct.space
    assert ct.space <= wedge_linear(span(a, n), span(b, n), ct)


def test_semiprime_two_powers_square_rule():
    v = semiprime(R, 6)
    assert (v.verdict, v.rule, v.truncation) == ("yes", "square-rule", 6)


def test_semiprime_truncated_r_is_finite_rule():
    t = MonomialCoalgebra.finite(TWO, enumerate_paths(R, 4))
    v = semiprime(t, 6)
    assert (v.verdict, v.rule) == ("no", "finite-cosemisimple")
    reverify(t, v)


def test_semiprime_extension_failure():
    v = semiprime(BMA, 6)
    assert (v.verdict, v.rule) == ("no", "extension-failure")
    assert paths_of(v.witness["A"], 3) == {"e[x]", "b", "b*b", "b*b*b"}
    reverify(BMA, v)


def test_prime_examples():
    assert prime(MonomialCoalgebra.full(CYC), 6).verdict == "yes"
    v = prime(R, 6)
    assert v.verdict == "no"
    got = {frozenset(paths_of(v.witness[k], 2)) for k in ("A", "B")}
    assert got == {frozenset({"e[x]", "a", "a*a"}), frozenset({"e[x]", "b", "b*b"})}
    reverify(R, v)
    v = prime(MonomialCoalgebra.full(A3), 4)
    assert v.verdict == "no"
    reverify(MonomialCoalgebra.full(A3), v)


def test_prime_vertex_support_pair_on_a3():
    full = MonomialCoalgebra.full(A3)
    ws = load("a3")
    left, right = ws.get("left"), ws.get("right")
    ct = truncate(full, 4)
    assert wedge_linear(span(right, 4), span(left, 4), ct) == ct.space
    assert wedge_linear(span(left, 4), span(right, 4), ct) != ct.space


def test_hereditary_examples():
    assert hereditary(MonomialCoalgebra.full(A3)).verdict == "yes"
    v = hereditary(R)
    assert v.verdict == "no" and str(v.witness["path"]) in {"a*b", "b*a"}
    assert str(hereditary(ALT).witness["path"]) in {"a*a", "b*b"}
    clo = hereditary_closure(R, 2)
    assert clo.dim == 7
    assert span(R, 2) <= clo.space
    with pytest.raises(MonomialError):
        hereditary(pat(["s"], ["s"], [("s", "a", "s")]))


def test_serial_and_string_examples():
    full = MonomialCoalgebra.full(CYC)
    assert serial(full).verdict == "yes" and string(full).verdict == "yes"
    v = serial(R)
    assert v.verdict == "no" and v.witness["value"] == [2, 2]
    assert string(R).verdict == "yes"
    s = string(MonomialCoalgebra.full(TWO))
    assert s.verdict == "no" and s.witness["condition"] == "c"


def test_obstruction_examples():
    tags = [o.tag for o in wild_obstructions(MIXED)]
    assert tags == ["d"]
    k3 = Quiver(["1", "2"], [(f"a{i}", "1", "2") for i in range(3)])
    assert "forbidden:K3" in [o.tag for o in wild_obstructions(MonomialCoalgebra.full(k3))]
    assert wild_obstructions(ALT) == []
    assert wild_obstructions(R) == []


@pytest.mark.parametrize("edges,tag", [
    # c: 1 -> 2 followed by a, b parallel 2 -> 3
    ([("c", "1", "2"), ("a", "2", "3"), ("b", "2", "3")], "b"),
    # parallel back to the source of c
    ([("c", "1", "2"), ("a", "2", "1"), ("b", "2", "1")], "c"),
    # a loop at 2 and b returning to 1
    ([("c", "1", "2"), ("a", "2", "2"), ("b", "2", "1")], "e"),
    # a loop at 2 and b leaving to 3
    ([("c", "1", "2"), ("a", "2", "2"), ("b", "2", "3")], "f"),
    # two distinct exits, one of them back to 1
    ([("c", "1", "2"), ("a", "2", "1"), ("b", "2", "3")], "g"),
    ([("c", "1", "2"), ("a", "2", "3"), ("b", "2", "4")], "h"),
])
def test_composition_cases(edges, tag):
    verts = sorted({v for _, s, t in edges for v in (s, t)})
    q = Quiver(verts, edges)
    m = MonomialCoalgebra.generated_by(q, [q.path("a", "c"), q.path("b", "c")], vertices=verts)
    obs = [o for o in wild_obstructions(m) if not o.tag.startswith(("forbidden", "three", "hereditary"))]
    assert [(o.tag, o.location["c"], o.location["dual"]) for o in obs] == [(tag, "c", False)]


def test_dual_case_detected():
    q = Quiver(["1", "2", "3"], [("c", "2", "1"), ("a", "3", "2"), ("b", "3", "2")])
    m = MonomialCoalgebra.generated_by(q, [q.path("c", "a"), q.path("c", "b")])
    obs = [o for o in wild_obstructions(m) if o.tag in "bcdefgh"]
    assert [(o.tag, o.location["dual"]) for o in obs] == [("b", True)]


def test_analyze_examples():
    r = analyze(R, 6)
    assert [getattr(r, k).verdict for k in ("semiprime", "prime", "string", "serial", "hereditary")] \
        == ["yes", "no", "yes", "no", "no"]
    two = load("two_cycles").main
    r = analyze(two, 4)
    assert r.semiprime.verdict == "yes" and r.prime.verdict == "no"
    assert len(r.components) == 2
    reverify(two, r.prime)


def test_analyze_lifts_component_witness():
    q = Quiver(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "3", "4"), ("c", "4", "3")])
    m = MonomialCoalgebra.full(q)
    r = analyze(m, 4)
    assert r.semiprime.verdict == "no"
    reverify(m, r.semiprime)


def test_truncations_are_never_semiprime():
    for m in (R, ALT, MonomialCoalgebra.full(CYC)):
        t = MonomialCoalgebra.finite(m.quiver, enumerate_paths(m, 3))
        assert analyze(t, 4).semiprime.verdict == "no"


def test_unknown_on_bicycle_b():
    v = semiprime(ALT, 6)
    assert v.verdict == "unknown" and v.rule == "none"
    assert string(ALT).verdict == "yes"


def test_semiprime_without_strong_connectivity_is_fatal(monkeypatch):
    import pathcoalg.classify as cl
    from pathcoalg.classify import Verdict
    monkeypatch.setattr(cl, "semiprime", lambda c, n: Verdict("yes", "forced", n))
    with pytest.raises(ConsistencyError):
        cl.analyze(MonomialCoalgebra.full(A3), 3)


CORPUS = corpus(size=40)


@pytest.mark.parametrize("name,c", CORPUS, ids=[n for n, _ in CORPUS])
def test_corpus_invariants(name, c):
    r = analyze(c, 4)
    core = admissible_core(c)
    for v in (r.semiprime, r.prime):
        if v.verdict == "no" and v.witness and isinstance(v.witness.get("A"), MonomialCoalgebra):
            reverify(core, v)
    if r.semiprime.verdict == "yes":
        gq = gabriel_quiver(core)
        for row in r.components:
            assert scc(gq.restrict(row["vertices"]).underlying()).all_strongly_connected
        if not r.obstructions:
            assert string_check(core) is True
    if c.kind == "finite":
        top = core.max_length()
        assert (r.semiprime.verdict == "yes") == is_cosemisimple(truncate(core, top))
    if r.hereditary.verdict == "yes" and r.semiprime.verdict == "yes":
        shapes = shape_class(gq.underlying())
        if all(s.family == "Euclidean" and s.kind == "A" for s in shapes):
            assert r.serial.verdict == "yes"


@given(st.randoms(use_true_random=False))
@settings(max_examples=30, deadline=None)
def test_cycles_are_serial(rng):
    n = rng.randint(2, 6)
    verts = [str(i) for i in range(n)]
    arrows = [(f"a{i}", verts[i], verts[(i + 1) % n]) for i in range(n)]
    if rng.random() < 0.5:
        arrows = [(i, t, s) for i, s, t in arrows]
    m = MonomialCoalgebra.full(Quiver(verts, arrows))
    r = analyze(m, 4)
    assert r.hereditary.verdict == r.semiprime.verdict == r.serial.verdict == "yes"


def mixed_then_powers(n):
    """All words of length <= n in a, b together with every pure power."""
    levels = [f"L{i}" for i in range(n + 1)]
    tr = [("p", "a", "pa"), ("p", "b", "pb"), ("pa", "a", "pa"), ("pb", "b", "pb")]
    tr += [(levels[i], x, levels[i + 1]) for i in range(n) for x in "ab"]
    states = ["p", "pa", "pb"] + levels
    return pat(states, states, tr, initial=["p", "L0"])


def test_mixed_then_powers_family():
    assert paths_of(mixed_then_powers(1), 5) == paths_of(R, 5)
    assert semiprime(mixed_then_powers(1), 6).verdict == "yes"
    for n in (2, 3):
        c = mixed_then_powers(n)
        v = semiprime(c, 6)
        assert (v.verdict, v.rule) == ("no", "extension-failure")
        reverify(c, v)
        # the mixed words of top length sit in A^A through their proper cuts
        assert len(paths_of(c, n)) - len(paths_of(v.witness["A"], n)) >= 1
