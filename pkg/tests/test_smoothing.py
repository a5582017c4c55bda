import random
from fractions import Fraction

import pytest

from reeb import (ValidationError, build_rgraph, collision_free_epsilon,
                  compose_smoothings, emit_rgraph, fork, is_isomorphic,
                  is_isomorphism, line, loop, morphism_equal, num_components,
                  point, random_rgraph, reduce, smooth, smooth_naive,
                  smooth_sweep, validate, validate_morphism)

EPS = Fraction(1, 4)


def cycle_rank(g):
    return len(g.edge_ids) - len(g.vertex_ids) + num_components(g)


def test_point_smooths_to_segment():
    sm = smooth(point(0), EPS)
    assert emit_rgraph(sm.smoothed) == (
        "criticals -1/4 1/4\n"
        "vertex v(0;v0) -1/4\n"
        "vertex v(1;v0) 1/4\n"
        "edge e(0;v0) v(0;v0) v(1;v0)\n")
    assert is_isomorphic(sm.smoothed, line(-EPS, EPS)) is not None


def test_line_smooths_to_longer_line():
    sm = smooth(line(0, 1), EPS)
    assert sm.smoothed.criticals == (Fraction(-1, 4), Fraction(1, 4),
                                     Fraction(3, 4), Fraction(5, 4))
    assert is_isomorphic(sm.smoothed, line(-EPS, 1 + EPS)) is not None
    red = reduce(sm.smoothed)
    assert red.graph.criticals == (Fraction(-1, 4), Fraction(5, 4))


def test_fork_branch_vertex_rises_by_eps():
    sm = smooth(fork(), EPS)
    branch = [v for v in sm.smoothed.vertex_ids
              if sm.smoothed.up_degree(v) == 2]
    assert len(branch) == 1
    assert sm.smoothed.value(branch[0]) == Fraction(0) + EPS
    assert sm.provenance[branch[0]] == frozenset({"w", "wx", "wy"})
    # the underlying shape is still a fork with stretched limbs
    red = reduce(sm.smoothed)
    assert is_isomorphic(
        red.graph,
        build_rgraph([("u", Fraction(-5, 4)), ("w", EPS),
                      ("x", Fraction(5, 4)), ("y", Fraction(5, 4))],
                     [("uw", "u", "w"), ("wx", "w", "x"),
                      ("wy", "w", "y")])) is not None


@pytest.mark.parametrize("eps,has_cycle", [
    (Fraction(1, 4), True), (Fraction(49, 100), True),
    (Fraction(1, 2), False), (Fraction(3, 4), False),
])
def test_loop_cycle_survives_below_half(eps, has_cycle):
    sm = smooth(loop(0, 1), eps)
    assert cycle_rank(sm.smoothed) == (1 if has_cycle else 0)
    if has_cycle:
        doubled = [j for j, slot in enumerate(sm.smoothed.slots)
                   if len(slot) == 2]
        assert len(doubled) == 1
        j = doubled[0]
        e1, e2 = sm.smoothed.slots[j]
        assert sm.smoothed.span(e1) == (eps, 1 - eps)
        assert sm.smoothed.endpoints(e1)[0] == sm.smoothed.endpoints(e2)[0]
        assert sm.smoothed.endpoints(e1)[1] == sm.smoothed.endpoints(e2)[1]


def test_loop_smoothing_frozen_form():
    assert emit_rgraph(smooth(loop(0, 1), EPS).smoothed) == (
        "criticals -1/4 1/4 3/4 5/4\n"
        "vertex v(0;v0) -1/4\n"
        "vertex v(1;e0,e1,v0) 1/4\n"
        "vertex v(2;e0,e1,v1) 3/4\n"
        "vertex v(3;v1) 5/4\n"
        "edge e(0;e0,e1,v0) v(0;v0) v(1;e0,e1,v0)\n"
        "edge e(1;e0) v(1;e0,e1,v0) v(2;e0,e1,v1)\n"
        "edge e(1;e1) v(1;e0,e1,v0) v(2;e0,e1,v1)\n"
        "edge e(2;e0,e1,v1) v(2;e0,e1,v1) v(3;v1)\n")


def test_zero_radius_is_a_renaming():
    g = fork()
    sm = smooth(g, 0)
    assert sm.smoothed.criticals == g.criticals
    assert is_isomorphic(sm.smoothed, g) is not None
    assert is_isomorphism(sm.zeta)
    assert all(len(p) == 1 for p in sm.provenance.values())
    assert smooth(g, 0, "naive").smoothed == sm.smoothed


def test_negative_radius_rejected():
    with pytest.raises(ValidationError):
        smooth(line(0, 1), Fraction(-1, 2))
    with pytest.raises(ValueError):
        smooth(line(0, 1), EPS, algo="other")


def test_empty_and_far_apart_components():
    from reeb import empty_rgraph
    sm = smooth(empty_rgraph(), EPS)
    assert sm.smoothed.is_empty
    g = build_rgraph([("a", 0), ("b", 10)])
    sm = smooth(g, EPS)
    assert num_components(sm.smoothed) == 2
    assert sm.smoothed.criticals == (Fraction(-1, 4), Fraction(1, 4),
                                     Fraction(39, 4), Fraction(41, 4))


def test_disjoint_points_never_merge():
    # both points lie in the window at 1/2, but nothing connects them:
    # smoothing preserves the component count
    g = build_rgraph([("a", 0), ("b", 1)])
    sm = smooth(g, Fraction(1, 2))
    assert num_components(sm.smoothed) == 2
    assert sm.smoothed.criticals == (Fraction(-1, 2), Fraction(1, 2),
                                     Fraction(3, 2))
    mid = sm.smoothed.levels[1]
    assert [sm.provenance[v] for v in mid] == [frozenset({"a"}),
                                               frozenset({"b"})]


def test_cycle_collapse_keeps_one_component():
    sm = smooth(loop(0, 1), Fraction(1, 2))
    assert num_components(sm.smoothed) == 1
    mid = sm.smoothed.levels[1]
    assert len(mid) == 1
    assert sm.provenance[mid[0]] == frozenset({"e0", "e1", "v0", "v1"})


def test_zeta_is_a_validated_morphism_with_matching_provenance():
    for g in (line(0, 1), loop(0, 1), fork()):
        sm = smooth(g, EPS)
        assert validate_morphism(sm.zeta).ok
        for v in g.vertex_ids:
            kind, cell = sm.zeta.vertex_map[v]
            assert v in sm.provenance[cell]


def test_smoothed_criticals_are_the_shifted_criticals():
    rng = random.Random(5)
    for _ in range(40):
        g = random_rgraph(rng)
        if not g.criticals:
            continue
        eps = collision_free_epsilon(g, rng)
        sm = smooth(g, eps)
        want = sorted({a - eps for a in g.criticals}
                      | {a + eps for a in g.criticals})
        assert list(sm.smoothed.criticals) == want


def test_naive_and_sweep_agree_exactly():
    rng = random.Random(11)
    for trial in range(60):
        g = random_rgraph(rng)
        span = (max(g.criticals) - min(g.criticals)) if g.criticals else None
        radii = [Fraction(0), Fraction(1, 3)]
        if span:
            radii += [collision_free_epsilon(g, rng), span / 2, 2 * span]
        for eps in radii:
            a = smooth_naive(g, eps)
            b = smooth_sweep(g, eps)
            assert a.smoothed == b.smoothed, (trial, eps)
            assert a.provenance == b.provenance, (trial, eps)
            assert morphism_equal(a.zeta, b.zeta), (trial, eps)
            assert validate(a.smoothed).ok
            c = smooth_sweep(g, eps, forest="naive")
            assert c.smoothed == b.smoothed
            assert morphism_equal(c.zeta, b.zeta)


def test_compose_smoothings_is_additive():
    rng = random.Random(23)
    for trial in range(15):
        g = random_rgraph(rng, max_vertices=6, max_edges=6)
        e1 = Fraction(rng.randint(0, 4), 4)
        e2 = Fraction(rng.randint(0, 4), 8)
        cs = compose_smoothings(g, e1, e2)
        assert is_isomorphism(cs.witness), trial
        assert cs.coherent, trial
        assert cs.total.smoothed == smooth(g, e1 + e2).smoothed
