"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
with its wall time against the stated limit."""

import functools
import random
from collections import Counter
from fractions import Fraction
from time import perf_counter

import reeb
from reeb.dynconn import make_forest
from reeb.unionfind import UnionFind


def criterion(number, limit_s):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = perf_counter()
            try:
                fn()
            except BaseException:
                print(f"[criterion {number}] FAIL")
                raise
            dt = perf_counter() - t0
            verdict = "PASS" if dt < limit_s else "FAIL"
            print(f"[criterion {number}] {verdict} ({dt:.2f}s, limit {limit_s}s)")
            assert dt < limit_s, f"criterion {number} took {dt:.2f}s"
        return run
    return wrap


def union_gap(g, h):
    su = sorted(set(g.criticals) | set(h.criticals))
    if len(su) < 2:
        return Fraction(1)
    return min(b - a for a, b in zip(su, su[1:]))


@criterion(1, 1.0)
def test_criterion_01_figures():
    # an interval widens by eps on each side
    for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(2)):
        sm = reeb.smooth(reeb.line(0, 1), eps)
        assert reeb.is_isomorphic(sm.smoothed, reeb.line(-eps, 1 + eps))

    # the branch point of an upward fork climbs by exactly eps
    for eps in (Fraction(1, 4), Fraction(1, 3), Fraction(1)):
        red = reeb.reduce(reeb.smooth(reeb.fork(), eps).smoothed).graph
        branches = [v for v in red.vertex_ids if red.up_degree(v) == 2]
        assert len(branches) == 1
        assert red.value(branches[0]) == eps

    # the loop keeps its cycle exactly while 2*eps < 1, spanning [eps, 1-eps]
    for eps in (Fraction(1, 4), Fraction(49, 100)):
        red = reeb.reduce(reeb.smooth(reeb.loop(0, 1), eps).smoothed).graph
        rank = len(red.edge_ids) - len(red.vertex_ids) + reeb.num_components(red)
        assert rank == 1
        doubled = [e for j in range(red.n_slots) for e in red.slots[j]
                   if len(red.slots[j]) == 2]
        assert len(doubled) == 2
        for e in doubled:
            assert red.span(e) == (eps, 1 - eps)
    for eps in (Fraction(1, 2), Fraction(3, 4)):
        red = reeb.reduce(reeb.smooth(reeb.loop(0, 1), eps).smoothed).graph
        rank = len(red.edge_ids) - len(red.vertex_ids) + reeb.num_components(red)
        assert rank == 0
        assert reeb.is_isomorphic(red, reeb.line(-eps, 1 + eps))


@criterion(2, 10.0)
def test_criterion_02_critical_translation():
    rng = random.Random(2)
    for _ in range(300):
        g = reeb.random_rgraph(rng)
        eps = reeb.collision_free_epsilon(g, rng)
        sm = reeb.smooth(g, eps)
        want = tuple(sorted({s - eps for s in g.criticals}
                            | {s + eps for s in g.criticals}))
        assert sm.smoothed.criticals == want


@criterion(3, 60.0)
def test_criterion_03_sweep_matches_naive():
    rng = random.Random(3)
    done = 0
    while done < 200:
        g = reeb.random_rgraph(rng)
        if len(g.vertex_ids) + len(g.edge_ids) > 40:
            continue
        span = (g.criticals[-1] - g.criticals[0]) if len(g.criticals) > 1 \
            else Fraction(1)
        eps = rng.choice([Fraction(0), Fraction(1, 4), Fraction(1, 2),
                          reeb.collision_free_epsilon(g, rng), 2 * span])
        fast = reeb.smooth(g, eps, algo="sweep")
        slow = reeb.smooth(g, eps, algo="naive")
        assert fast.smoothed == slow.smoothed
        assert fast.provenance == slow.provenance
        wit = reeb.identity(fast.smoothed)
        assert reeb.is_isomorphism(wit)
        assert reeb.morphism_equal(reeb.compose(slow.zeta, wit), fast.zeta)
        assert reeb.morphism_equal(reeb.compose(fast.zeta, wit), slow.zeta)
        done += 1


@criterion(4, 30.0)
def test_criterion_04_dynamic_forest():
    def kruskal_max(nodes, alive):
        uf = UnionFind()
        for x in nodes:
            uf.add(x)
        total = Fraction(0)
        for (a, b), w in sorted(alive.items(), key=lambda kv: kv[1],
                                reverse=True):
            if uf.find(a) != uf.find(b):
                uf.union(a, b)
                total += w
        return total

    def partition(nodes, find):
        groups = {}
        for x in nodes:
            groups.setdefault(find(x), set()).add(x)
        return frozenset(frozenset(s) for s in groups.values())

    rng = random.Random(44)
    forest = make_forest("lct")
    nodes, alive = [], {}
    clock, serial = Fraction(0), 0
    replacements = 0
    for _ in range(10_000):
        ops = []
        if len(nodes) < 50:
            ops.append("add")
        if len(nodes) >= 2:
            ops.extend(["insert"] * (3 if len(alive) < 70 else 1))
        if alive:
            ops.extend(["delete"] * (1 if len(alive) < 70 else 3))
        op = rng.choice(ops)
        if op == "add":
            name = f"n{len(nodes)}"
            forest.add_node(name)
            nodes.append(name)
        elif op == "insert":
            a, b = rng.sample(nodes, 2)
            key = (a, b) if a < b else (b, a)
            if key in alive:
                continue
            serial += 1
            w = clock + rng.randint(1, 30) + Fraction(serial, 10**6)
            closes_cycle = forest.find(a) == forest.find(b)
            kept = forest.insert(key[0], key[1], w)
            if closes_cycle and kept:
                replacements += 1
            alive[key] = w
        else:
            # deletions in nondecreasing weight order, as smoothing issues them
            key = min(alive, key=alive.get)
            clock = alive[key]
            forest.delete(*key)
            del alive[key]

        uf = UnionFind()
        for x in nodes:
            uf.add(x)
        for a, b in alive:
            uf.union(a, b)
        assert partition(nodes, forest.find) == partition(nodes, uf.find)
        held = forest.forest_edges()
        for pair in held:
            assert tuple(sorted(pair)) in alive
        total = sum((alive[tuple(sorted(p))] for p in held), Fraction(0))
        assert total == kruskal_max(nodes, alive)
    assert replacements > 100


@criterion(5, 30.0)
def test_criterion_05_cosheaf_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        g = reeb.random_rgraph(rng)
        h = reeb.display(reeb.reeb_cosheaf(g))
        wit = reeb.is_isomorphic(g, h)
        assert wit is not None
        assert reeb.validate_morphism(wit).ok and reeb.is_isomorphism(wit)
    for _ in range(100):
        F = reeb.random_cosheaf(rng)
        G = reeb.reeb_cosheaf(reeb.display(F))
        wit = reeb.is_cosheaf_iso(F, G)
        assert wit is not None
        assert reeb.validate_cosheaf_morphism(wit).ok


@criterion(6, 60.0)
def test_criterion_06_smoothings_compose():
    rng = random.Random(6)
    for _ in range(100):
        g = reeb.random_rgraph(rng, max_vertices=6, max_edges=8)
        e1 = Fraction(rng.randint(0, 8), 8)
        e2 = Fraction(rng.randint(0, 8), 8)
        cs = reeb.compose_smoothings(g, e1, e2)
        assert cs.coherent
        assert reeb.is_isomorphism(cs.witness)
        stacked = reeb.compose(cs.first.zeta, cs.second.zeta)
        assert reeb.morphism_equal(reeb.compose(stacked, cs.witness),
                                   cs.total.zeta)


@criterion(7, 120.0)
def test_criterion_07_stability():
    rng = random.Random(7)
    for _ in range(100):
        edges, fv, gv = reeb.random_stability_pair(rng)
        cert = reeb.stability_certificate(edges, fv, gv)
        assert cert.epsilon == max(abs(fv[v] - gv[v]) for v in fv)
        ok, msg = reeb.verify_certificate(cert)
        assert ok, msg

    tol = Fraction(1, 8)
    for _ in range(20):
        edges, fv, gv = reeb.random_stability_pair(rng, max_vertices=4,
                                                   max_edges=4)

        def graph_of(vals):
            oriented = []
            for eid, (a, b) in edges.items():
                lo, hi = (a, b) if vals[a] < vals[b] else (b, a)
                oriented.append((eid, lo, hi))
            return reeb.build_rgraph(vals, oriented)

        sup = max(abs(fv[v] - gv[v]) for v in fv)
        br = reeb.distance_bracket(graph_of(fv), graph_of(gv), tol)
        assert not br.infinite and not br.unknown_gaps
        assert br.upper <= sup + tol


@criterion(8, 60.0)
def test_criterion_08_certificates_contract():
    rng = random.Random(8)
    for k in range(50):
        if k % 2:
            edges, fv, gv = reeb.random_stability_pair(rng, max_vertices=5,
                                                       max_edges=6)
            cert = reeb.stability_certificate(edges, fv, gv)
        else:
            g = reeb.random_rgraph(rng, max_vertices=5, max_edges=6)
            cert = reeb.smoothing_certificate(g, Fraction(rng.randint(1, 8), 8))
        assert reeb.verify_certificate(cert)[0]
        shrunk = reeb.contract_certificate(cert, Fraction(rng.randint(1, 8), 8))
        assert shrunk.epsilon == cert.epsilon
        ok, msg = reeb.verify_certificate(shrunk)
        assert ok, msg


@criterion(9, 300.0)
def test_criterion_09_search_decides_isomorphism():
    rng = random.Random(909)

    def multiplicity_ok(g, cap=2):
        red = reeb.reduce(g).graph
        pairs = Counter()
        for j in range(red.n_slots):
            for e in red.slots[j]:
                pairs[(red.down[j][e], red.up[j][e])] += 1
        return not pairs or max(pairs.values()) <= cap

    def small_graph():
        while True:
            g = reeb.random_rgraph(rng, max_vertices=6, max_edges=6,
                                   extra_criticals=0)
            if g.vertex_ids and reeb.minimum_gap(g) is not None \
                    and multiplicity_ok(g):
                return g

    def relabel(g):
        names = {v: f"Q{i}" for i, v in
                 enumerate(sorted(g.vertex_ids, key=hash))}
        verts = {names[v]: g.value(v) for v in g.vertex_ids}
        edges = []
        for j in range(g.n_slots):
            for e in sorted(g.slots[j], key=hash):
                edges.append((f"R{len(edges)}", names[g.down[j][e]],
                              names[g.up[j][e]]))
        return reeb.build_rgraph(verts, edges)

    def mutate(g):
        verts = {v: g.value(v) for v in g.vertex_ids}
        edges = [[e, g.down[j][e], g.up[j][e]]
                 for j in range(g.n_slots) for e in g.slots[j]]
        kind = rng.randrange(3)
        if kind == 0 and edges:
            eid, lo, hi = rng.choice(edges)
            edges.append(["dup_" + eid, lo, hi])
        elif kind == 1:
            v = rng.choice(sorted(verts))
            verts[v] = verts[v] + Fraction(1, 16)
            edges = [t for t in edges
                     if not (t[1] == v and verts[t[2]] <= verts[v])
                     and not (t[2] == v and verts[t[1]] >= verts[v])]
        else:
            v = "extra"
            verts[v] = Fraction(rng.randint(-8, 8), 4)
            anchor = rng.choice(sorted(set(verts) - {v}))
            if verts[anchor] == verts[v]:
                verts[v] += Fraction(1, 8)
            lo, hi = (anchor, v) if verts[anchor] < verts[v] else (v, anchor)
            edges.append(["tie", lo, hi])
        return reeb.build_rgraph(verts, [tuple(t) for t in edges])

    # isomorphic pairs: a positive search below the forcing radius must
    # come with a witness, and the exact decision procedure must agree
    for _ in range(50):
        g = small_graph()
        h = relabel(g)
        out = reeb.search_certificate(g, h, union_gap(g, h) / 8,
                                      budget=1_000_000)
        assert out.status == "found", out.status
        ok, msg = reeb.verify_certificate(out.certificate)
        assert ok, msg
        wit = reeb.is_isomorphic(g, h)
        assert wit is not None
        assert reeb.is_isomorphism(wit) and reeb.validate_morphism(wit).ok

    # non-isomorphic pairs with the same component count: below the forcing
    # radius the search must exhaust, matching the exact decision
    found = 0
    while found < 50:
        g = small_graph()
        try:
            h = mutate(g)
        except reeb.ValidationError:
            continue
        if not multiplicity_ok(h):
            continue
        if reeb.num_components(g) != reeb.num_components(h):
            continue
        if reeb.is_isomorphic(g, h) is not None:
            continue
        out = reeb.search_certificate(g, h, union_gap(g, h) / 8,
                                      budget=1_000_000)
        assert out.status == "exhausted", out.status
        assert out.certificate is None
        found += 1


@criterion(10, 120.0)
def test_criterion_10_certificates_compose():
    rng = random.Random(10)
    for _ in range(20):
        g = reeb.random_rgraph(rng, max_vertices=5, max_edges=6)
        e1 = Fraction(rng.randint(1, 6), 6)
        e2 = Fraction(rng.randint(1, 6), 6)
        c1 = reeb.smoothing_certificate(g, e1)
        c2 = reeb.smoothing_certificate(c1.beta.source, e2)
        both = reeb.compose_certificates(c1, c2)
        assert both.epsilon == e1 + e2
        ok, msg = reeb.verify_certificate(both)
        assert ok, msg


@criterion(11, 120.0)
def test_criterion_11_near_linear_scaling():
    def path_graph(m):
        verts = {f"v{i}": i for i in range(m)}
        edges = [(f"e{i}", f"v{i}", f"v{i+1}") for i in range(m - 1)]
        return reeb.build_rgraph(verts, edges)

    times = []
    for m in (10_000, 20_000, 40_000):
        g = path_graph(m)
        best = None
        for _ in range(2):
            t0 = perf_counter()
            sm = reeb.smooth(g, Fraction(3, 2), algo="sweep", forest="lct")
            dt = perf_counter() - t0
            best = dt if best is None else min(best, dt)
        assert len(sm.smoothed.vertex_ids) == m + 3
        times.append(best)
    for small, big in zip(times, times[1:]):
        assert big / small <= 2.5, times


@criterion(12, 30.0)
def test_criterion_12_gluing():
    rng = random.Random(12)
    done = 0
    while done < 500:
        F = reeb.random_cosheaf(rng)
        x, y, z = sorted(Fraction(rng.randint(-14, 14), 2) for _ in range(3))
        if not x < y < z:
            continue
        lo = None if rng.random() < 0.15 else x
        hi = None if rng.random() < 0.15 else z + Fraction(rng.randint(1, 4), 2)
        I = reeb.interval(lo, z)
        J = reeb.interval(y, hi)
        if reeb.intersect(I, J).empty:
            continue
        assert reeb.check_gluing(F, I, J) is True
        done += 1
