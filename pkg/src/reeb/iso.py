"""Isomorphism search between graphs over the real line.

Two graphs are isomorphic exactly when their reduced forms admit a
level-by-level vertex bijection (and slot-by-slot edge bijection)
commuting with the attach maps. The search below backtracks over vertex
assignments one level at a time; edges never need backtracking because
once both endpoint levels are matched, parallel edges between a matched
endpoint pair can be paired off arbitrarily.
"""

from __future__ import annotations

from .core import RGraph, reduce
from .errors import BudgetExceeded
from .morphism import (RGraphMorphism, compose, levelwise_morphism,
                       reduce_collapse, reduce_embed)


def levelwise_bijections(ga: RGraph, gb: RGraph, budget: int = 200_000):
    """Search for per-level vertex bijections and per-slot edge bijections
    commuting with the attach maps. Returns (vertex_maps, edge_maps) or
    None; raises BudgetExceeded when the node budget runs out."""
    if ga.criticals != gb.criticals:
        return None
    n = ga.n_levels
    if any(len(ga.levels[i]) != len(gb.levels[i]) for i in range(n)):
        return None
    if any(len(ga.slots[j]) != len(gb.slots[j]) for j in range(ga.n_slots)):
        return None

    def sig(g, v):
        return (g.down_degree(v), g.up_degree(v))

    for i in range(n):
        if sorted(sig(ga, v) for v in ga.levels[i]) != \
           sorted(sig(gb, w) for w in gb.levels[i]):
            return None

    def pair_counts(g, j):
        cnt: dict[tuple[str, str], int] = {}
        for e in g.slots[j]:
            key = (g.down[j][e], g.up[j][e])
            cnt[key] = cnt.get(key, 0) + 1
        return cnt

    pa = [pair_counts(ga, j) for j in range(ga.n_slots)]
    pb = [pair_counts(gb, j) for j in range(gb.n_slots)]

    vmap: dict[str, str] = {}
    used: list[set[str]] = [set() for _ in range(n)]
    nodes = 0

    def lower_ok(i, v, w):
        # every already-matched lower neighbour must contribute the same
        # number of parallel edges on both sides; equal down-degrees then
        # rule out unmatched extras
        if i == 0:
            return True
        j = i - 1
        for e in ga.below_edges[v]:
            u = ga.down[j][e]
            if pa[j].get((u, v)) != pb[j].get((vmap[u], w)):
                return False
        return True

    def assign(i, idx):
        nonlocal nodes
        if i == n:
            return True
        lev = ga.levels[i]
        if idx == len(lev):
            return assign(i + 1, 0)
        v = lev[idx]
        sv = sig(ga, v)
        for w in gb.levels[i]:
            if w in used[i] or sig(gb, w) != sv:
                continue
            if not lower_ok(i, v, w):
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"isomorphism search exceeded {budget} nodes")
            vmap[v] = w
            used[i].add(w)
            if assign(i, idx + 1):
                return True
            del vmap[v]
            used[i].remove(w)
        return False

    if not assign(0, 0):
        return None

    emaps: list[dict[str, str]] = []
    for j in range(ga.n_slots):
        groups_b: dict[tuple[str, str], list[str]] = {}
        for e in gb.slots[j]:
            groups_b.setdefault((gb.down[j][e], gb.up[j][e]), []).append(e)
        groups_a: dict[tuple[str, str], list[str]] = {}
        for e in ga.slots[j]:
            groups_a.setdefault((ga.down[j][e], ga.up[j][e]), []).append(e)
        m: dict[str, str] = {}
        for (d, u), eas in groups_a.items():
            ebs = groups_b.get((vmap[d], vmap[u]), [])
            assert len(eas) == len(ebs)
            for ea, eb in zip(sorted(eas), sorted(ebs)):
                m[ea] = eb
        emaps.append(m)

    vmaps = [{v: vmap[v] for v in ga.levels[i]} for i in range(n)]
    return vmaps, emaps


def is_isomorphic(g: RGraph, h: RGraph, budget: int = 200_000) -> RGraphMorphism | None:
    """An isomorphism g -> h, or None when there is none. Works on the
    reduced forms, so presentations differing only by removable levels
    still compare equal."""
    rg = reduce(g)
    rh = reduce(h)
    found = levelwise_bijections(rg.graph, rh.graph, budget)
    if found is None:
        return None
    vmaps, emaps = found
    core = levelwise_morphism(rg.graph, rh.graph, vmaps, emaps)
    return compose(compose(reduce_collapse(g, rg), core), reduce_embed(h, rh))
