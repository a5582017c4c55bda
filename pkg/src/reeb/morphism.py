"""Value-preserving maps between graphs over the real line.

A morphism is stored compactly: every source vertex goes either to a
target vertex at the same value or into a target edge whose span
strictly contains that value, and every source edge goes to the monotone
path of target edges its image runs through. Over a common critical set
the same data flattens to one vertex map per level and one edge map per
slot (the "normal form"), which is what composition, equality testing
and isomorphism checking work with.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .core import (RGraph, RefineResult, ReduceResult, ValidationReport,
                   refine)
from .errors import InternalError, ValidationError
from .rationals import as_rational, format_rational


@dataclass(frozen=True)
class RGraphMorphism:
    source: RGraph
    target: RGraph
    vertex_map: dict[str, tuple[str, str]]   # vid -> ("vertex", wid) | ("edge", eid)
    edge_map: dict[str, tuple[str, ...]]     # eid -> bottom-to-top target edge path


def identity(g: RGraph) -> RGraphMorphism:
    return RGraphMorphism(g, g,
                          {v: ("vertex", v) for v in g.vertex_ids},
                          {e: (e,) for e in g.edge_ids})


def validate_morphism(phi: RGraphMorphism) -> ValidationReport:
    bad: list[str] = []
    src, tgt = phi.source, phi.target
    src_vs, tgt_vs = set(src.vertex_ids), set(tgt.vertex_ids)
    src_es, tgt_es = set(src.edge_ids), set(tgt.edge_ids)

    if set(phi.vertex_map) != src_vs:
        missing = sorted(src_vs - set(phi.vertex_map))
        extra = sorted(set(phi.vertex_map) - src_vs)
        if missing:
            bad.append(f"vertex map missing {missing}")
        if extra:
            bad.append(f"vertex map defined on unknown {extra}")
    if set(phi.edge_map) != src_es:
        missing = sorted(src_es - set(phi.edge_map))
        extra = sorted(set(phi.edge_map) - src_es)
        if missing:
            bad.append(f"edge map missing {missing}")
        if extra:
            bad.append(f"edge map defined on unknown {extra}")
    if bad:
        return ValidationReport(False, tuple(bad))

    for v in src.vertex_ids:
        img = phi.vertex_map[v]
        if not (isinstance(img, tuple) and len(img) == 2 and img[0] in ("vertex", "edge")):
            bad.append(f"vertex {v!r}: malformed image {img!r}")
            continue
        kind, tid = img
        val = src.value(v)
        if kind == "vertex":
            if tid not in tgt_vs:
                bad.append(f"vertex {v!r}: unknown target vertex {tid!r}")
            elif tgt.value(tid) != val:
                bad.append(f"vertex {v!r}: value {format_rational(val)} mapped to "
                           f"vertex at {format_rational(tgt.value(tid))}")
        else:
            if tid not in tgt_es:
                bad.append(f"vertex {v!r}: unknown target edge {tid!r}")
            else:
                lo, hi = tgt.span(tid)
                if not (lo < val < hi):
                    bad.append(f"vertex {v!r}: value {format_rational(val)} not strictly "
                               f"inside target edge {tid!r}")
    if bad:
        return ValidationReport(False, tuple(bad))

    for e in src.edge_ids:
        path = phi.edge_map[e]
        if not path:
            bad.append(f"edge {e!r}: empty path")
            continue
        if any(p not in tgt_es for p in path):
            bad.append(f"edge {e!r}: path uses unknown target edges")
            continue
        chained = all(tgt.endpoints(a)[1] == tgt.endpoints(b)[0]
                      for a, b in zip(path, path[1:]))
        if not chained:
            bad.append(f"edge {e!r}: path does not chain bottom-to-top")
            continue
        lo_v, hi_v = src.endpoints(e)
        kind, tid = phi.vertex_map[lo_v]
        if kind == "vertex":
            if tgt.endpoints(path[0])[0] != tid:
                bad.append(f"edge {e!r}: path does not start at the image of {lo_v!r}")
        else:
            if path[0] != tid:
                bad.append(f"edge {e!r}: path does not start inside the image of {lo_v!r}")
        kind, tid = phi.vertex_map[hi_v]
        if kind == "vertex":
            if tgt.endpoints(path[-1])[1] != tid:
                bad.append(f"edge {e!r}: path does not end at the image of {hi_v!r}")
        else:
            if path[-1] != tid:
                bad.append(f"edge {e!r}: path does not end inside the image of {hi_v!r}")
    return ValidationReport(not bad, tuple(bad))


# ---------------------------------------------------------------------------
# Normal form over a common critical set.

@dataclass(frozen=True)
class NormalForm:
    source: RGraph
    target: RGraph
    vertex_maps: tuple[dict[str, str], ...]
    edge_maps: tuple[dict[str, str], ...]
    source_refine: RefineResult
    target_refine: RefineResult


def normal_form(phi: RGraphMorphism, extra=()) -> NormalForm:
    """Refine source and target at the union of their criticals (plus any
    extras) and express the morphism as one vertex map per level and one
    edge map per slot."""
    su = (set(phi.source.criticals) | set(phi.target.criticals)
          | {as_rational(x) for x in extra})
    rs = refine(phi.source, su)
    rt = refine(phi.target, su)
    S, T = rs.graph, rt.graph

    # On each original target edge's refined chain: the vertex sitting at a
    # given value, and the segment starting at a given value.
    on_chain: dict[tuple[str, Fraction], str] = {}
    seg_at: dict[tuple[str, Fraction], str] = {}
    for orig_e, segs in rt.edge_map.items():
        for seg in segs:
            j = T.edge_slot[seg]
            seg_at[(orig_e, T.criticals[j])] = seg
            on_chain[(orig_e, T.criticals[j])] = T.down[j][seg]
            on_chain[(orig_e, T.criticals[j + 1])] = T.up[j][seg]

    vmaps: list[dict[str, str]] = [dict() for _ in S.levels]
    for v in phi.source.vertex_ids:
        kind, tid = phi.vertex_map[v]
        val = phi.source.value(v)
        img = tid if kind == "vertex" else on_chain[(tid, val)]
        vmaps[S.vertex_level[v]][v] = img

    emaps: list[dict[str, str]] = [dict() for _ in S.slots]
    for e in phi.source.edge_ids:
        path = phi.edge_map[e]
        spans = [phi.target.span(p) for p in path]
        pi = 0
        for seg in rs.edge_map[e]:
            j = S.edge_slot[seg]
            c_lo, c_hi = S.criticals[j], S.criticals[j + 1]
            while not (spans[pi][0] <= c_lo and c_hi <= spans[pi][1]):
                pi += 1
            emaps[j][seg] = seg_at[(path[pi], c_lo)]
        # split vertices of e land on the same chain walk
        prev = None
        for seg in rs.edge_map[e]:
            j = S.edge_slot[seg]
            bottom = S.down[j][seg]
            if prev is not None and bottom in rs.split_vertices:
                val = S.criticals[j]
                pk = next(p for p in path
                          if phi.target.span(p)[0] < val <= phi.target.span(p)[1])
                vmaps[j][bottom] = on_chain[(pk, val)]
            prev = seg

    return NormalForm(S, T, tuple(vmaps), tuple(emaps), rs, rt)


def levelwise_morphism(src: RGraph, tgt: RGraph, vmaps, emaps) -> RGraphMorphism:
    """Bundle per-level vertex maps and per-slot edge maps (between graphs
    with equal criticals) into a morphism."""
    vmap = {v: ("vertex", m[v]) for m in vmaps for v in m}
    emap = {e: (m[e],) for m in emaps for e in m}
    return RGraphMorphism(src, tgt, vmap, emap)


def refine_embed(g: RGraph, rr: RefineResult) -> RGraphMorphism:
    """The canonical isomorphism from a graph onto its refinement."""
    return RGraphMorphism(g, rr.graph,
                          {v: ("vertex", v) for v in g.vertex_ids},
                          {e: rr.edge_map[e] for e in g.edge_ids})


def refine_collapse(g: RGraph, rr: RefineResult) -> RGraphMorphism:
    """The inverse isomorphism, from the refinement back onto the graph."""
    owner = {seg: e for e, segs in rr.edge_map.items() for seg in segs}
    vmap = {}
    for v in rr.graph.vertex_ids:
        if v in rr.split_vertices:
            vmap[v] = ("edge", rr.split_vertices[v])
        else:
            vmap[v] = ("vertex", v)
    emap = {seg: (owner[seg],) for seg in rr.graph.edge_ids}
    return RGraphMorphism(rr.graph, g, vmap, emap)


def reduce_collapse(g: RGraph, red: ReduceResult) -> RGraphMorphism:
    """The canonical isomorphism from a graph onto its reduced form."""
    vmap = {}
    for v in g.vertex_ids:
        if v in red.dropped_vertices:
            vmap[v] = ("edge", red.dropped_vertices[v])
        else:
            vmap[v] = ("vertex", v)
    emap = {e: (red.edge_map[e],) for e in g.edge_ids}
    return RGraphMorphism(g, red.graph, vmap, emap)


def reduce_embed(g: RGraph, red: ReduceResult) -> RGraphMorphism:
    """The inverse isomorphism, from the reduced form back onto the graph."""
    return RGraphMorphism(red.graph, g,
                          {v: ("vertex", v) for v in red.graph.vertex_ids},
                          {e: red.chains[e] for e in red.graph.edge_ids})


# ---------------------------------------------------------------------------
# Equality and composition.

def morphism_first_difference(a: RGraphMorphism, b: RGraphMorphism) -> str | None:
    """Name the first cell (in normal form) where the two morphisms differ,
    or None when they are equal. Both must share source and target."""
    if a.source != b.source or a.target != b.target:
        raise ValidationError("cannot compare morphisms with different endpoints")
    na, nb = normal_form(a), normal_form(b)
    for i, (ma, mb) in enumerate(zip(na.vertex_maps, nb.vertex_maps)):
        for v in sorted(ma):
            if ma[v] != mb.get(v):
                return f"vertex {v!r} at level {i}: {ma[v]!r} vs {mb.get(v)!r}"
    for j, (ma, mb) in enumerate(zip(na.edge_maps, nb.edge_maps)):
        for e in sorted(ma):
            if ma[e] != mb.get(e):
                return f"edge {e!r} at slot {j}: {ma[e]!r} vs {mb.get(e)!r}"
    return None


def morphism_equal(a: RGraphMorphism, b: RGraphMorphism) -> bool:
    return morphism_first_difference(a, b) is None


def path_cell_at(graph: RGraph, path, value: Fraction) -> tuple[str, str]:
    """The cell of the graph that a chained edge path passes through at the
    given function value."""
    for p in path:
        lo, hi = graph.span(p)
        if value == lo:
            return ("vertex", graph.endpoints(p)[0])
        if value < hi:
            return ("edge", p)
        if value == hi:
            return ("vertex", graph.endpoints(p)[1])
    raise InternalError(f"value {format_rational(value)} beyond the path")


def merge_paths(segments) -> list[str]:
    """Concatenate edge paths, joining consecutive segments that share
    their boundary edge."""
    merged: list[str] = []
    for seg in segments:
        if merged and merged[-1] == seg[0]:
            merged.extend(seg[1:])
        else:
            merged.extend(seg)
    return merged


def trim_path(tgt: RGraph, merged, lo_img, hi_img) -> tuple[str, ...]:
    """Cut a chained path down to the stretch between the images of the
    two endpoints, each either a vertex or an edge of the target."""
    kind, tid = lo_img
    if kind == "edge":
        start = merged.index(tid)
    else:
        start = next(i for i, p in enumerate(merged)
                     if tgt.endpoints(p)[0] == tid)
    kind, tid = hi_img
    if kind == "edge":
        stop = len(merged) - 1 - merged[::-1].index(tid)
    else:
        stop = len(merged) - 1 - next(
            i for i, p in enumerate(reversed(merged))
            if tgt.endpoints(p)[1] == tid)
    return tuple(merged[start:stop + 1])


def compose(phi: RGraphMorphism, psi: RGraphMorphism) -> RGraphMorphism:
    """The composite source(phi) -> target(psi)."""
    if phi.target != psi.source:
        raise ValidationError("composition endpoint mismatch")
    src, tgt = phi.source, psi.target

    vmap: dict[str, tuple[str, str]] = {}
    for v in src.vertex_ids:
        kind, tid = phi.vertex_map[v]
        if kind == "vertex":
            vmap[v] = psi.vertex_map[tid]
        else:
            vmap[v] = path_cell_at(tgt, psi.edge_map[tid], src.value(v))

    emap: dict[str, tuple[str, ...]] = {}
    for e in src.edge_ids:
        merged = merge_paths(psi.edge_map[q] for q in phi.edge_map[e])
        lo_v, hi_v = src.endpoints(e)
        emap[e] = trim_path(tgt, merged, vmap[lo_v], vmap[hi_v])

    return RGraphMorphism(src, tgt, vmap, emap)


# ---------------------------------------------------------------------------
# Isomorphisms.

def is_isomorphism(phi: RGraphMorphism) -> bool:
    """True when the morphism is invertible, i.e. its normal form is a
    bijection on every level and every slot."""
    nf = normal_form(phi)
    for ma, lev in zip(nf.vertex_maps, nf.target.levels):
        if len(set(ma.values())) != len(ma) or set(ma.values()) != set(lev):
            return False
    for me, slot in zip(nf.edge_maps, nf.target.slots):
        if len(set(me.values())) != len(me) or set(me.values()) != set(slot):
            return False
    return True


def invert_isomorphism(phi: RGraphMorphism) -> RGraphMorphism:
    nf = normal_form(phi)
    inv_v = [{w: v for v, w in m.items()} for m in nf.vertex_maps]
    inv_e = [{w: e for e, w in m.items()} for m in nf.edge_maps]
    for fwd, m, lev in zip(nf.vertex_maps, inv_v, nf.target.levels):
        if len(m) != len(fwd) or len(m) != len(lev):
            raise ValidationError("not an isomorphism: vertex maps are not bijective")
    for fwd, m, slot in zip(nf.edge_maps, inv_e, nf.target.slots):
        if len(m) != len(fwd) or len(m) != len(slot):
            raise ValidationError("not an isomorphism: edge maps are not bijective")
    core = levelwise_morphism(nf.target, nf.source, inv_v, inv_e)
    embed = refine_embed(phi.target, nf.target_refine)
    collapse = refine_collapse(phi.source, nf.source_refine)
    return compose(compose(embed, core), collapse)


# ---------------------------------------------------------------------------
# Window transport: the engine behind the smoothing functor's action on
# morphisms and the shifted composites.

def _cell_meets(graph: RGraph, cell: str, lo: Fraction, hi: Fraction) -> bool:
    if cell in graph.vertex_level:
        return lo <= graph.value(cell) <= hi
    x, y = graph.span(cell)
    return x < hi and y > lo


def _locate(criticals, value: Fraction):
    """Position of a value among sorted criticals: ("level", k) when it is
    one of them, else ("slot", j) for the open gap holding it."""
    k = bisect.bisect_left(criticals, value)
    if k < len(criticals) and criticals[k] == value:
        return ("level", k)
    if k == 0 or k == len(criticals):
        raise InternalError(f"value {format_rational(value)} outside the smoothed range")
    return ("slot", k - 1)


def transport(source_graph: RGraph, pull, sm_target,
              radius: Fraction) -> RGraphMorphism:
    """Map each cell of source_graph to the component of the radius-window
    of sm_target.source spanned by that cell's witness cells.

    pull gives, for every source_graph cell x, cells of sm_target.source
    known to carry the image of x: either a dict keyed by x, or a callable
    (x, value) -> cells when the witness set depends on the window position
    along x. Per position the witnesses that meet the window must land in
    a single smoothed component (anything else is reported as an internal
    error, since it would contradict the map being continuous).
    """
    tgt_sm = sm_target.smoothed
    base = sm_target.source
    B = tgt_sm.criticals
    pull_at = pull if callable(pull) else (lambda x, value: pull[x])
    rev_v: dict[tuple[int, str], str] = {}
    for name in tgt_sm.vertex_ids:
        k = tgt_sm.vertex_level[name]
        for c in sm_target.provenance[name]:
            rev_v[(k, c)] = name
    rev_e: dict[tuple[int, str], str] = {}
    for name in tgt_sm.edge_ids:
        j = tgt_sm.edge_slot[name]
        for c in sm_target.provenance[name]:
            rev_e[(j, c)] = name

    def resolve(rev, pos, cands, what):
        names = set()
        for c in cands:
            hit = rev.get((pos, c))
            if hit is None:
                raise InternalError(f"{what}: witness cell {c!r} not tracked at position {pos}")
            names.add(hit)
        if len(names) != 1:
            raise InternalError(f"{what}: witnesses split across components {sorted(names)}")
        return names.pop()

    vmap: dict[str, tuple[str, str]] = {}
    for x in source_graph.vertex_ids:
        b = source_graph.value(x)
        cands = [c for c in pull_at(x, b)
                 if _cell_meets(base, c, b - radius, b + radius)]
        if not cands:
            raise InternalError(f"no witness cell meets the window of vertex {x!r}")
        kind, pos = _locate(B, b)
        if kind == "level":
            vmap[x] = ("vertex", resolve(rev_v, pos, cands, f"vertex {x!r}"))
        else:
            vmap[x] = ("edge", resolve(rev_e, pos, cands, f"vertex {x!r}"))

    emap: dict[str, tuple[str, ...]] = {}
    for x in source_graph.edge_ids:
        b1, b2 = source_graph.span(x)
        cuts = [b1] + [c for c in B if b1 < c < b2] + [b2]
        path = []
        for d1, d2 in zip(cuts, cuts[1:]):
            m = (d1 + d2) / 2
            cands = [c for c in pull_at(x, m)
                     if _cell_meets(base, c, m - radius, m + radius)]
            if not cands:
                raise InternalError(f"no witness cell meets the window of edge {x!r}")
            j = bisect.bisect_right(B, m) - 1
            path.append(resolve(rev_e, j, cands, f"edge {x!r}"))
        emap[x] = tuple(path)

    result = RGraphMorphism(source_graph, tgt_sm, vmap, emap)
    rep = validate_morphism(result)
    if not rep.ok:
        raise InternalError("window transport produced an invalid morphism: "
                            + "; ".join(rep.violations))
    return result


def _image_cells(alpha: RGraphMorphism, cell: str):
    """All target cells the image of one source cell runs through."""
    if cell in alpha.source.vertex_level:
        return (alpha.vertex_map[cell][1],)
    path = alpha.edge_map[cell]
    out = list(path)
    for a in path[:-1]:
        out.append(alpha.target.endpoints(a)[1])
    return tuple(out)


def smooth_morphism(alpha: RGraphMorphism, eps, sm_source=None,
                    sm_target=None) -> RGraphMorphism:
    """Apply the smoothing to a morphism: the smoothed source's window
    components map to the smoothed target's window components carrying
    their images."""
    from .smoothing import smooth
    eps = as_rational(eps)
    if sm_source is None:
        sm_source = smooth(alpha.source, eps)
    if sm_target is None:
        sm_target = smooth(alpha.target, eps)
    if sm_source.source != alpha.source or sm_target.source != alpha.target:
        raise ValidationError("smoothing results do not match the morphism's endpoints")
    if sm_source.epsilon != eps or sm_target.epsilon != eps:
        raise ValidationError("smoothing results taken at a different epsilon")

    cache = {c: _image_cells(alpha, c)
             for c in (*alpha.source.vertex_ids, *alpha.source.edge_ids)}
    pull = {}
    for x in (*sm_source.smoothed.vertex_ids, *sm_source.smoothed.edge_ids):
        cells = set()
        for c in sm_source.provenance[x]:
            cells.update(cache[c])
        pull[x] = frozenset(cells)
    return transport(sm_source.smoothed, pull, sm_target, eps)


def shift_compose(alpha: RGraphMorphism, eps, sm_target_eps, sm_source_eps=None,
                  sm_target_2eps=None) -> RGraphMorphism:
    """Turn alpha: f -> smooth(g, eps) into the shifted composite
    smooth(f, eps) -> smooth(g, 2*eps): each window component of f maps to
    the doubled window component of g carrying its image."""
    from .smoothing import smooth
    eps = as_rational(eps)
    if sm_target_eps.smoothed != alpha.target:
        raise ValidationError("alpha's target is not the given smoothing")
    if sm_target_eps.epsilon != eps:
        raise ValidationError("smoothing results taken at a different epsilon")
    g = sm_target_eps.source
    if sm_source_eps is None:
        sm_source_eps = smooth(alpha.source, eps)
    if sm_target_2eps is None:
        sm_target_2eps = smooth(g, 2 * eps)
    if sm_source_eps.source != alpha.source or sm_target_2eps.source != g:
        raise ValidationError("smoothing results do not match the morphism's endpoints")
    if sm_source_eps.epsilon != eps or sm_target_2eps.epsilon != 2 * eps:
        raise ValidationError("smoothing results taken at a different epsilon")

    mid = alpha.target
    images = {}
    for x in (*sm_source_eps.smoothed.vertex_ids, *sm_source_eps.smoothed.edge_ids):
        cells = set()
        for c in sm_source_eps.provenance[x]:
            cells.update(_image_cells(alpha, c))
        images[x] = cells

    def pull_at(x, value):
        # Only image cells near the window position may witness: the
        # provenance of a far-away cell can wander back into the window
        # inside a different component.
        out = set()
        for z in images[x]:
            if _cell_meets(mid, z, value - eps, value + eps):
                out.update(sm_target_eps.provenance[z])
        return out

    return transport(sm_source_eps.smoothed, pull_at, sm_target_2eps, 2 * eps)
