"""Combinatorial graphs over the real line.

An RGraph stores a strictly increasing tuple of critical values
a_0 < ... < a_n, one vertex set per critical value (a "level"), one edge
set per consecutive pair of criticals (a "slot"), and two total
attaching maps per slot giving each edge its endpoint in the level below
and in the level above. A vertex's function value is the critical value
of its level; an edge spans the open interval between its slot's
critical values, rising from its lower endpoint to its upper one.

Levels may be empty or contain isolated vertices; the empty graph (no
criticals at all) is legal. All values are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import ValidationError
from .rationals import as_rational, format_rational
from .unionfind import UnionFind


@dataclass(frozen=True)
class RGraph:
    criticals: tuple[Fraction, ...]
    levels: tuple[tuple[str, ...], ...]
    slots: tuple[tuple[str, ...], ...]
    down: tuple[dict[str, str], ...]
    up: tuple[dict[str, str], ...]

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def n_slots(self) -> int:
        return len(self.slots)

    @property
    def is_empty(self) -> bool:
        return not self.criticals

    @cached_property
    def vertex_level(self) -> dict[str, int]:
        return {v: i for i, lev in enumerate(self.levels) for v in lev}

    @cached_property
    def edge_slot(self) -> dict[str, int]:
        return {e: j for j, slot in enumerate(self.slots) for e in slot}

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v for lev in self.levels for v in lev)

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e for slot in self.slots for e in slot)

    def value(self, vid: str) -> Fraction:
        return self.criticals[self.vertex_level[vid]]

    def span(self, eid: str) -> tuple[Fraction, Fraction]:
        j = self.edge_slot[eid]
        return (self.criticals[j], self.criticals[j + 1])

    def endpoints(self, eid: str) -> tuple[str, str]:
        j = self.edge_slot[eid]
        return (self.down[j][eid], self.up[j][eid])

    @cached_property
    def below_edges(self) -> dict[str, tuple[str, ...]]:
        """Edges arriving at each vertex from the slot under its level."""
        acc: dict[str, list[str]] = {v: [] for v in self.vertex_ids}
        for j, slot in enumerate(self.slots):
            for e in slot:
                acc[self.up[j][e]].append(e)
        return {v: tuple(es) for v, es in acc.items()}

    @cached_property
    def above_edges(self) -> dict[str, tuple[str, ...]]:
        """Edges leaving each vertex into the slot over its level."""
        acc: dict[str, list[str]] = {v: [] for v in self.vertex_ids}
        for j, slot in enumerate(self.slots):
            for e in slot:
                acc[self.down[j][e]].append(e)
        return {v: tuple(es) for v, es in acc.items()}

    def down_degree(self, vid: str) -> int:
        return len(self.below_edges[vid])

    def up_degree(self, vid: str) -> int:
        return len(self.above_edges[vid])


def _assemble(criticals, levels, slots, down, up) -> RGraph:
    """Normalize raw pieces into the canonical sorted representation."""
    crit = tuple(Fraction(c) for c in criticals)
    lev = tuple(tuple(sorted(l)) for l in levels)
    slo = tuple(tuple(sorted(s)) for s in slots)
    dn = tuple({e: d[e] for e in s} for s, d in zip(slo, down))
    u = tuple({e: m[e] for e in s} for s, m in zip(slo, up))
    return RGraph(crit, lev, slo, dn, u)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate(g: RGraph) -> ValidationReport:
    """Check every structural invariant; never raises, reports violations."""
    bad: list[str] = []
    crit = g.criticals
    for c in crit:
        if not isinstance(c, Fraction):
            bad.append(f"critical value {c!r} is not an exact rational")
    for a, b in zip(crit, crit[1:]):
        if not a < b:
            bad.append(f"criticals not strictly increasing at {a}, {b}")
    if len(g.levels) != len(crit):
        bad.append(f"{len(g.levels)} levels for {len(crit)} criticals")
    want_slots = max(0, len(crit) - 1)
    if len(g.slots) != want_slots:
        bad.append(f"{len(g.slots)} slots for {len(crit)} criticals")
    if len(g.down) != len(g.slots) or len(g.up) != len(g.slots):
        bad.append("attach map count does not match slot count")
        return ValidationReport(False, tuple(bad))

    seen: set[str] = set()
    for i, lev in enumerate(g.levels):
        for v in lev:
            if not isinstance(v, str):
                bad.append(f"level {i}: vertex id {v!r} is not a string")
            elif v in seen:
                bad.append(f"duplicate id {v!r}")
            else:
                seen.add(v)
    for j, slot in enumerate(g.slots):
        for e in slot:
            if not isinstance(e, str):
                bad.append(f"slot {j}: edge id {e!r} is not a string")
            elif e in seen:
                bad.append(f"duplicate id {e!r}")
            else:
                seen.add(e)

    for j, slot in enumerate(g.slots):
        lo_level = set(g.levels[j]) if j < len(g.levels) else set()
        hi_level = set(g.levels[j + 1]) if j + 1 < len(g.levels) else set()
        for e in slot:
            if e not in g.down[j]:
                bad.append(f"slot {j}: edge {e!r}: partial attaching map (no lower endpoint)")
            elif g.down[j][e] not in lo_level:
                bad.append(f"slot {j}: edge {e!r}: lower endpoint {g.down[j][e]!r} not in level {j}")
            if e not in g.up[j]:
                bad.append(f"slot {j}: edge {e!r}: partial attaching map (no upper endpoint)")
            elif g.up[j][e] not in hi_level:
                bad.append(f"slot {j}: edge {e!r}: upper endpoint {g.up[j][e]!r} not in level {j + 1}")
        for e in g.down[j]:
            if e not in slot:
                bad.append(f"slot {j}: lower attach defined on unknown edge {e!r}")
        for e in g.up[j]:
            if e not in slot:
                bad.append(f"slot {j}: upper attach defined on unknown edge {e!r}")

    return ValidationReport(not bad, tuple(bad))


def _fresh(base: str, used: set[str]) -> str:
    name = base
    while name in used:
        name += "'"
    used.add(name)
    return name


def _build(vertices, edges, extra_criticals):
    """Shared constructor: place vertices, split long edges at intervening
    criticals. Returns (graph, edge id -> segment tuple, split vertex -> owner edge)."""
    if isinstance(vertices, dict):
        vertices = vertices.items()
    if isinstance(edges, dict):
        edges = [(eid, lo, hi) for eid, (lo, hi) in edges.items()]
    values: dict[str, Fraction] = {}
    order: list[str] = []
    for vid, val in vertices:
        vid = str(vid)
        if vid in values:
            raise ValidationError(f"duplicate vertex id {vid!r}")
        values[vid] = as_rational(val)
        order.append(vid)
    edge_list: list[tuple[str, str, str]] = []
    eids: set[str] = set()
    for eid, lo, hi in edges:
        eid, lo, hi = str(eid), str(lo), str(hi)
        if eid in eids:
            raise ValidationError(f"duplicate edge id {eid!r}")
        eids.add(eid)
        edge_list.append((eid, lo, hi))
    clash = eids & set(values)
    if clash:
        raise ValidationError(f"ids used for both a vertex and an edge: {sorted(clash)}")

    crit = sorted({as_rational(c) for c in extra_criticals} | set(values.values()))
    index = {c: k for k, c in enumerate(crit)}
    levels: list[list[str]] = [[] for _ in crit]
    for vid in order:
        levels[index[values[vid]]].append(vid)
    n_slots = max(0, len(crit) - 1)
    slots: list[list[str]] = [[] for _ in range(n_slots)]
    down: list[dict[str, str]] = [{} for _ in range(n_slots)]
    up: list[dict[str, str]] = [{} for _ in range(n_slots)]

    used = set(values) | eids
    edge_map: dict[str, tuple[str, ...]] = {}
    split_vertices: dict[str, str] = {}
    for eid, lo, hi in edge_list:
        for end in (lo, hi):
            if end not in values:
                raise ValidationError(f"edge {eid!r}: unknown vertex {end!r}")
        i, j = index[values[lo]], index[values[hi]]
        if i >= j:
            raise ValidationError(
                f"edge {eid!r} must rise: need f({lo!r}) < f({hi!r}), "
                f"got {format_rational(values[lo])} and {format_rational(values[hi])}")
        if j == i + 1:
            slots[i].append(eid)
            down[i][eid] = lo
            up[i][eid] = hi
            edge_map[eid] = (eid,)
        else:
            segs: list[str] = []
            bottom = lo
            for k in range(i, j):
                if k + 1 == j:
                    top = hi
                else:
                    top = _fresh(f"{eid}@{format_rational(crit[k + 1])}", used)
                    levels[k + 1].append(top)
                    split_vertices[top] = eid
                seg = _fresh(f"{eid}:{k - i}", used)
                slots[k].append(seg)
                down[k][seg] = bottom
                up[k][seg] = top
                segs.append(seg)
                bottom = top
            edge_map[eid] = tuple(segs)

    return _assemble(crit, levels, slots, down, up), edge_map, split_vertices


def build_rgraph(vertices, edges=(), criticals=()) -> RGraph:
    """Build a graph from (id, value) vertices and (id, low, high) edges.

    Criticals default to the set of vertex values; extra criticals add
    (possibly empty) levels. Edges whose endpoints are not at adjacent
    criticals are split automatically with generated ids.
    """
    g, _, _ = _build(vertices, edges, criticals)
    return g


@dataclass(frozen=True)
class RefineResult:
    graph: RGraph
    edge_map: dict[str, tuple[str, ...]]   # old edge -> bottom-to-top segments
    split_vertices: dict[str, str]          # generated vertex -> old edge


def refine(g: RGraph, extra) -> RefineResult:
    """Split edges at the given extra critical values (values already
    present are ignored; values outside the range add empty levels)."""
    vertices = [(v, g.criticals[i]) for i, lev in enumerate(g.levels) for v in lev]
    edges = [(e, g.down[j][e], g.up[j][e]) for j, slot in enumerate(g.slots) for e in slot]
    crit = set(g.criticals) | {as_rational(x) for x in extra}
    graph, edge_map, split_vertices = _build(vertices, edges, crit)
    return RefineResult(graph, edge_map, split_vertices)


@dataclass(frozen=True)
class ReduceResult:
    graph: RGraph
    edge_map: dict[str, str]             # old edge -> merged edge it is part of
    dropped_vertices: dict[str, str]     # dropped vertex -> merged edge through it
    chains: dict[str, tuple[str, ...]]   # merged edge -> ordered old constituents


def reduce(g: RGraph) -> ReduceResult:
    """Drop every level whose vertices all have exactly one edge below and
    one above (pass-through points), merging edge chains across it; empty
    levels are dropped too. The result has the minimal critical set that
    still presents the same graph."""
    droppable = [
        all(g.down_degree(v) == 1 and g.up_degree(v) == 1 for v in lev)
        for lev in g.levels
    ]
    kept = [i for i, d in enumerate(droppable) if not d]
    if not kept:
        return ReduceResult(_assemble((), (), (), (), ()), {}, {}, {})

    crit = [g.criticals[i] for i in kept]
    levels = [g.levels[i] for i in kept]
    slots: list[list[str]] = []
    down: list[dict[str, str]] = []
    up: list[dict[str, str]] = []
    edge_map: dict[str, str] = {}
    dropped_vertices: dict[str, str] = {}
    chains: dict[str, tuple[str, ...]] = {}
    for p, q in zip(kept, kept[1:]):
        slot: list[str] = []
        dn: dict[str, str] = {}
        u: dict[str, str] = {}
        for e in g.slots[p]:
            chain = [e]
            cur, s = e, p
            while s + 1 < q:
                v = g.up[s][cur]
                cur = g.above_edges[v][0]
                dropped_vertices[v] = e
                chain.append(cur)
                s += 1
            slot.append(e)
            dn[e] = g.down[p][e]
            u[e] = g.up[q - 1][cur]
            chains[e] = tuple(chain)
            for c in chain:
                edge_map[c] = e
        slots.append(slot)
        down.append(dn)
        up.append(u)
    return ReduceResult(_assemble(crit, levels, slots, down, up),
                        edge_map, dropped_vertices, chains)


def common_refinement(g: RGraph, h: RGraph) -> tuple[RefineResult, RefineResult]:
    """Refine each graph at the other's criticals so both share one set."""
    return refine(g, set(h.criticals)), refine(h, set(g.criticals))


def component_sets(g: RGraph, vertex_ids, edge_ids) -> list[frozenset[str]]:
    """Connected components of the subgraph spanned by the given cells.

    An edge is joined to whichever of its endpoints are included; order of
    the returned components is deterministic.
    """
    uf = UnionFind()
    vset = set(vertex_ids)
    for v in vertex_ids:
        uf.add(v)
    for e in edge_ids:
        uf.add(e)
    for e in edge_ids:
        j = g.edge_slot[e]
        for endpoint in (g.down[j][e], g.up[j][e]):
            if endpoint in vset:
                uf.union(e, endpoint)
    return [frozenset(grp) for grp in uf.groups()]


def num_components(g: RGraph) -> int:
    return len(component_sets(g, g.vertex_ids, g.edge_ids))


def minimum_gap(g: RGraph) -> Fraction | None:
    if len(g.criticals) < 2:
        return None
    return min(b - a for a, b in zip(g.criticals, g.criticals[1:]))


def canonical_vertex_name(level_index: int, cells) -> str:
    return f"v({level_index};{','.join(sorted(cells))})"


def canonical_edge_name(slot_index: int, cells) -> str:
    return f"e({slot_index};{','.join(sorted(cells))})"


# ---------------------------------------------------------------------------
# Desk fixtures used throughout the test suite.

def line(a=0, b=1) -> RGraph:
    """One edge between single vertices at values a < b."""
    return build_rgraph([("v0", a), ("v1", b)], [("e0", "v0", "v1")])


def loop(a=0, b=1) -> RGraph:
    """Two parallel edges between single vertices at values a < b."""
    return build_rgraph([("v0", a), ("v1", b)],
                        [("e0", "v0", "v1"), ("e1", "v0", "v1")])


def point(a=0) -> RGraph:
    """A single isolated vertex."""
    return build_rgraph([("v0", a)])


def fork() -> RGraph:
    """A vertex at -1 joined to a branch vertex at 0 with two prongs at 1."""
    return build_rgraph(
        [("u", -1), ("w", 0), ("x", 1), ("y", 1)],
        [("uw", "u", "w"), ("wx", "w", "x"), ("wy", "w", "y")])


def empty_rgraph() -> RGraph:
    return _assemble((), (), (), (), ())
