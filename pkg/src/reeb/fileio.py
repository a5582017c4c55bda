"""Text formats: graphs over the line, simplicial fields, morphisms, DOT.

Graph files hold one record per line. `vertex <id> <value>` declares a
vertex, `edge <id> <low> <high>` an edge between two vertices with
strictly increasing values (edges crossing other critical values are
subdivided on load), and an optional `criticals <v> <v> ...` line forces
extra critical values. `#` starts a comment.

Field files describe a 2-complex with `v <id> <value>`, `e <id> <v1>
<v2>` and `t <id> <e1> <e2> <e3>` lines; every triangle's edges must
close up into the boundary of a 2-simplex.

Morphism files give `vmap <vid> vertex <wid>`, `vmap <vid> edge <eid>`
and `emap <eid> <e1> <e2> ...` lines against a separately loaded source
and target.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .core import RGraph, _assemble, build_rgraph
from .errors import InternalError, ParseError, ValidationError
from .morphism import RGraphMorphism
from .rationals import format_rational, parse_rational
from .unionfind import UnionFind


def _records(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def _rational(token: str, n: int) -> Fraction:
    try:
        return parse_rational(token)
    except ParseError as exc:
        raise ParseError(str(exc), line=n) from None


def _file_safe(*ids: str) -> None:
    """Reject ids the record format cannot write back: they would tokenize
    differently (whitespace) or be eaten as a comment (#)."""
    for s in ids:
        if not s or "#" in s or any(c.isspace() for c in s):
            raise ValidationError(
                f"id {s!r} cannot be written to a record file")


# ---------------------------------------------------------------------------
# Graphs.

def parse_rgraph(text: str) -> RGraph:
    vertices: dict[str, Fraction] = {}
    edges: dict[str, tuple[str, str]] = {}
    criticals: list[Fraction] = []
    for n, toks in _records(text):
        kind, args = toks[0], toks[1:]
        if kind == "criticals":
            criticals.extend(_rational(t, n) for t in args)
        elif kind == "vertex":
            if len(args) != 2:
                raise ParseError("vertex takes an id and a value", line=n)
            vid, val = args
            if vid in vertices:
                raise ParseError(f"duplicate vertex id {vid!r}", line=n)
            vertices[vid] = _rational(val, n)
        elif kind == "edge":
            if len(args) != 3:
                raise ParseError("edge takes an id and two vertex ids", line=n)
            eid, lo, hi = args
            if eid in edges:
                raise ParseError(f"duplicate edge id {eid!r}", line=n)
            for v in (lo, hi):
                if v not in vertices:
                    raise ParseError(f"unknown vertex {v!r}", line=n)
            if not vertices[lo] < vertices[hi]:
                raise ParseError(f"edge {eid!r} must go from a strictly lower "
                                 "vertex to a strictly higher one", line=n)
            edges[eid] = (lo, hi)
        else:
            raise ParseError(f"unknown directive {kind!r}", line=n)
    return build_rgraph(vertices, edges, criticals)


def emit_rgraph(g: RGraph) -> str:
    _file_safe(*g.vertex_ids, *g.edge_ids)
    lines = []
    if g.criticals:
        lines.append("criticals " + " ".join(format_rational(c) for c in g.criticals))
    for level in g.levels:
        for v in level:
            lines.append(f"vertex {v} {format_rational(g.value(v))}")
    for j in range(g.n_slots):
        for e in g.slots[j]:
            lines.append(f"edge {e} {g.down[j][e]} {g.up[j][e]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Simplicial fields.

@dataclass(frozen=True)
class SimplicialField:
    values: dict[str, Fraction]
    edges: dict[str, tuple[str, str]]
    triangles: dict[str, tuple[str, str, str]]


def parse_field(text: str) -> SimplicialField:
    values: dict[str, Fraction] = {}
    edges: dict[str, tuple[str, str]] = {}
    triangles: dict[str, tuple[str, str, str]] = {}
    for n, toks in _records(text):
        kind, args = toks[0], toks[1:]
        if kind == "v":
            if len(args) != 2:
                raise ParseError("v takes an id and a value", line=n)
            vid, val = args
            if vid in values:
                raise ParseError(f"duplicate vertex id {vid!r}", line=n)
            values[vid] = _rational(val, n)
        elif kind == "e":
            if len(args) != 3:
                raise ParseError("e takes an id and two vertex ids", line=n)
            eid, a, b = args
            if eid in edges:
                raise ParseError(f"duplicate edge id {eid!r}", line=n)
            for v in (a, b):
                if v not in values:
                    raise ParseError(f"unknown vertex {v!r}", line=n)
            if a == b:
                raise ParseError(f"edge {eid!r} repeats a vertex", line=n)
            edges[eid] = (a, b)
        elif kind == "t":
            if len(args) != 4:
                raise ParseError("t takes an id and three edge ids", line=n)
            tid, *sides = args
            if tid in triangles:
                raise ParseError(f"duplicate triangle id {tid!r}", line=n)
            for e in sides:
                if e not in edges:
                    raise ParseError(f"unknown edge {e!r}", line=n)
            if len(set(sides)) != 3:
                raise ParseError(f"triangle {tid!r} repeats an edge", line=n)
            ends = Counter(v for e in sides for v in edges[e])
            if len(ends) != 3 or set(ends.values()) != {2}:
                raise ParseError(f"the edges of triangle {tid!r} do not close "
                                 "up", line=n)
            triangles[tid] = (sides[0], sides[1], sides[2])
        else:
            raise ParseError(f"unknown directive {kind!r}", line=n)
    return SimplicialField(values, edges, triangles)


def emit_field(field: SimplicialField) -> str:
    _file_safe(*field.values, *field.edges, *field.triangles)
    lines = [f"v {v} {format_rational(val)}" for v, val in sorted(field.values.items())]
    lines += [f"e {e} {a} {b}" for e, (a, b) in sorted(field.edges.items())]
    lines += [f"t {t} {x} {y} {z}" for t, (x, y, z) in sorted(field.triangles.items())]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComplexReeb:
    graph: RGraph
    vertex_image: dict[str, str]    # complex vertex -> graph vertex


def _triangle_vertices(field: SimplicialField, tid: str) -> set[str]:
    return {v for e in field.triangles[tid] for v in field.edges[e]}


def reeb_of_complex(field: SimplicialField) -> ComplexReeb:
    """The Reeb graph of the piecewise linear map the field describes:
    one graph vertex per component of a level set at a vertex value, one
    edge per component of the preimage of a gap between vertex values."""
    vals = field.values
    S = sorted(set(vals.values()))
    espan = {e: (min(vals[a], vals[b]), max(vals[a], vals[b]))
             for e, (a, b) in field.edges.items()}
    tspan = {}
    for t in field.triangles:
        tvals = [vals[v] for v in _triangle_vertices(field, t)]
        tspan[t] = (min(tvals), max(tvals))

    def ref(cell) -> str:
        return f"{cell[0]}:{cell[1]}"

    # Components of each level set. Cells: vertices at the value, edges
    # crossing it strictly. Level edges and triangle slices glue them.
    level_names: list[list[str]] = []
    level_lookup: list[dict[tuple[str, str], str]] = []
    vertex_image: dict[str, str] = {}
    for i, a in enumerate(S):
        uf = UnionFind()
        for v, val in vals.items():
            if val == a:
                uf.add(("v", v))
        for e, (lo, hi) in espan.items():
            if lo < a < hi:
                uf.add(("e", e))
        for e, (x, y) in field.edges.items():
            if vals[x] == a and vals[y] == a:
                uf.union(("v", x), ("v", y))
        for t, sides in field.triangles.items():
            lo, hi = tspan[t]
            if not lo <= a <= hi:
                continue
            contacts = set()
            for e in sides:
                x, y = field.edges[e]
                if vals[x] == a:
                    contacts.add(("v", x))
                if vals[y] == a:
                    contacts.add(("v", y))
                if espan[e][0] < a < espan[e][1]:
                    contacts.add(("e", e))
            first = None
            for c in contacts:
                if first is None:
                    first = c
                else:
                    uf.union(first, c)
        names = []
        lookup = {}
        for comp in uf.groups():
            name = "{" + ",".join(sorted(ref(c) for c in comp)) + "}@" \
                   + format_rational(a)
            names.append(name)
            for c in comp:
                lookup[c] = name
                if c[0] == "v":
                    vertex_image[c[1]] = name
        level_names.append(sorted(names))
        level_lookup.append(lookup)

    # Components of each gap preimage. Cells: edges and triangles whose
    # value range covers the whole gap; triangles glue to their spanning
    # boundary edges.
    slot_names: list[list[str]] = []
    down_maps: list[dict[str, str]] = []
    up_maps: list[dict[str, str]] = []
    for j in range(len(S) - 1):
        lo_v, hi_v = S[j], S[j + 1]
        uf = UnionFind()
        spanning = {e for e, (lo, hi) in espan.items() if lo <= lo_v and hi >= hi_v}
        for e in spanning:
            uf.add(("e", e))
        for t, (lo, hi) in tspan.items():
            if lo <= lo_v and hi >= hi_v:
                uf.add(("t", t))
                for e in field.triangles[t]:
                    if e in spanning:
                        uf.union(("t", t), ("e", e))

        def contact(e: str, value, level: int) -> str:
            x, y = field.edges[e]
            if vals[x] > vals[y]:
                x, y = y, x
            if vals[x] == value:
                cell = ("v", x)
            elif vals[y] == value:
                cell = ("v", y)
            else:
                cell = ("e", e)
            return level_lookup[level][cell]

        names = []
        down = {}
        up = {}
        for comp in uf.groups():
            name = "{" + ",".join(sorted(ref(c) for c in comp)) + "}@(" \
                   + format_rational(lo_v) + "," + format_rational(hi_v) + ")"
            members = sorted(c[1] for c in comp if c[0] == "e")
            if not members:
                raise InternalError("gap component with no spanning edge")
            downs = {contact(e, lo_v, j) for e in members}
            ups = {contact(e, hi_v, j + 1) for e in members}
            if len(downs) != 1 or len(ups) != 1:
                raise InternalError("gap component touching several level "
                                    "components")
            names.append(name)
            down[name] = downs.pop()
            up[name] = ups.pop()
        slot_names.append(sorted(names))
        down_maps.append(down)
        up_maps.append(up)

    graph = _assemble(S, level_names, slot_names, down_maps, up_maps)
    return ComplexReeb(graph, vertex_image)


# ---------------------------------------------------------------------------
# Morphisms.

def parse_morphism(text: str, source: RGraph, target: RGraph) -> RGraphMorphism:
    vertex_map: dict[str, tuple[str, str]] = {}
    edge_map: dict[str, tuple[str, ...]] = {}
    src_vs, src_es = set(source.vertex_ids), set(source.edge_ids)
    tgt_vs, tgt_es = set(target.vertex_ids), set(target.edge_ids)
    for n, toks in _records(text):
        kind, args = toks[0], toks[1:]
        if kind == "vmap":
            if len(args) != 3 or args[1] not in ("vertex", "edge"):
                raise ParseError("vmap takes a vertex id, the word vertex or "
                                 "edge, and a target id", line=n)
            vid, cell_kind, wid = args
            if vid not in src_vs:
                raise ParseError(f"unknown source vertex {vid!r}", line=n)
            if vid in vertex_map:
                raise ParseError(f"repeated vmap for {vid!r}", line=n)
            pool = tgt_vs if cell_kind == "vertex" else tgt_es
            if wid not in pool:
                raise ParseError(f"unknown target {cell_kind} {wid!r}", line=n)
            vertex_map[vid] = (cell_kind, wid)
        elif kind == "emap":
            if len(args) < 2:
                raise ParseError("emap takes an edge id and a target edge "
                                 "path", line=n)
            eid, *path = args
            if eid not in src_es:
                raise ParseError(f"unknown source edge {eid!r}", line=n)
            if eid in edge_map:
                raise ParseError(f"repeated emap for {eid!r}", line=n)
            for p in path:
                if p not in tgt_es:
                    raise ParseError(f"unknown target edge {p!r}", line=n)
            edge_map[eid] = tuple(path)
        else:
            raise ParseError(f"unknown directive {kind!r}", line=n)
    return RGraphMorphism(source, target, vertex_map, edge_map)


def emit_morphism(phi: RGraphMorphism) -> str:
    _file_safe(*phi.source.vertex_ids, *phi.source.edge_ids,
               *phi.target.vertex_ids, *phi.target.edge_ids)
    lines = []
    for v in phi.source.vertex_ids:
        kind, wid = phi.vertex_map[v]
        lines.append(f"vmap {v} {kind} {wid}")
    for e in phi.source.edge_ids:
        lines.append(f"emap {e} " + " ".join(phi.edge_map[e]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT export.

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: RGraph, ranked: bool = True) -> str:
    lines = ["digraph reeb {", "  rankdir=BT;"]
    for i, level in enumerate(g.levels):
        label = format_rational(g.criticals[i]) if g.criticals else ""
        for v in level:
            lines.append(f"  {_dot_quote(v)} [label={_dot_quote(f'{v} @ {label}')}];")
        if ranked and level:
            lines.append("  { rank=same; "
                         + " ".join(_dot_quote(v) + ";" for v in level) + " }")
    for j in range(g.n_slots):
        for e in g.slots[j]:
            lines.append(f"  {_dot_quote(g.down[j][e])} -> {_dot_quote(g.up[j][e])}"
                         f" [label={_dot_quote(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
