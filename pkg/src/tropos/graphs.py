"""Metric graphs, their models, and the combinatorial queries built on them.

A metric graph is stored through one of its models: vertices with optional
non-negative integer weights, and undirected edges with positive rational
lengths. Multi-edges are allowed everywhere; self-loops are allowed on input
and are split in two by :meth:`MetricGraph.loopless` before the operations
that assume a loopless model.

All lengths and offsets are exact ``fractions.Fraction`` values. Nothing in
this module (or anywhere in the package core) uses floating point.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import (
    DanglingEndpoint,
    DisconnectedInput,
    DuplicateId,
    InvalidInput,
    NonPositiveLength,
)

RationalLike = Fraction | int | str


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions, and "p/q" strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InvalidInput(f"not an exact rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Largest rational dividing every value (gcd of numerators over lcm of denominators)."""
    num = 0
    den = 1
    for v in values:
        num = gcd(num * v.denominator, v.numerator * den)
        den = den * v.denominator // gcd(den, v.denominator)
    if num == 0:
        raise InvalidInput("rational gcd of an empty or zero collection")
    return Fraction(num, den)


@dataclass(frozen=True)
class Point:
    """A location on a metric graph: a vertex, or an interior point of an edge.

    Edge offsets are measured from the edge's stored 'from' endpoint and must
    be strictly interior (0 < offset < length); endpoint positions are always
    represented as vertices.
    """

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @staticmethod
    def at_vertex(vertex_id: str) -> "Point":
        return Point(vertex=vertex_id)

    @staticmethod
    def on_edge(edge_id: str, offset: RationalLike) -> "Point":
        off = as_fraction(offset)
        return Point(edge=edge_id, offset=off)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self) -> tuple:
        if self.vertex is not None:
            return (0, self.vertex, Fraction(0))
        return (1, self.edge, self.offset)

    def __repr__(self) -> str:
        if self.vertex is not None:
            return f"Point({self.vertex})"
        return f"Point({self.edge}@{self.offset})"


@dataclass(frozen=True)
class EdgeData:
    id: str
    u: str
    v: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def endpoints(self) -> tuple[str, str]:
        return (self.u, self.v)


class MetricGraph:
    """Immutable model of a metric graph. Construct through :func:`build_graph`."""

    def __init__(self, vertices: Mapping[str, int], edges: Sequence[EdgeData]):
        self._weights = dict(sorted(vertices.items()))
        self._edges = {e.id: e for e in sorted(edges, key=lambda e: e.id)}
        incidence: dict[str, list[tuple[str, int]]] = {v: [] for v in self._weights}
        for e in self._edges.values():
            incidence[e.u].append((e.id, 0))
            incidence[e.v].append((e.id, 1))
        self._incidence = {v: tuple(sorted(h)) for v, h in incidence.items()}

    # -- basic accessors -------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(self._weights)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(self._edges)

    def has_vertex(self, vertex_id: str) -> bool:
        return vertex_id in self._weights

    def weight(self, vertex_id: str) -> int:
        return self._weights[vertex_id]

    def edge(self, edge_id: str) -> EdgeData:
        return self._edges[edge_id]

    def length(self, edge_id: str) -> Fraction:
        return self._edges[edge_id].length

    def half_edges(self, vertex_id: str) -> tuple[tuple[str, int], ...]:
        """Half-edges at a vertex as (edge id, end index); a loop contributes both ends."""
        return self._incidence[vertex_id]

    def valence(self, vertex_id: str) -> int:
        return len(self._incidence[vertex_id])

    def point_valence(self, point: Point) -> int:
        return self.valence(point.vertex) if point.is_vertex else 2

    def edge_other_end(self, edge_id: str, vertex_id: str) -> str:
        e = self._edges[edge_id]
        if e.u == vertex_id:
            return e.v
        if e.v == vertex_id:
            return e.u
        raise InvalidInput(f"vertex {vertex_id} not an endpoint of {edge_id}")

    def neighbors(self, vertex_id: str) -> tuple[tuple[str, str], ...]:
        """(edge id, opposite vertex) pairs; a loop yields the vertex itself twice."""
        out = []
        for eid, end in self._incidence[vertex_id]:
            e = self._edges[eid]
            out.append((eid, e.v if end == 0 else e.u))
        return tuple(out)

    def edge_multiplicity(self, u: str, v: str) -> int:
        return sum(1 for e in self._edges.values() if {e.u, e.v} == {u, v})

    @property
    def has_self_loops(self) -> bool:
        return any(e.is_loop for e in self._edges.values())

    def is_uniform(self) -> bool:
        lengths = {e.length for e in self._edges.values()}
        return len(lengths) <= 1

    def uniform_length(self) -> Fraction:
        lengths = {e.length for e in self._edges.values()}
        if len(lengths) != 1:
            from .errors import NonUniformModel

            raise NonUniformModel("model edges do not all have the same length")
        return next(iter(lengths))

    # -- connectivity and genus ------------------------------------------

    def component_vertex_sets(self) -> list[frozenset[str]]:
        seen: set[str] = set()
        comps = []
        for start in self._weights:
            if start in seen:
                continue
            stack = [start]
            comp = {start}
            seen.add(start)
            while stack:
                x = stack.pop()
                for _, y in self.neighbors(x):
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.component_vertex_sets()) <= 1

    def genus(self) -> int:
        """First Betti number: |E| - |V| + number of connected components."""
        return len(self._edges) - len(self._weights) + len(self.component_vertex_sets())

    def weighted_genus(self) -> int:
        """Genus with vertex weights: first Betti number plus the total weight."""
        return self.genus() + sum(self._weights.values())

    # -- point helpers ----------------------------------------------------

    def validate_point(self, point: Point) -> Point:
        if point.is_vertex:
            if point.vertex not in self._weights:
                raise InvalidInput(f"unknown vertex {point.vertex!r}")
            return point
        if point.edge not in self._edges:
            raise InvalidInput(f"unknown edge {point.edge!r}")
        if not (0 < point.offset < self._edges[point.edge].length):
            raise InvalidInput(
                f"offset {point.offset} not interior to edge {point.edge!r}"
            )
        return point

    def loopless(self) -> "Refinement":
        """Split every self-loop through a fresh midpoint vertex.

        Returns the identity refinement when the graph has no self-loops.
        """
        if not self.has_self_loops:
            return Refinement.identity(self)
        pieces = {e.id: (2 if e.is_loop else 1) for e in self._edges.values()}
        return split_edges(self, pieces)

    def __repr__(self) -> str:
        return f"MetricGraph(|V|={len(self._weights)}, |E|={len(self._edges)}, g={self.genus()})"


def build_graph(
    vertices: Iterable[str | tuple[str, int]],
    edges: Iterable[tuple[str, str, str, RationalLike]],
) -> MetricGraph:
    """Validate and assemble a metric graph.

    vertices: ids, or (id, weight) pairs; edges: (id, from, to, length) with
    positive rational length. Raises DuplicateId, NonPositiveLength, or
    DanglingEndpoint on bad input.
    """
    weights: dict[str, int] = {}
    for spec in vertices:
        vid, w = spec if isinstance(spec, tuple) else (spec, 0)
        if vid in weights:
            raise DuplicateId(f"duplicate vertex id {vid!r}")
        if w < 0:
            raise InvalidInput(f"negative weight at {vid!r}")
        weights[vid] = int(w)
    edge_list: list[EdgeData] = []
    seen_edges: set[str] = set()
    for eid, u, v, raw_len in edges:
        if eid in seen_edges:
            raise DuplicateId(f"duplicate edge id {eid!r}")
        seen_edges.add(eid)
        if u not in weights or v not in weights:
            raise DanglingEndpoint(f"edge {eid!r} references a missing vertex")
        length = as_fraction(raw_len)
        if length <= 0:
            raise NonPositiveLength(f"edge {eid!r} has non-positive length {length}")
        edge_list.append(EdgeData(eid, u, v, length))
    return MetricGraph(weights, edge_list)


@dataclass(frozen=True)
class Subgraph:
    """A closed subgraph of a model: every included edge has both endpoints included."""

    graph: MetricGraph
    vertices: frozenset[str]
    edges: frozenset[str]

    def __post_init__(self):
        for vid in self.vertices:
            if not self.graph.has_vertex(vid):
                raise InvalidInput(f"unknown vertex {vid!r} in subgraph")
        for eid in self.edges:
            e = self.graph.edge(eid)
            if e.u not in self.vertices or e.v not in self.vertices:
                raise InvalidInput(f"subgraph not closed: edge {eid!r} leaves it")

    @staticmethod
    def spanned_by(graph: MetricGraph, vertices: Iterable[str]) -> "Subgraph":
        vs = frozenset(vertices)
        es = frozenset(
            e.id for e in (graph.edge(eid) for eid in graph.edge_ids)
            if e.u in vs and e.v in vs
        )
        return Subgraph(graph, vs, es)

    @staticmethod
    def whole(graph: MetricGraph) -> "Subgraph":
        return Subgraph(graph, frozenset(graph.vertex_ids), frozenset(graph.edge_ids))

    def is_whole(self) -> bool:
        g = self.graph
        return len(self.vertices) == len(g.vertex_ids) and len(self.edges) == len(g.edge_ids)

    def boundary_out_degrees(self) -> dict[str, int]:
        """For each subgraph vertex, the number of its half-edges leaving the subgraph."""
        out: dict[str, int] = {}
        for vid in self.vertices:
            missing = sum(1 for eid, _ in self.graph.half_edges(vid) if eid not in self.edges)
            if missing:
                out[vid] = missing
        return out


# ---------------------------------------------------------------------------
# Refinements: models with extra vertices, plus exact point translation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Refinement:
    """A refined model of a base graph together with exact point translation maps.

    ``edge_to_base`` sends each model edge to (base edge, base offset of its
    'from' end, base offset of its 'to' end); the two offsets differ by the
    model edge's length.
    """

    base: MetricGraph
    model: MetricGraph
    vertex_to_base: Mapping[str, Point]
    edge_to_base: Mapping[str, tuple[str, Fraction, Fraction]]

    @staticmethod
    def identity(graph: MetricGraph) -> "Refinement":
        v2b = {v: Point.at_vertex(v) for v in graph.vertex_ids}
        e2b = {
            e: (e, Fraction(0), graph.length(e)) for e in graph.edge_ids
        }
        return Refinement(graph, graph, v2b, e2b)

    def point_to_base(self, point: Point | str) -> Point:
        if isinstance(point, str):
            point = Point.at_vertex(point)
        if point.is_vertex:
            return self.vertex_to_base[point.vertex]
        base_eid, off_from, off_to = self.edge_to_base[point.edge]
        if off_to >= off_from:
            off = off_from + point.offset
        else:
            off = off_from - point.offset
        return Point.on_edge(base_eid, off)

    def point_to_model(self, point: Point) -> Point:
        """Translate a base point into the refined model.

        The point must be a base vertex or land exactly on a model vertex or
        model edge; base vertices survive refinement by construction.
        """
        if point.is_vertex:
            return Point.at_vertex(point.vertex)
        base_eid = point.edge
        target = point.offset
        for model_eid, (beid, off_from, off_to) in self.edge_to_base.items():
            if beid != base_eid:
                continue
            lo, hi = min(off_from, off_to), max(off_from, off_to)
            if lo <= target <= hi:
                e = self.model.edge(model_eid)
                if target == off_from:
                    return Point.at_vertex(e.u)
                if target == off_to:
                    return Point.at_vertex(e.v)
                local = target - off_from if off_to >= off_from else off_from - target
                return Point.on_edge(model_eid, local)
        raise InvalidInput(f"point {point!r} not on base edge {base_eid!r}")

    def then(self, finer: "Refinement") -> "Refinement":
        """Compose with a refinement of this refinement's model."""
        if finer.base is not self.model:
            raise InvalidInput("refinements do not chain")
        v2b = {v: self.point_to_base(p) for v, p in finer.vertex_to_base.items()}
        e2b = {}
        for eid, (mid_eid, off_from, off_to) in finer.edge_to_base.items():
            start = self.point_to_base(Point.on_edge(mid_eid, off_from) if 0 < off_from < self.model.length(mid_eid) else _endpoint_of(self.model, mid_eid, off_from))
            end = self.point_to_base(Point.on_edge(mid_eid, off_to) if 0 < off_to < self.model.length(mid_eid) else _endpoint_of(self.model, mid_eid, off_to))
            # both must land inside a single base edge; take its id from either
            base_eid, b_from, b_to = self.edge_to_base[mid_eid]
            s = _offset_on_base(start, base_eid, self.base)
            t = _offset_on_base(end, base_eid, self.base)
            e2b[eid] = (base_eid, s, t)
        return Refinement(self.base, finer.model, v2b, e2b)


def _endpoint_of(graph: MetricGraph, edge_id: str, offset: Fraction) -> Point:
    e = graph.edge(edge_id)
    if offset == 0:
        return Point.at_vertex(e.u)
    if offset == e.length:
        return Point.at_vertex(e.v)
    return Point.on_edge(edge_id, offset)


def _offset_on_base(point: Point, base_eid: str, base: MetricGraph) -> Fraction:
    if not point.is_vertex:
        if point.edge != base_eid:
            raise InvalidInput("segment escapes its base edge")
        return point.offset
    e = base.edge(base_eid)
    if point.vertex == e.u:
        return Fraction(0)
    if point.vertex == e.v:
        return e.length
    raise InvalidInput("segment endpoint is not on its base edge")


def split_edges(graph: MetricGraph, pieces: Mapping[str, int]) -> Refinement:
    """Split each edge e into pieces[e] equal-length segments (1 keeps it intact).

    New vertices are named "<edge>@<i>/<t>" and carry weight 0; segments are
    named "<edge>#<i>". Ids are deterministic so reports are reproducible.
    """
    weights = {v: graph.weight(v) for v in graph.vertex_ids}
    edges: list[EdgeData] = []
    v2b: dict[str, Point] = {v: Point.at_vertex(v) for v in graph.vertex_ids}
    e2b: dict[str, tuple[str, Fraction, Fraction]] = {}
    for eid in graph.edge_ids:
        e = graph.edge(eid)
        t = pieces.get(eid, 1)
        if t < 1:
            raise InvalidInput("piece count must be at least 1")
        if t == 1:
            edges.append(e)
            e2b[eid] = (eid, Fraction(0), e.length)
            continue
        seg_len = e.length / t
        cut_names = [f"{eid}@{i}/{t}" for i in range(1, t)]
        for i, name in enumerate(cut_names, start=1):
            weights[name] = 0
            v2b[name] = Point.on_edge(eid, seg_len * i)
        chain = [e.u, *cut_names, e.v]
        for i in range(t):
            seg_id = f"{eid}#{i + 1}"
            edges.append(EdgeData(seg_id, chain[i], chain[i + 1], seg_len))
            e2b[seg_id] = (eid, seg_len * i, seg_len * (i + 1))
    return Refinement(graph, MetricGraph(weights, edges), v2b, e2b)


def subdivide(graph: MetricGraph, k: int) -> Refinement:
    """Split every edge into k equal parts; genus and the metric are unchanged."""
    if k < 1:
        raise InvalidInput("subdivision factor must be at least 1")
    return split_edges(graph, {e: k for e in graph.edge_ids})


def model_with_breakpoints(graph: MetricGraph, points: Iterable[Point]) -> Refinement:
    """Refine the model so every given point becomes a vertex.

    Vertex points leave the model unchanged; edge points become weight-0
    vertices named "<edge>@<p>/<q>" by their reduced position along the edge.
    """
    by_edge: dict[str, set[Fraction]] = {}
    for p in points:
        graph.validate_point(p)
        if not p.is_vertex:
            by_edge.setdefault(p.edge, set()).add(p.offset)
    if not by_edge:
        return Refinement.identity(graph)
    weights = {v: graph.weight(v) for v in graph.vertex_ids}
    edges: list[EdgeData] = []
    v2b: dict[str, Point] = {v: Point.at_vertex(v) for v in graph.vertex_ids}
    e2b: dict[str, tuple[str, Fraction, Fraction]] = {}
    for eid in graph.edge_ids:
        e = graph.edge(eid)
        if eid not in by_edge:
            edges.append(e)
            e2b[eid] = (eid, Fraction(0), e.length)
            continue
        offsets = sorted(by_edge[eid])
        names = []
        for off in offsets:
            pos = off / e.length
            name = f"{eid}@{pos.numerator}/{pos.denominator}"
            names.append(name)
            weights[name] = 0
            v2b[name] = Point.on_edge(eid, off)
        chain = [e.u, *names, e.v]
        bounds = [Fraction(0), *offsets, e.length]
        for i in range(len(chain) - 1):
            seg_id = f"{eid}#{i + 1}"
            edges.append(
                EdgeData(seg_id, chain[i], chain[i + 1], bounds[i + 1] - bounds[i])
            )
            e2b[seg_id] = (eid, bounds[i], bounds[i + 1])
    return Refinement(graph, MetricGraph(weights, edges), v2b, e2b)


def uniform_model(graph: MetricGraph, k: int = 1) -> Refinement:
    """Refine to a model in which all edges share one length.

    The common length is gcd(edge lengths) / k, so for a graph whose edges
    already share a length this is exactly ``subdivide(graph, k)``.
    """
    if k < 1:
        raise InvalidInput("subdivision factor must be at least 1")
    unit = rational_gcd(graph.length(e) for e in graph.edge_ids) / k
    pieces = {}
    for eid in graph.edge_ids:
        count = graph.length(eid) / unit
        pieces[eid] = int(count)
    return split_edges(graph, pieces)


# ---------------------------------------------------------------------------
# Blocks, bridges, simple cycles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockDecomposition:
    """Biconnected components of a multigraph, as frozensets of edge ids."""

    blocks: tuple[frozenset[str], ...]
    bridges: frozenset[str]
    _edge_block: Mapping[str, int]
    _vertex_blocks: Mapping[str, tuple[int, ...]]

    def block_of_edge(self, edge_id: str) -> frozenset[str]:
        return self.blocks[self._edge_block[edge_id]]

    def blocks_at_vertex(self, vertex_id: str) -> tuple[frozenset[str], ...]:
        return tuple(self.blocks[i] for i in self._vertex_blocks.get(vertex_id, ()))


def _block_decomposition(
    graph: MetricGraph, vertices: frozenset[str], edges: frozenset[str]
) -> BlockDecomposition:
    # Iterative Hopcroft-Tarjan over the multigraph; parallel edges are
    # distinct, so a doubled edge closes a cycle and lands in a real block.
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in vertices}
    loops: list[str] = []
    for eid in sorted(edges):
        e = graph.edge(eid)
        if e.is_loop:
            loops.append(eid)
            continue
        adj[e.u].append((eid, e.v))
        adj[e.v].append((eid, e.u))

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    blocks: list[frozenset[str]] = []
    edge_stack: list[str] = []
    counter = 0

    for root in sorted(vertices):
        if root in index:
            continue
        stack = [(root, None, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for eid, w in it:
                if eid == in_edge:
                    continue
                if w not in index:
                    edge_stack.append(eid)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                if index[w] < index[v]:
                    edge_stack.append(eid)
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    group = []
                    while edge_stack:
                        group.append(edge_stack.pop())
                        if group[-1] == in_edge:
                            break
                    blocks.append(frozenset(group))
    for eid in loops:
        blocks.append(frozenset({eid}))

    edge_block = {}
    vertex_blocks: dict[str, list[int]] = {}
    for i, blk in enumerate(blocks):
        for eid in blk:
            edge_block[eid] = i
            for vid in graph.edge(eid).endpoints():
                lst = vertex_blocks.setdefault(vid, [])
                if i not in lst:
                    lst.append(i)
    bridges = frozenset(
        next(iter(blk))
        for blk in blocks
        if len(blk) == 1 and not graph.edge(next(iter(blk))).is_loop
    )
    return BlockDecomposition(
        tuple(blocks),
        bridges,
        edge_block,
        {v: tuple(bs) for v, bs in vertex_blocks.items()},
    )


def blocks_and_bridges(target: MetricGraph | Subgraph) -> BlockDecomposition:
    """Biconnected components of the underlying multigraph.

    An edge is a bridge exactly when its block consists of that single
    non-loop edge; parallel edges always share a non-bridge block.
    """
    if isinstance(target, Subgraph):
        return _block_decomposition(target.graph, target.vertices, target.edges)
    return _block_decomposition(
        target, frozenset(target.vertex_ids), frozenset(target.edge_ids)
    )


def _block_has_cycle(graph: MetricGraph, block: frozenset[str]) -> bool:
    if len(block) >= 2:
        return True
    return graph.edge(next(iter(block))).is_loop


def vertex_on_simple_cycle(subgraph: Subgraph, vertex_id: str) -> bool:
    """True when the vertex lies on a simple cycle of the closed subgraph."""
    if vertex_id not in subgraph.vertices:
        return False
    decomp = blocks_and_bridges(subgraph)
    return any(
        _block_has_cycle(subgraph.graph, blk) for blk in decomp.blocks_at_vertex(vertex_id)
    )


def edge_on_simple_cycle(subgraph: Subgraph, edge_id: str) -> bool:
    """True when the edge lies on a simple cycle, i.e. it is not a bridge."""
    if edge_id not in subgraph.edges:
        return False
    decomp = blocks_and_bridges(subgraph)
    return _block_has_cycle(subgraph.graph, decomp.block_of_edge(edge_id))


def cycle_supports(
    graph: MetricGraph,
    vertices: frozenset[str] | None = None,
    edges: frozenset[str] | None = None,
    cap: int = 100_000,
) -> list[frozenset[str]]:
    """Vertex sets of the simple cycles of (a subgraph of) the multigraph.

    Loops give singletons and parallel pairs give 2-sets; longer cycles are
    enumerated as vertex-simple closed walks. Distinct parallel-edge choices
    along one vertex cycle collapse to the same support.
    """
    vs = vertices if vertices is not None else frozenset(graph.vertex_ids)
    es = edges if edges is not None else frozenset(graph.edge_ids)
    supports: set[frozenset[str]] = set()
    simple_adj: dict[str, set[str]] = {v: set() for v in vs}
    pair_counts: dict[frozenset[str], int] = {}
    for eid in es:
        e = graph.edge(eid)
        if e.is_loop:
            supports.add(frozenset({e.u}))
            continue
        simple_adj[e.u].add(e.v)
        simple_adj[e.v].add(e.u)
        pair_counts[frozenset({e.u, e.v})] = pair_counts.get(frozenset({e.u, e.v}), 0) + 1
    for pair, count in pair_counts.items():
        if count >= 2:
            supports.add(pair)

    order = {v: i for i, v in enumerate(sorted(vs))}
    budget = cap

    def extend(start: str, path: list[str], on_path: set[str]):
        nonlocal budget
        if budget <= 0:
            raise InvalidInput("cycle enumeration budget exceeded")
        budget -= 1
        tail = path[-1]
        for nxt in sorted(simple_adj[tail]):
            if nxt == start and len(path) >= 3:
                if order[path[1]] < order[tail]:  # one orientation per cycle
                    supports.add(frozenset(path))
            elif nxt not in on_path and order[nxt] > order[start]:
                path.append(nxt)
                on_path.add(nxt)
                extend(start, path, on_path)
                on_path.remove(nxt)
                path.pop()

    for start in sorted(vs, key=order.get):
        extend(start, [start], {start})
    return sorted(supports, key=lambda s: sorted(s))


def find_two_disjoint_cycles(
    graph: MetricGraph,
    vertices: frozenset[str] | None = None,
    edges: frozenset[str] | None = None,
) -> tuple[frozenset[str], frozenset[str]] | None:
    """A pair of vertex-disjoint simple cycles, or None if no such pair exists."""
    supports = cycle_supports(graph, vertices, edges)
    for i, a in enumerate(supports):
        for b in supports[i + 1 :]:
            if not (a & b):
                return a, b
    return None


def has_two_disjoint_cycles(graph: MetricGraph) -> bool:
    return find_two_disjoint_cycles(graph) is not None


# ---------------------------------------------------------------------------
# Distances and metric components
# ---------------------------------------------------------------------------


def vertex_distances(
    graph: MetricGraph, sources: Mapping[str, Fraction]
) -> dict[str, Fraction]:
    """Exact multi-source Dijkstra over model vertices (Fraction arithmetic)."""
    dist: dict[str, Fraction] = {}
    heap: list[tuple[Fraction, str]] = []
    for v, d in sources.items():
        heapq.heappush(heap, (d, v))
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        for eid, w in graph.neighbors(v):
            nd = d + graph.length(eid)
            if w not in dist:
                heapq.heappush(heap, (nd, w))
    return dist


@dataclass(frozen=True)
class MetricComponent:
    """A connected component of the metric graph minus a finite vertex set."""

    edges: frozenset[str]
    inner_vertices: frozenset[str]


def metric_components(
    graph: MetricGraph, removed: frozenset[str]
) -> tuple[list[MetricComponent], dict[str, list[tuple[int, str, int]]]]:
    """Components of the metric space after deleting the given model vertices.

    Returns the components and, for each removed vertex, the list of its
    tangent directions as (component index, edge id, end); an edge with both
    endpoints removed is its own component reachable from both sides.
    """
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for eid in graph.edge_ids:
        parent.setdefault("e:" + eid, "e:" + eid)
    for vid in graph.vertex_ids:
        if vid not in removed:
            parent.setdefault("v:" + vid, "v:" + vid)
    for eid in graph.edge_ids:
        e = graph.edge(eid)
        for vid in e.endpoints():
            if vid not in removed:
                union("e:" + eid, "v:" + vid)

    roots: dict[str, int] = {}
    comp_edges: dict[int, set[str]] = {}
    comp_verts: dict[int, set[str]] = {}
    for key in parent:
        r = find(key)
        idx = roots.setdefault(r, len(roots))
        if key.startswith("e:"):
            comp_edges.setdefault(idx, set()).add(key[2:])
        else:
            comp_verts.setdefault(idx, set()).add(key[2:])
    components = [
        MetricComponent(
            frozenset(comp_edges.get(i, ())), frozenset(comp_verts.get(i, ()))
        )
        for i in range(len(roots))
    ]

    attachments: dict[str, list[tuple[int, str, int]]] = {v: [] for v in removed}
    comp_index = {}
    for i, comp in enumerate(components):
        for eid in comp.edges:
            comp_index[eid] = i
    for vid in removed:
        for eid, end in graph.half_edges(vid):
            attachments[vid].append((comp_index[eid], eid, end))
    return components, attachments


def component_genus(
    graph: MetricGraph, component: MetricComponent, attachments_count: int
) -> int:
    """Genus of the completion of one component of Γ minus finitely many points.

    The completion regains one vertex per tangent direction at a removed
    point, so its vertex count is |inner vertices| + attachment directions.
    """
    n_edges = len(component.edges)
    n_vertices = len(component.inner_vertices) + attachments_count
    if n_edges == 0 and n_vertices == 0:
        return 0
    return n_edges - n_vertices + 1


def genus_after_removal(graph: MetricGraph, points: Iterable[Point]) -> int:
    """Genus of Γ minus a finite point set, by the gluing/cut genus relation.

    g(Γ) = g(Γ\\A) + Σ_{x∈A}(val(x) − 1) + 1 − N rearranged for g(Γ\\A),
    where N counts the components of the complement.
    """
    if not graph.is_connected():
        raise DisconnectedInput("genus_after_removal requires a connected graph")
    pts = [graph.validate_point(p) for p in points]
    if not pts:
        return graph.genus()
    refinement = model_with_breakpoints(graph, pts)
    model = refinement.model
    removed = frozenset(
        p.vertex if p.is_vertex else refinement.point_to_model(p).vertex for p in pts
    )
    components, _ = metric_components(model, removed)
    val_sum = sum(model.valence(v) - 1 for v in removed)
    return graph.genus() - val_sum - 1 + len(components)


def genus_after_removal_direct(graph: MetricGraph, points: Iterable[Point]) -> int:
    """Independent computation of the same genus by summing over cut components."""
    pts = [graph.validate_point(p) for p in points]
    if not pts:
        return graph.genus()
    refinement = model_with_breakpoints(graph, pts)
    model = refinement.model
    removed = frozenset(
        p.vertex if p.is_vertex else refinement.point_to_model(p).vertex for p in pts
    )
    components, attachments = metric_components(model, removed)
    counts = [0] * len(components)
    for dirs in attachments.values():
        for idx, _, _ in dirs:
            counts[idx] += 1
    return sum(
        component_genus(model, comp, counts[i]) for i, comp in enumerate(components)
    )
