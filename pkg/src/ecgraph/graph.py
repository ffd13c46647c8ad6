"""Edge-colored directed graphs and their purely combinatorial invariants.

An edge points from its source to its range.  Colors are positive integers;
the Cuntz-Krieger sum relations are imposed per (range vertex, color), so the
only data a coloring carries is, at each vertex, the partition of the incoming
edges by color.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Raised when a graph operation receives inconsistent input."""


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    range: str
    color: int = 1


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class EdgeColoredGraph:
    """A finite directed multigraph with a color on every edge.

    Vertices and edges keep their declaration order; every derived object
    iterates in that order.
    """

    name: str
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _edge_index: Mapping[str, Edge] = field(
        default=None, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_edge_index", {e.id: e for e in self.edges})

    @classmethod
    def build(
        cls,
        name: str,
        vertices: Iterable[str],
        edges: Iterable[tuple] = (),
    ) -> "EdgeColoredGraph":
        """Convenience constructor taking ``(id, source, range[, color])`` tuples."""
        return cls(name, tuple(vertices), tuple(Edge(*e) for e in edges))

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise GraphError(f"no such edge {edge_id}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edge_index

    def has_vertex(self, v: str) -> bool:
        return v in self.vertices

    @property
    def colors(self) -> tuple[int, ...]:
        """Sorted tuple of the colors actually used."""
        return tuple(sorted({e.color for e in self.edges}))

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.range == v)

    def with_name(self, name: str) -> "EdgeColoredGraph":
        return replace(self, name=name)


def validate(g: EdgeColoredGraph) -> ValidationReport:
    problems = []
    seen = set()
    for v in g.vertices:
        if v in seen:
            problems.append(f"duplicate vertex id {v}")
        seen.add(v)
    seen_edges = set()
    for e in g.edges:
        if e.id in seen_edges:
            problems.append(f"duplicate edge id {e.id}")
        seen_edges.add(e.id)
        for end in (e.source, e.range):
            if end not in seen:
                problems.append(f"unknown vertex {end} (edge {e.id})")
        if not isinstance(e.color, int) or isinstance(e.color, bool) or e.color < 1:
            problems.append(f"non-positive color {e.color!r} on edge {e.id}")
    return ValidationReport(tuple(problems))


def check(g: EdgeColoredGraph) -> EdgeColoredGraph:
    report = validate(g)
    if not report.ok:
        raise GraphError("; ".join(report.violations))
    return g


def color_partition(g: EdgeColoredGraph) -> dict[str, dict[int, tuple[str, ...]]]:
    """Per vertex, the incoming edge ids grouped by color (colors ascending)."""
    blocks: dict[str, dict[int, list[str]]] = {v: defaultdict(list) for v in g.vertices}
    for e in g.edges:
        blocks[e.range][e.color].append(e.id)
    return {
        v: {c: tuple(ids) for c, ids in sorted(b.items())} for v, b in blocks.items()
    }


def colors_at(g: EdgeColoredGraph, v: str) -> list[int]:
    return sorted({e.color for e in g.edges if e.range == v})


def monochrome_subgraph(g: EdgeColoredGraph, color: int) -> EdgeColoredGraph:
    """All vertices and exactly the edges of ``color``, recolored to 1."""
    return EdgeColoredGraph(
        g.name,
        g.vertices,
        tuple(replace(e, color=1) for e in g.edges if e.color == color),
    )


def in_star(g: EdgeColoredGraph, v: str) -> EdgeColoredGraph:
    if v not in g.vertices:
        raise GraphError(f"no such vertex {v}")
    return EdgeColoredGraph(g.name, g.vertices, g.in_edges(v))


def reverse_edges(g: EdgeColoredGraph) -> EdgeColoredGraph:
    return EdgeColoredGraph(
        g.name,
        g.vertices,
        tuple(replace(e, source=e.range, range=e.source) for e in g.edges),
    )


def normalize_colors(g: EdgeColoredGraph) -> EdgeColoredGraph:
    """Relabel the used colors order-preservingly onto 1..k (globally)."""
    relabel = {c: i for i, c in enumerate(g.colors, start=1)}
    return EdgeColoredGraph(
        g.name, g.vertices, tuple(replace(e, color=relabel[e.color]) for e in g.edges)
    )


def free_product(
    graphs: Sequence[EdgeColoredGraph],
    shared: Iterable[str],
    name: str | None = None,
) -> EdgeColoredGraph:
    """Glue graphs along a common vertex set.

    Each factor's colors are relabeled order-preservingly into a block of
    integers disjoint from the blocks of the other factors, so no two factors
    share a color.
    """
    shared = list(dict.fromkeys(shared))
    if not graphs:
        raise GraphError("free product of no graphs")
    for g in graphs:
        for v in shared:
            if v not in g.vertices:
                raise GraphError(f"shared vertex {v} missing from {g.name}")
    shared_set = set(shared)
    vertices: list[str] = []
    owner: dict[str, str] = {}
    for g in graphs:
        for v in g.vertices:
            if v in shared_set:
                if v not in vertices:
                    vertices.append(v)
                continue
            if v in owner:
                raise GraphError(f"vertex id collision: {v}")
            owner[v] = g.name
            vertices.append(v)
    edges: list[Edge] = []
    seen: set[str] = set()
    offset = 0
    for g in graphs:
        relabel = {c: offset + i for i, c in enumerate(g.colors, start=1)}
        offset += len(relabel)
        for e in g.edges:
            if e.id in seen:
                raise GraphError(f"edge id collision: {e.id}")
            seen.add(e.id)
            edges.append(replace(e, color=relabel[e.color]))
    if name is None:
        name = "_".join(g.name for g in graphs) if len(graphs) > 1 else graphs[0].name
    return EdgeColoredGraph(name, tuple(vertices), tuple(edges))


def canonical_recoloring(g: EdgeColoredGraph) -> EdgeColoredGraph:
    # at each range vertex, incoming colors map order-preservingly onto 1..m(v)
    relabel = {v: {c: i for i, c in enumerate(colors_at(g, v), start=1)} for v in g.vertices}
    return EdgeColoredGraph(
        g.name,
        g.vertices,
        tuple(replace(e, color=relabel[e.range][e.color]) for e in g.edges),
    )


def coloring_number(g: EdgeColoredGraph) -> int:
    """Maximum number of distinct colors received at a vertex (0 if edgeless)."""
    return max((len(b) for b in color_partition(g).values()), default=0)


def _partition_signature(g: EdgeColoredGraph) -> dict[str, frozenset[frozenset[str]]]:
    return {
        v: frozenset(frozenset(ids) for ids in blocks.values())
        for v, blocks in color_partition(g).items()
    }


def same_underlying(g1: EdgeColoredGraph, g2: EdgeColoredGraph) -> bool:
    strip = lambda g: (
        set(g.vertices),
        {(e.id, e.source, e.range) for e in g.edges},
    )
    return strip(g1) == strip(g2)


def colorings_equivalent(g1: EdgeColoredGraph, g2: EdgeColoredGraph) -> bool:
    """True iff both colorings induce the same per-vertex partition of in-stars.

    Only the identity automorphism is used for the per-vertex graph
    automorphism in the definition of equivalence; permuting parallel edges
    would identify more colorings.
    """
    if not same_underlying(g1, g2):
        raise GraphError("not comparable: underlying graphs differ")
    return _partition_signature(g1) == _partition_signature(g2)
