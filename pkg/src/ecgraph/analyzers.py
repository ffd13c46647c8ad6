"""Structural verdicts read off the colored graph.

Simplicity and non-exactness are obstructions, nuclearity a sufficient test;
none of them claims more than its predicate supports, so the outcomes are
semi-decisions (``unknown`` when nothing fires).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any

import networkx as nx

from .graph import (
    EdgeColoredGraph,
    GraphError,
    canonical_recoloring,
    coloring_number,
    monochrome_subgraph,
    reverse_edges,
)


@dataclass(frozen=True)
class Verdict:
    property: str
    outcome: str  # pass | fail | not_exact | nuclear | unknown
    witness: Any = None
    reason: str = ""
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.outcome in ("pass", "not_exact", "nuclear")


def in_degree_table(g: EdgeColoredGraph) -> dict[tuple[str, int], int]:
    table: dict[tuple[str, int], int] = defaultdict(int)
    for e in g.edges:
        table[e.range, e.color] += 1
    order = {v: i for i, v in enumerate(g.vertices)}
    return dict(sorted(table.items(), key=lambda kv: (order[kv[0][0]], kv[0][1])))


def is_row_finite(g: EdgeColoredGraph) -> Verdict:
    # a finite graph receives finitely many edges of each color everywhere
    return Verdict(
        "row_finite", "pass", reason="finite_graph", details={"in_degrees": in_degree_table(g)}
    )


def _reversed_digraph(g: EdgeColoredGraph) -> nx.MultiDiGraph:
    """The graph in the convention where sums run over edges leaving a vertex."""
    d = nx.MultiDiGraph()
    d.add_nodes_from(g.vertices)
    for e in g.edges:
        d.add_edge(e.range, e.source, key=e.id)
    return d


def _hereditary_saturated_closure(d: nx.MultiDiGraph, start: str) -> set[str]:
    closure = {start}
    changed = True
    while changed:
        changed = False
        for v in list(closure):
            for w in d.successors(v):
                if w not in closure:
                    closure.add(w)
                    changed = True
        for v in d.nodes:
            if v in closure:
                continue
            succ = set(d.successors(v))
            if succ and succ <= closure:
                closure.add(v)
                changed = True
    return closure


def monochrome_simple(g1: EdgeColoredGraph) -> Verdict:
    """Simplicity of a 1-colored finite graph algebra.

    Uses the standard criterion after reversing edges into the out-edge
    convention: every cycle has an exit, and the only hereditary saturated
    vertex sets are empty or everything.  In the range-summed convention used
    here an "exit" is an edge entering the cycle from outside.
    """
    if coloring_number(g1) > 1:
        raise GraphError("expected 1-colored graph")
    d = _reversed_digraph(g1)
    order = {v: i for i, v in enumerate(g1.vertices)}
    for comp in sorted(nx.strongly_connected_components(d), key=lambda c: min(order[v] for v in c)):
        sub = d.subgraph(comp)
        if sub.number_of_edges() == 0:
            continue
        if all(d.out_degree(v) == 1 for v in comp):
            cycle = sorted((k for _, _, k in sub.edges(keys=True)), key=lambda k: g1.edges.index(g1.edge(k)))
            return Verdict(
                "monochrome_simple",
                "fail",
                {"kind": "cycle_without_exit", "edges": cycle},
                "cycle_without_exit",
            )
    for v in g1.vertices:
        closure = _hereditary_saturated_closure(d, v)
        if len(closure) < len(g1.vertices):
            return Verdict(
                "monochrome_simple",
                "fail",
                {"kind": "proper_hereditary_saturated_set",
                 "vertices": [w for w in g1.vertices if w in closure]},
                "not_cofinal",
            )
    return Verdict("monochrome_simple", "pass", reason="cofinal_and_exits")


def pair_colors(g: EdgeColoredGraph) -> dict[tuple[str, str], dict[int, list[str]]]:
    """Edges grouped by (source, range) and then by color, declaration order."""
    out: dict[tuple[str, str], dict[int, list[str]]] = {}
    for e in g.edges:
        out.setdefault((e.source, e.range), {}).setdefault(e.color, []).append(e.id)
    return out


def simplicity_necessary(g: EdgeColoredGraph) -> Verdict:
    """Necessary conditions for simplicity; a pass does not prove simplicity."""
    for (src, rng), by_color in pair_colors(g).items():
        if len(by_color) > 1:
            return Verdict(
                "simplicity_necessary",
                "fail",
                {"kind": "multicolored_pair", "source": src, "range": rng,
                 "colors": sorted(by_color),
                 "edges": [e for c in sorted(by_color) for e in by_color[c]]},
                "pair_not_1_colorable",
            )
    for c in g.colors:
        sub = monochrome_simple(monochrome_subgraph(g, c))
        if sub.outcome == "fail":
            return Verdict(
                "simplicity_necessary",
                "fail",
                {"kind": "monochrome_factor_not_simple", "color": c, "factor": sub.witness},
                "factor_not_simple",
            )
    return Verdict("simplicity_necessary", "pass", reason="necessary_conditions_hold_not_sufficient")


def nonexact_witnesses(g: EdgeColoredGraph) -> Verdict:
    pairs = pair_colors(g)
    for v in g.vertices:
        by_color = pairs.get((v, v), {})
        if len(by_color) >= 2:
            return Verdict(
                "exactness",
                "not_exact",
                {"kind": "bicolored_loops", "vertex": v, "colors": sorted(by_color),
                 "edges": [e for c in sorted(by_color) for e in by_color[c]]},
                "one_vertex_subgraph_not_1_colorable",
            )
    for (src, rng), by_color in pairs.items():
        if src != rng and len(by_color) >= 3:
            return Verdict(
                "exactness",
                "not_exact",
                {"kind": "three_colored_pair", "source": src, "range": rng,
                 "colors": sorted(by_color),
                 "edges": [e for c in sorted(by_color) for e in by_color[c]]},
                "pair_subgraph_not_2_colorable",
            )
    return Verdict("exactness", "unknown", reason="no_obstruction_found")


def nuclearity_heuristic(g: EdgeColoredGraph) -> Verdict:
    if coloring_number(g) <= 1:
        return Verdict("nuclearity", "nuclear", {"test": "one_colorable"}, "graph_algebra")
    if coloring_number(canonical_recoloring(reverse_edges(g))) <= 1:
        return Verdict("nuclearity", "nuclear", {"test": "edge_reversal"}, "reversed_graph_one_colorable")
    return Verdict("nuclearity", "unknown", reason="no_positive_test_applies")
