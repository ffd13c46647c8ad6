"""K-groups of edge-colored graph algebras.

A 1-colored graph is handled by the vertex-matrix formula: with
B(e_v) = sum over edges e into v of e_{s(e)}, minus e_v (one column per
vertex that receives an edge), K0 = coker B and K1 = ker B.

An m-colored graph is split into its monochrome fibers and the algebra is
rebuilt as an iterated amalgamated free product over the vertex projections.
Each step uses the reduced six-term sequence

    0 -> K1(A) + K1(B) -> K1(A *_P B) -> Z^V --alpha--> K0(A) + K0(B) -> K0(A *_P B) -> 0

which is exact because K1 of the vertex algebra vanishes.  K1 of the
product is an extension of ker(alpha) by K1(A) + K1(B); ker(alpha) is a
subgroup of the free group Z^V, hence free, so the extension splits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import (
    FgAbelianGroup,
    IntMatrix,
    PresentedGroup,
    block_diagonal,
    hom_kernel_cokernel,
    preimage_lattice,
)
from .graph import EdgeColoredGraph, GraphError, coloring_number, monochrome_subgraph


@dataclass(frozen=True)
class FoldStep:
    """Matrices behind one application of the two-factor sequence."""

    color: int
    alpha: IntMatrix
    target: PresentedGroup
    kernel_basis: IntMatrix
    k1_inherited: FgAbelianGroup
    cokernel: PresentedGroup


@dataclass(frozen=True)
class KPair:
    """K0 in canonical coordinates with the class of every vertex projection, and K1."""

    k0: PresentedGroup
    k1: FgAbelianGroup
    vertex_classes: dict[str, tuple[int, ...]]
    steps: tuple[FoldStep, ...] = field(default=(), compare=False)

    @property
    def k0_group(self) -> FgAbelianGroup:
        return self.k0.canonical

    def invariants(self) -> tuple[FgAbelianGroup, FgAbelianGroup]:
        return self.k0_group, self.k1

    def report(self) -> dict:
        return {
            "k0": self.k0_group.descriptor(),
            "k1": self.k1.descriptor(),
            "vertex_classes": {v: list(c) for v, c in self.vertex_classes.items()},
        }


def _canonicalize(coker: PresentedGroup, vectors: dict[str, list[int]]) -> tuple[PresentedGroup, dict]:
    group = coker.canonical
    classes = {v: coker.class_of(x) for v, x in vectors.items()}
    return PresentedGroup.canonical_form(group), classes


def vertex_matrix(g: EdgeColoredGraph) -> IntMatrix:
    """The map Z^{receiving vertices} -> Z^V whose cokernel is K0."""
    index = {v: i for i, v in enumerate(g.vertices)}
    cols = []
    for v in g.vertices:
        incoming = g.in_edges(v)
        if not incoming:
            continue
        col = [0] * len(g.vertices)
        for e in incoming:
            col[index[e.source]] += 1
        col[index[v]] -= 1
        cols.append(col)
    return IntMatrix.from_columns(len(g.vertices), cols)


def k_one_colored(g: EdgeColoredGraph) -> KPair:
    if coloring_number(g) > 1:
        raise GraphError("expected 1-colored graph")
    n = len(g.vertices)
    B = vertex_matrix(g)
    coker = PresentedGroup(B)
    k1 = FgAbelianGroup(B.cols - coker.smith.rank)
    basis = {v: [int(i == j) for j in range(n)] for i, v in enumerate(g.vertices)}
    k0, classes = _canonicalize(coker, basis)
    return KPair(k0, k1, classes)


def alpha_matrix(
    vertices: list[str], first: KPair, second: KPair
) -> IntMatrix:
    """Matrix of Z^V -> K0(first) + K0(second), stacked canonical coordinates.

    The second factor enters with a minus sign so that the cokernel identifies
    the two copies of each vertex projection; group invariants do not depend on
    this sign.
    """
    for k in (first, second):
        if set(k.vertex_classes) != set(vertices):
            raise GraphError("vertex set mismatch between factors")
    cols = [
        list(first.vertex_classes[v]) + [-x for x in second.vertex_classes[v]]
        for v in vertices
    ]
    return IntMatrix.from_columns(first.k0.ambient + second.k0.ambient, cols)


def k_two_factor(first: KPair, second: KPair, vertices: list[str], color: int = 0) -> KPair:
    vertices = list(vertices)
    alpha = alpha_matrix(vertices, first, second)
    target = PresentedGroup(block_diagonal(first.k0.relations, second.k0.relations))
    ker, coker = hom_kernel_cokernel(PresentedGroup.free(len(vertices)), target, alpha)
    # ker(alpha) sits inside Z^V, so it is free and the K1 extension splits
    assert not ker.torsion
    inherited = first.k1 + second.k1
    k1 = inherited + ker
    pad = [0] * second.k0.ambient
    k0, classes = _canonicalize(
        coker, {v: list(first.vertex_classes[v]) + pad for v in vertices}
    )
    step = FoldStep(
        color, alpha, target, preimage_lattice(alpha, target), inherited, coker
    )
    return KPair(k0, k1, classes, first.steps + second.steps + (step,))


def k_edge_colored(g: EdgeColoredGraph, colors: list[int] | None = None) -> KPair:
    """Fold the two-factor sequence over the monochrome fibers in color order.

    ``colors`` may give a different fold order (a permutation of the used colors).
    """
    used = list(g.colors)
    if colors is None:
        colors = used
    elif sorted(colors) != used:
        raise GraphError(f"fold order {colors} is not a permutation of {used}")
    n = len(g.vertices)
    if not colors:
        basis = {v: tuple(int(i == j) for j in range(n)) for i, v in enumerate(g.vertices)}
        return KPair(PresentedGroup.free(n), FgAbelianGroup(), basis)
    acc = k_one_colored(monochrome_subgraph(g, colors[0]))
    for c in colors[1:]:
        acc = k_two_factor(acc, k_one_colored(monochrome_subgraph(g, c)), list(g.vertices), c)
    return acc
