"""Shared fixtures loaders, random generators and independent oracles."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from ecgraph.abelian import IntMatrix, determinant
from ecgraph.graph import Edge, EdgeColoredGraph
from ecgraph.staralg import StarPolynomial
from ecgraph.syntax import parse_genmap, parse_graph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GRAPH_FILES = sorted(FIXTURES.glob("*.ecg"))


def load(name: str) -> EdgeColoredGraph:
    path = FIXTURES / f"{name}.ecg"
    return parse_graph(path.read_text(), str(path))


def load_map(name: str, source: str, target: str):
    path = FIXTURES / f"{name}.hom"
    return parse_genmap(path.read_text(), load(source), load(target), str(path))


# random graphs


def random_graph(rng: random.Random, max_vertices=4, max_edges=6, max_color=3) -> EdgeColoredGraph:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = tuple(
        Edge(f"e{j}", rng.choice(vs), rng.choice(vs), rng.randint(1, max_color))
        for j in range(rng.randint(0, max_edges))
    )
    return EdgeColoredGraph("R", tuple(vs), edges)


@st.composite
def graphs(draw, max_vertices=4, max_edges=6, max_color=3, min_edges=0):
    n = draw(st.integers(1, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    m = draw(st.integers(min_edges, max_edges))
    edges = tuple(
        Edge(
            f"e{j}",
            draw(st.sampled_from(vs)),
            draw(st.sampled_from(vs)),
            draw(st.integers(1, max_color)),
        )
        for j in range(m)
    )
    return EdgeColoredGraph("G", tuple(vs), edges)


def letters(g: EdgeColoredGraph) -> list[tuple[str, str]]:
    out = [("p", v) for v in g.vertices]
    for e in g.edges:
        out += [("s", e.id), ("t", e.id)]
    return out


def random_poly(rng: random.Random, g: EdgeColoredGraph, max_terms=3, max_len=4) -> StarPolynomial:
    alphabet = letters(g)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_len)))
        terms[w] = terms.get(w, 0) + rng.choice([-2, -1, 1, 1, 2, 3])
    return StarPolynomial(g, terms)


@st.composite
def polys(draw, g: EdgeColoredGraph, max_terms=3, max_len=4):
    alphabet = letters(g)
    terms = draw(
        st.dictionaries(
            st.lists(st.sampled_from(alphabet), min_size=1, max_size=max_len).map(tuple),
            st.integers(-3, 3),
            max_size=max_terms,
        )
    )
    return StarPolynomial(g, terms)


# oracles


def brute_coloring_number(g: EdgeColoredGraph) -> int:
    """Least k admitting h: E -> [k] with, at every vertex, the same partition of
    incoming edges as the given coloring (a per-vertex relabeling)."""
    if not g.edges:
        return 0
    E = list(g.edges)
    for k in range(1, len(E) + 1):
        for h in itertools.product(range(k), repeat=len(E)):
            ok = True
            for a, b in itertools.combinations(range(len(E)), 2):
                if E[a].range == E[b].range and (E[a].color == E[b].color) != (h[a] == h[b]):
                    ok = False
                    break
            if ok:
                return k
    raise AssertionError("unreachable")


def _minors_gcd(rows: list[list[int]], k: int) -> int:
    m, n = len(rows), len(rows[0]) if rows else 0
    g = 0
    for ri in itertools.combinations(range(m), k):
        for ci in itertools.combinations(range(n), k):
            sub = IntMatrix.from_rows([[rows[i][j] for j in ci] for i in ri])
            g = math.gcd(g, determinant(sub))
    return g


def determinantal_invariants(rows: list[list[int]], ambient: int) -> tuple[int, list[int]]:
    """Cokernel of the column map of ``rows`` (ambient = number of rows) from
    gcds of k x k minors: rank and invariant factors > 1."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    prev, factors = 1, []
    for k in range(1, min(m, n) + 1):
        d = _minors_gcd(rows, k)
        if d == 0:
            break
        factors.append(d // prev)
        prev = d
    return ambient - len(factors), [d for d in factors if d > 1]


def enumerated_torsion_counts(rows: list[list[int]], order: int) -> dict[int, int]:
    """For a finite cokernel of known order N, enumerate (Z/N)^m modulo the
    image and count, for each k | N, the elements x with k x = 0."""
    m = len(rows)
    N = order
    gens = [tuple(rows[i][j] % N for i in range(m)) for j in range(len(rows[0]))]
    H = {tuple([0] * m)}
    frontier = list(H)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                s = tuple((a + b) % N for a, b in zip(h, g))
                if s not in H:
                    H.add(s)
                    nxt.append(s)
        frontier = nxt
    divisors = [d for d in range(1, N + 1) if N % d == 0]
    counts = dict.fromkeys(divisors, 0)
    for x in itertools.product(range(N), repeat=m):
        order = next(k for k in divisors if tuple(k * a % N for a in x) in H)
        for k in divisors:
            if k % order == 0:
                counts[k] += 1
    return {k: n // len(H) for k, n in counts.items()}


def torsion_counts_from_invariants(torsion: list[int], order: int) -> dict[int, int]:
    return {
        k: math.prod(math.gcd(k, d) for d in torsion)
        for k in range(1, order + 1)
        if order % k == 0
    }


def rational_rank(rows: list[list[int]]) -> int:
    A = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    n = len(A[0]) if A else 0
    while rank < len(A) and col < n:
        piv = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][col]:
                f = A[i][col] / A[rank][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
        col += 1
    return rank
