"""Symbolic *-algebra of an edge-colored Cuntz-Krieger family.

Elements are rational combinations of words in the letters p(v), S(e) and
S*(e).  Products are read left to right.  S(e) has source projection
p(s(e)) and its range sits under p(r(e)).

Reduction rewrites adjacent letter pairs:

* a pair whose inner endpoints disagree (e.g. S(e) S(f) with s(e) != r(f))
  is zero;
* a projection next to a compatible letter is absorbed;
* S*(e) S(f) for edges of one color is p(s(e)) if e == f and zero otherwise
  (for different colors the pair is left alone);
* for each vertex v and color i that v receives, the last declared color-i
  edge d into v is *designated*, and S(d) S*(d) is replaced by
  p(v) minus the sum of S(e) S*(e) over the other color-i edges e into v.

Every rule lowers (word length, number of designated pairs), so reduction
terminates.  For a graph whose coloring is equivalent to a 1-coloring, the
normal words form a basis, so a nonzero normal form refutes an equality.  For
genuinely multicolored graphs that independence is not known, and equality is
only a semi-decision.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .graph import Edge, EdgeColoredGraph, GraphError, check, coloring_number

Letter = tuple[str, str]  # ("p", vertex) | ("s", edge) | ("t", edge), "t" is S*
Word = tuple[Letter, ...]

_KIND_ORDER = {"p": 0, "s": 1, "t": 2}
_STAR = {"p": "p", "s": "t", "t": "s"}


def word_key(w: Word):
    return (len(w), [(_KIND_ORDER[k], x) for k, x in w])


def format_letter(letter: Letter) -> str:
    kind, x = letter
    return {"p": "p({})", "s": "S({})", "t": "S*({})"}[kind].format(x)


def format_word(w: Word) -> str:
    return " ".join(format_letter(a) for a in w)


class Rules:
    """The rewrite system attached to one graph."""

    def __init__(self, g: EdgeColoredGraph):
        self.graph = g
        self.edges: dict[str, Edge] = {e.id: e for e in g.edges}
        self.vertices = frozenset(g.vertices)
        # designated edge -> (range vertex, other edges of its color into that vertex)
        groups: dict[tuple[str, int], list[str]] = defaultdict(list)
        for e in g.edges:
            groups[e.range, e.color].append(e.id)
        self.designated: dict[str, tuple[str, tuple[str, ...]]] = {}
        for (v, _), ids in groups.items():
            self.designated[ids[-1]] = (v, tuple(ids[:-1]))
        self.monochrome = coloring_number(g) <= 1
        self._cache: dict[Word, dict[Word, int]] = {}

    def check_letter(self, letter: Letter) -> None:
        kind, x = letter
        if kind == "p":
            if x not in self.vertices:
                raise GraphError(f"no such vertex {x}")
        elif kind in ("s", "t"):
            if x not in self.edges:
                raise GraphError(f"no such edge {x}")
        else:
            raise GraphError(f"bad letter kind {kind!r}")

    def rng(self, letter: Letter) -> str:
        kind, x = letter
        if kind == "p":
            return x
        e = self.edges[x]
        return e.range if kind == "s" else e.source

    def src(self, letter: Letter) -> str:
        kind, x = letter
        if kind == "p":
            return x
        e = self.edges[x]
        return e.source if kind == "s" else e.range

    def designated_pairs(self, w: Word) -> int:
        return sum(
            1
            for a, b in zip(w, w[1:])
            if a[0] == "s" and b == ("t", a[1]) and a[1] in self.designated
        )

    def apply(self, w: Word, i: int) -> list[tuple[Word, int]] | None:
        """Rewrite the pair w[i], w[i+1]; None if no rule applies there."""
        a, b = w[i], w[i + 1]
        head, tail = w[:i], w[i + 2:]
        if self.src(a) != self.rng(b):
            return []
        if a[0] == "p":
            return [(head + (b,) + tail, 1)]
        if b[0] == "p":
            return [(head + (a,) + tail, 1)]
        if a[0] == "t" and b[0] == "s":
            e, f = self.edges[a[1]], self.edges[b[1]]
            if e.color != f.color:
                return None
            if e.id == f.id:
                return [(head + (("p", e.source),) + tail, 1)]
            return []
        if a[0] == "s" and b == ("t", a[1]) and a[1] in self.designated:
            v, others = self.designated[a[1]]
            out = [(head + (("p", v),) + tail, 1)]
            out += [(head + (("s", e), ("t", e)) + tail, -1) for e in others]
            return out
        return None

    def redexes(self, w: Word) -> list[int]:
        return [i for i in range(len(w) - 1) if self.apply(w, i) is not None]

    def first_redex(self, w: Word) -> int | None:
        for i in range(len(w) - 1):
            if self.apply(w, i) is not None:
                return i
        return None

    def normal(self, w: Word) -> dict[Word, int]:
        """Normal form of a single word (leftmost-first strategy, memoized)."""
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        i = self.first_redex(w)
        if i is None:
            out = {w: 1}
        else:
            acc: dict[Word, int] = defaultdict(int)
            for w2, c in self.apply(w, i):
                for w3, c3 in self.normal(w2).items():
                    acc[w3] += c * c3
            out = {k: v for k, v in acc.items() if v}
        self._cache[w] = out
        return out


@lru_cache(maxsize=64)
def rules_for(g: EdgeColoredGraph) -> Rules:
    return Rules(g)


class StarPolynomial:
    """A finite rational combination of words over a fixed graph.

    Instances are treated as immutable.  Arithmetic does not reduce; call
    ``reduce`` (or the module-level function) for normal forms.
    """

    __slots__ = ("graph", "terms")

    def __init__(self, graph: EdgeColoredGraph, terms: Mapping[Word, Fraction | int] = ()):
        self.graph = graph
        clean: dict[Word, Fraction] = {}
        for w, c in dict(terms).items():
            if not w:
                raise ValueError("the empty word is not an element; use unit()")
            c = Fraction(c)
            if c:
                clean[w] = clean.get(w, Fraction(0)) + c
                if not clean[w]:
                    del clean[w]
        self.terms = dict(sorted(clean.items(), key=lambda t: word_key(t[0])))

    # constructors

    @classmethod
    def letter(cls, graph: EdgeColoredGraph, kind: str, x: str) -> "StarPolynomial":
        rules_for(graph).check_letter((kind, x))
        return cls(graph, {((kind, x),): 1})

    @classmethod
    def p(cls, graph, v):
        return cls.letter(graph, "p", v)

    @classmethod
    def S(cls, graph, e):
        return cls.letter(graph, "s", e)

    @classmethod
    def Sstar(cls, graph, e):
        return cls.letter(graph, "t", e)

    @classmethod
    def unit(cls, graph: EdgeColoredGraph) -> "StarPolynomial":
        return cls(graph, {(("p", v),): 1 for v in graph.vertices})

    @classmethod
    def zero(cls, graph: EdgeColoredGraph) -> "StarPolynomial":
        return cls(graph)

    # arithmetic

    def _same(self, other: "StarPolynomial") -> None:
        if other.graph is not self.graph and other.graph != self.graph:
            raise GraphError("polynomials over different graphs")

    def __add__(self, other):
        self._same(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return StarPolynomial(self.graph, acc)

    def __neg__(self):
        return StarPolynomial(self.graph, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, StarPolynomial):
            self._same(other)
            acc: dict[Word, Fraction] = defaultdict(Fraction)
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    acc[w1 + w2] += c1 * c2
            return StarPolynomial(self.graph, acc)
        c = Fraction(other)
        return StarPolynomial(self.graph, {w: c * x for w, x in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, StarPolynomial):
            return NotImplemented
        return self.graph == other.graph and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def adjoint(self) -> "StarPolynomial":
        return StarPolynomial(
            self.graph,
            {tuple((_STAR[k], x) for k, x in reversed(w)): c for w, c in self.terms.items()},
        )

    def reduce(self) -> "StarPolynomial":
        rules = rules_for(self.graph)
        acc: dict[Word, Fraction] = defaultdict(Fraction)
        for w, c in self.terms.items():
            for w2, c2 in rules.normal(w).items():
                acc[w2] += c * c2
        return StarPolynomial(self.graph, acc)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for w, c in self.terms.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = format_word(w) if mag == 1 else f"{mag} {format_word(w)}"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"StarPolynomial({self.graph.name}: {self})"


def reduce(p: StarPolynomial) -> StarPolynomial:
    return p.reduce()


def adjoint(p: StarPolynomial) -> StarPolynomial:
    return p.adjoint().reduce()


def measure(p: StarPolynomial) -> tuple:
    """Multiset of (length, designated pairs) per word, sorted descending.

    Tuple comparison of these is the multiset ordering, which every rewrite
    step strictly lowers.
    """
    rules = rules_for(p.graph)
    return tuple(sorted(((len(w), rules.designated_pairs(w)) for w in p.terms), reverse=True))


Chooser = Callable[[list[tuple[Word, int]]], tuple[Word, int]]


def rewrite(
    p: StarPolynomial,
    choose: Chooser | None = None,
    trace: Callable[[StarPolynomial], None] | None = None,
) -> StarPolynomial:
    """Reduce one rule application at a time.

    ``choose`` picks the next (word, position) among all current redexes
    (default: the first redex of the first reducible word); ``trace`` sees
    the polynomial after every step.  Slower than ``reduce``; meant for
    checking the rewrite system itself.
    """
    rules = rules_for(p.graph)
    terms = dict(p.terms)
    while True:
        candidates = [(w, i) for w in terms for i in rules.redexes(w)]
        if not candidates:
            return StarPolynomial(p.graph, terms)
        w, i = choose(candidates) if choose else candidates[0]
        c = terms.pop(w)
        for w2, c2 in rules.apply(w, i):
            terms[w2] = terms.get(w2, 0) + c * c2
            if not terms[w2]:
                del terms[w2]
        if trace:
            trace(StarPolynomial(p.graph, terms))


class Equality(enum.Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    UNPROVED = "unproved"


def equal(p: StarPolynomial, q: StarPolynomial) -> Equality:
    p._same(q)
    residual = (p - q).reduce()
    if residual.is_zero:
        return Equality.PROVED
    return Equality.REFUTED if rules_for(p.graph).monochrome else Equality.UNPROVED


# generator maps and verification


@dataclass
class GeneratorMap:
    """Images of the vertices and edges of ``source`` in the algebra of ``target``."""

    source: EdgeColoredGraph
    target: EdgeColoredGraph
    vertex_images: dict[str, StarPolynomial]
    edge_images: dict[str, StarPolynomial]
    name: str = "map"
    _letter_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        missing = [v for v in self.source.vertices if v not in self.vertex_images]
        missing += [e.id for e in self.source.edges if e.id not in self.edge_images]
        if missing:
            raise GraphError(f"missing assignment for {', '.join(missing)}")
        for img in list(self.vertex_images.values()) + list(self.edge_images.values()):
            img._same(StarPolynomial.zero(self.target))

    @classmethod
    def identity(cls, g: EdgeColoredGraph, name: str = "id") -> "GeneratorMap":
        return cls(
            g,
            g,
            {v: StarPolynomial.p(g, v) for v in g.vertices},
            {e.id: StarPolynomial.S(g, e.id) for e in g.edges},
            name,
        )

    def image(self, letter: Letter) -> StarPolynomial:
        hit = self._letter_cache.get(letter)
        if hit is None:
            kind, x = letter
            if kind == "p":
                hit = self.vertex_images[x]
            elif kind == "s":
                hit = self.edge_images[x]
            else:
                hit = self.edge_images[x].adjoint()
            self._letter_cache[letter] = hit
        return hit

    def apply(self, p: StarPolynomial) -> StarPolynomial:
        """Substitute images into ``p`` (over the source) and reduce in the target."""
        p._same(StarPolynomial.zero(self.source))
        total = StarPolynomial.zero(self.target)
        for w, c in p.terms.items():
            term = self.image(w[0])
            for letter in w[1:]:
                term = (term * self.image(letter)).reduce()
            total = total + term * c
        return total.reduce()

    def reduced_images(self) -> dict[str, StarPolynomial]:
        """Normal form of every generator image, keyed p(v) / S(e)."""
        out = {f"p({v})": self.vertex_images[v].reduce() for v in self.source.vertices}
        out.update({f"S({e.id})": self.edge_images[e.id].reduce() for e in self.source.edges})
        return out

    def then(self, other: "GeneratorMap") -> "GeneratorMap":
        """The composite: first ``self``, then ``other``."""
        return GeneratorMap(
            self.source,
            other.target,
            {v: other.apply(p) for v, p in self.vertex_images.items()},
            {e: other.apply(p) for e, p in self.edge_images.items()},
            f"{other.name}.{self.name}",
        )


@dataclass(frozen=True)
class RelationCheck:
    id: str
    description: str
    status: str  # holds | fails | unproved
    residual: StarPolynomial

    def to_json(self) -> dict:
        return {"relation": self.id, "status": self.status, "residual": str(self.residual)}


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[RelationCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.status == "holds" for c in self.checks)

    def with_status(self, status: str) -> list[RelationCheck]:
        return [c for c in self.checks if c.status == status]

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)

    def __add__(self, other: "VerifyReport") -> "VerifyReport":
        return VerifyReport(self.checks + other.checks)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


_STATUS = {Equality.PROVED: "holds", Equality.REFUTED: "fails", Equality.UNPROVED: "unproved"}


def _check(rid: str, desc: str, lhs: StarPolynomial, rhs: StarPolynomial) -> RelationCheck:
    residual = (lhs - rhs).reduce()
    if residual.is_zero:
        status = "holds"
    else:
        status = "fails" if rules_for(lhs.graph).monochrome else "unproved"
    return RelationCheck(rid, desc, status, residual)


def verify_ck_family(g: EdgeColoredGraph, m: GeneratorMap) -> VerifyReport:
    """Check the edge-colored Cuntz-Krieger relations of ``g`` on the images of ``m``."""
    check(g)
    T = m.target
    P = {v: m.vertex_images[v] for v in g.vertices}
    S = {e.id: m.edge_images[e.id] for e in g.edges}
    Sa = {e: s.adjoint() for e, s in S.items()}
    zero = StarPolynomial.zero(T)
    out = []
    for v in g.vertices:
        out.append(_check(f"idempotent:{v}", f"P({v}) P({v}) = P({v})", P[v] * P[v], P[v]))
        out.append(_check(f"selfadjoint:{v}", f"P({v})* = P({v})", P[v].adjoint(), P[v]))
    for i, v in enumerate(g.vertices):
        for w in g.vertices[i + 1:]:
            out.append(_check(f"orthogonal:{v},{w}", f"P({v}) P({w}) = 0", P[v] * P[w], zero))
    for e in g.edges:
        out.append(
            _check(f"source:{e.id}", f"S*({e.id}) S({e.id}) = P({e.source})",
                   Sa[e.id] * S[e.id], P[e.source])
        )
    for i, e in enumerate(g.edges):
        for f in g.edges[i + 1:]:
            if e.color == f.color:
                out.append(
                    _check(f"edge-orthogonal:{e.id},{f.id}", f"S*({e.id}) S({f.id}) = 0",
                           Sa[e.id] * S[f.id], zero)
                )
    for v in g.vertices:
        by_color: dict[int, list[str]] = defaultdict(list)
        for e in g.in_edges(v):
            by_color[e.color].append(e.id)
        for c, ids in sorted(by_color.items()):
            total = zero
            for e in ids:
                total = total + S[e] * Sa[e]
            desc = " + ".join(f"S({e}) S*({e})" for e in ids) + f" = P({v})"
            out.append(_check(f"ck:{v}@{c}", desc, total, P[v]))
    return VerifyReport(tuple(out))


def verify_homomorphism(m: GeneratorMap) -> VerifyReport:
    """All-holds certifies that the assignment extends to a *-homomorphism."""
    return verify_ck_family(m.source, m)


def _generators(g: EdgeColoredGraph) -> list[tuple[str, StarPolynomial]]:
    gens = [(f"p({v})", StarPolynomial.p(g, v)) for v in g.vertices]
    gens += [(f"S({e.id})", StarPolynomial.S(g, e.id)) for e in g.edges]
    return gens


def verify_mutually_inverse(m1: GeneratorMap, m2: GeneratorMap) -> VerifyReport:
    if m1.target != m2.source or m2.target != m1.source:
        raise GraphError("maps are not composable in both orders")
    out = []
    for first, second in ((m1, m2), (m2, m1)):
        A = first.source
        for label, gen in _generators(A):
            back = second.apply(first.apply(gen))
            out.append(
                _check(f"inverse:{A.name}:{label}",
                       f"{second.name}({first.name}({label})) = {label}", back, gen)
            )
    return VerifyReport(tuple(out))


def infer_graph(
    vertex_polys: Mapping[str, StarPolynomial],
    edge_polys: Mapping[str, StarPolynomial],
    ambient: EdgeColoredGraph,
    coloring: Mapping[str, int],
    name: str = "inferred",
) -> EdgeColoredGraph:
    """Recover the graph of a family: s(S) is the p with S*S = p, r(S) the p above SS*."""
    edges = []
    for eid, s in edge_polys.items():
        ss = (s.adjoint() * s).reduce()
        sources = [v for v, p in vertex_polys.items() if equal(ss, p) is Equality.PROVED]
        if not sources:
            raise GraphError(f"no source projection matches S*S for {eid}")
        if len(sources) > 1:
            raise GraphError(f"ambiguous source for {eid}: {sources}")
        rr = (s * s.adjoint()).reduce()
        ranges = [v for v, p in vertex_polys.items() if equal(p * rr * p, rr) is Equality.PROVED]
        if not ranges:
            raise GraphError(f"no dominating range projection for {eid}")
        if len(ranges) > 1:
            raise GraphError(f"ambiguous range for {eid}: {ranges}")
        edges.append(Edge(eid, sources[0], ranges[0], coloring[eid]))
    return check(EdgeColoredGraph(name, tuple(vertex_polys), tuple(edges)))


def canonical_family(g: EdgeColoredGraph) -> tuple[dict, dict, dict]:
    """The generating family of C*(G,f) itself, in the form ``infer_graph`` takes."""
    return (
        {v: StarPolynomial.p(g, v) for v in g.vertices},
        {e.id: StarPolynomial.S(g, e.id) for e in g.edges},
        {e.id: e.color for e in g.edges},
    )
