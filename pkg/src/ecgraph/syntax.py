"""Reader and writer for ``.ecg`` graph files and ``.hom`` generator-map files.

Grammar::

    graph  := "graph" IDENT "{" stmt* "}"
    stmt   := "vertex" IDENT ("," IDENT)* ";"
            | "edge" IDENT ":" IDENT "->" IDENT ("@" INT)? ";"
    hom    := "hom" IDENT ":" IDENT "->" IDENT "{" assign* "}"
    assign := ("vertex" | "edge") IDENT "=>" expr ";"
    expr   := "0" | "-"? term (("+" | "-") term)*
    term   := (INT ("/" INT)?)? factor+
    factor := "p(" IDENT ")" | "S(" IDENT ")" | "S*(" IDENT ")" | "1"

Arrows run source -> range.  ``#`` starts a comment.  A missing color means
color 1; ``1`` in an expression is the sum of all vertex projections.  The
parsers are total: they collect up to 32 errors and raise them together.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .graph import Edge, EdgeColoredGraph
from .staralg import GeneratorMap, StarPolynomial

MAX_ERRORS = 32


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    offset: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    expected: str
    found: str
    kind: str = "syntax"

    @property
    def message(self) -> str:
        if self.kind == "syntax":
            return f"expected {self.expected}, found {self.found!r}"
        return f"{self.kind} {self.found}"

    def __str__(self):
        return f"{self.span}: {self.message}"


class ParseFailure(ValueError):
    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT INT PUNCT EOF
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<INT>[0-9]+)|(?P<PUNCT>->|=>|[{};,:@+\-/()*])"
)


class _TooManyErrors(Exception):
    pass


class _Parser:
    def __init__(self, text: str, filename: str):
        self.filename = filename
        self.errors: list[ParseError] = []
        self.tokens = self._lex(text)
        self.pos = 0

    # lexing

    def _span(self, text: str, offset: int) -> SourceSpan:
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        return SourceSpan(self.filename, line, col, offset)

    def _lex(self, text: str) -> list[Token]:
        out = []
        i = 0
        while i < len(text):
            m = _TOKEN_RE.match(text, i)
            if m is None:
                if len(self.errors) < MAX_ERRORS - 1:
                    self.error(self._span(text, i), "a token", text[i])
                i += 1
                continue
            kind = m.lastgroup
            if kind not in ("ws", "comment"):
                out.append(Token(kind, m.group(), self._span(text, i)))
            i = m.end()
        out.append(Token("EOF", "end of input", self._span(text, len(text))))
        return out

    # error handling

    def error(self, span: SourceSpan, expected: str, found: str, kind: str = "syntax"):
        self.errors.append(ParseError(span, expected, found, kind))
        if len(self.errors) >= MAX_ERRORS:
            raise _TooManyErrors

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("PUNCT", "IDENT")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(self.tok.span, repr(text), self.tok.text)
            raise _SyncError
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.error(self.tok.span, what, self.tok.text)
            raise _SyncError
        return self.advance()

    def sync(self):
        """Skip to just past the next ';' (or up to a '}' / end of input)."""
        while self.tok.kind != "EOF" and not self.at("}"):
            if self.advance().text == ";":
                return

    # graphs

    def parse_graph(self) -> EdgeColoredGraph | None:
        try:
            self.expect("graph")
            name = self.expect_kind("IDENT", "graph name").text
            self.expect("{")
        except _SyncError:
            return None
        vertices: list[str] = []
        edges: list[Edge] = []
        edge_ids: set[str] = set()
        while self.tok.kind != "EOF" and not self.at("}"):
            try:
                if self.at("vertex"):
                    self.advance()
                    while True:
                        t = self.expect_kind("IDENT", "vertex name")
                        if t.text in vertices:
                            self.error(t.span, "new vertex id", t.text, "duplicate vertex id")
                        else:
                            vertices.append(t.text)
                        if not self.at(","):
                            break
                        self.advance()
                    self.expect(";")
                elif self.at("edge"):
                    self.advance()
                    eid = self.expect_kind("IDENT", "edge name")
                    self.expect(":")
                    src = self.expect_kind("IDENT", "source vertex")
                    self.expect("->")
                    rng = self.expect_kind("IDENT", "range vertex")
                    color = 1
                    if self.at("@"):
                        self.advance()
                        ct = self.expect_kind("INT", "color")
                        color = int(ct.text)
                        if color < 1:
                            self.error(ct.span, "positive color", ct.text, "non-positive color")
                    self.expect(";")
                    ok = True
                    if eid.text in edge_ids:
                        self.error(eid.span, "new edge id", eid.text, "duplicate edge id")
                        ok = False
                    for t in (src, rng):
                        if t.text not in vertices:
                            self.error(t.span, "declared vertex", t.text, "unknown vertex")
                            ok = False
                    edge_ids.add(eid.text)
                    if ok and color >= 1:
                        edges.append(Edge(eid.text, src.text, rng.text, color))
                else:
                    self.error(self.tok.span, "'vertex' or 'edge'", self.tok.text)
                    self.advance()
                    self.sync()
            except _SyncError:
                self.sync()
        try:
            self.expect("}")
            self.expect_kind("EOF", "end of input")
        except _SyncError:
            pass
        return EdgeColoredGraph(name, tuple(vertices), tuple(edges))

    # generator maps

    def parse_hom(self, source: EdgeColoredGraph, target: EdgeColoredGraph) -> GeneratorMap | None:
        try:
            self.expect("hom")
            name = self.expect_kind("IDENT", "map name").text
            self.expect(":")
            s = self.expect_kind("IDENT", "source graph name")
            self.expect("->")
            t = self.expect_kind("IDENT", "target graph name")
            self.expect("{")
        except _SyncError:
            return None
        if s.text != source.name:
            self.error(s.span, f"graph {source.name}", s.text, "source graph mismatch")
        if t.text != target.name:
            self.error(t.span, f"graph {target.name}", t.text, "target graph mismatch")
        vimg: dict[str, StarPolynomial] = {}
        eimg: dict[str, StarPolynomial] = {}
        while self.tok.kind != "EOF" and not self.at("}"):
            try:
                if self.at("vertex") or self.at("edge"):
                    is_vertex = self.advance().text == "vertex"
                    gen = self.expect_kind("IDENT", "generator name")
                    self.expect("=>")
                    poly = self.parse_expr(target)
                    self.expect(";")
                    known = source.has_vertex(gen.text) if is_vertex else source.has_edge(gen.text)
                    table = vimg if is_vertex else eimg
                    label = "vertex" if is_vertex else "edge"
                    if not known:
                        self.error(gen.span, f"{label} of {source.name}", gen.text, f"unknown {label}")
                    elif gen.text in table:
                        self.error(gen.span, "single assignment", gen.text, "duplicate assignment for")
                    elif poly is not None:
                        table[gen.text] = poly
                else:
                    self.error(self.tok.span, "'vertex' or 'edge'", self.tok.text)
                    self.advance()
                    self.sync()
            except _SyncError:
                self.sync()
        close = self.tok
        try:
            self.expect("}")
            self.expect_kind("EOF", "end of input")
        except _SyncError:
            pass
        if not self.errors:
            for v in source.vertices:
                if v not in vimg:
                    self.error(close.span, "assignment", f"vertex {v}", "missing assignment for")
            for e in source.edges:
                if e.id not in eimg:
                    self.error(close.span, "assignment", f"edge {e.id}", "missing assignment for")
        if self.errors:
            return None
        return GeneratorMap(source, target, vimg, eimg, name)

    def _factor_start(self) -> bool:
        t = self.tok
        if t.kind == "IDENT" and t.text in ("p", "S"):
            return True
        return t.kind == "INT" and t.text == "1"

    def parse_expr(self, g: EdgeColoredGraph) -> StarPolynomial | None:
        if self.tok.text == "0" and self.peek().text == ";":
            self.advance()
            return StarPolynomial.zero(g)
        ok = True
        total = StarPolynomial.zero(g)
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        while True:
            term = self.parse_term(g)
            if term is None:
                ok = False
            else:
                total = total + term * sign
            if self.at("+"):
                sign = 1
            elif self.at("-"):
                sign = -1
            else:
                break
            self.advance()
        return total if ok else None

    def parse_term(self, g: EdgeColoredGraph) -> StarPolynomial | None:
        coef = Fraction(1)
        t = self.tok
        if t.kind == "INT":
            nxt = self.peek()
            nxt_is_factor = (nxt.kind == "IDENT" and nxt.text in ("p", "S")) or (
                nxt.kind == "INT" and nxt.text == "1"
            )
            if nxt.text == "/" or nxt_is_factor or t.text != "1":
                self.advance()
                coef = Fraction(int(t.text))
                if self.at("/"):
                    self.advance()
                    d = self.expect_kind("INT", "denominator")
                    if int(d.text) == 0:
                        self.error(d.span, "nonzero denominator", d.text)
                        raise _SyncError
                    coef /= int(d.text)
        if not self._factor_start():
            self.error(self.tok.span, "term", self.tok.text)
            raise _SyncError
        ok = True
        product = None
        while self._factor_start():
            f = self.parse_factor(g)
            if f is None:
                ok = False
                continue
            product = f if product is None else product * f
        return product * coef if ok else None

    def parse_factor(self, g: EdgeColoredGraph) -> StarPolynomial | None:
        t = self.advance()
        if t.kind == "INT":
            return StarPolynomial.unit(g)
        if t.text == "p":
            kind = "p"
        elif self.at("*"):
            self.advance()
            kind = "t"
        else:
            kind = "s"
        self.expect("(")
        x = self.expect_kind("IDENT", "vertex name" if kind == "p" else "edge name")
        self.expect(")")
        known = g.has_vertex(x.text) if kind == "p" else g.has_edge(x.text)
        if not known:
            label = "vertex" if kind == "p" else "edge"
            self.error(x.span, f"{label} of {g.name}", x.text, f"unknown {label}")
            return None
        return StarPolynomial.letter(g, kind, x.text)


class _SyncError(Exception):
    pass


def parse_graph(text: str, filename: str = "<input>") -> EdgeColoredGraph:
    """Parse a ``.ecg`` file; raise ParseFailure carrying every error found."""
    parser = _Parser(text, filename)
    try:
        g = parser.parse_graph()
    except _TooManyErrors:
        g = None
    if parser.errors:
        raise ParseFailure(parser.errors)
    return g


def parse_genmap(
    text: str, source: EdgeColoredGraph, target: EdgeColoredGraph, filename: str = "<input>"
) -> GeneratorMap:
    parser = _Parser(text, filename)
    try:
        m = parser.parse_hom(source, target)
    except _TooManyErrors:
        m = None
    if parser.errors:
        raise ParseFailure(parser.errors)
    return m


def emit_graph(g: EdgeColoredGraph) -> str:
    """Canonical text: vertex declarations, then edges, each in declaration order."""
    lines = [f"graph {g.name} {{"]
    lines += [f"  vertex {v};" for v in g.vertices]
    lines += [f"  edge {e.id}: {e.source} -> {e.range} @ {e.color};" for e in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_genmap(m: GeneratorMap) -> str:
    lines = [f"hom {m.name}: {m.source.name} -> {m.target.name} {{"]
    for v in m.source.vertices:
        lines.append(f"  vertex {v} => {m.vertex_images[v]};")
    for e in m.source.edges:
        lines.append(f"  edge {e.id} => {m.edge_images[e.id]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
