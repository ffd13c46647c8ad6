import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecgraph.graph import free_product, validate
from ecgraph.staralg import GeneratorMap
from ecgraph.syntax import ParseFailure, emit_genmap, emit_graph, parse_genmap, parse_graph
from helpers import FIXTURES, GRAPH_FILES, graphs, load, load_map

L2_TEXT = "graph L2 { vertex v; edge a: v -> v @ 1; edge b: v -> v @ 1; }"


def errors_of(fn, *args):
    with pytest.raises(ParseFailure) as info:
        fn(*args)
    return info.value.errors


def test_parse_l2():
    g = parse_graph(L2_TEXT)
    assert g.name == "L2" and g.vertices == ("v",)
    assert [(e.id, e.source, e.range, e.color) for e in g.edges] == [("a", "v", "v", 1), ("b", "v", "v", 1)]


def test_color_defaults_to_one():
    g = parse_graph("graph G { vertex v, w; edge a: v -> w; }")
    assert g.edges[0].color == 1


def test_unknown_vertex_points_at_token():
    text = "graph G { vertex v; edge a: v -> w @ 1; }"
    (err,) = errors_of(parse_graph, text, "g.ecg")
    assert err.message == "unknown vertex w"
    assert text[err.span.offset] == "w"
    assert str(err).startswith("g.ecg:1:")


def test_errors_are_collected():
    errs = errors_of(parse_graph, "graph G { vertex v; edge a v -> v; edge b: v -> v @ x; }")
    assert [e.expected for e in errs] == ["':'", "color"]


@pytest.mark.parametrize(
    "text, kind",
    [
        ("graph G { vertex v; edge a: v -> v @ 0; }", "non-positive color"),
        ("graph G { vertex v, v; }", "duplicate vertex id"),
        ("graph G { vertex v; edge a: v -> v; edge a: v -> v; }", "duplicate edge id"),
        ("graph { }", "syntax"),
        ("graph G { vertex v; $ }", "syntax"),
        ("", "syntax"),
    ],
)
def test_graph_error_kinds(text, kind):
    assert errors_of(parse_graph, text)[0].kind == kind


def test_error_line_and_column():
    text = "graph G {\n  vertex v;\n  edge a: v -> q;\n}\n"
    (err,) = errors_of(parse_graph, text)
    assert (err.span.line, err.span.column) == (3, 16)


def test_emit_is_deterministic_and_round_trips():
    for p in GRAPH_FILES:
        g = load(p.stem)
        a, b = emit_graph(g), emit_graph(g)
        assert a == b
        assert parse_graph(a) == g


def test_emit_free_product():
    h = free_product([load("m3_left"), load("m3_right")], ["v1", "v2", "v3"])
    back = parse_graph(emit_graph(h))
    assert len(back.vertices) == 3 and len(back.edges) == 2 and back.colors == (1, 2)


def test_tau_map_shape():
    tau = load_map("tau", "counterexample", "h")
    assert len(tau.vertex_images) == 3 and len(tau.edge_images) == 6
    assert str(tau.edge_images["x3"]) == "S(a) S*(b)"


def test_identity_map_file():
    l2 = load("l2")
    m = load_map("identity_l2", "l2", "l2")
    ident = GeneratorMap.identity(l2)
    assert m.vertex_images == ident.vertex_images and m.edge_images == ident.edge_images


def test_genmap_errors():
    l2 = load("l2")
    text = "hom id: L2 -> L2 { vertex v => S(a) + ; edge a => S(a); edge b => S(b); }"
    (err,) = errors_of(parse_genmap, text, l2, l2)
    assert err.expected == "term"
    text = "hom id: L2 -> L2 { vertex v => p(v); edge a => S(a); }"
    (err,) = errors_of(parse_genmap, text, l2, l2)
    assert err.message == "missing assignment for edge b"
    text = "hom id: X -> L2 { vertex v => p(v); edge a => S(a); edge b => S(b); }"
    assert errors_of(parse_genmap, text, l2, l2)[0].kind == "source graph mismatch"
    text = "hom id: L2 -> L2 { vertex v => p(v); edge a => S(q); edge b => S(b); }"
    assert errors_of(parse_genmap, text, l2, l2)[0].message == "unknown edge q"


def test_genmap_expression_forms():
    l2 = load("l2")
    text = "hom m: L2 -> L2 { vertex v => 1; edge a => -S(a) + 2/3 S(b) S*(a); edge b => 0; }"
    m = parse_genmap(text, l2, l2)
    assert str(m.edge_images["a"]) == "-S(a) + 2/3 S(b) S*(a)"
    assert m.edge_images["b"].is_zero
    again = parse_genmap(emit_genmap(m), l2, l2)
    assert again.edge_images == m.edge_images and again.vertex_images == m.vertex_images


@given(graphs(max_color=4))
def test_parse_emit_identity(g):
    assert parse_graph(emit_graph(g)) == g


@given(graphs())
def test_emit_parse_is_idempotent(g):
    once = emit_graph(parse_graph(emit_graph(g)))
    assert emit_graph(parse_graph(once)) == once


def _check_fuzz(text):
    try:
        g = parse_graph(text, "fuzz")
    except ParseFailure as exc:
        assert exc.errors
        for e in exc.errors:
            assert 0 <= e.span.offset <= len(text)
            assert e.span.line >= 1 and e.span.column >= 1
        return
    assert validate(g).ok


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list("graphvertexedg {};:,->@0123456789#\n*=()S")), max_size=80))
def test_fuzz_never_crashes(text):
    _check_fuzz(text)


@settings(max_examples=300)
@given(st.text(max_size=60))
def test_fuzz_arbitrary_text(text):
    _check_fuzz(text)


def test_fuzz_mutated_fixtures():
    rng = random.Random(11)
    sources = [p.read_text() for p in GRAPH_FILES]
    pool = "{};:,->@ \n#xyz019"
    for _ in range(2000):
        text = list(rng.choice(sources))
        for _ in range(rng.randint(1, 4)):
            i = rng.randrange(len(text))
            op = rng.random()
            if op < 0.4:
                del text[i]
            elif op < 0.8:
                text.insert(i, rng.choice(pool))
            else:
                text[i] = rng.choice(pool)
        _check_fuzz("".join(text))


def test_fuzz_mutated_maps():
    rng = random.Random(12)
    l2 = load("l2")
    base = (FIXTURES / "identity_l2.hom").read_text()
    for _ in range(500):
        text = list(base)
        for _ in range(rng.randint(1, 3)):
            i = rng.randrange(len(text))
            text[i] = rng.choice("+-*()S p0;=>/")
        text = "".join(text)
        try:
            parse_genmap(text, l2, l2)
        except ParseFailure as exc:
            assert all(0 <= e.span.offset <= len(text) for e in exc.errors)


def test_error_cap():
    text = "graph G { " + "edge a: q -> q; " * 100 + "}"
    assert len(errors_of(parse_graph, text)) <= 32
