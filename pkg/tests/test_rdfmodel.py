import random

import pytest

from genrdf import random_quadgraph, shuffled
from rosetta.errors import FormatError
from rosetta.rdfmodel import (
    BlankNode,
    Literal,
    QuadGraph,
    parse,
    parse_nquads,
    parse_trig,
    parse_turtle,
    serialize,
    to_nquads,
    to_trig,
    to_turtle,
)
from rosetta.vocab import RDF, XSD_DECIMAL, XSD_INTEGER

EX = "https://example.org/"
PREFIXES = {"ex": EX, "rdf": RDF, "xsd": "http://www.w3.org/2001/XMLSchema#"}


def _sample_graph() -> QuadGraph:
    g = QuadGraph()
    g.add(EX + "apple", RDF + "type", EX + "Fruit")
    g.add(EX + "apple", EX + "weight", Literal("212.45", XSD_DECIMAL))
    g.add(EX + "apple", EX + "note", Literal('say "hi"\n', lang="en"))
    g.add(BlankNode("b0"), EX + "count", Literal("3", XSD_INTEGER))
    return g


def test_turtle_is_canonical():
    expected = (
        "@prefix ex: <https://example.org/> .\n"
        "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
        "\n"
        "ex:apple a ex:Fruit .\n"
        'ex:apple ex:note "say \\"hi\\"\\n"@en .\n'
        'ex:apple ex:weight "212.45"^^xsd:decimal .\n'
        '_:b0 ex:count "3"^^xsd:integer .\n'
    )
    assert to_turtle(_sample_graph(), PREFIXES) == expected


def test_nquads_is_canonical():
    g = QuadGraph()
    g.add(EX + "s", EX + "p", EX + "o", EX + "g2")
    g.add(EX + "s", EX + "p", Literal("x"), EX + "g1")
    g.add(EX + "s", EX + "p", EX + "o")
    expected = (
        "<https://example.org/s> <https://example.org/p> <https://example.org/o> .\n"
        '<https://example.org/s> <https://example.org/p> "x" <https://example.org/g1> .\n'
        "<https://example.org/s> <https://example.org/p> <https://example.org/o> <https://example.org/g2> .\n"
    )
    assert to_nquads(g) == expected


def test_trig_groups_named_graphs():
    g = QuadGraph()
    g.add(EX + "s", EX + "p", EX + "o")
    g.add(EX + "s", EX + "p", Literal("in-graph"), EX + "g1")
    expected = (
        "@prefix ex: <https://example.org/> .\n"
        "\n"
        "ex:s ex:p ex:o .\n"
        "\n"
        "ex:g1 {\n"
        '    ex:s ex:p "in-graph" .\n'
        "}\n"
    )
    assert to_trig(g, PREFIXES) == expected


def test_turtle_rejects_named_graphs():
    g = QuadGraph()
    g.add(EX + "s", EX + "p", EX + "o", EX + "g")
    with pytest.raises(FormatError):
        to_turtle(g, PREFIXES)


def test_parse_handles_semicolons_commas_and_comments():
    text = """
    @prefix ex: <https://example.org/> .
    # a comment
    ex:s a ex:T ;
        ex:p ex:a, ex:b ;
        ex:q 5 ;
        ex:r 2.5, true ;
    .
    """
    g = parse_turtle(text)
    assert (EX + "s", RDF + "type", EX + "T", None) in g
    assert (EX + "s", EX + "p", EX + "b", None) in g
    assert (EX + "s", EX + "q", Literal("5", XSD_INTEGER), None) in g
    assert (EX + "s", EX + "r", Literal("2.5", XSD_DECIMAL), None) in g
    assert len(g) == 6


def test_parse_trig_graph_keyword_and_blocks():
    text = """
    @prefix ex: <https://example.org/> .
    ex:s ex:p ex:o .
    GRAPH ex:g1 { ex:a ex:b ex:c . }
    ex:g2 { ex:a ex:b "lit" }
    """
    g = parse_trig(text)
    assert g.graph_names() == [EX + "g1", EX + "g2"]
    assert (EX + "a", EX + "b", Literal("lit"), EX + "g2") in g


def test_parse_error_reports_position():
    with pytest.raises(FormatError) as err:
        parse_turtle("<https://example.org/s> <https://example.org/p> [ ] .")
    assert err.value.line == 1
    assert err.value.column is not None


def test_unknown_prefix_rejected():
    with pytest.raises(FormatError):
        parse_turtle("missing:s missing:p missing:o .")


def test_nquads_rejects_wrong_arity():
    with pytest.raises(FormatError) as err:
        parse_nquads("<https://example.org/s> <https://example.org/p> .")
    assert err.value.line == 1


@pytest.mark.parametrize("fmt", ["turtle", "nquads", "trig"])
def test_round_trip_random_graphs(fmt):
    rng = random.Random(4207)
    for _ in range(60):
        graph = random_quadgraph(rng, named_graphs=fmt != "turtle")
        text = serialize(graph, fmt, PREFIXES)
        assert parse(text, fmt) == graph


@pytest.mark.parametrize("fmt", ["turtle", "nquads", "trig"])
def test_serialization_is_insertion_order_independent(fmt):
    rng = random.Random(99)
    for _ in range(20):
        graph = random_quadgraph(rng, named_graphs=fmt != "turtle")
        assert serialize(graph, fmt, PREFIXES) == serialize(shuffled(graph, rng), fmt, PREFIXES)
