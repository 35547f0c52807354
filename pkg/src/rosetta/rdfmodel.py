"""Minimal RDF term model, quad store, and serializers/parsers.

Supports exactly what the engine needs: IRIs, blank nodes, typed/tagged
literals, named graphs, and deterministic Turtle / N-Quads / TriG text.
Serialization is canonical: one statement per line, quads sorted by
(graph, subject, predicate, object), prefixes emitted only when used.
The parser accepts the subset we emit plus common hand-written forms
(``a``, ``;``/``,`` lists, bare numerics and booleans, comments); it does
not accept collections or anonymous blank-node property lists.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import FormatError
from .vocab import RDF, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING

RDF_LANGSTRING = RDF + "langString"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: str | None = None

    def __post_init__(self):
        if self.lang is not None:
            object.__setattr__(self, "datatype", RDF_LANGSTRING)


@dataclass(frozen=True)
class BlankNode:
    label: str


# IRIs are plain strings.
Term = str | BlankNode | Literal


class Quad(NamedTuple):
    s: str | BlankNode
    p: str
    o: Term
    g: str | None = None


def _term_key(t: Term) -> tuple:
    if isinstance(t, str):
        return (0, t)
    if isinstance(t, BlankNode):
        return (1, t.label)
    return (2, t.lexical, t.datatype, t.lang or "")


def quad_sort_key(q: Quad) -> tuple:
    return (q.g or "", _term_key(q.s), q.p, _term_key(q.o))


class QuadGraph:
    """A set of quads; ``g=None`` marks the default graph."""

    def __init__(self, quads: Iterable[Quad] = ()):
        self._quads: set[Quad] = set(quads)

    def add(self, s: str | BlankNode, p: str, o: Term, g: str | None = None) -> None:
        self._quads.add(Quad(s, p, o, g))

    def update(self, other: "QuadGraph | Iterable[Quad]") -> None:
        self._quads.update(other)

    def discard(self, quad: Quad) -> None:
        self._quads.discard(quad)

    def __iter__(self) -> Iterator[Quad]:
        return iter(self._quads)

    def __len__(self) -> int:
        return len(self._quads)

    def __contains__(self, quad: Quad) -> bool:
        return quad in self._quads

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuadGraph) and self._quads == other._quads

    def sorted_quads(self) -> list[Quad]:
        return sorted(self._quads, key=quad_sort_key)

    def graph_names(self) -> list[str]:
        return sorted({q.g for q in self._quads if q.g is not None})

    def quads_in(self, g: str | None) -> list[Quad]:
        return sorted((q for q in self._quads if q.g == g), key=quad_sort_key)

    def triples_in(self, g: str | None) -> set[tuple]:
        return {(q.s, q.p, q.o) for q in self._quads if q.g == g}

    def objects_of(self, s: Term, p: str, g: str | None = ...) -> list[Term]:
        found = [
            q.o
            for q in self._quads
            if q.s == s and q.p == p and (g is ... or q.g == g)
        ]
        return sorted(found, key=_term_key)

    def value(self, s: Term, p: str, g: str | None = ...) -> Term | None:
        objs = self.objects_of(s, p, g)
        return objs[0] if objs else None

    def subjects_of(self, p: str, o: Term) -> list[Term]:
        return sorted({q.s for q in self._quads if q.p == p and q.o == o}, key=_term_key)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_PN_LOCAL_SAFE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*$")


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def _iri_text(iri: str, prefixes: dict[str, str] | None, used: set[str] | None) -> str:
    if prefixes:
        for pfx, ns in prefixes.items():
            if iri.startswith(ns):
                local = iri[len(ns):]
                if local == "" or _PN_LOCAL_SAFE.match(local):
                    if used is not None:
                        used.add(pfx)
                    return f"{pfx}:{local}"
    return f"<{iri}>"


def term_text(t: Term, prefixes: dict[str, str] | None = None, used: set[str] | None = None) -> str:
    if isinstance(t, str):
        return _iri_text(t, prefixes, used)
    if isinstance(t, BlankNode):
        return f"_:{t.label}"
    body = f'"{_escape(t.lexical)}"'
    if t.lang is not None:
        return f"{body}@{t.lang}"
    if t.datatype != XSD_STRING:
        return f"{body}^^{_iri_text(t.datatype, prefixes, used)}"
    return body


def to_nquads(graph: QuadGraph) -> str:
    lines = []
    for q in graph.sorted_quads():
        parts = [term_text(q.s), term_text(q.p), term_text(q.o)]
        if q.g is not None:
            parts.append(f"<{q.g}>")
        lines.append(" ".join(parts) + " .")
    return "\n".join(lines) + ("\n" if lines else "")


def _prefix_header(used: set[str], prefixes: dict[str, str]) -> list[str]:
    return [f"@prefix {p}: <{prefixes[p]}> ." for p in sorted(used)]


def _triple_lines(quads: list[Quad], prefixes: dict[str, str], used: set[str], indent: str = "") -> list[str]:
    out = []
    for q in quads:
        s = term_text(q.s, prefixes, used)
        p = "a" if q.p == RDF + "type" else term_text(q.p, prefixes, used)
        o = term_text(q.o, prefixes, used)
        out.append(f"{indent}{s} {p} {o} .")
    return out


def to_turtle(graph: QuadGraph, prefixes: dict[str, str] | None = None) -> str:
    if graph.graph_names():
        raise FormatError("turtle cannot represent named graphs; use trig or nquads")
    prefixes = prefixes or {}
    used: set[str] = set()
    body = _triple_lines(graph.quads_in(None), prefixes, used)
    header = _prefix_header(used, prefixes)
    sections = [s for s in ("\n".join(header), "\n".join(body)) if s]
    return "\n\n".join(sections) + ("\n" if sections else "")


def to_trig(graph: QuadGraph, prefixes: dict[str, str] | None = None) -> str:
    prefixes = prefixes or {}
    used: set[str] = set()
    blocks: list[str] = []
    default = _triple_lines(graph.quads_in(None), prefixes, used)
    if default:
        blocks.append("\n".join(default))
    for g in graph.graph_names():
        lines = _triple_lines(graph.quads_in(g), prefixes, used, indent="    ")
        blocks.append(term_text(g, prefixes, used) + " {\n" + "\n".join(lines) + "\n}")
    header = _prefix_header(used, prefixes)
    sections = ([("\n".join(header))] if header else []) + blocks
    return "\n\n".join(sections) + ("\n" if sections else "")


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r\n]+)
    | (?P<comment>\#[^\n]*)
    | (?P<iri><[^<>"{}|^`\\ ]*>)
    | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
    | (?P<lang>@(?!prefix\b|base\b)[A-Za-z][A-Za-z0-9\-]*)
    | (?P<dtype>\^\^)
    | (?P<blank>_:[A-Za-z0-9][A-Za-z0-9_\-]*)
    | (?P<double>[+-]?(?:\d+\.\d*|\.\d+|\d+)[eE][+-]?\d+)
    | (?P<decimal>[+-]?(?:\d+\.\d+|\.\d+))
    | (?P<integer>[+-]?\d+)
    | (?P<pname>[A-Za-z][A-Za-z0-9_\-]*)?:(?P<local>(?:[A-Za-z0-9_\-]|\.(?=[A-Za-z0-9_\-.]))*)
    | (?P<keyword>@?[A-Za-z][A-Za-z0-9_\-]*)
    | (?P<punct>[.;,{}])
    """,
    re.VERBOSE,
)

_UNESCAPES = {"\\": "\\", '"': '"', "'": "'", "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f"}


def _unescape(body: str, line: int) -> str:
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        nxt = body[i + 1]
        if nxt in _UNESCAPES:
            out.append(_UNESCAPES[nxt])
            i += 2
        elif nxt == "u":
            out.append(chr(int(body[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(body[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise FormatError(f"bad escape \\{nxt}", line=line)
    return "".join(out)


class _Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormatError(
                f"unexpected character {text[pos]!r}", line=line, column=pos - line_start + 1
            )
        kind = m.lastgroup
        value = m.group(0)
        if kind in ("pname", "local"):
            kind = "pname"
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_graphs: bool):
        self.tokens = _tokenize(text)
        self.i = 0
        self.allow_graphs = allow_graphs
        self.prefixes: dict[str, str] = {}
        self.graph = QuadGraph()

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: _Token) -> FormatError:
        return FormatError(message, line=tok.line, column=tok.column)

    def expect_punct(self, char: str) -> None:
        tok = self.next()
        if tok.kind != "punct" or tok.value != char:
            raise self.fail(f"expected {char!r}, got {tok.value!r}", tok)

    def parse(self) -> QuadGraph:
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "keyword" and tok.value.lower() in ("@prefix", "prefix"):
                self.parse_prefix()
            elif tok.kind == "keyword" and tok.value.lower() in ("@base", "base"):
                raise self.fail("base directives are not supported", tok)
            elif tok.kind == "keyword" and tok.value == "GRAPH":
                self.next()
                self.parse_graph_block()
            elif self.looks_like_graph_block():
                self.parse_graph_block()
            else:
                self.parse_triples(None)
                self.expect_punct(".")
        return self.graph

    def looks_like_graph_block(self) -> bool:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "{":
            return True  # anonymous default-graph block
        if tok.kind not in ("iri", "pname", "blank"):
            return False
        after = self.tokens[self.i + 1]
        return after.kind == "punct" and after.value == "{"

    def parse_prefix(self) -> None:
        directive = self.next()
        tok = self.next()
        if tok.kind != "pname" or not tok.value.endswith(":"):
            raise self.fail("expected prefix name", tok)
        name = tok.value[:-1]
        iri_tok = self.next()
        if iri_tok.kind != "iri":
            raise self.fail("expected namespace IRI", iri_tok)
        self.prefixes[name] = iri_tok.value[1:-1]
        if directive.value.startswith("@"):
            self.expect_punct(".")

    def parse_graph_block(self) -> None:
        if not self.allow_graphs:
            raise self.fail("named graphs are not allowed in this format", self.peek())
        g: str | None = None
        if not (self.peek().kind == "punct" and self.peek().value == "{"):
            name = self.parse_term()
            if not isinstance(name, str):
                raise self.fail("graph name must be an IRI", self.peek())
            g = name
        self.expect_punct("{")
        while not (self.peek().kind == "punct" and self.peek().value == "}"):
            self.parse_triples(g)
            if self.peek().kind == "punct" and self.peek().value == ".":
                self.next()
            else:
                break
        self.expect_punct("}")

    def parse_triples(self, g: str | None) -> None:
        subject = self.parse_term()
        if isinstance(subject, Literal):
            raise self.fail("literal cannot be a subject", self.peek())
        while True:
            pred = self.parse_predicate()
            while True:
                obj = self.parse_term()
                self.graph.add(subject, pred, obj, g)
                if self.peek().kind == "punct" and self.peek().value == ",":
                    self.next()
                    continue
                break
            if self.peek().kind == "punct" and self.peek().value == ";":
                while self.peek().kind == "punct" and self.peek().value == ";":
                    self.next()
                nxt = self.peek()
                if nxt.kind == "eof" or (nxt.kind == "punct" and nxt.value in (".", "}")):
                    break  # dangling separator before terminator
                continue
            break

    def parse_predicate(self) -> str:
        tok = self.peek()
        if tok.kind == "keyword" and tok.value == "a":
            self.next()
            return RDF + "type"
        term = self.parse_term()
        if not isinstance(term, str):
            raise self.fail("predicate must be an IRI", tok)
        return term

    def parse_term(self) -> Term:
        tok = self.next()
        if tok.kind == "iri":
            return tok.value[1:-1]
        if tok.kind == "blank":
            return BlankNode(tok.value[2:])
        if tok.kind == "pname":
            prefix, _, local = tok.value.partition(":")
            if prefix not in self.prefixes:
                raise self.fail(f"unknown prefix {prefix!r}", tok)
            return self.prefixes[prefix] + local
        if tok.kind == "string":
            lexical = _unescape(tok.value[1:-1], tok.line)
            nxt = self.peek()
            if nxt.kind == "lang":
                self.next()
                return Literal(lexical, lang=nxt.value[1:])
            if nxt.kind == "dtype":
                self.next()
                dt = self.parse_term()
                if not isinstance(dt, str):
                    raise self.fail("datatype must be an IRI", nxt)
                return Literal(lexical, dt)
            return Literal(lexical)
        if tok.kind == "integer":
            return Literal(tok.value, XSD_INTEGER)
        if tok.kind == "decimal":
            return Literal(tok.value, XSD_DECIMAL)
        if tok.kind == "double":
            return Literal(tok.value, XSD_DOUBLE)
        if tok.kind == "keyword" and tok.value in ("true", "false"):
            return Literal(tok.value, XSD_BOOLEAN)
        raise self.fail(f"unexpected token {tok.value!r}", tok)


def parse_turtle(text: str) -> QuadGraph:
    return _Parser(text, allow_graphs=False).parse()


def parse_trig(text: str) -> QuadGraph:
    return _Parser(text, allow_graphs=True).parse()


def parse_nquads(text: str) -> QuadGraph:
    graph = QuadGraph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parser = _Parser(line, allow_graphs=False)
        terms = []
        while parser.peek().kind != "eof":
            tok = parser.peek()
            if tok.kind == "punct" and tok.value == ".":
                parser.next()
                break
            terms.append(parser.parse_term())
        if len(terms) not in (3, 4):
            raise FormatError(f"expected 3 or 4 terms, got {len(terms)}", line=lineno)
        s, p, o = terms[0], terms[1], terms[2]
        if isinstance(s, Literal):
            raise FormatError("literal cannot be a subject", line=lineno)
        if not isinstance(p, str):
            raise FormatError("predicate must be an IRI", line=lineno)
        g = terms[3] if len(terms) == 4 else None
        if g is not None and not isinstance(g, str):
            raise FormatError("graph label must be an IRI", line=lineno)
        graph.add(s, p, o, g)
    return graph


FORMATS = {
    "turtle": (to_turtle, parse_turtle),
    "nquads": (to_nquads, lambda text: parse_nquads(text)),
    "trig": (to_trig, parse_trig),
}


def serialize(graph: QuadGraph, fmt: str, prefixes: dict[str, str] | None = None) -> str:
    if fmt not in FORMATS:
        raise FormatError(f"unknown format {fmt!r}")
    writer = FORMATS[fmt][0]
    if fmt == "nquads":
        return to_nquads(graph)
    return writer(graph, prefixes)


def parse(text: str, fmt: str) -> QuadGraph:
    if fmt not in FORMATS:
        raise FormatError(f"unknown format {fmt!r}")
    return FORMATS[fmt][1](text)
