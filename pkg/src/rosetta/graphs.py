"""Materialize statements as RDF quads, and read them back.

Two forms exist.  The light form links the statement node straight to its
values through per-index position properties — compact, no versioning.
The full form goes through position-instance nodes with ordered value
entries, carrying versions, provenance, and soft-delete markers.

Every statement's quads live in named graphs derived from its own IRIs
(version graphs plus one metadata graph per anchor), which keeps the
exported dataset partitioned: no triple belongs to two statement graphs.
Shared terminology (labels, type declarations) goes into one distinguished
ontology graph.
"""

from __future__ import annotations

from datetime import datetime

from . import vocab
from .errors import GraphImportError, RenderError
from .metamodel import StatementPattern
from .rdfmodel import Literal, QuadGraph, Term
from .store import (
    AnchorStatement,
    DeletedMarker,
    PositionInstance,
    ProvenanceMetadata,
    StatementVersion,
    Store,
    Value,
)


def _value_term(value: Value) -> Term:
    if value.is_resource:
        return value.iri
    return Literal(value.lexical, value.datatype or vocab.XSD_STRING)


def _slot_property(pattern: StatementPattern, label: str) -> str:
    pos = pattern.position(label)
    return vocab.object_position_property(pos.index, pos.required, pos.is_literal)


def _check_conforms(version: StatementVersion, pattern: StatementPattern) -> None:
    if version.subject.thematic_label != pattern.subject.thematic_label:
        raise RenderError(
            "version subject does not match pattern subject", statement=version.iri
        )
    for instance in version.object_positions:
        if not pattern.has_position(instance.thematic_label):
            raise RenderError(
                f"pattern has no position {instance.thematic_label!r}", statement=version.iri
            )


def to_light_graph(
    version: StatementVersion,
    pattern: StatementPattern,
    *,
    graph_iri: str | None = None,
    negated: bool = False,
) -> QuadGraph:
    """Direct linking: one triple per value, plus the type triple(s)."""
    _check_conforms(version, pattern)
    g = graph_iri if graph_iri is not None else version.iri
    node = version.iri
    out = QuadGraph()
    out.add(node, vocab.RDF_TYPE, pattern.id, g)
    if negated:
        out.add(node, vocab.RDF_TYPE, vocab.NEGATION, g)
    for value in version.subject.values:
        out.add(node, vocab.SUBJECT, _value_term(value), g)
    for instance in version.object_positions:
        prop = _slot_property(pattern, instance.thematic_label)
        for value in instance.values:
            out.add(node, prop, _value_term(value), g)
    return out


def light_linking_quads(graph: QuadGraph) -> list:
    """The value-linking quads of a light graph (type triples excluded)."""
    return [
        q
        for q in graph
        if q.p == vocab.SUBJECT
        or (q.p.startswith(vocab.ROSETTA) and "ObjectPosition" in q.p)
    ]


def assertion_graph(
    version: StatementVersion, pattern: StatementPattern, graph_iri: str
) -> QuadGraph:
    """The version's structural content, free of any metadata predicates."""
    _check_conforms(version, pattern)
    out = QuadGraph()
    g = graph_iri
    v = version.iri
    out.add(v, vocab.RDF_TYPE, pattern.id, g)
    out.add(v, vocab.RDF_TYPE, vocab.STATEMENT_VERSION, g)

    def emit_position(instance: PositionInstance, link: str, kind_class: str) -> None:
        label = instance.thematic_label
        pos = f"{v}/pos/{label.replace(' ', '_')}"
        out.add(v, link, pos, g)
        out.add(pos, vocab.RDF_TYPE, kind_class, g)
        out.add(pos, vocab.RDF_TYPE, pattern.position_class(label), g)
        out.add(pos, vocab.THEMATIC_LABEL, Literal(label), g)
        if pattern.position(label).transitive:
            out.add(pos, vocab.TRANSITIVE, Literal("true", vocab.XSD_BOOLEAN), g)
        for order, value in enumerate(instance.values, start=1):
            entry = f"{pos}/val/{order}"
            out.add(pos, vocab.HAS_VALUE_ENTRY, entry, g)
            out.add(entry, vocab.RDF_TYPE, vocab.VALUE_ENTRY, g)
            out.add(entry, vocab.ORDER, Literal(str(order), vocab.XSD_INTEGER), g)
            out.add(entry, vocab.HAS_VALUE, _value_term(value), g)

    emit_position(version.subject, vocab.HAS_SUBJECT_POSITION, vocab.SUBJECT_POSITION)
    for instance in version.object_positions:
        link = (
            vocab.HAS_REQUIRED_OBJECT_POSITION
            if pattern.position(instance.thematic_label).required
            else vocab.HAS_OPTIONAL_OBJECT_POSITION
        )
        emit_position(instance, link, vocab.OBJECT_POSITION)
    return out


def meta_graph_iri(anchor_iri: str) -> str:
    return f"{anchor_iri}/meta"


def _datetime_literal(at: datetime) -> Literal:
    return Literal(at.isoformat(), vocab.XSD_DATE_TIME)


def to_full_graph(anchor: AnchorStatement, pattern: StatementPattern) -> QuadGraph:
    """Anchor + versions with position instances and ordered value entries.

    Soft-deleted anchors emit only the metadata graph: provenance stays
    reachable while the statement content does not.
    """
    out = QuadGraph()
    g = meta_graph_iri(anchor.iri)
    a = anchor.iri
    out.add(a, vocab.RDF_TYPE, pattern.id, g)
    out.add(a, vocab.RDF_TYPE, vocab.ANCHOR_STATEMENT, g)
    if anchor.negated:
        out.add(a, vocab.RDF_TYPE, vocab.NEGATION, g)
    out.add(a, vocab.HAS_DATA_SCHEMA_PATTERN, anchor.pattern_ref, g)
    for version in anchor.versions:
        out.add(a, vocab.HAS_VERSION, version.iri, g)
    for context in anchor.context_refs:
        out.add(a, vocab.HAS_CONTEXT, context, g)
    meta = anchor.metadata
    out.add(a, vocab.DCTERMS_CREATOR, meta.creator, g)
    out.add(a, vocab.DCTERMS_CREATED, _datetime_literal(meta.created_at), g)
    if meta.author:
        out.add(a, vocab.AUTHOR, meta.author, g)
    if meta.curator:
        out.add(a, vocab.CURATOR, meta.curator, g)
    if meta.extraction_method:
        out.add(a, vocab.EXTRACTION_METHOD, Literal(meta.extraction_method), g)
    if meta.imported_from:
        out.add(a, vocab.IMPORTED_FROM, meta.imported_from, g)
    if meta.license:
        out.add(a, vocab.DCTERMS_LICENSE, meta.license, g)
    if anchor.confidence_level is not None:
        out.add(a, vocab.CONFIDENCE_LEVEL, Literal(anchor.confidence_level, vocab.XSD_DECIMAL), g)
    out.add(a, vocab.MODIFIABLE, Literal("true" if anchor.modifiable else "false", vocab.XSD_BOOLEAN), g)
    if anchor.deleted is not None:
        out.add(a, vocab.DELETED_AT, _datetime_literal(anchor.deleted.deleted_at), g)
        out.add(a, vocab.DELETED_BY, anchor.deleted.deleted_by, g)
        return out

    for version in anchor.versions:
        out.update(assertion_graph(version, pattern, version.iri))
        out.add(
            version.iri, vocab.VERSION_NUMBER,
            Literal(str(version.number), vocab.XSD_INTEGER), version.iri,
        )
        out.add(version.iri, vocab.DCTERMS_CREATOR, version.created_by, version.iri)
        out.add(version.iri, vocab.DCTERMS_CREATED, _datetime_literal(version.created_at), version.iri)
    return out


# --------------------------------------------------------------------------
# import (inverse of to_full_graph)
# --------------------------------------------------------------------------


def _literal_str(graph: QuadGraph, s: Term, p: str, node: str) -> str:
    values = graph.objects_of(s, p)
    if len(values) != 1 or not isinstance(values[0], Literal):
        raise GraphImportError(f"expected exactly one {p} literal", nodes=[node])
    return values[0].lexical


def _single_iri(graph: QuadGraph, s: Term, p: str, node: str) -> str:
    values = graph.objects_of(s, p)
    if len(values) != 1 or not isinstance(values[0], str):
        raise GraphImportError(f"expected exactly one {p} IRI", nodes=[node])
    return values[0]


def _import_value(term: Term, node: str) -> Value:
    if isinstance(term, str):
        return Value(iri=term)
    if isinstance(term, Literal):
        return Value(lexical=term.lexical, datatype=term.datatype)
    raise GraphImportError("blank nodes cannot be statement values", nodes=[node])


def _import_position(graph: QuadGraph, pos: str) -> PositionInstance:
    label = _literal_str(graph, pos, vocab.THEMATIC_LABEL, pos)
    entries = graph.objects_of(pos, vocab.HAS_VALUE_ENTRY)
    ordered: list[tuple[int, Value]] = []
    for entry in entries:
        order = int(_literal_str(graph, entry, vocab.ORDER, str(entry)))
        term = graph.objects_of(entry, vocab.HAS_VALUE)
        if len(term) != 1:
            raise GraphImportError("value entry needs exactly one value", nodes=[str(entry)])
        ordered.append((order, _import_value(term[0], str(entry))))
    ordered.sort(key=lambda pair: pair[0])
    if [o for o, _ in ordered] != list(range(1, len(ordered) + 1)):
        raise GraphImportError(f"value order of {pos} is not consecutive", nodes=[pos])
    if not ordered:
        raise GraphImportError("position instance has no values", nodes=[pos])
    return PositionInstance(label, tuple(v for _, v in ordered))


def import_full_graph(graph: QuadGraph) -> AnchorStatement:
    anchors = graph.subjects_of(vocab.RDF_TYPE, vocab.ANCHOR_STATEMENT)
    if len(anchors) != 1:
        raise GraphImportError(
            f"expected exactly one anchor statement, found {len(anchors)}",
            nodes=[str(a) for a in anchors],
        )
    a = anchors[0]
    types = [
        t for t in graph.objects_of(a, vocab.RDF_TYPE)
        if t not in (vocab.ANCHOR_STATEMENT, vocab.NEGATION)
    ]
    if len(types) != 1:
        raise GraphImportError("anchor must have exactly one statement class", nodes=[str(a)])
    version_iris = graph.objects_of(a, vocab.HAS_VERSION)
    if not version_iris:
        raise GraphImportError("anchor has no versions", nodes=[str(a)])

    versions = []
    for v in version_iris:
        if not isinstance(v, str):
            raise GraphImportError("version reference must be an IRI", nodes=[str(v)])
        number = int(_literal_str(graph, v, vocab.VERSION_NUMBER, v))
        subject_pos = _single_iri(graph, v, vocab.HAS_SUBJECT_POSITION, v)
        object_nodes = graph.objects_of(v, vocab.HAS_REQUIRED_OBJECT_POSITION)
        object_nodes += graph.objects_of(v, vocab.HAS_OPTIONAL_OBJECT_POSITION)
        versions.append(
            StatementVersion(
                iri=v,
                number=number,
                subject=_import_position(graph, subject_pos),
                object_positions=tuple(
                    sorted(
                        (_import_position(graph, pos) for pos in object_nodes),
                        key=lambda p: p.thematic_label,
                    )
                ),
                created_by=_single_iri(graph, v, vocab.DCTERMS_CREATOR, v),
                created_at=datetime.fromisoformat(
                    _literal_str(graph, v, vocab.DCTERMS_CREATED, v)
                ),
            )
        )
    versions.sort(key=lambda v: v.number)
    if [v.number for v in versions] != list(range(1, len(versions) + 1)):
        raise GraphImportError(
            f"version numbers {[v.number for v in versions]} are not consecutive from 1",
            nodes=[v.iri for v in versions],
        )

    def opt_literal(p: str) -> str | None:
        value = graph.value(a, p)
        return value.lexical if isinstance(value, Literal) else None

    def opt_iri(p: str) -> str | None:
        value = graph.value(a, p)
        return value if isinstance(value, str) else None

    deleted = None
    if graph.value(a, vocab.DELETED_AT) is not None:
        deleted = DeletedMarker(
            deleted_at=datetime.fromisoformat(_literal_str(graph, a, vocab.DELETED_AT, str(a))),
            deleted_by=_single_iri(graph, a, vocab.DELETED_BY, str(a)),
        )
    modifiable_lex = opt_literal(vocab.MODIFIABLE)
    return AnchorStatement(
        iri=a,
        statement_type=types[0],
        pattern_ref=_single_iri(graph, a, vocab.HAS_DATA_SCHEMA_PATTERN, str(a)),
        metadata=ProvenanceMetadata(
            creator=_single_iri(graph, a, vocab.DCTERMS_CREATOR, str(a)),
            created_at=datetime.fromisoformat(
                _literal_str(graph, a, vocab.DCTERMS_CREATED, str(a))
            ),
            author=opt_iri(vocab.AUTHOR),
            curator=opt_iri(vocab.CURATOR),
            extraction_method=opt_literal(vocab.EXTRACTION_METHOD),
            imported_from=opt_iri(vocab.IMPORTED_FROM),
            license=opt_iri(vocab.DCTERMS_LICENSE),
        ),
        versions=tuple(versions),
        negated=vocab.NEGATION in graph.objects_of(a, vocab.RDF_TYPE),
        confidence_level=opt_literal(vocab.CONFIDENCE_LEVEL),
        context_refs=tuple(
            c for c in graph.objects_of(a, vocab.HAS_CONTEXT) if isinstance(c, str)
        ),
        modifiable=modifiable_lex != "false",
        deleted=deleted,
    )


# --------------------------------------------------------------------------
# store export
# --------------------------------------------------------------------------


def ontology_graph_iri(base_iri: str) -> str:
    return f"{base_iri.rstrip('/')}/graph/ontology"


def export_store(store: Store, form: str = "full") -> QuadGraph:
    """Everything in the store as one dataset of named graphs."""
    if form not in ("full", "light"):
        raise ValueError(f"unknown export form {form!r}")
    out = QuadGraph()
    ont = ontology_graph_iri(store.base_iri)
    for pattern in store.registry.all_latest():
        out.add(pattern.id, vocab.RDF_TYPE, vocab.STATEMENT_TYPE, ont)
        out.add(pattern.id, vocab.RDFS_LABEL, Literal(pattern.label), ont)
    for iri, label in store.labels().items():
        out.add(iri, vocab.RDFS_LABEL, Literal(label), ont)
    for anchor in store.anchors(include_deleted=True):
        pattern = store.registry.get_by_ref(anchor.pattern_ref)
        if form == "full":
            out.update(to_full_graph(anchor, pattern))
        elif anchor.deleted is None:
            out.update(
                to_light_graph(anchor.latest, pattern, negated=anchor.negated)
            )
    return out
