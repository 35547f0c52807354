"""Schema crosswalks: rewrite a statement's slot values into another schema.

A crosswalk spec is declarative — node templates mint intermediate
instances, triple templates say how slot values (``$LABEL``), minted nodes
(``?var``), and constant IRIs connect.  Resource values of slots listed in
``mapped_slots`` are pushed through an entity map (source IRI → target
vocabulary IRI); literal values are copied verbatim.

The output lands in a named graph whose IRI is the statement version IRI,
so the statement keeps its identifier across schemas.  Minted node IRIs are
``{version}/xw/{spec}/{var}`` — stable, so identical inputs give identical
graphs.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Mapping

import yaml

from . import vocab
from .errors import CrosswalkError, SpecError, UnmappedEntityError
from .metamodel import StatementPattern
from .rdfmodel import Literal, QuadGraph
from .store import StatementVersion

EXACT = "exact"
CLOSE = "close"

_RELATIONS = {
    "skos:exactMatch": EXACT,
    "skos:closeMatch": CLOSE,
    vocab.SKOS + "exactMatch": EXACT,
    vocab.SKOS + "closeMatch": CLOSE,
    EXACT: EXACT,
    CLOSE: CLOSE,
}


@dataclass(frozen=True)
class EntityMap:
    name: str
    pairs: Mapping[str, tuple[str, str]]  # source IRI -> (target IRI, relation)

    def map(self, iri: str) -> str:
        try:
            return self.pairs[iri][0]
        except KeyError:
            raise UnmappedEntityError(iri, self.name) from None


def load_entity_map(text: str, name: str = "") -> EntityMap:
    """Parse a three-column mapping table (subject, match relation, object)."""
    pairs: dict[str, tuple[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip().strip("<>") for f in line.split("\t")]
        if len(fields) != 3:
            raise SpecError(f"entity map line {lineno}: expected 3 tab-separated fields",
                            line=lineno)
        source, relation, target = fields
        if source == "subject_id":  # header row
            continue
        if relation not in _RELATIONS:
            raise SpecError(f"entity map line {lineno}: unknown relation {relation!r}",
                            line=lineno)
        if source in pairs:
            raise SpecError(f"entity map line {lineno}: duplicate source {source}",
                            line=lineno)
        pairs[source] = (target, _RELATIONS[relation])
    return EntityMap(name=name, pairs=pairs)


@dataclass(frozen=True)
class NodeTemplate:
    var: str
    type: str | None = None  # constant IRI or "$SLOT"


@dataclass(frozen=True)
class TripleTemplate:
    s: str
    p: str
    o: str


@dataclass(frozen=True)
class CrosswalkSpec:
    id: str
    source_pattern: str
    target_name: str
    node_templates: tuple[NodeTemplate, ...] = ()
    triple_templates: tuple[TripleTemplate, ...] = ()
    required_slots: tuple[str, ...] = ()
    mapped_slots: tuple[str, ...] = ()
    entity_map_ref: str | None = None

    def slot_vars(self) -> set[str]:
        out = set()
        for t in self.triple_templates:
            for term in (t.s, t.p, t.o):
                if term.startswith("$"):
                    out.add(term[1:])
        for n in self.node_templates:
            if n.type and n.type.startswith("$"):
                out.add(n.type[1:])
        return out


_SPEC_KEYS = {"id", "source_pattern", "target", "entity_map",
              "required_slots", "mapped_slots", "nodes", "triples"}


def load_crosswalk_spec(text: str, pattern: StatementPattern | None = None) -> CrosswalkSpec:
    doc = yaml.safe_load(text)
    if not isinstance(doc, Mapping):
        raise SpecError("crosswalk document must be a mapping")
    unknown = set(doc) - _SPEC_KEYS
    if unknown:
        raise SpecError(f"unknown crosswalk keys: {sorted(unknown)}")
    for key in ("id", "source_pattern", "target", "triples"):
        if key not in doc:
            raise SpecError(f"crosswalk document is missing {key!r}")

    nodes = []
    seen_vars = set()
    for item in doc.get("nodes") or ():
        if not isinstance(item, Mapping) or "var" not in item:
            raise SpecError("node template needs a 'var'")
        if set(item) - {"var", "type"}:
            raise SpecError(f"unknown node template keys: {sorted(set(item) - {'var', 'type'})}")
        var = str(item["var"])
        if var in seen_vars:
            raise SpecError(f"duplicate node var {var!r}")
        seen_vars.add(var)
        nodes.append(NodeTemplate(var=var, type=item.get("type")))

    triples = []
    for i, item in enumerate(doc["triples"] or ()):
        if not isinstance(item, (list, tuple)) or len(item) != 3:
            raise SpecError(f"triple template {i} must be a [s, p, o] list", index=i)
        s, p, o = (str(t) for t in item)
        for term in (s, p, o):
            if term.startswith("?") and term[1:] not in seen_vars:
                raise SpecError(f"triple template {i} references unknown node {term!r}", index=i)
        triples.append(TripleTemplate(s, p, o))
    if not triples:
        raise SpecError("crosswalk has no triple templates")

    spec = CrosswalkSpec(
        id=str(doc["id"]),
        source_pattern=str(doc["source_pattern"]),
        target_name=str(doc["target"]),
        node_templates=tuple(nodes),
        triple_templates=tuple(triples),
        required_slots=tuple(doc.get("required_slots") or ()),
        mapped_slots=tuple(doc.get("mapped_slots") or ()),
        entity_map_ref=doc.get("entity_map"),
    )
    if pattern is not None:
        check_against_pattern(spec, pattern)
    return spec


def check_against_pattern(spec: CrosswalkSpec, pattern: StatementPattern) -> None:
    labels = {p.thematic_label for p in pattern.positions()}
    for label in sorted(spec.slot_vars() | set(spec.required_slots) | set(spec.mapped_slots)):
        if label not in labels:
            raise SpecError(
                f"crosswalk {spec.id} references slot ${label} absent from "
                f"pattern {pattern.id}",
                slot=label,
            )


def _matches_source(spec: CrosswalkSpec, pattern: StatementPattern) -> bool:
    ref = spec.source_pattern
    return pattern.id == ref or pattern.id.endswith("/" + ref) or pattern.label == ref


def _slot_terms(
    version: StatementVersion,
    pattern: StatementPattern,
    spec: CrosswalkSpec,
    entity_map: EntityMap | None,
) -> dict[str, list]:
    mapped = set(spec.mapped_slots)
    out: dict[str, list] = {}
    for label, values in version.parts().items():
        position = pattern.position(label)
        terms = []
        for value in values:
            if value.iri is not None:
                if label in mapped:
                    if entity_map is None:
                        raise UnmappedEntityError(value.iri, spec.entity_map_ref or spec.id)
                    terms.append(entity_map.map(value.iri))
                else:
                    terms.append(value.iri)
            else:
                datatype = vocab.LITERAL_DATATYPES.get(position.datatype or "text",
                                                       vocab.XSD_STRING)
                terms.append(Literal(value.lexical, datatype))
        out[label] = terms
    return out


def apply_crosswalk(
    version: StatementVersion,
    pattern: StatementPattern,
    spec: CrosswalkSpec,
    entity_map: EntityMap | None = None,
) -> QuadGraph:
    if not _matches_source(spec, pattern):
        raise CrosswalkError(
            f"crosswalk {spec.id} targets pattern {spec.source_pattern}, "
            f"statement instantiates {pattern.id}",
            crosswalk=spec.id,
        )
    check_against_pattern(spec, pattern)
    slots = _slot_terms(version, pattern, spec, entity_map)
    for label in spec.required_slots:
        if not slots.get(label):
            raise CrosswalkError(
                f"crosswalk {spec.id} requires slot {label}, which is empty",
                crosswalk=spec.id, slot=label,
            )

    g = version.iri
    nodes = {n.var: f"{version.iri}/xw/{spec.id}/{n.var}" for n in spec.node_templates}

    def expand(term: str) -> list:
        if term.startswith("?"):
            return [nodes[term[1:]]]
        if term.startswith("$"):
            values = slots.get(term[1:], [])
            if not values:
                raise CrosswalkError(
                    f"crosswalk {spec.id} uses slot {term[1:]}, which is empty",
                    crosswalk=spec.id, slot=term[1:],
                )
            return values
        return [term]

    out = QuadGraph()
    for node in spec.node_templates:
        if node.type is None:
            continue
        for type_term in expand(node.type):
            out.add(nodes[node.var], vocab.RDF_TYPE, type_term, g)
    for template in spec.triple_templates:
        for s in expand(template.s):
            for p in expand(template.p):
                for o in expand(template.o):
                    out.add(s, p, o, g)
    return out


def linking_triples(graph: QuadGraph) -> list:
    """Non-typing quads: the links that carry the statement's content."""
    return [q for q in graph if q.p != vocab.RDF_TYPE]


# -- relational target ---------------------------------------------------------

RELATIONAL_COLUMNS = ("OBJECT", "QUALITY", "VALUE", "UNIT", "STATEMENT_ID")

# Column → slot alignment for the shipped measurement pattern.
MEASUREMENT_COLUMN_SLOTS = {
    "OBJECT": "OBJECT",
    "QUALITY": "QUALITY",
    "VALUE": "MAIN_VALUE",
    "UNIT": "UNIT",
}


def to_relational_rows(
    statements: Iterable[tuple[StatementVersion, StatementPattern]],
    column_slots: Mapping[str, str] = MEASUREMENT_COLUMN_SLOTS,
) -> list[dict[str, str]]:
    """One row per statement; the version IRI rides along in STATEMENT_ID."""
    rows = []
    for version, pattern in statements:
        parts = version.parts()
        row = {}
        for column, slot in column_slots.items():
            values = parts.get(slot, [])
            row[column] = "|".join(
                v.iri if v.iri is not None else v.lexical for v in values
            )
        row["STATEMENT_ID"] = version.iri
        rows.append(row)
    return rows


def relational_csv(
    statements: Iterable[tuple[StatementVersion, StatementPattern]],
    column_slots: Mapping[str, str] = MEASUREMENT_COLUMN_SLOTS,
) -> str:
    columns = tuple(column_slots) + ("STATEMENT_ID",)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(to_relational_rows(statements, column_slots))
    return buffer.getvalue()
