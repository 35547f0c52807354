"""Constraint shapes generated from patterns, plus a native validator.

Each pattern yields one node shape targeting its statement class, with one
property constraint per position (subject included).  Validation covers the
constraint subset the engine actually emits — cardinality, datatype, node
kind, class membership, lexical pattern, and numeric range — instead of
pulling in a full SHACL engine.

Shape documents serialize to Turtle using the SHACL vocabulary, with
property shapes as IRI nodes (``{shape}/prop/{n}``) so they survive a
round-trip through the quad model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from . import vocab
from .errors import SpecError
from .metamodel import PositionSpec, StatementPattern
from .rdfmodel import Literal, QuadGraph

SH = vocab.SH

NODE_SHAPE = SH + "NodeShape"
PROPERTY_SHAPE = SH + "PropertyShape"
TARGET_CLASS = SH + "targetClass"
PROPERTY = SH + "property"
PATH = SH + "path"
NAME = SH + "name"
MIN_COUNT = SH + "minCount"
MAX_COUNT = SH + "maxCount"
DATATYPE = SH + "datatype"
CLASS = SH + "class"
PATTERN = SH + "pattern"
MIN_INCLUSIVE = SH + "minInclusive"
MAX_INCLUSIVE = SH + "maxInclusive"
NODE_KIND = SH + "nodeKind"
KIND_IRI = SH + "IRI"
KIND_LITERAL = SH + "Literal"

IRI_KIND = "iri"
LITERAL_KIND = "literal"

_NUMERIC_DATATYPES = (vocab.XSD_DECIMAL, vocab.XSD_INTEGER, vocab.XSD_DOUBLE)


@dataclass(frozen=True)
class PropertyConstraint:
    path: str
    name: str = ""
    min_count: int = 0
    max_count: int | None = None
    node_kind: str | None = None
    datatype: str | None = None
    class_constraint: str | None = None
    regex: str | None = None
    minimum: Decimal | None = None
    maximum: Decimal | None = None


@dataclass(frozen=True)
class Shape:
    id: str
    target_class: str
    constraints: tuple[PropertyConstraint, ...] = ()


@dataclass(frozen=True)
class Violation:
    focus: str
    constraint: str
    message: str
    path: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    conforms: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.conforms


def _position_constraint(pattern: StatementPattern, position: PositionSpec) -> PropertyConstraint:
    if position.index == 0:
        path = vocab.SUBJECT
    else:
        path = vocab.object_position_property(
            position.index, position.required, position.is_literal
        )
    return PropertyConstraint(
        path=path,
        name=position.thematic_label,
        min_count=position.min_count if position.required else 0,
        max_count=position.max_count,
        node_kind=LITERAL_KIND if position.is_literal else IRI_KIND,
        datatype=vocab.LITERAL_DATATYPES[position.datatype] if position.is_literal else None,
        class_constraint=position.class_constraint,
    )


def generate_shape(pattern: StatementPattern) -> Shape:
    """Derive the node shape a statement graph of ``pattern`` must satisfy.

    The shape id is the pattern version IRI — the same resource anchors
    reference as their data schema pattern.
    """
    pattern.validate()
    constraints = tuple(_position_constraint(pattern, p) for p in pattern.positions())
    return Shape(id=pattern.pattern_iri, target_class=pattern.id, constraints=constraints)


def load_closure(text: str) -> dict[str, frozenset[str]]:
    """Parse a subclass-closure file: two IRIs per line, subclass first.

    Returns the transitive closure (every class maps to all its ancestors,
    itself included).
    """
    parents: dict[str, set[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise SpecError(f"closure line {lineno}: expected two IRIs", line=lineno)
        sub, sup = (f.strip("<>") for f in fields)
        parents.setdefault(sub, set()).add(sup)

    closure: dict[str, frozenset[str]] = {}

    def ancestors(node: str, trail: tuple[str, ...]) -> frozenset[str]:
        if node in closure:
            return closure[node]
        if node in trail:  # cycle: members are mutual ancestors
            return frozenset(trail[trail.index(node):])
        acc = {node}
        for parent in parents.get(node, ()):
            acc |= ancestors(parent, trail + (node,))
            acc.add(parent)
        closure[node] = frozenset(acc)
        return closure[node]

    for node in list(parents):
        ancestors(node, ())
    return closure


def _types_of(triples, node) -> set[str]:
    return {o for s, p, o in triples if s == node and p == vocab.RDF_TYPE}


def _check_value(
    constraint: PropertyConstraint,
    focus: str,
    value,
    triples,
    closure: dict[str, frozenset[str]] | None,
    out: list[Violation],
) -> None:
    def flag(kind: str, message: str) -> None:
        out.append(Violation(focus=focus, constraint=kind, message=message, path=constraint.path))

    if constraint.node_kind == IRI_KIND and not isinstance(value, str):
        flag("nodeKind", f"{constraint.name or constraint.path}: expected an IRI, got {value!r}")
        return
    if constraint.node_kind == LITERAL_KIND and not isinstance(value, Literal):
        flag("nodeKind", f"{constraint.name or constraint.path}: expected a literal, got {value!r}")
        return
    if constraint.datatype is not None:
        if not isinstance(value, Literal):
            flag("datatype", f"{constraint.name}: {value!r} is not a literal")
            return
        if value.datatype != constraint.datatype:
            flag(
                "datatype",
                f"{constraint.name}: literal {value.lexical!r} has datatype "
                f"{value.datatype}, expected {constraint.datatype}",
            )
            return
        if not _well_formed(value.lexical, constraint.datatype):
            flag("datatype", f"{constraint.name}: {value.lexical!r} is not a valid "
                             f"{constraint.datatype.rsplit('#', 1)[-1]}")
            return
    if constraint.class_constraint is not None and isinstance(value, str):
        # Open-world class check: statement graphs carry no entity typing,
        # so class membership is only falsifiable when types are asserted.
        types = _types_of(triples, value)
        if types:
            expanded = set(types)
            if closure:
                for t in types:
                    expanded |= closure.get(t, frozenset())
            if constraint.class_constraint not in expanded:
                flag(
                    "class",
                    f"{constraint.name}: {value} is typed {sorted(types)}, "
                    f"not {constraint.class_constraint}",
                )
    if constraint.regex is not None:
        lexical = value.lexical if isinstance(value, Literal) else str(value)
        if re.search(constraint.regex, lexical) is None:
            flag("pattern", f"{constraint.name}: {lexical!r} does not match /{constraint.regex}/")
    if constraint.minimum is not None or constraint.maximum is not None:
        if not isinstance(value, Literal):
            flag("range", f"{constraint.name}: {value!r} is not a numeric literal")
            return
        try:
            number = Decimal(value.lexical)
        except InvalidOperation:
            flag("range", f"{constraint.name}: {value.lexical!r} is not numeric")
            return
        if constraint.minimum is not None and number < constraint.minimum:
            flag("range", f"{constraint.name}: {number} < minimum {constraint.minimum}")
        if constraint.maximum is not None and number > constraint.maximum:
            flag("range", f"{constraint.name}: {number} > maximum {constraint.maximum}")


def validate(
    graph: QuadGraph,
    shape: Shape,
    closure: dict[str, frozenset[str]] | None = None,
) -> ValidationReport:
    """Check every instance of ``shape.target_class`` in ``graph``.

    Graph names are ignored: validation sees the merged triple view.
    Violations are data, not errors — the report always comes back.
    """
    triples = {(q.s, q.p, q.o) for q in graph}
    foci = sorted(
        {s for s, p, o in triples if p == vocab.RDF_TYPE and o == shape.target_class},
        key=str,
    )
    violations: list[Violation] = []
    for focus in foci:
        for constraint in shape.constraints:
            values = [o for s, p, o in triples if s == focus and p == constraint.path]
            if len(values) < constraint.min_count:
                violations.append(
                    Violation(
                        focus=focus,
                        constraint="minCount",
                        message=f"{constraint.name or constraint.path}: "
                        f"{len(values)} value(s), minimum {constraint.min_count}",
                        path=constraint.path,
                    )
                )
            if constraint.max_count is not None and len(values) > constraint.max_count:
                violations.append(
                    Violation(
                        focus=focus,
                        constraint="maxCount",
                        message=f"{constraint.name or constraint.path}: "
                        f"{len(values)} value(s), maximum {constraint.max_count}",
                        path=constraint.path,
                    )
                )
            for value in sorted(values, key=repr):
                _check_value(constraint, focus, value, triples, closure, violations)
    return ValidationReport(conforms=not violations, violations=tuple(violations))


def validate_all(
    graph: QuadGraph,
    shapes,
    closure: dict[str, frozenset[str]] | None = None,
) -> ValidationReport:
    violations: list[Violation] = []
    for shape in shapes:
        violations.extend(validate(graph, shape, closure).violations)
    return ValidationReport(conforms=not violations, violations=tuple(violations))


# Shapes for the position-instance form itself: statement versions, their
# position instances, and the ordered value entries under them.
META_SHAPES = (
    Shape(
        id=vocab.ROSETTA + "shape/StatementVersion",
        target_class=vocab.STATEMENT_VERSION,
        constraints=(
            PropertyConstraint(
                path=vocab.HAS_SUBJECT_POSITION,
                name="subject position",
                min_count=1,
                max_count=1,
                node_kind=IRI_KIND,
            ),
        ),
    ),
    Shape(
        id=vocab.ROSETTA + "shape/SubjectPosition",
        target_class=vocab.SUBJECT_POSITION,
        constraints=(
            PropertyConstraint(
                path=vocab.THEMATIC_LABEL,
                name="thematic label",
                min_count=1,
                max_count=1,
                node_kind=LITERAL_KIND,
                datatype=vocab.XSD_STRING,
            ),
            PropertyConstraint(
                path=vocab.HAS_VALUE_ENTRY,
                name="value entry",
                min_count=1,
                node_kind=IRI_KIND,
            ),
        ),
    ),
    Shape(
        id=vocab.ROSETTA + "shape/ObjectPosition",
        target_class=vocab.OBJECT_POSITION,
        constraints=(
            PropertyConstraint(
                path=vocab.THEMATIC_LABEL,
                name="thematic label",
                min_count=1,
                max_count=1,
                node_kind=LITERAL_KIND,
                datatype=vocab.XSD_STRING,
            ),
            PropertyConstraint(
                path=vocab.HAS_VALUE_ENTRY,
                name="value entry",
                min_count=1,
                node_kind=IRI_KIND,
            ),
        ),
    ),
    Shape(
        id=vocab.ROSETTA + "shape/ValueEntry",
        target_class=vocab.VALUE_ENTRY,
        constraints=(
            PropertyConstraint(
                path=vocab.ORDER,
                name="order",
                min_count=1,
                max_count=1,
                node_kind=LITERAL_KIND,
                datatype=vocab.XSD_INTEGER,
            ),
            PropertyConstraint(
                path=vocab.HAS_VALUE,
                name="value",
                min_count=1,
                max_count=1,
            ),
        ),
    ),
)


def _well_formed(lexical: str, datatype: str) -> bool:
    if datatype == vocab.XSD_INTEGER:
        return re.fullmatch(r"[+-]?\d+", lexical) is not None
    if datatype in (vocab.XSD_DECIMAL, vocab.XSD_DOUBLE):
        try:
            Decimal(lexical)
        except InvalidOperation:
            return False
        return True
    if datatype == vocab.XSD_BOOLEAN:
        return lexical in ("true", "false", "0", "1")
    if datatype == vocab.XSD_DATE:
        return re.fullmatch(r"\d{4}-\d{2}-\d{2}", lexical) is not None
    return True


# -- Turtle form --------------------------------------------------------------


def shape_to_graph(shape: Shape) -> QuadGraph:
    g = QuadGraph()
    g.add(shape.id, vocab.RDF_TYPE, NODE_SHAPE)
    g.add(shape.id, TARGET_CLASS, shape.target_class)
    for n, c in enumerate(shape.constraints, start=1):
        prop = f"{shape.id}/prop/{n}"
        g.add(shape.id, PROPERTY, prop)
        g.add(prop, vocab.RDF_TYPE, PROPERTY_SHAPE)
        g.add(prop, PATH, c.path)
        if c.name:
            g.add(prop, NAME, Literal(c.name))
        if c.min_count:
            g.add(prop, MIN_COUNT, Literal(str(c.min_count), vocab.XSD_INTEGER))
        if c.max_count is not None:
            g.add(prop, MAX_COUNT, Literal(str(c.max_count), vocab.XSD_INTEGER))
        if c.node_kind == IRI_KIND:
            g.add(prop, NODE_KIND, KIND_IRI)
        elif c.node_kind == LITERAL_KIND:
            g.add(prop, NODE_KIND, KIND_LITERAL)
        if c.datatype is not None:
            g.add(prop, DATATYPE, c.datatype)
        if c.class_constraint is not None:
            g.add(prop, CLASS, c.class_constraint)
        if c.regex is not None:
            g.add(prop, PATTERN, Literal(c.regex))
        if c.minimum is not None:
            g.add(prop, MIN_INCLUSIVE, Literal(str(c.minimum), vocab.XSD_DECIMAL))
        if c.maximum is not None:
            g.add(prop, MAX_INCLUSIVE, Literal(str(c.maximum), vocab.XSD_DECIMAL))
    return g


def shape_from_graph(graph: QuadGraph) -> Shape:
    triples = {(q.s, q.p, q.o) for q in graph}
    nodes = sorted({s for s, p, o in triples if p == vocab.RDF_TYPE and o == NODE_SHAPE})
    if len(nodes) != 1:
        raise SpecError(f"expected exactly one node shape, found {len(nodes)}")
    node = nodes[0]
    target = next((o for s, p, o in triples if s == node and p == TARGET_CLASS), None)
    if not isinstance(target, str):
        raise SpecError("node shape lacks a target class")
    props = [o for s, p, o in triples if s == node and p == PROPERTY]

    def prop_index(iri: str) -> int:
        tail = iri.rsplit("/", 1)[-1]
        return int(tail) if tail.isdigit() else 0

    def one(subject, predicate):
        return next((o for s, p, o in triples if s == subject and p == predicate), None)

    constraints = []
    for prop in sorted(props, key=prop_index):
        path = one(prop, PATH)
        if not isinstance(path, str):
            raise SpecError(f"property shape {prop} lacks a path")

        def lex(predicate):
            value = one(prop, predicate)
            return value.lexical if isinstance(value, Literal) else None

        kind = one(prop, NODE_KIND)
        constraints.append(
            PropertyConstraint(
                path=path,
                name=lex(NAME) or "",
                min_count=int(lex(MIN_COUNT) or 0),
                max_count=int(lex(MAX_COUNT)) if lex(MAX_COUNT) is not None else None,
                node_kind={KIND_IRI: IRI_KIND, KIND_LITERAL: LITERAL_KIND}.get(kind),
                datatype=one(prop, DATATYPE),
                class_constraint=one(prop, CLASS),
                regex=lex(PATTERN),
                minimum=Decimal(lex(MIN_INCLUSIVE)) if lex(MIN_INCLUSIVE) else None,
                maximum=Decimal(lex(MAX_INCLUSIVE)) if lex(MAX_INCLUSIVE) else None,
            )
        )
    return Shape(id=node, target_class=target, constraints=tuple(constraints))
