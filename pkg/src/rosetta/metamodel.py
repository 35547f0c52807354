"""Statement patterns: the n-ary templates that statements instantiate.

A pattern couples a natural-language verb with one subject position and an
ordered list of object positions.  Each position carries a thematic label,
count bounds, a value kind (resource or typed literal), and the text
fragments (preposition/postposition) used when composing the sentence.

Composition semantics
---------------------
Segments are emitted in order: subject, verb, then each filled object
position.  A position whose ``preposition`` is ``None`` is separated from
the preceding text by a single space; a provided preposition (including
``""``) is glued verbatim with no implicit space.  Postpositions are
appended verbatim after the joined values.  Multiple values join with
``", "`` and a final ``" and "``.  Optional positions without values are
elided together with their prepositions/postpositions.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterator, Mapping

import yaml

from .errors import ConflictError, NotFoundError, SpecError, ValidationError
from .vocab import LITERAL_DATATYPES

RESOURCE = "resource"
LITERAL = "literal"

_LABEL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9 _\-]*$")


@dataclass(frozen=True)
class PositionSpec:
    """One slot of a pattern.  ``index`` is 0 for the subject, 1..n for objects."""

    index: int
    thematic_label: str
    kind: str = RESOURCE
    required: bool = True
    datatype: str | None = None
    class_constraint: str | None = None
    placeholder: str | None = None
    preposition: str | None = None
    postposition: str | None = None
    min_count: int = 1
    max_count: int | None = 1
    description: str = ""
    transitive: bool = False

    @property
    def display_placeholder(self) -> str:
        return self.placeholder if self.placeholder is not None else self.thematic_label

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL

    def validate(self) -> None:
        if not _LABEL_RE.match(self.thematic_label):
            raise ValidationError(
                f"invalid thematic label {self.thematic_label!r}", label=self.thematic_label
            )
        if self.kind not in (RESOURCE, LITERAL):
            raise ValidationError(f"unknown value kind {self.kind!r}", label=self.thematic_label)
        if self.kind == LITERAL:
            if self.datatype not in LITERAL_DATATYPES:
                raise ValidationError(
                    f"literal position needs a datatype from {sorted(LITERAL_DATATYPES)}",
                    label=self.thematic_label,
                )
            if self.class_constraint:
                raise ValidationError(
                    "class constraints apply only to resource positions",
                    label=self.thematic_label,
                )
        elif self.datatype is not None:
            raise ValidationError(
                "resource positions cannot carry a datatype", label=self.thematic_label
            )
        if self.min_count < 0:
            raise ValidationError("min count cannot be negative", label=self.thematic_label)
        if self.max_count is not None and self.max_count < max(self.min_count, 1):
            raise ValidationError("max count below min count", label=self.thematic_label)
        if self.required and self.min_count < 1:
            raise ValidationError(
                "required positions need min count >= 1", label=self.thematic_label
            )
        if not self.required and self.min_count != 0:
            raise ValidationError(
                "optional positions must have min count 0", label=self.thematic_label
            )


@dataclass(frozen=True)
class StatementPattern:
    id: str
    label: str
    verb_display: str
    subject: PositionSpec
    object_positions: tuple[PositionSpec, ...]
    description: str = ""
    example_sentences: tuple[str, ...] = ()
    negatable: bool = True
    negated_verb_display: str | None = None
    version: int = 1

    @property
    def pattern_iri(self) -> str:
        """IRI of this exact pattern version, referenced by stored statements."""
        return f"{self.id}/pattern/v{self.version}"

    def position_class(self, thematic_label: str) -> str:
        return f"{self.id}/position/{thematic_label.replace(' ', '_')}"

    def positions(self) -> Iterator[PositionSpec]:
        yield self.subject
        yield from self.object_positions

    def position(self, thematic_label: str) -> PositionSpec:
        for pos in self.positions():
            if pos.thematic_label == thematic_label:
                return pos
        raise NotFoundError(
            f"pattern {self.label!r} has no position {thematic_label!r}",
            pattern=self.id,
            label=thematic_label,
        )

    def has_position(self, thematic_label: str) -> bool:
        return any(p.thematic_label == thematic_label for p in self.positions())

    def validate(self) -> None:
        if not self.verb_display.strip():
            raise ValidationError("verb display text cannot be empty", pattern=self.label)
        if not self.label.strip():
            raise ValidationError("pattern label cannot be empty")
        if self.subject.index != 0:
            raise ValidationError("subject must have index 0", pattern=self.label)
        if self.subject.kind != RESOURCE:
            raise ValidationError("subject position must hold resources", pattern=self.label)
        if not self.subject.required:
            raise ValidationError("subject position is always required", pattern=self.label)
        indices = [p.index for p in self.object_positions]
        if indices != list(range(1, len(indices) + 1)):
            raise ValidationError(
                "object positions must be numbered 1..n without gaps",
                pattern=self.label,
                indices=indices,
            )
        labels = [p.thematic_label for p in self.positions()]
        duplicates = {l for l in labels if labels.count(l) > 1}
        if duplicates:
            raise ValidationError(
                f"duplicate thematic labels: {sorted(duplicates)}", pattern=self.label
            )
        for pos in self.positions():
            pos.validate()


def compose(
    pattern: StatementPattern,
    parts: Mapping[str, list[str]],
    negated: bool = False,
) -> tuple[str, dict[str, tuple[int, int]]]:
    """Assemble the sentence from per-position display texts.

    Returns the text and, per thematic label, the span of the joined
    values within it.  Empty/missing optional positions are elided.
    """
    pieces: list[str] = []
    spans: dict[str, tuple[int, int]] = {}
    length = 0

    def emit(text: str) -> None:
        nonlocal length
        pieces.append(text)
        length += len(text)

    def emit_position(pos: PositionSpec, values: list[str], first: bool) -> None:
        sep = "" if first else " "
        prefix = pos.preposition if pos.preposition is not None else sep
        joined = join_values(values)
        emit(prefix)
        spans[pos.thematic_label] = (length, length + len(joined))
        emit(joined + (pos.postposition or ""))

    if negated and not pattern.negatable:
        raise ValidationError(f"pattern {pattern.label!r} is not negatable", pattern=pattern.id)
    prefix = ""
    if negated and pattern.negated_verb_display is None:
        prefix = "It is not the case that "
    emit(prefix)
    verb = pattern.verb_display
    if negated and pattern.negated_verb_display is not None:
        verb = pattern.negated_verb_display

    # the negation prefix carries its own trailing space, so the subject
    # never needs a separator of its own
    emit_position(pattern.subject, parts[pattern.subject.thematic_label], first=True)
    emit(" " + verb)
    for pos in pattern.object_positions:
        values = parts.get(pos.thematic_label) or []
        if not values:
            if pos.required:
                raise ValidationError(
                    f"required position {pos.thematic_label!r} has no values",
                    label=pos.thematic_label,
                )
            continue
        emit_position(pos, values, first=False)
    return "".join(pieces), spans


def join_values(values: list[str]) -> str:
    if not values:
        return ""
    if len(values) == 1:
        return values[0]
    return ", ".join(values[:-1]) + " and " + values[-1]


def derive_formalized_statement(pattern: StatementPattern) -> str:
    """The pattern's sentence with every position filled by its placeholder."""
    parts = {p.thematic_label: [p.display_placeholder] for p in pattern.positions()}
    text, _ = compose(pattern, parts)
    return text


def preview(pattern: StatementPattern, fill: Mapping[str, list[str]] | None = None) -> str:
    """Formalized statement with some placeholders replaced by sample texts."""
    parts = {p.thematic_label: [p.display_placeholder] for p in pattern.positions()}
    for label, values in (fill or {}).items():
        if not pattern.has_position(label):
            raise NotFoundError(f"no position {label!r} to fill", label=label)
        if values:
            parts[label] = list(values)
    text, _ = compose(pattern, parts)
    return text


@dataclass(frozen=True)
class TypeDescriptor:
    verb_lemma: str
    arity: int
    adjunct_count: int


def classify_statement_type(pattern: StatementPattern) -> TypeDescriptor:
    """Coarse grouping key: verb plus how many core and optional slots."""
    required = sum(1 for p in pattern.object_positions if p.required)
    optional = len(pattern.object_positions) - required
    return TypeDescriptor(
        verb_lemma=pattern.verb_display.split()[0].lower(),
        arity=1 + required,
        adjunct_count=optional,
    )


def reorder_object_positions(pattern: StatementPattern, new_order: list[int]) -> StatementPattern:
    """Return the next pattern version with object positions re-numbered.

    ``new_order`` lists the current indices in their desired order.
    """
    if sorted(new_order) != list(range(1, len(pattern.object_positions) + 1)):
        raise ValidationError(
            "new order must be a permutation of the current position indices",
            expected=sorted(p.index for p in pattern.object_positions),
            got=new_order,
        )
    by_index = {p.index: p for p in pattern.object_positions}
    reordered = tuple(
        replace(by_index[old_index], index=new_index)
        for new_index, old_index in enumerate(new_order, start=1)
    )
    updated = replace(pattern, object_positions=reordered, version=pattern.version + 1)
    updated.validate()
    return updated


# --------------------------------------------------------------------------
# pattern documents (files and API drafts share this schema)
# --------------------------------------------------------------------------

_SUBJECT_KEYS = {
    "thematic_label", "class_constraint", "placeholder", "preposition",
    "postposition", "min", "max", "description", "transitive",
}
_OBJECT_KEYS = _SUBJECT_KEYS | {"required", "kind", "datatype"}
_PATTERN_KEYS = {
    "label", "description", "examples", "verb", "negated_verb",
    "negatable", "subject", "objects",
}


def _position_from_doc(doc: Mapping[str, Any], index: int) -> PositionSpec:
    if not isinstance(doc, Mapping):
        raise SpecError(f"position {index} must be a mapping")
    allowed = _SUBJECT_KEYS if index == 0 else _OBJECT_KEYS
    unknown = set(doc) - allowed
    if unknown:
        raise SpecError(f"unknown position keys: {sorted(unknown)}", index=index)
    if "thematic_label" not in doc:
        raise SpecError("position is missing its thematic_label", index=index)
    if index == 0:
        required, kind = True, RESOURCE
        max_count = doc.get("max", None)
    else:
        required = bool(doc.get("required", True))
        kind = doc.get("kind", RESOURCE)
        max_count = doc.get("max", 1)
    if isinstance(max_count, str):
        if max_count != "unbounded":
            raise SpecError(f"max must be an integer, null, or 'unbounded', got {max_count!r}")
        max_count = None
    min_default = 1 if required else 0
    return PositionSpec(
        index=index,
        thematic_label=str(doc["thematic_label"]),
        kind=str(kind),
        required=required,
        datatype=doc.get("datatype"),
        class_constraint=doc.get("class_constraint"),
        placeholder=doc.get("placeholder"),
        preposition=doc.get("preposition"),
        postposition=doc.get("postposition"),
        min_count=int(doc.get("min", min_default)),
        max_count=max_count,
        description=str(doc.get("description", "")),
        transitive=bool(doc.get("transitive", False)),
    )


def pattern_from_document(
    doc: Mapping[str, Any],
    *,
    id: str,
    version: int = 1,
) -> StatementPattern:
    if not isinstance(doc, Mapping):
        raise SpecError("pattern document must be a mapping")
    unknown = set(doc) - _PATTERN_KEYS
    if unknown:
        raise SpecError(f"unknown pattern keys: {sorted(unknown)}")
    for key in ("label", "verb", "subject", "objects"):
        if key not in doc:
            raise SpecError(f"pattern document is missing {key!r}")
    objects = doc["objects"]
    if not isinstance(objects, list):
        raise SpecError("objects must be a list")
    pattern = StatementPattern(
        id=id,
        label=str(doc["label"]),
        description=str(doc.get("description", "")),
        example_sentences=tuple(doc.get("examples", ()) or ()),
        verb_display=str(doc["verb"]),
        negated_verb_display=doc.get("negated_verb"),
        negatable=bool(doc.get("negatable", True)),
        subject=_position_from_doc(doc["subject"], 0),
        object_positions=tuple(
            _position_from_doc(obj, i) for i, obj in enumerate(objects, start=1)
        ),
        version=version,
    )
    try:
        pattern.validate()
    except ValidationError as err:
        raise SpecError(f"invalid pattern document: {err.message}", **err.details) from err
    return pattern


def _position_to_doc(pos: PositionSpec) -> dict[str, Any]:
    doc: dict[str, Any] = {"thematic_label": pos.thematic_label}
    if pos.index > 0:
        doc["required"] = pos.required
        doc["kind"] = pos.kind
        if pos.datatype is not None:
            doc["datatype"] = pos.datatype
    for key, value in (
        ("class_constraint", pos.class_constraint),
        ("placeholder", pos.placeholder),
        ("preposition", pos.preposition),
        ("postposition", pos.postposition),
    ):
        if value is not None:
            doc[key] = value
    doc["min"] = pos.min_count
    doc["max"] = pos.max_count
    if pos.description:
        doc["description"] = pos.description
    if pos.transitive:
        doc["transitive"] = True
    return doc


def pattern_to_document(pattern: StatementPattern) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "label": pattern.label,
        "description": pattern.description,
        "examples": list(pattern.example_sentences),
        "verb": pattern.verb_display,
        "negatable": pattern.negatable,
        "subject": _position_to_doc(pattern.subject),
        "objects": [_position_to_doc(p) for p in pattern.object_positions],
    }
    if pattern.negated_verb_display is not None:
        doc["negated_verb"] = pattern.negated_verb_display
    return doc


def load_pattern_file(text: str, *, id: str, version: int = 1) -> StatementPattern:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise SpecError(f"pattern file is not valid YAML: {err}") from err
    return pattern_from_document(doc, id=id, version=version)


def dump_pattern_file(pattern: StatementPattern) -> str:
    return yaml.safe_dump(pattern_to_document(pattern), sort_keys=False, allow_unicode=True)


# --------------------------------------------------------------------------
# registry
# --------------------------------------------------------------------------


def _slugify(label: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", label.lower()).strip("-")
    return slug or "type"


class PatternRegistry:
    """All pattern versions, keyed by statement-class IRI."""

    def __init__(self, base_iri: str = "https://example.org/rosetta"):
        self.base_iri = base_iri.rstrip("/")
        self._versions: dict[str, dict[int, StatementPattern]] = {}

    def define(
        self,
        draft: Mapping[str, Any],
        *,
        id_factory: Callable[[], str] | None = None,
    ) -> StatementPattern:
        """Mint a new statement type from a draft document."""
        doc = dict(draft)
        slug = _slugify(str(doc.get("label", "")))
        type_id = f"{self.base_iri}/type/{slug}"
        if type_id in self._versions:
            suffix = id_factory() if id_factory else uuid.uuid4().hex[:8]
            type_id = f"{type_id}-{suffix}"
        if type_id in self._versions:
            raise ConflictError(f"statement type {type_id} already exists", id=type_id)
        pattern = pattern_from_document(doc, id=type_id, version=1)
        self._versions[type_id] = {1: pattern}
        return pattern

    def register(self, pattern: StatementPattern) -> StatementPattern:
        pattern.validate()
        versions = self._versions.setdefault(pattern.id, {})
        if pattern.version in versions:
            raise ConflictError(
                f"pattern version v{pattern.version} of {pattern.id} already exists",
                id=pattern.id,
            )
        versions[pattern.version] = pattern
        return pattern

    def get(self, type_id: str, version: int | None = None) -> StatementPattern:
        versions = self._versions.get(type_id)
        if not versions:
            raise NotFoundError(f"unknown statement type {type_id}", id=type_id)
        if version is None:
            return versions[max(versions)]
        if version not in versions:
            raise NotFoundError(f"no pattern version v{version} for {type_id}", id=type_id)
        return versions[version]

    def get_by_ref(self, pattern_iri: str) -> StatementPattern:
        for versions in self._versions.values():
            for pattern in versions.values():
                if pattern.pattern_iri == pattern_iri:
                    return pattern
        raise NotFoundError(f"unknown pattern reference {pattern_iri}", ref=pattern_iri)

    def resolve(self, key: str) -> StatementPattern:
        """Find the latest pattern by class IRI or by label."""
        if key in self._versions:
            return self.get(key)
        matches = [self.get(tid) for tid in self._versions if self.get(tid).label == key]
        if len(matches) == 1:
            return matches[0]
        if matches:
            raise ConflictError(f"label {key!r} is ambiguous", label=key)
        raise NotFoundError(f"unknown statement type {key!r}", key=key)

    def reorder(self, type_id: str, new_order: list[int]) -> StatementPattern:
        updated = reorder_object_positions(self.get(type_id), new_order)
        return self.register(updated)

    def all_latest(self) -> list[StatementPattern]:
        return sorted(
            (self.get(tid) for tid in self._versions), key=lambda p: (p.label, p.id)
        )
