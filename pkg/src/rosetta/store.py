"""Versioned statement storage.

Anchors are stable identities; every content edit appends an immutable
version.  Anchor-level flags (negation, confidence, contexts, modifiable)
change in place without versioning.  Deletion is a soft marker: content
access raises ``GoneError`` but metadata and history stay readable.

State lives in memory, backed by an append-only JSONL log that is replayed
on startup.  Writes to one anchor are serialized with a per-anchor lock,
so version numbers are linear and gap-free.
"""

from __future__ import annotations

import json
import re
import threading
import uuid
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping
from urllib.parse import urlparse

from .errors import (
    ConstraintViolation,
    ForbiddenError,
    GoneError,
    NotFoundError,
    ValidationError,
)
from .metamodel import PatternRegistry, StatementPattern, pattern_from_document
from .vocab import LITERAL_DATATYPES, XSD_BOOLEAN, XSD_DATE, XSD_DECIMAL, XSD_INTEGER

DEFAULT_BASE = "https://example.org/rosetta"

_INTEGER_RE = re.compile(r"^[+-]?\d+$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")


@dataclass(frozen=True)
class Value:
    """Either a resource reference or a typed literal."""

    iri: str | None = None
    lexical: str | None = None
    datatype: str | None = None

    def __post_init__(self):
        if (self.iri is None) == (self.lexical is None):
            raise ValidationError("a value is either a resource IRI or a literal lexical form")
        if self.iri is not None and self.datatype is not None:
            raise ValidationError("resource values carry no datatype")

    @property
    def is_resource(self) -> bool:
        return self.iri is not None

    def to_json(self) -> dict[str, Any]:
        if self.is_resource:
            return {"iri": self.iri}
        return {"lexical": self.lexical, "datatype": self.datatype}

    @staticmethod
    def from_json(doc: Mapping[str, Any]) -> "Value":
        if "iri" in doc:
            return Value(iri=doc["iri"])
        return Value(lexical=doc["lexical"], datatype=doc.get("datatype"))


@dataclass(frozen=True)
class PositionInstance:
    thematic_label: str
    values: tuple[Value, ...]


@dataclass(frozen=True)
class StatementVersion:
    iri: str
    number: int
    subject: PositionInstance
    object_positions: tuple[PositionInstance, ...]  # sorted by thematic label
    created_by: str
    created_at: datetime

    def position(self, thematic_label: str) -> PositionInstance | None:
        if self.subject.thematic_label == thematic_label:
            return self.subject
        for pos in self.object_positions:
            if pos.thematic_label == thematic_label:
                return pos
        return None

    def parts(self) -> dict[str, tuple[Value, ...]]:
        out = {self.subject.thematic_label: self.subject.values}
        for pos in self.object_positions:
            out[pos.thematic_label] = pos.values
        return out


@dataclass(frozen=True)
class ProvenanceMetadata:
    creator: str
    created_at: datetime
    author: str | None = None
    curator: str | None = None
    extraction_method: str | None = None
    imported_from: str | None = None
    license: str | None = None

    def to_json(self) -> dict[str, Any]:
        doc = {"creator": self.creator, "created_at": self.created_at.isoformat()}
        for key in ("author", "curator", "extraction_method", "imported_from", "license"):
            value = getattr(self, key)
            if value is not None:
                doc[key] = value
        return doc


@dataclass(frozen=True)
class DeletedMarker:
    deleted_at: datetime
    deleted_by: str


@dataclass
class AnchorStatement:
    iri: str
    statement_type: str
    pattern_ref: str
    metadata: ProvenanceMetadata
    versions: tuple[StatementVersion, ...] = ()
    negated: bool = False
    confidence_level: str | None = None
    context_refs: tuple[str, ...] = ()
    modifiable: bool = True
    deleted: DeletedMarker | None = None

    @property
    def latest(self) -> StatementVersion:
        return self.versions[-1]

    def version(self, number: int) -> StatementVersion:
        for v in self.versions:
            if v.number == number:
                return v
        raise NotFoundError(
            f"statement has no version {number}", statement=self.iri, version=number
        )


@dataclass(frozen=True)
class PositionChange:
    thematic_label: str
    change: str  # added | removed | modified | reordered


@dataclass(frozen=True)
class ChangeRecord:
    kind: str  # created | updated | deleted
    version: int | None
    by: str
    at: datetime
    changes: tuple[PositionChange, ...] = ()


_METADATA_PATCH_KEYS = {
    "negated", "confidence_level", "context_refs", "modifiable",
    "author", "curator", "extraction_method", "imported_from", "license",
}


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


def _check_lexical(lexical: str, datatype: str, label: str) -> None:
    ok = True
    if datatype == XSD_INTEGER:
        ok = bool(_INTEGER_RE.match(lexical))
    elif datatype == XSD_DECIMAL:
        ok = bool(_DECIMAL_RE.match(lexical))
    elif datatype == XSD_BOOLEAN:
        ok = lexical in ("true", "false")
    elif datatype == XSD_DATE:
        try:
            date.fromisoformat(lexical)
        except ValueError:
            ok = False
    elif datatype == LITERAL_DATATYPES["URL"]:
        ok = bool(urlparse(lexical).scheme) and " " not in lexical
    if not ok:
        raise ConstraintViolation(
            f"value {lexical!r} is not a valid {datatype.rsplit('#', 1)[-1]}",
            position=label,
            lexical=lexical,
        )


class Store:
    def __init__(
        self,
        data_dir: str | Path | None = None,
        *,
        base_iri: str = DEFAULT_BASE,
        id_factory: Callable[[], str] | None = None,
        clock: Callable[[], datetime] = _utcnow,
    ):
        self.base_iri = base_iri.rstrip("/")
        self.registry = PatternRegistry(self.base_iri)
        self._id_factory = id_factory or (lambda: str(uuid.uuid4()))
        self._clock = clock
        self._anchors: dict[str, AnchorStatement] = {}
        self._labels: dict[str, str] = {}
        self._listeners: list[Callable[[str, str | None], None]] = []
        self._mutex = threading.Lock()
        self._anchor_locks: dict[str, threading.Lock] = {}
        self._log_path: Path | None = None
        self._log_lock = threading.Lock()
        if data_dir is not None:
            data_dir = Path(data_dir)
            data_dir.mkdir(parents=True, exist_ok=True)
            self._log_path = data_dir / "statements.jsonl"
            if self._log_path.exists():
                self._replay()

    def subscribe(self, listener: Callable[[str, str | None], None]) -> None:
        """Call ``listener(event, ref)`` after every mutation.

        Events: ``statement`` (ref = anchor IRI), ``labels``, ``type``
        (ref = type id).  Replay of the on-disk log does not notify.
        """
        self._listeners.append(listener)

    def _notify(self, event: str, ref: str | None = None) -> None:
        for listener in list(self._listeners):
            listener(event, ref)

    # -- log ----------------------------------------------------------------

    def _append(self, record: dict[str, Any]) -> None:
        if self._log_path is None:
            return
        with self._log_lock:
            with self._log_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    def _replay(self) -> None:
        with self._log_path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    def _apply(self, rec: dict[str, Any]) -> None:
        tag = rec["t"]
        if tag == "TYPE":
            pattern = pattern_from_document(rec["doc"], id=rec["id"], version=rec["version"])
            self.registry.register(pattern)
        elif tag == "ANCHOR":
            meta = dict(rec["metadata"])
            meta["created_at"] = datetime.fromisoformat(meta["created_at"])
            anchor = AnchorStatement(
                iri=rec["iri"],
                statement_type=rec["type"],
                pattern_ref=rec["pattern_ref"],
                metadata=ProvenanceMetadata(**meta),
                negated=rec.get("negated", False),
                confidence_level=rec.get("confidence_level"),
                context_refs=tuple(rec.get("context_refs", ())),
                modifiable=rec.get("modifiable", True),
            )
            self._anchors[anchor.iri] = anchor
        elif tag == "VERSION":
            anchor = self._anchors[rec["anchor"]]
            version = StatementVersion(
                iri=rec["iri"],
                number=rec["number"],
                subject=PositionInstance(
                    rec["subject_label"],
                    tuple(Value.from_json(v) for v in rec["subject"]),
                ),
                object_positions=tuple(
                    PositionInstance(label, tuple(Value.from_json(v) for v in values))
                    for label, values in sorted(rec["objects"].items())
                ),
                created_by=rec["created_by"],
                created_at=datetime.fromisoformat(rec["created_at"]),
            )
            anchor.versions = anchor.versions + (version,)
        elif tag == "DELETE":
            anchor = self._anchors[rec["anchor"]]
            anchor.deleted = DeletedMarker(
                deleted_at=datetime.fromisoformat(rec["deleted_at"]),
                deleted_by=rec["deleted_by"],
            )
        elif tag == "META":
            if "labels" in rec:
                self._labels.update(rec["labels"])
            else:
                self._patch_anchor(self._anchors[rec["anchor"]], rec["patch"])
        else:
            raise ValidationError(f"unknown log record tag {tag!r}")

    # -- statement types ------------------------------------------------------

    def define_type(self, draft: Mapping[str, Any]) -> StatementPattern:
        with self._mutex:
            pattern = self.registry.define(draft, id_factory=self._id_factory)
        self._append(
            {"t": "TYPE", "id": pattern.id, "version": pattern.version,
             "doc": _pattern_doc(pattern)}
        )
        self._notify("type", pattern.id)
        return pattern

    def reorder_type(self, type_id: str, new_order: list[int]) -> StatementPattern:
        with self._mutex:
            pattern = self.registry.reorder(type_id, new_order)
        self._append(
            {"t": "TYPE", "id": pattern.id, "version": pattern.version,
             "doc": _pattern_doc(pattern)}
        )
        self._notify("type", pattern.id)
        return pattern

    # -- labels ----------------------------------------------------------------

    def register_labels(self, labels: Mapping[str, str]) -> None:
        cleaned = {iri: text for iri, text in labels.items() if text}
        if not cleaned:
            return
        self._labels.update(cleaned)
        self._append({"t": "META", "labels": cleaned})
        self._notify("labels")

    def label_of(self, iri: str) -> str | None:
        return self._labels.get(iri)

    def labels(self) -> dict[str, str]:
        return dict(self._labels)

    # -- statements -------------------------------------------------------------

    def create_statement(
        self,
        type_key: str,
        values: Mapping[str, Iterable[Value]],
        *,
        creator: str,
        negated: bool = False,
        confidence_level: str | float | int | None = None,
        context_refs: Iterable[str] = (),
        modifiable: bool = True,
        author: str | None = None,
        curator: str | None = None,
        extraction_method: str | None = None,
        imported_from: str | None = None,
        license: str | None = None,
    ) -> AnchorStatement:
        pattern = self.registry.resolve(type_key)
        confidence = _normalize_confidence(confidence_level)
        if negated and not pattern.negatable:
            raise ConstraintViolation(
                f"statement type {pattern.label!r} cannot be negated", type=pattern.id
            )
        subject, objects = _validated_positions(pattern, values)
        now = self._clock()
        anchor_iri = f"{self.base_iri}/statement/{self._id_factory()}"
        metadata = ProvenanceMetadata(
            creator=creator,
            created_at=now,
            author=author,
            curator=curator,
            extraction_method=extraction_method,
            imported_from=imported_from,
            license=license,
        )
        version = StatementVersion(
            iri=f"{anchor_iri}/v1",
            number=1,
            subject=subject,
            object_positions=objects,
            created_by=creator,
            created_at=now,
        )
        anchor = AnchorStatement(
            iri=anchor_iri,
            statement_type=pattern.id,
            pattern_ref=pattern.pattern_iri,
            metadata=metadata,
            versions=(version,),
            negated=negated,
            confidence_level=confidence,
            context_refs=tuple(sorted(context_refs)),
            modifiable=modifiable,
        )
        with self._mutex:
            self._anchors[anchor_iri] = anchor
            self._anchor_locks[anchor_iri] = threading.Lock()
        self._append(
            {"t": "ANCHOR", "iri": anchor_iri, "type": anchor.statement_type,
             "pattern_ref": anchor.pattern_ref, "negated": negated,
             "confidence_level": confidence, "context_refs": list(anchor.context_refs),
             "modifiable": modifiable, "metadata": metadata.to_json()}
        )
        self._append(_version_record(anchor_iri, version))
        self._notify("statement", anchor_iri)
        return anchor

    def update_statement(
        self, anchor_iri: str, values: Mapping[str, Iterable[Value]], *, editor: str
    ) -> AnchorStatement:
        anchor = self.get(anchor_iri)
        if not anchor.modifiable:
            raise ForbiddenError("statement is locked against edits", statement=anchor_iri)
        pattern = self.registry.get_by_ref(anchor.pattern_ref)
        subject, objects = _validated_positions(pattern, values)
        with self._lock_for(anchor_iri):
            anchor = self.get(anchor_iri)
            number = anchor.latest.number + 1
            version = StatementVersion(
                iri=f"{anchor_iri}/v{number}",
                number=number,
                subject=subject,
                object_positions=objects,
                created_by=editor,
                created_at=self._clock(),
            )
            anchor.versions = anchor.versions + (version,)
            self._append(_version_record(anchor_iri, version))
        self._notify("statement", anchor_iri)
        return anchor

    def update_metadata(self, anchor_iri: str, patch: Mapping[str, Any]) -> AnchorStatement:
        unknown = set(patch) - _METADATA_PATCH_KEYS
        if unknown:
            raise ValidationError(f"unknown metadata fields: {sorted(unknown)}")
        anchor = self.get(anchor_iri)
        if patch.get("negated"):
            pattern = self.registry.get_by_ref(anchor.pattern_ref)
            if not pattern.negatable:
                raise ConstraintViolation(
                    f"statement type {pattern.label!r} cannot be negated", type=pattern.id
                )
        with self._lock_for(anchor_iri):
            anchor = self.get(anchor_iri)
            patch = dict(patch)
            if "confidence_level" in patch:
                patch["confidence_level"] = _normalize_confidence(patch["confidence_level"])
            self._patch_anchor(anchor, patch)
            self._append({"t": "META", "anchor": anchor_iri, "patch": patch})
        self._notify("statement", anchor_iri)
        return anchor

    def _patch_anchor(self, anchor: AnchorStatement, patch: Mapping[str, Any]) -> None:
        meta_fields = {"author", "curator", "extraction_method", "imported_from", "license"}
        for key, value in patch.items():
            if key in meta_fields:
                anchor.metadata = replace(anchor.metadata, **{key: value})
            elif key == "context_refs":
                anchor.context_refs = tuple(sorted(value))
            else:
                setattr(anchor, key, value)

    def soft_delete(self, anchor_iri: str, *, deleted_by: str) -> DeletedMarker:
        with self._lock_for(anchor_iri):
            anchor = self.get(anchor_iri)  # raises GoneError if already deleted
            marker = DeletedMarker(deleted_at=self._clock(), deleted_by=deleted_by)
            anchor.deleted = marker
            self._append(
                {"t": "DELETE", "anchor": anchor_iri,
                 "deleted_at": marker.deleted_at.isoformat(), "deleted_by": deleted_by}
            )
        self._notify("statement", anchor_iri)
        return marker

    def get(self, anchor_iri: str, *, include_deleted: bool = False) -> AnchorStatement:
        anchor = self._anchors.get(anchor_iri)
        if anchor is None:
            raise NotFoundError(f"unknown statement {anchor_iri}", statement=anchor_iri)
        if anchor.deleted is not None and not include_deleted:
            raise GoneError(
                f"statement {anchor_iri} was deleted",
                statement=anchor_iri,
                deleted_at=anchor.deleted.deleted_at.isoformat(),
                deleted_by=anchor.deleted.deleted_by,
                metadata=anchor.metadata.to_json(),
            )
        return anchor

    def anchors(self, *, statement_type: str | None = None, include_deleted: bool = False) -> list[AnchorStatement]:
        found = [
            a for a in self._anchors.values()
            if (include_deleted or a.deleted is None)
            and (statement_type is None or a.statement_type == statement_type)
        ]
        return sorted(found, key=lambda a: (a.metadata.created_at.isoformat(), a.iri))

    def resolve_anchor_iri(self, key: str) -> str:
        """Accept a full anchor IRI or just its trailing id segment."""
        if key in self._anchors:
            return key
        candidate = f"{self.base_iri}/statement/{key}"
        if candidate in self._anchors:
            return candidate
        raise NotFoundError(f"unknown statement {key}", statement=key)

    def edit_history(self, anchor_iri: str) -> list[ChangeRecord]:
        anchor = self.get(anchor_iri, include_deleted=True)
        records = []
        previous: StatementVersion | None = None
        for version in anchor.versions:
            if previous is None:
                records.append(
                    ChangeRecord(
                        kind="created", version=1,
                        by=version.created_by, at=version.created_at,
                    )
                )
            else:
                records.append(
                    ChangeRecord(
                        kind="updated", version=version.number,
                        by=version.created_by, at=version.created_at,
                        changes=diff_versions(previous, version),
                    )
                )
            previous = version
        if anchor.deleted is not None:
            records.append(
                ChangeRecord(
                    kind="deleted", version=None,
                    by=anchor.deleted.deleted_by, at=anchor.deleted.deleted_at,
                )
            )
        return records

    def _lock_for(self, anchor_iri: str) -> threading.Lock:
        with self._mutex:
            if anchor_iri not in self._anchors:
                raise NotFoundError(f"unknown statement {anchor_iri}", statement=anchor_iri)
            return self._anchor_locks.setdefault(anchor_iri, threading.Lock())


def diff_versions(old: StatementVersion, new: StatementVersion) -> tuple[PositionChange, ...]:
    changes = []
    old_parts = old.parts()
    new_parts = new.parts()
    for label in sorted(set(old_parts) | set(new_parts)):
        before = old_parts.get(label)
        after = new_parts.get(label)
        if before is None:
            changes.append(PositionChange(label, "added"))
        elif after is None:
            changes.append(PositionChange(label, "removed"))
        elif before != after:
            if sorted(before, key=_value_key) == sorted(after, key=_value_key):
                changes.append(PositionChange(label, "reordered"))
            else:
                changes.append(PositionChange(label, "modified"))
    return tuple(changes)


def _value_key(value: Value) -> tuple:
    return (value.iri or "", value.lexical or "", value.datatype or "")


def _normalize_confidence(level: str | float | int | None) -> str | None:
    if level is None:
        return None
    text = str(level)
    if not _DECIMAL_RE.match(text):
        raise ValidationError(f"confidence level {text!r} is not a decimal")
    return text


def _validated_positions(
    pattern: StatementPattern, values: Mapping[str, Iterable[Value]]
) -> tuple[PositionInstance, tuple[PositionInstance, ...]]:
    known = {p.thematic_label for p in pattern.positions()}
    unknown = set(values) - known
    if unknown:
        raise ValidationError(
            f"pattern {pattern.label!r} has no positions {sorted(unknown)}",
            unknown=sorted(unknown),
        )
    subject: PositionInstance | None = None
    objects: list[PositionInstance] = []
    for pos in pattern.positions():
        supplied = tuple(values.get(pos.thematic_label, ()))
        count = len(supplied)
        if count < pos.min_count:
            raise ConstraintViolation(
                f"position {pos.thematic_label!r} needs at least {pos.min_count} value(s)",
                position=pos.thematic_label, supplied=count,
            )
        if pos.max_count is not None and count > pos.max_count:
            raise ConstraintViolation(
                f"position {pos.thematic_label!r} allows at most {pos.max_count} value(s)",
                position=pos.thematic_label, supplied=count,
            )
        normalized = tuple(_normalize_value(pos, value) for value in supplied)
        if pos.index == 0:
            subject = PositionInstance(pos.thematic_label, normalized)
        elif normalized:
            objects.append(PositionInstance(pos.thematic_label, normalized))
    objects.sort(key=lambda p: p.thematic_label)
    return subject, tuple(objects)


def _normalize_value(pos, value: Value) -> Value:
    if pos.kind == "resource":
        if not value.is_resource:
            raise ConstraintViolation(
                f"position {pos.thematic_label!r} holds resources, got a literal",
                position=pos.thematic_label,
            )
        return value
    if value.is_resource:
        raise ConstraintViolation(
            f"position {pos.thematic_label!r} holds literals, got a resource",
            position=pos.thematic_label,
        )
    expected = LITERAL_DATATYPES[pos.datatype]
    if value.datatype is not None and value.datatype != expected:
        raise ConstraintViolation(
            f"position {pos.thematic_label!r} expects {expected}",
            position=pos.thematic_label, datatype=value.datatype,
        )
    _check_lexical(value.lexical, expected, pos.thematic_label)
    return Value(lexical=value.lexical, datatype=expected)


def _version_record(anchor_iri: str, version: StatementVersion) -> dict[str, Any]:
    return {
        "t": "VERSION",
        "anchor": anchor_iri,
        "iri": version.iri,
        "number": version.number,
        "subject_label": version.subject.thematic_label,
        "subject": [v.to_json() for v in version.subject.values],
        "objects": {
            pos.thematic_label: [v.to_json() for v in pos.values]
            for pos in version.object_positions
        },
        "created_by": version.created_by,
        "created_at": version.created_at.isoformat(),
    }


def _pattern_doc(pattern: StatementPattern) -> dict[str, Any]:
    from .metamodel import pattern_to_document

    return pattern_to_document(pattern)
