"""Term search and faceted exploration over stored statements.

The index maps normalized tokens to the anchors whose latest version
mentions them, either through a resource's registered label or a literal's
lexical form.  Terms that normalize to a single token are answered from the
index; anything else (phrases, punctuation) falls back to scanning the
per-anchor texts, which the index also keeps.  Both routes apply the same
case-insensitive substring predicate, so they agree with a brute-force
scan by construction.

The index subscribes to store mutations: statement writes refresh one
anchor's entries, label registration rebuilds (labels feed every anchor's
text), and everything stays inside one lock shared with the notification
path.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal, InvalidOperation
from typing import Mapping

from .errors import GoneError, NotFoundError, ValidationError
from .renderer import display_text
from .store import AnchorStatement, Store, Value

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class TermGroup:
    statement_type: str
    anchors: tuple[AnchorStatement, ...]


@dataclass(frozen=True)
class FacetFilter:
    one_of: frozenset[str] | None = None
    minimum: str | None = None
    maximum: str | None = None
    text: str | None = None

    @classmethod
    def from_json(cls, doc: Mapping) -> "FacetFilter":
        unknown = set(doc) - {"one_of", "min", "max", "text"}
        if unknown:
            raise ValidationError(f"unknown facet filter keys: {sorted(unknown)}")
        if not doc:
            raise ValidationError("empty facet filter")
        one_of = doc.get("one_of")
        return cls(
            one_of=frozenset(one_of) if one_of is not None else None,
            minimum=str(doc["min"]) if "min" in doc and doc["min"] is not None else None,
            maximum=str(doc["max"]) if "max" in doc and doc["max"] is not None else None,
            text=doc.get("text"),
        )


@dataclass(frozen=True)
class FacetQuery:
    statement_type: str
    facet_filters: Mapping[str, FacetFilter] = field(default_factory=dict)
    include_deleted: bool = False


@dataclass(frozen=True)
class FacetValue:
    value: str  # IRI for resources, lexical form for literals
    label: str
    count: int


@dataclass(frozen=True)
class FacetResult:
    anchors: tuple[AnchorStatement, ...]
    facets: dict[str, tuple[FacetValue, ...]]


def _comparable(lexical: str, datatype: str | None):
    if datatype == "date":
        return date.fromisoformat(lexical)
    try:
        return Decimal(lexical)
    except InvalidOperation:
        raise ValidationError(f"{lexical!r} is not comparable") from None


class SearchIndex:
    def __init__(self, store: Store):
        self._store = store
        self._lock = threading.Lock()
        self._texts: dict[str, list[str]] = {}  # anchor -> searchable texts
        self._postings: dict[str, set[str]] = {}  # token -> anchors
        self._anchor_tokens: dict[str, set[str]] = {}
        store.subscribe(self._on_event)
        self.rebuild()

    # -- maintenance ----------------------------------------------------------

    def _anchor_texts(self, anchor: AnchorStatement) -> list[str]:
        labels = self._store.labels()
        return [
            display_text(value, labels)
            for values in anchor.latest.parts().values()
            for value in values
        ]

    def _drop(self, anchor_iri: str) -> None:
        for token in self._anchor_tokens.pop(anchor_iri, ()):
            bucket = self._postings.get(token)
            if bucket is not None:
                bucket.discard(anchor_iri)
                if not bucket:
                    del self._postings[token]
        self._texts.pop(anchor_iri, None)

    def _insert(self, anchor: AnchorStatement) -> None:
        texts = self._anchor_texts(anchor)
        tokens = {t for text in texts for t in _tokens(text)}
        self._texts[anchor.iri] = texts
        self._anchor_tokens[anchor.iri] = tokens
        for token in tokens:
            self._postings.setdefault(token, set()).add(anchor.iri)

    def _on_event(self, event: str, ref: str | None) -> None:
        if event == "statement" and ref is not None:
            try:
                anchor = self._store.get(ref, include_deleted=True)
            except NotFoundError:
                anchor = None
            with self._lock:
                self._drop(ref)
                if anchor is not None:
                    self._insert(anchor)
        elif event == "labels":
            self.rebuild()

    def rebuild(self) -> dict[str, int]:
        with self._lock:
            self._texts.clear()
            self._postings.clear()
            self._anchor_tokens.clear()
            for anchor in self._store.anchors(include_deleted=True):
                self._insert(anchor)
            live = sum(
                1 for a in self._store.anchors(include_deleted=True) if a.deleted is None
            )
            return {
                "statements": live,
                "indexed": len(self._texts),
                "tokens": len(self._postings),
            }

    # -- term search ------------------------------------------------------------

    def _matches(self, anchor_iri: str, needle: str) -> bool:
        return any(needle in text.lower() for text in self._texts.get(anchor_iri, ()))

    def search_term(self, term: str, *, include_deleted: bool = False) -> list[TermGroup]:
        needle = term.strip().lower()
        if not needle:
            return []
        with self._lock:
            term_tokens = _tokens(needle)
            if len(term_tokens) == 1 and term_tokens[0] == needle:
                # single-token terms cannot straddle a token boundary, so the
                # postings give a sound and complete candidate set
                candidates = {
                    anchor
                    for token, anchors in self._postings.items()
                    if needle in token
                    for anchor in anchors
                }
            else:
                candidates = set(self._texts)
            hits = [iri for iri in candidates if self._matches(iri, needle)]

        groups: dict[str, list[AnchorStatement]] = {}
        for iri in hits:
            try:
                anchor = self._store.get(iri, include_deleted=include_deleted)
            except (NotFoundError, GoneError):
                continue
            groups.setdefault(anchor.statement_type, []).append(anchor)
        return [
            TermGroup(
                statement_type=statement_type,
                anchors=tuple(
                    sorted(
                        members,
                        key=lambda a: (a.metadata.created_at, a.iri),
                        reverse=True,
                    )
                ),
            )
            for statement_type, members in sorted(groups.items())
        ]

    # -- faceted search -----------------------------------------------------------

    def _passes(self, anchor: AnchorStatement, label: str, flt: FacetFilter, pattern) -> bool:
        values = anchor.latest.parts().get(label, [])
        position = pattern.position(label)
        labels = self._store.labels()
        if flt.one_of is not None:
            if not any(
                (v.iri or v.lexical) in flt.one_of for v in values
            ):
                return False
        if flt.minimum is not None or flt.maximum is not None:
            datatype = position.datatype if position.is_literal else None
            if datatype not in ("decimal", "integer", "date"):
                raise ValidationError(
                    f"facet {label} does not support range filters", facet=label
                )

            def in_range(v) -> bool:
                if v.lexical is None:
                    return False
                try:
                    point = _comparable(v.lexical, datatype)
                except ValidationError:
                    return False
                if flt.minimum is not None and point < _comparable(flt.minimum, datatype):
                    return False
                if flt.maximum is not None and point > _comparable(flt.maximum, datatype):
                    return False
                return True

            if not any(in_range(v) for v in values):
                return False
        if flt.text is not None:
            needle = flt.text.lower()
            if not any(needle in display_text(v, labels).lower() for v in values):
                return False
        return True

    def search_faceted(self, query: FacetQuery) -> FacetResult:
        pattern = self._store.registry.resolve(query.statement_type)
        position_labels = {p.thematic_label for p in pattern.positions()}
        for key in query.facet_filters:
            if key not in position_labels:
                raise ValidationError(
                    f"pattern {pattern.label!r} has no position {key!r}", facet=key
                )

        anchors = list(
            self._store.anchors(
                statement_type=pattern.id, include_deleted=query.include_deleted
            )
        )
        for label, flt in query.facet_filters.items():
            anchors = [a for a in anchors if self._passes(a, label, flt, pattern)]

        labels = self._store.labels()
        facets: dict[str, tuple[FacetValue, ...]] = {}
        for position in pattern.positions():
            counts: dict[str, int] = {}
            for anchor in anchors:
                for value in anchor.latest.parts().get(position.thematic_label, ()):
                    key = value.iri if value.iri is not None else value.lexical
                    counts[key] = counts.get(key, 0) + 1
            facets[position.thematic_label] = tuple(
                FacetValue(
                    value=key,
                    label=display_text(
                        Value(iri=key) if not position.is_literal else Value(lexical=key),
                        labels,
                    ),
                    count=count,
                )
                for key, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            )
        ordered = sorted(
            anchors, key=lambda a: (a.metadata.created_at, a.iri), reverse=True
        )
        return FacetResult(anchors=tuple(ordered), facets=facets)
