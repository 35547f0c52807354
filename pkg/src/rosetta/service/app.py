"""HTTP facade over the engine.  Every endpoint delegates to one module call.

Configuration comes from arguments, falling back to environment variables:
``ROSETTA_DATA`` (statement log directory; in-memory when unset) and
``ROSETTA_BASE_IRI`` (minting base for statement and type IRIs).
"""

from __future__ import annotations

import os
from dataclasses import asdict
from typing import Any

import yaml
from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import vocab
from ..crosswalk import apply_crosswalk, load_crosswalk_spec, relational_csv
from ..errors import NotFoundError, RosettaError, ValidationError
from ..fixtures import (
    PATTERN_FILES,
    fixture_text,
    load_builtin_crosswalks,
    load_builtin_entity_maps,
)
from ..graphs import export_store, to_full_graph, to_light_graph
from ..metamodel import (
    StatementPattern,
    compose,
    derive_formalized_statement,
    pattern_from_document,
    pattern_to_document,
    preview,
)
from ..nanopub import serialize_nanopub, to_nanopub
from ..rdfmodel import serialize
from ..renderer import export_mindmap_dot, render, render_mindmap
from ..search import FacetFilter, FacetQuery, SearchIndex
from ..shapes import generate_shape, shape_to_graph
from ..store import AnchorStatement, Store
from .schemas import (
    CrosswalkApplyIn,
    FacetedIn,
    LabelsIn,
    ReorderIn,
    StatementIn,
    StatementUpdate,
    TypePreviewIn,
    ValueIn,
)

_STATUS = {
    "NotFound": 404,
    "ValidationError": 400,
    "ConstraintViolation": 409,
    "Forbidden": 403,
    "Gone": 410,
    "Conflict": 409,
    "SpecError": 400,
    "UnmappedEntityError": 400,
    "RenderError": 400,
    "CrosswalkError": 400,
    "ImportError": 400,
    "FormatError": 400,
}

_MEDIA_TYPES = {"trig": "application/trig", "nquads": "application/n-quads"}


def ensure_builtin_patterns(store: Store) -> None:
    """Register the shipped patterns unless the log already has them."""
    for name in PATTERN_FILES:
        doc = yaml.safe_load(fixture_text(name))
        try:
            store.registry.resolve(str(doc["label"]))
        except NotFoundError:
            store.define_type(doc)


def _pattern_json(pattern: StatementPattern) -> dict[str, Any]:
    doc = pattern_to_document(pattern)
    return {
        "id": pattern.id,
        "version": pattern.version,
        "pattern_iri": pattern.pattern_iri,
        "formalized": derive_formalized_statement(pattern),
        **doc,
    }


def _value_json(value, labels) -> dict[str, Any]:
    doc = value.to_json()
    if value.iri is not None and value.iri in labels:
        doc["label"] = labels[value.iri]
    return doc


def _version_json(version, labels) -> dict[str, Any]:
    return {
        "iri": version.iri,
        "number": version.number,
        "created_by": version.created_by,
        "created_at": version.created_at.isoformat(),
        "values": {
            label: [_value_json(v, labels) for v in values]
            for label, values in version.parts().items()
        },
    }


def _render_json(rendered) -> dict[str, Any]:
    return {
        "text": rendered.text,
        "slot_spans": [asdict(s) for s in rendered.slot_spans],
    }


def _anchor_json(store: Store, anchor: AnchorStatement,
                 version_number: int | None = None) -> dict[str, Any]:
    labels = store.labels()
    pattern = store.registry.get_by_ref(anchor.pattern_ref)
    version = anchor.latest if version_number is None else anchor.version(version_number)
    meta = anchor.metadata
    doc = {
        "id": anchor.iri,
        "type": anchor.statement_type,
        "pattern_ref": anchor.pattern_ref,
        "negated": anchor.negated,
        "confidence_level": anchor.confidence_level,
        "context_refs": list(anchor.context_refs),
        "modifiable": anchor.modifiable,
        "metadata": meta.to_json(),
        "latest_version": anchor.latest.number,
        "version": _version_json(version, labels),
    }
    if anchor.deleted is None:
        rendered = render(version, pattern, labels=labels, negated=anchor.negated)
        doc["render"] = _render_json(rendered)
    else:
        doc["deleted"] = {
            "deleted_at": anchor.deleted.deleted_at.isoformat(),
            "deleted_by": anchor.deleted.deleted_by,
        }
    return doc


def _values_payload(values: dict[str, list[ValueIn]], store: Store) -> dict:
    labels = {
        v.iri: v.label for vs in values.values() for v in vs
        if v.iri is not None and v.label
    }
    if labels:
        store.register_labels(labels)
    return {label: [v.to_value() for v in vs] for label, vs in values.items()}


def create_app(
    data_dir: str | None = None,
    base_iri: str | None = None,
    store: Store | None = None,
    extra_prefixes: dict[str, str] | None = None,
) -> FastAPI:
    if store is None:
        data_dir = data_dir if data_dir is not None else os.environ.get("ROSETTA_DATA")
        base_iri = base_iri or os.environ.get("ROSETTA_BASE_IRI",
                                              "https://example.org/rosetta")
        store = Store(data_dir, base_iri=base_iri)
    ensure_builtin_patterns(store)
    index = SearchIndex(store)
    crosswalks = load_builtin_crosswalks()
    entity_maps = load_builtin_entity_maps()
    prefixes = {**vocab.DEFAULT_PREFIXES, **(extra_prefixes or {})}

    app = FastAPI(title="rosetta-engine", version="0.1.0")
    app.state.store = store
    app.state.index = index
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RosettaError)
    async def _domain_error(_: Request, err: RosettaError) -> JSONResponse:
        status = _STATUS.get(err.code, 400)
        return JSONResponse(status_code=status, content={"error": err.to_dict()})

    @app.exception_handler(RequestValidationError)
    async def _request_error(_: Request, err: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "ValidationError",
                               "message": "malformed request body",
                               "details": {"errors": err.errors()}}},
        )

    def _resolve(anchor_id: str, include_deleted: bool = False) -> AnchorStatement:
        return store.get(store.resolve_anchor_iri(anchor_id),
                         include_deleted=include_deleted)

    def _pattern_for(anchor: AnchorStatement) -> StatementPattern:
        return store.registry.get_by_ref(anchor.pattern_ref)

    # -- statement types ------------------------------------------------------

    @app.post("/types", status_code=201)
    def create_type(draft: dict[str, Any]):
        return _pattern_json(store.define_type(draft))

    @app.get("/types")
    def list_types():
        return {"types": [_pattern_json(p) for p in store.registry.all_latest()]}

    @app.get("/types/{type_id:path}/preview")
    def preview_type(type_id: str, fill: list[str] = Query(default=[])):
        pattern = store.registry.resolve(type_id)
        parts: dict[str, list[str]] = {}
        for item in fill:
            label, _, text = item.partition("=")
            if not _:
                raise ValidationError(f"fill item {item!r} is not LABEL=text")
            parts.setdefault(label, []).append(text)
        return {"text": preview(pattern, parts)}

    @app.post("/types/preview")
    def preview_draft(body: TypePreviewIn):
        if (body.draft is None) == (body.type is None):
            raise ValidationError("supply exactly one of 'draft' or 'type'")
        if body.draft is not None:
            pattern = pattern_from_document(body.draft, id="urn:rosetta:draft", version=0)
        else:
            pattern = store.registry.resolve(body.type)
        if body.negated and not pattern.negatable:
            raise ValidationError("pattern is not negatable")
        parts = {p.thematic_label: [p.display_placeholder] for p in pattern.positions()}
        for label, texts in body.fill.items():
            if not pattern.has_position(label):
                raise NotFoundError(f"no position {label!r} to fill", label=label)
            if texts:
                parts[label] = list(texts)
        text, _ = compose(pattern, parts, negated=body.negated)
        return {"text": text, "formalized": derive_formalized_statement(pattern)}

    @app.get("/types/{type_id:path}/shape")
    def type_shape(type_id: str):
        pattern = store.registry.resolve(type_id)
        graph = shape_to_graph(generate_shape(pattern))
        return Response(serialize(graph, "turtle", prefixes),
                        media_type="text/turtle")

    @app.post("/types/{type_id:path}/reorder")
    def reorder_type(type_id: str, body: ReorderIn):
        pattern = store.registry.resolve(type_id)
        return _pattern_json(store.reorder_type(pattern.id, body.order))

    @app.get("/types/{type_id:path}")
    def get_type(type_id: str, version: int | None = None):
        pattern = store.registry.resolve(type_id)
        if version is not None:
            pattern = store.registry.get(pattern.id, version)
        return _pattern_json(pattern)

    # -- statements -------------------------------------------------------------

    @app.post("/statements", status_code=201)
    def create_statement(body: StatementIn):
        anchor = store.create_statement(
            body.type,
            _values_payload(body.values, store),
            creator=body.creator,
            negated=body.negated,
            confidence_level=body.confidence_level,
            context_refs=body.context_refs,
            modifiable=body.modifiable,
            author=body.author,
            curator=body.curator,
            extraction_method=body.extraction_method,
            imported_from=body.imported_from,
            license=body.license,
        )
        return _anchor_json(store, anchor)

    @app.get("/statements")
    def list_statements(type: str | None = None, include_deleted: bool = False):
        statement_type = store.registry.resolve(type).id if type else None
        anchors = store.anchors(statement_type=statement_type,
                                include_deleted=include_deleted)
        return {"statements": [_anchor_json(store, a) for a in anchors]}

    @app.patch("/statements/{anchor_id:path}/metadata")
    def patch_metadata(anchor_id: str, patch: dict[str, Any]):
        anchor = _resolve(anchor_id)
        return _anchor_json(store, store.update_metadata(anchor.iri, patch))

    @app.get("/statements/{anchor_id:path}/history")
    def history(anchor_id: str):
        anchor = _resolve(anchor_id, include_deleted=True)
        events = []
        for record in store.edit_history(anchor.iri):
            events.append(
                {
                    "kind": record.kind,
                    "version": record.version,
                    "by": record.by,
                    "at": record.at.isoformat(),
                    "changes": [asdict(c) for c in record.changes],
                }
            )
        return {"history": events}

    @app.get("/statements/{anchor_id:path}/render")
    def render_statement(anchor_id: str, version: int | None = None):
        anchor = _resolve(anchor_id)
        pattern = _pattern_for(anchor)
        target = anchor.latest if version is None else anchor.version(version)
        rendered = render(target, pattern, labels=store.labels(), negated=anchor.negated)
        return {**_render_json(rendered), "negated": anchor.negated,
                "version": target.number}

    @app.get("/statements/{anchor_id:path}/mindmap")
    def mindmap(anchor_id: str, version: int | None = None, format: str = "json"):
        anchor = _resolve(anchor_id)
        pattern = _pattern_for(anchor)
        target = anchor.latest if version is None else anchor.version(version)
        mm = render_mindmap(target, pattern, labels=store.labels())
        if format == "dot":
            return Response(export_mindmap_dot(mm), media_type="text/vnd.graphviz")
        if format != "json":
            raise ValidationError(f"unknown mindmap format {format!r}")
        return {"nodes": [asdict(n) for n in mm.nodes],
                "edges": [asdict(e) for e in mm.edges]}

    @app.get("/statements/{anchor_id:path}/nanopub")
    def nanopub(anchor_id: str, version: int | None = None, hashed: bool = False):
        anchor = _resolve(anchor_id, include_deleted=True)
        np = to_nanopub(anchor, _pattern_for(anchor), version, hashed=hashed)
        return {"id": np.id, "format": "trig", "content": serialize_nanopub(np)}

    @app.get("/statements/{anchor_id:path}/graph")
    def statement_graph(anchor_id: str, form: str = "light", version: int | None = None):
        anchor = _resolve(anchor_id)
        pattern = _pattern_for(anchor)
        if form == "light":
            target = anchor.latest if version is None else anchor.version(version)
            graph = to_light_graph(target, pattern, negated=anchor.negated)
        elif form == "full":
            graph = to_full_graph(anchor, pattern)
        else:
            raise ValidationError(f"unknown graph form {form!r}")
        return Response(serialize(graph, "trig", prefixes),
                        media_type="application/trig")

    @app.put("/statements/{anchor_id:path}")
    def update_statement(anchor_id: str, body: StatementUpdate):
        anchor = _resolve(anchor_id)
        updated = store.update_statement(
            anchor.iri, _values_payload(body.values, store), editor=body.editor
        )
        return _anchor_json(store, updated)

    @app.delete("/statements/{anchor_id:path}")
    def delete_statement(anchor_id: str, by: str):
        anchor = _resolve(anchor_id)
        marker = store.soft_delete(anchor.iri, deleted_by=by)
        return {"deleted_at": marker.deleted_at.isoformat(), "deleted_by": marker.deleted_by}

    @app.get("/statements/{anchor_id:path}")
    def get_statement(anchor_id: str, version: int | None = None,
                      include_deleted: bool = False):
        anchor = _resolve(anchor_id, include_deleted=include_deleted)
        return _anchor_json(store, anchor, version)

    # -- labels ------------------------------------------------------------------

    @app.post("/labels")
    def register_labels(body: LabelsIn):
        store.register_labels(body.labels)
        return {"registered": len(body.labels)}

    # -- export / search / crosswalks ---------------------------------------------

    @app.get("/export")
    def export(format: str = "trig", form: str = "full"):
        if format not in _MEDIA_TYPES:
            raise ValidationError(f"unknown export format {format!r}")
        if form not in ("full", "light"):
            raise ValidationError(f"unknown export form {form!r}")
        graph = export_store(store, form=form)
        return Response(serialize(graph, format, prefixes),
                        media_type=_MEDIA_TYPES[format])

    @app.get("/search")
    def search(term: str = "", include_deleted: bool = False):
        groups = index.search_term(term, include_deleted=include_deleted)
        return {
            "groups": [
                {
                    "statement_type": g.statement_type,
                    "statements": [_anchor_json(store, a) for a in g.anchors],
                }
                for g in groups
            ]
        }

    @app.post("/search/faceted")
    def faceted(body: FacetedIn):
        query = FacetQuery(
            statement_type=body.statement_type,
            facet_filters={k: FacetFilter.from_json(v) for k, v in body.filters.items()},
            include_deleted=body.include_deleted,
        )
        result = index.search_faceted(query)
        return {
            "statements": [_anchor_json(store, a) for a in result.anchors],
            "facets": {
                label: [asdict(v) for v in values]
                for label, values in result.facets.items()
            },
        }

    @app.post("/search/rebuild")
    def rebuild():
        return index.rebuild()

    @app.post("/crosswalks/{name}/apply")
    def crosswalk_apply(name: str, body: CrosswalkApplyIn):
        if body.spec_text is not None:
            spec = load_crosswalk_spec(body.spec_text)
        elif name in crosswalks:
            spec = crosswalks[name]
        else:
            by_target = [s for s in crosswalks.values()
                         if s.target_name.lower() == name.lower()]
            if len(by_target) != 1:
                raise NotFoundError(f"unknown crosswalk {name!r}", crosswalk=name)
            spec = by_target[0]
        anchor = _resolve(body.statement)
        pattern = _pattern_for(anchor)
        target = anchor.latest if body.version is None else anchor.version(body.version)
        if spec.target_name == "relational":
            return Response(relational_csv([(target, pattern)]), media_type="text/csv")
        entity_map = entity_maps.get(spec.entity_map_ref)
        graph = apply_crosswalk(target, pattern, spec, entity_map)
        return {
            "target": spec.target_name,
            "format": "trig",
            "content": serialize(graph, "trig", prefixes),
        }

    @app.get("/crosswalks")
    def list_crosswalks():
        return {
            "crosswalks": [
                {"id": spec.id, "target": spec.target_name,
                 "source_pattern": spec.source_pattern}
                for spec in crosswalks.values()
            ]
        }

    @app.get("/relational")
    def relational(type: str = "measurement"):
        pattern = store.registry.resolve(type)
        pairs = [(a.latest, pattern) for a in store.anchors(statement_type=pattern.id)]
        return Response(relational_csv(pairs), media_type="text/csv")

    return app
