"""Nanopublication packaging: one statement version, four named graphs.

The head graph describes the package itself; the assertion graph carries
the version's statement content with no metadata attached; generation
metadata (author, extraction method, import source) goes to the provenance
graph, publication metadata (creator, date, license) to the publication
info graph.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

from . import vocab
from .errors import GoneError, NotFoundError
from .graphs import assertion_graph
from .metamodel import StatementPattern
from .rdfmodel import Literal, QuadGraph, serialize
from .store import AnchorStatement

ENDPOINT_ENV = "ROSETTA_NANOPUB_ENDPOINT"


@dataclass(frozen=True)
class Nanopublication:
    id: str
    head: QuadGraph
    assertion: QuadGraph
    provenance: QuadGraph
    pubinfo: QuadGraph

    @property
    def graph_iris(self) -> tuple[str, str, str, str]:
        return (f"{self.id}/head", f"{self.id}/assertion",
                f"{self.id}/provenance", f"{self.id}/pubinfo")


def _build(anchor: AnchorStatement, pattern: StatementPattern, version, np_iri: str):
    head_iri, assertion_iri, provenance_iri, pubinfo_iri = (
        f"{np_iri}/head", f"{np_iri}/assertion", f"{np_iri}/provenance", f"{np_iri}/pubinfo"
    )

    head = QuadGraph()
    head.add(np_iri, vocab.RDF_TYPE, vocab.NP_NANOPUBLICATION, head_iri)
    head.add(np_iri, vocab.NP_HAS_ASSERTION, assertion_iri, head_iri)
    head.add(np_iri, vocab.NP_HAS_PROVENANCE, provenance_iri, head_iri)
    head.add(np_iri, vocab.NP_HAS_PUBLICATION_INFO, pubinfo_iri, head_iri)

    assertion = assertion_graph(version, pattern, assertion_iri)

    meta = anchor.metadata
    provenance = QuadGraph()
    provenance.add(
        assertion_iri,
        vocab.PROV_GENERATED_AT_TIME,
        Literal(version.created_at.isoformat(), vocab.XSD_DATE_TIME),
        provenance_iri,
    )
    if meta.author:
        provenance.add(assertion_iri, vocab.PROV_WAS_ATTRIBUTED_TO, meta.author,
                       provenance_iri)
    if meta.imported_from:
        provenance.add(assertion_iri, vocab.PROV_WAS_DERIVED_FROM, meta.imported_from,
                       provenance_iri)
    if meta.extraction_method:
        provenance.add(assertion_iri, vocab.EXTRACTION_METHOD,
                       Literal(meta.extraction_method), provenance_iri)
    if meta.curator:
        provenance.add(assertion_iri, vocab.CURATOR, meta.curator, provenance_iri)

    pubinfo = QuadGraph()
    pubinfo.add(np_iri, vocab.DCTERMS_CREATOR, version.created_by, pubinfo_iri)
    pubinfo.add(
        np_iri,
        vocab.DCTERMS_CREATED,
        Literal(version.created_at.isoformat(), vocab.XSD_DATE_TIME),
        pubinfo_iri,
    )
    pubinfo.add(np_iri, vocab.VERSION_NUMBER,
                Literal(str(version.number), vocab.XSD_INTEGER), pubinfo_iri)
    if meta.license:
        pubinfo.add(np_iri, vocab.DCTERMS_LICENSE, meta.license, pubinfo_iri)

    return Nanopublication(id=np_iri, head=head, assertion=assertion,
                           provenance=provenance, pubinfo=pubinfo)


def to_nanopub(
    anchor: AnchorStatement,
    pattern: StatementPattern,
    version_number: int | None = None,
    hashed: bool = False,
) -> Nanopublication:
    """Package one version of ``anchor``.  Latest when no number is given.

    ``hashed`` appends a digest of the package contents to the IRI, so a
    republished payload keeps its identifier only if nothing changed.
    """
    if anchor.deleted is not None:
        raise GoneError(
            f"statement {anchor.iri} was deleted; its versions are no longer published",
            iri=anchor.iri,
            deleted_at=anchor.deleted.deleted_at.isoformat(),
            deleted_by=anchor.deleted.deleted_by,
        )
    if version_number is None:
        version_number = anchor.latest.number
    version = anchor.version(version_number)
    if version is None:
        raise NotFoundError(
            f"statement {anchor.iri} has no version {version_number}",
            iri=anchor.iri, version=version_number,
        )
    np = _build(anchor, pattern, version, f"{version.iri}/np")
    if hashed:
        digest = hashlib.sha256(
            serialize_nanopub(np).replace(np.id, "{np}").encode()
        ).hexdigest()[:16]
        np = _build(anchor, pattern, version, f"{version.iri}/np/{digest}")
    return np


def as_quadgraph(np: Nanopublication) -> QuadGraph:
    merged = QuadGraph()
    for part in (np.head, np.assertion, np.provenance, np.pubinfo):
        for quad in part:
            merged.add(*quad)
    return merged


def serialize_nanopub(np: Nanopublication) -> str:
    return serialize(as_quadgraph(np), "trig", vocab.DEFAULT_PREFIXES)


@dataclass(frozen=True)
class PublishOutcome:
    published: bool
    detail: str
    status: int | None = None


def publish_nanopub(np: Nanopublication, endpoint: str | None = None) -> PublishOutcome:
    """Send a nanopub to a registry over HTTP.  Off unless an endpoint is set.

    Configure the target with the ``endpoint`` argument or the
    ``ROSETTA_NANOPUB_ENDPOINT`` environment variable.
    """
    endpoint = endpoint or os.environ.get(ENDPOINT_ENV)
    if not endpoint:
        return PublishOutcome(
            published=False,
            detail=f"publication disabled: no endpoint configured (set {ENDPOINT_ENV})",
        )
    import httpx

    response = httpx.post(
        endpoint,
        content=serialize_nanopub(np),
        headers={"Content-Type": "application/trig"},
    )
    return PublishOutcome(
        published=response.is_success,
        detail=response.reason_phrase or str(response.status_code),
        status=response.status_code,
    )
