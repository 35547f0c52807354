"""Wire formats.  Position values travel as {iri[, label]} or {lexical}."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from ..errors import ValidationError
from ..store import Value


class ValueIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    iri: str | None = None
    label: str | None = None
    lexical: str | None = None
    datatype: str | None = None

    def to_value(self) -> Value:
        if (self.iri is None) == (self.lexical is None):
            raise ValidationError("a value carries exactly one of 'iri' or 'lexical'")
        if self.iri is not None:
            return Value(iri=self.iri)
        return Value(lexical=str(self.lexical))


class StatementIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: str
    values: dict[str, list[ValueIn]]
    creator: str
    negated: bool = False
    confidence_level: float | int | str | None = None
    context_refs: list[str] = Field(default_factory=list)
    modifiable: bool = True
    author: str | None = None
    curator: str | None = None
    extraction_method: str | None = None
    imported_from: str | None = None
    license: str | None = None


class StatementUpdate(BaseModel):
    model_config = ConfigDict(extra="forbid")

    values: dict[str, list[ValueIn]]
    editor: str


class ReorderIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    order: list[int]


class TypePreviewIn(BaseModel):
    """Preview a draft document (editor loop) or a registered type."""

    model_config = ConfigDict(extra="forbid")

    draft: dict[str, Any] | None = None
    type: str | None = None
    fill: dict[str, list[str]] = Field(default_factory=dict)
    negated: bool = False


class FacetedIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    statement_type: str
    filters: dict[str, dict[str, Any]] = Field(default_factory=dict)
    include_deleted: bool = False


class CrosswalkApplyIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    statement: str
    version: int | None = None
    spec_text: str | None = None


class LabelsIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    labels: dict[str, str]
