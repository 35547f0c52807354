"""Exception hierarchy shared by every layer of the engine.

Each error carries a stable machine-readable ``code`` so transports
(HTTP, CLI) can map failures without string matching.
"""

from __future__ import annotations

from typing import Any


class RosettaError(Exception):
    """Base class for all engine errors."""

    code = "Error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class NotFoundError(RosettaError):
    code = "NotFound"


class ValidationError(RosettaError):
    code = "ValidationError"


class ConstraintViolation(RosettaError):
    code = "ConstraintViolation"


class ForbiddenError(RosettaError):
    code = "Forbidden"


class GoneError(RosettaError):
    """Raised for soft-deleted statements; carries the deletion provenance."""

    code = "Gone"


class ConflictError(RosettaError):
    code = "Conflict"


class SpecError(RosettaError):
    """A declarative artifact (pattern file, crosswalk spec) is malformed."""

    code = "SpecError"


class UnmappedEntityError(RosettaError):
    """A crosswalk required a vocabulary mapping that the entity map lacks."""

    code = "UnmappedEntityError"

    def __init__(self, iri: str, map_name: str = ""):
        super().__init__(
            f"no mapping for entity {iri}" + (f" in map {map_name}" if map_name else ""),
            iri=iri,
            map_name=map_name,
        )
        self.iri = iri


class RenderError(RosettaError):
    """A statement version does not fit the pattern it is rendered with."""

    code = "RenderError"


class CrosswalkError(RosettaError):
    """A crosswalk cannot be applied to the given statement."""

    code = "CrosswalkError"


class GraphImportError(RosettaError):
    """An RDF graph does not match the expected statement structure."""

    code = "ImportError"

    def __init__(self, message: str, nodes: list[str] | None = None):
        super().__init__(message, nodes=nodes or [])
        self.nodes = nodes or []


class FormatError(RosettaError):
    """Serialized RDF could not be parsed, or cannot be written losslessly."""

    code = "FormatError"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f" at line {line}" if line is not None else ""
        loc += f", column {column}" if column is not None else ""
        super().__init__(message + loc, line=line, column=column)
        self.line = line
        self.column = column
