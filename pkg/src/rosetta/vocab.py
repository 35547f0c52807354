"""IRIs for the statement vocabulary and the external vocabularies we emit.

Kept as plain strings: terms are interned constants, not objects.
"""

from __future__ import annotations

ROSETTA = "https://w3id.org/rosetta/vocab#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
SH = "http://www.w3.org/ns/shacl#"
DCTERMS = "http://purl.org/dc/terms/"
PROV = "http://www.w3.org/ns/prov#"
NP = "http://www.nanopub.org/nschema#"
SKOS = "http://www.w3.org/2004/02/skos/core#"

RDF_TYPE = RDF + "type"
RDFS_LABEL = RDFS + "label"
RDFS_CLASS = RDFS + "Class"

# -- classes ---------------------------------------------------------------
ANCHOR_STATEMENT = ROSETTA + "AnchorStatement"
STATEMENT_VERSION = ROSETTA + "StatementVersion"
SUBJECT_POSITION = ROSETTA + "SubjectPosition"
OBJECT_POSITION = ROSETTA + "ObjectPosition"
VALUE_ENTRY = ROSETTA + "ValueEntry"
NEGATION = ROSETTA + "Negation"
STATEMENT_TYPE = ROSETTA + "StatementType"

# -- light-form linking properties ----------------------------------------
SUBJECT = ROSETTA + "subject"


def object_position_property(index: int, required: bool, literal: bool) -> str:
    """The light-form predicate for object position ``index``."""
    stem = "required" if required else "optional"
    if literal:
        stem += "Literal"
    return f"{ROSETTA}{stem}ObjectPosition{index}"


# -- full-form properties ---------------------------------------------------
HAS_VERSION = ROSETTA + "hasVersion"
HAS_DATA_SCHEMA_PATTERN = ROSETTA + "hasDataSchemaPattern"
HAS_CONTEXT = ROSETTA + "hasContext"
HAS_SUBJECT_POSITION = ROSETTA + "hasSubjectPosition"
HAS_REQUIRED_OBJECT_POSITION = ROSETTA + "hasRequiredObjectPosition"
HAS_OPTIONAL_OBJECT_POSITION = ROSETTA + "hasOptionalObjectPosition"
HAS_VALUE_ENTRY = ROSETTA + "hasValueEntry"
HAS_VALUE = ROSETTA + "hasValue"
ORDER = ROSETTA + "order"
THEMATIC_LABEL = ROSETTA + "thematicLabel"
VERSION_NUMBER = ROSETTA + "versionNumber"
TRANSITIVE = ROSETTA + "transitive"
MODIFIABLE = ROSETTA + "modifiable"
CONFIDENCE_LEVEL = ROSETTA + "confidenceLevel"
DELETED_AT = ROSETTA + "deletedAt"
DELETED_BY = ROSETTA + "deletedBy"
AUTHOR = ROSETTA + "author"
CURATOR = ROSETTA + "curator"
EXTRACTION_METHOD = ROSETTA + "extractionMethod"
IMPORTED_FROM = ROSETTA + "importedFrom"

DCTERMS_CREATOR = DCTERMS + "creator"
DCTERMS_CREATED = DCTERMS + "created"
DCTERMS_LICENSE = DCTERMS + "license"

PROV_GENERATED_AT_TIME = PROV + "generatedAtTime"
PROV_WAS_ATTRIBUTED_TO = PROV + "wasAttributedTo"
PROV_WAS_DERIVED_FROM = PROV + "wasDerivedFrom"

NP_NANOPUBLICATION = NP + "Nanopublication"
NP_HAS_ASSERTION = NP + "hasAssertion"
NP_HAS_PROVENANCE = NP + "hasProvenance"
NP_HAS_PUBLICATION_INFO = NP + "hasPublicationInfo"

XSD_STRING = XSD + "string"
XSD_DOUBLE = XSD + "double"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_ANY_URI = XSD + "anyURI"
XSD_BOOLEAN = XSD + "boolean"
XSD_DATE = XSD + "date"
XSD_DATE_TIME = XSD + "dateTime"

# input kind -> datatype IRI for literal object positions
LITERAL_DATATYPES = {
    "text": XSD_STRING,
    "integer": XSD_INTEGER,
    "decimal": XSD_DECIMAL,
    "URL": XSD_ANY_URI,
    "boolean": XSD_BOOLEAN,
    "date": XSD_DATE,
}

# prefixes used when writing Turtle/TriG
DEFAULT_PREFIXES = {
    "rosetta": ROSETTA,
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "sh": SH,
    "dcterms": DCTERMS,
    "prov": PROV,
    "np": NP,
    "skos": SKOS,
}
