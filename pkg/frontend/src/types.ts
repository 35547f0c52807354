/** Wire formats exchanged with the statement service. */

/** One slot of a pattern, in pattern-file / API document form. */
export interface PositionDoc {
  thematic_label: string;
  /** Object positions only; the subject is always a required resource. */
  kind?: "resource" | "literal";
  required?: boolean;
  datatype?: string;
  class_constraint?: string;
  placeholder?: string;
  preposition?: string;
  postposition?: string;
  min?: number;
  max?: number | null | "unbounded";
  description?: string;
  transitive?: boolean;
}

/** A statement-type draft as accepted by POST /types and /types/preview. */
export interface PatternDraft {
  label: string;
  description?: string;
  examples?: string[];
  verb: string;
  negated_verb?: string;
  negatable?: boolean;
  subject: PositionDoc;
  objects: PositionDoc[];
}

/** A registered statement type as returned by the service. */
export interface PatternDoc extends PatternDraft {
  id: string;
  version: number;
  pattern_iri: string;
  formalized: string;
}

/** A position value: either a resource reference or a typed literal. */
export interface ValueDoc {
  iri?: string;
  /** Display label piggybacked on resource values. */
  label?: string;
  lexical?: string;
  datatype?: string;
}

export interface VersionDoc {
  iri: string;
  number: number;
  created_by: string;
  created_at: string;
  values: Record<string, ValueDoc[]>;
}

export interface SlotSpan {
  thematic_label: string;
  start: number;
  end: number;
}

export interface RenderDoc {
  text: string;
  slot_spans: SlotSpan[];
}

export interface MetadataDoc {
  creator: string;
  created_at: string;
  author?: string;
  curator?: string;
  extraction_method?: string;
  imported_from?: string;
  license?: string;
}

export interface AnchorDoc {
  id: string;
  type: string;
  pattern_ref: string;
  negated: boolean;
  confidence_level: string | null;
  context_refs: string[];
  modifiable: boolean;
  metadata: MetadataDoc;
  latest_version: number;
  version: VersionDoc;
  /** Present for live statements. */
  render?: RenderDoc;
  /** Present for soft-deleted statements fetched with include_deleted. */
  deleted?: { deleted_at: string; deleted_by: string };
}

export interface PositionChange {
  thematic_label: string;
  change: "added" | "removed" | "modified" | "reordered";
}

export interface HistoryEvent {
  kind: "created" | "updated" | "deleted";
  version: number | null;
  by: string;
  at: string;
  changes: PositionChange[];
}

export interface TermGroupDoc {
  statement_type: string;
  statements: AnchorDoc[];
}

export interface FacetValueDoc {
  value: string;
  label: string;
  count: number;
}

export interface FacetedResultDoc {
  statements: AnchorDoc[];
  facets: Record<string, FacetValueDoc[]>;
}

/** Facet filter in wire form: one_of / min / max / text. */
export interface FacetFilterDoc {
  one_of?: string[];
  min?: string;
  max?: string;
  text?: string;
}

export interface StatementIn {
  type: string;
  values: Record<string, ValueDoc[]>;
  creator: string;
  negated?: boolean;
  confidence_level?: string | null;
  context_refs?: string[];
  modifiable?: boolean;
  author?: string;
  curator?: string;
  extraction_method?: string;
  imported_from?: string;
  license?: string;
}

export interface CrosswalkDoc {
  id: string;
  target: string;
  source_pattern: string;
}

export interface ErrorEnvelope {
  error: {
    code: string;
    message: string;
    details: Record<string, unknown>;
  };
}
