/** Client-side sentence composition.
 *
 * This mirrors the service's renderer exactly so the editor can show a live
 * preview without a round trip: segments are emitted in order (subject, verb,
 * then each filled object position); a position whose preposition is absent
 * is separated by a single space while a provided preposition — including the
 * empty string — is glued verbatim; postpositions are appended verbatim;
 * multiple values join with ", " and a final " and "; optional positions
 * without values are elided together with their pre/postpositions.  Drafts
 * are still revalidated by the server on submit.
 */

import type { PatternDraft, PositionDoc } from "./types.js";

export class ComposeError extends Error {
  constructor(message: string, readonly label?: string) {
    super(message);
    this.name = "ComposeError";
  }
}

export function joinValues(values: string[]): string {
  if (values.length === 0) return "";
  if (values.length === 1) return values[0] as string;
  return values.slice(0, -1).join(", ") + " and " + values[values.length - 1];
}

/** Placeholder shown for an unfilled position; empty strings are respected. */
export function displayPlaceholder(pos: PositionDoc): string {
  return pos.placeholder ?? pos.thematic_label;
}

export function positionsOf(pattern: PatternDraft): PositionDoc[] {
  return [pattern.subject, ...pattern.objects];
}

export function hasPosition(pattern: PatternDraft, label: string): boolean {
  return positionsOf(pattern).some((p) => p.thematic_label === label);
}

export function isRequired(pos: PositionDoc, isSubject: boolean): boolean {
  return isSubject ? true : pos.required ?? true;
}

export interface ComposedSentence {
  text: string;
  spans: Record<string, [number, number]>;
}

export function composeSentence(
  pattern: PatternDraft,
  parts: Record<string, readonly string[]>,
  negated = false,
): ComposedSentence {
  const pieces: string[] = [];
  const spans: Record<string, [number, number]> = {};
  let length = 0;

  const emit = (text: string): void => {
    pieces.push(text);
    length += text.length;
  };

  const emitPosition = (pos: PositionDoc, values: readonly string[], first: boolean): void => {
    const sep = first ? "" : " ";
    const prefix = pos.preposition ?? sep;
    const joined = joinValues([...values]);
    emit(prefix);
    spans[pos.thematic_label] = [length, length + joined.length];
    emit(joined + (pos.postposition || ""));
  };

  const negatable = pattern.negatable ?? true;
  if (negated && !negatable) {
    throw new ComposeError(`pattern '${pattern.label}' is not negatable`);
  }
  emit(negated && pattern.negated_verb == null ? "It is not the case that " : "");
  const verb = negated && pattern.negated_verb != null ? pattern.negated_verb : pattern.verb;

  const subjectValues = parts[pattern.subject.thematic_label];
  if (subjectValues === undefined) {
    throw new ComposeError(
      `subject position '${pattern.subject.thematic_label}' has no values`,
      pattern.subject.thematic_label,
    );
  }
  emitPosition(pattern.subject, subjectValues, true);
  emit(" " + verb);
  for (const pos of pattern.objects) {
    const values = parts[pos.thematic_label] ?? [];
    if (values.length === 0) {
      if (isRequired(pos, false)) {
        throw new ComposeError(
          `required position '${pos.thematic_label}' has no values`,
          pos.thematic_label,
        );
      }
      continue;
    }
    emitPosition(pos, values, false);
  }
  return { text: pieces.join(""), spans };
}

/** The pattern's sentence with every position shown as its placeholder. */
export function formalize(pattern: PatternDraft): string {
  const parts: Record<string, string[]> = {};
  for (const pos of positionsOf(pattern)) {
    parts[pos.thematic_label] = [displayPlaceholder(pos)];
  }
  return composeSentence(pattern, parts).text;
}

/** Formalized statement with some placeholders replaced by sample texts.
 *
 * Matches the service's preview endpoints: every position starts out as its
 * placeholder, non-empty fills replace it, and unknown labels are rejected.
 * Optional positions therefore never elide here — they show as placeholders.
 */
export function previewText(
  pattern: PatternDraft,
  fill: Record<string, readonly string[]> = {},
  negated = false,
): string {
  const parts: Record<string, readonly string[]> = {};
  for (const pos of positionsOf(pattern)) {
    parts[pos.thematic_label] = [displayPlaceholder(pos)];
  }
  for (const [label, texts] of Object.entries(fill)) {
    if (!hasPosition(pattern, label)) {
      throw new ComposeError(`no position '${label}' to fill`, label);
    }
    if (texts.length > 0) {
      parts[label] = texts;
    }
  }
  return composeSentence(pattern, parts, negated).text;
}
