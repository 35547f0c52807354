/** Statement entry: a form generated from a statement type, one input group
 * per position (resource IRI+label pickers vs typed literal inputs), a negate
 * toggle, and a view-mode rendering of the created statement.
 */

import { ApiError, type ApiClient } from "./api.js";
import { displayPlaceholder, isRequired } from "./compose.js";
import { el, swap } from "./dom.js";
import type { AnchorDoc, PatternDoc, PositionDoc, StatementIn, ValueDoc } from "./types.js";

export interface ValueRow {
  iri: string;
  label: string;
  lexical: string;
}

export interface FieldModel {
  position: PositionDoc;
  isSubject: boolean;
  rows: ValueRow[];
}

export interface FormModel {
  pattern: PatternDoc;
  fields: FieldModel[];
  creator: string;
  negated: boolean;
}

export function emptyRow(): ValueRow {
  return { iri: "", label: "", lexical: "" };
}

export function buildFormModel(pattern: PatternDoc): FormModel {
  const fields: FieldModel[] = [
    { position: pattern.subject, isSubject: true, rows: [emptyRow()] },
    ...pattern.objects.map((position) => ({ position, isSubject: false, rows: [emptyRow()] })),
  ];
  return { pattern, fields, creator: "urn:rosetta:webui", negated: false };
}

/** Upper bound on value rows; null means unbounded. */
export function maxRows(position: PositionDoc): number | null {
  if (position.max === undefined) return 1;
  if (position.max === null || position.max === "unbounded") return null;
  return position.max;
}

export function isLiteral(position: PositionDoc): boolean {
  return position.kind === "literal";
}

/** Non-blank rows as wire values; blank rows and empty positions drop out. */
export function formValues(model: FormModel): Record<string, ValueDoc[]> {
  const values: Record<string, ValueDoc[]> = {};
  for (const field of model.fields) {
    const docs: ValueDoc[] = [];
    for (const row of field.rows) {
      if (isLiteral(field.position)) {
        const lexical = row.lexical.trim();
        if (lexical) docs.push({ lexical });
      } else {
        const iri = row.iri.trim();
        if (!iri) continue;
        const label = row.label.trim();
        docs.push(label ? { iri, label } : { iri });
      }
    }
    if (docs.length > 0) values[field.position.thematic_label] = docs;
  }
  return values;
}

export function formPayload(model: FormModel): StatementIn {
  const payload: StatementIn = {
    type: model.pattern.id,
    values: formValues(model),
    creator: model.creator,
  };
  if (model.negated) payload.negated = true;
  return payload;
}

/** HTML input type for a literal position's datatype. */
export function inputTypeFor(position: PositionDoc): string {
  switch (position.datatype) {
    case "integer":
    case "decimal":
      return "number";
    case "date":
      return "date";
    case "URL":
      return "url";
    default:
      return "text";
  }
}

export function renderEntryForm(root: HTMLElement, api: ApiClient, typeKey: string): void {
  const fieldErrors = new Map<string, string>();
  const errorBox = el("p", { class: "error", "data-role": "form-error" });
  const fieldList = el("div", { "data-role": "fields" });
  let model: FormModel | null = null;

  const rowEditor = (field: FieldModel, row: ValueRow): HTMLElement => {
    const wrap = el("div", { class: "value-row" });
    if (isLiteral(field.position)) {
      wrap.append(
        el("input", {
          type: inputTypeFor(field.position),
          step: "any",
          placeholder: displayPlaceholder(field.position),
          value: row.lexical,
          "data-role": "lexical",
          oninput: ((event: Event) => {
            row.lexical = (event.target as HTMLInputElement).value;
          }) as EventListener,
        }),
      );
    } else {
      wrap.append(
        el("input", {
          type: "text",
          placeholder: `${displayPlaceholder(field.position)} IRI`,
          value: row.iri,
          "data-role": "iri",
          oninput: ((event: Event) => {
            row.iri = (event.target as HTMLInputElement).value;
          }) as EventListener,
        }),
        el("input", {
          type: "text",
          placeholder: "label (optional)",
          value: row.label,
          "data-role": "resource-label",
          oninput: ((event: Event) => {
            row.label = (event.target as HTMLInputElement).value;
          }) as EventListener,
        }),
      );
    }
    return wrap;
  };

  const fieldGroup = (field: FieldModel): HTMLElement => {
    const required = isRequired(field.position, field.isSubject);
    const group = el("div", {
      class: `field-group ${required ? "pos-required" : "pos-optional"}`,
      "data-role": "field-group",
      "data-label": field.position.thematic_label,
    });
    group.append(
      el(
        "div",
        { class: "position-head" },
        el("strong", {}, field.position.thematic_label),
        el("span", { class: "muted" }, required ? "required" : "optional"),
      ),
    );
    if (field.position.description) {
      group.append(el("p", { class: "muted" }, field.position.description));
    }
    const message = fieldErrors.get(field.position.thematic_label);
    if (message) {
      group.append(el("p", { class: "error", "data-role": "field-error" }, message));
    }
    const rows = el("div", {}, ...field.rows.map((row) => rowEditor(field, row)));
    group.append(rows);
    const cap = maxRows(field.position);
    if (cap === null || field.rows.length < cap) {
      group.append(
        el("button", {
          type: "button",
          "data-role": "add-value",
          onclick: (() => {
            field.rows.push(emptyRow());
            renderFields();
          }) as EventListener,
        }, "Add value"),
      );
    }
    return group;
  };

  const renderFields = (): void => {
    if (!model) return;
    swap(fieldList, ...model.fields.map((field) => fieldGroup(field)));
  };

  const viewMode = (anchor: AnchorDoc): void => {
    swap(
      root,
      el(
        "div",
        { class: "panel" },
        el("h2", {}, "Statement created"),
        el("p", { class: "sentence", "data-role": "view-text" }, anchor.render?.text ?? ""),
        anchor.negated ? el("p", { class: "muted" }, "negated") : null,
        el("p", { class: "muted" }, `created by ${anchor.metadata.creator}`),
        el("p", {},
          el("a", { href: `#/statements/${encodeURIComponent(anchor.id)}` }, "Open statement"),
          " · ",
          el("a", { href: api.mindmapUrl(anchor.id, "json") }, "mind-map json"),
          " · ",
          el("a", { href: api.mindmapUrl(anchor.id, "dot") }, "mind-map dot"),
        ),
      ),
    );
  };

  const submit = async (): Promise<void> => {
    if (!model) return;
    fieldErrors.clear();
    errorBox.textContent = "";
    try {
      viewMode(await api.createStatement(formPayload(model)));
    } catch (err) {
      if (err instanceof ApiError) {
        const position = typeof err.details["position"] === "string"
          ? (err.details["position"] as string)
          : typeof err.details["label"] === "string"
            ? (err.details["label"] as string)
            : undefined;
        if (position && model.fields.some((f) => f.position.thematic_label === position)) {
          fieldErrors.set(position, err.message);
        } else {
          errorBox.textContent = err.message;
        }
        renderFields();
      } else {
        errorBox.textContent = String(err);
      }
    }
  };

  const buildForm = (pattern: PatternDoc): void => {
    model = buildFormModel(pattern);
    const creatorField = el("input", {
      type: "text",
      value: model.creator,
      "data-role": "creator",
      oninput: ((event: Event) => {
        if (model) model.creator = (event.target as HTMLInputElement).value;
      }) as EventListener,
    });
    const negateToggle = el("input", {
      type: "checkbox",
      "data-role": "negate",
      onchange: ((event: Event) => {
        if (model) model.negated = (event.target as HTMLInputElement).checked;
      }) as EventListener,
    });
    swap(
      root,
      el(
        "div",
        { class: "panel" },
        el("h2", {}, `New statement: ${pattern.label}`),
        el("p", { class: "preview" }, pattern.formalized),
        fieldList,
        pattern.negatable === false
          ? null
          : el("label", { class: "field inline" }, negateToggle, "Negate statement"),
        el("label", { class: "field" }, "Creator", creatorField),
        errorBox,
        el("button", {
          type: "button",
          class: "primary",
          "data-role": "create-statement",
          onclick: (() => {
            void submit();
          }) as EventListener,
        }, "Create statement"),
      ),
    );
    renderFields();
  };

  api.getType(typeKey).then(buildForm, (err) => {
    swap(root, el("p", { class: "error" }, String(err)));
  });
}
