/** Statement-type editor: label/description/examples, one expandable card per
 * position, drag-and-drop reordering, and a live preview that matches the
 * server's preview endpoint for the current draft.
 */

import { ApiError, type ApiClient } from "./api.js";
import { previewText } from "./compose.js";
import { el, swap } from "./dom.js";
import type { PatternDraft, PositionDoc } from "./types.js";

export const INPUT_TYPES = [
  "resource",
  "text",
  "integer",
  "decimal",
  "URL",
  "boolean",
  "date",
] as const;

export type InputType = (typeof INPUT_TYPES)[number];

export function emptyDraft(): PatternDraft {
  return { label: "", verb: "", subject: { thematic_label: "SUBJECT" }, objects: [] };
}

/** Drop blank optional fields so the wire document only carries what's set. */
function positionToWire(pos: PositionDoc, isSubject: boolean): PositionDoc {
  const doc: PositionDoc = { thematic_label: pos.thematic_label };
  if (!isSubject) {
    doc.kind = pos.kind ?? "resource";
    doc.required = pos.required ?? true;
    if (doc.kind === "literal") doc.datatype = pos.datatype;
  }
  if (pos.class_constraint) doc.class_constraint = pos.class_constraint;
  if (pos.placeholder) doc.placeholder = pos.placeholder;
  if (pos.preposition) doc.preposition = pos.preposition;
  if (pos.postposition) doc.postposition = pos.postposition;
  if (pos.min !== undefined) doc.min = pos.min;
  if (pos.max !== undefined) doc.max = pos.max;
  if (pos.description) doc.description = pos.description;
  return doc;
}

export function draftToWire(draft: PatternDraft): PatternDraft {
  const doc: PatternDraft = {
    label: draft.label,
    verb: draft.verb,
    subject: positionToWire(draft.subject, true),
    objects: draft.objects.map((o) => positionToWire(o, false)),
  };
  if (draft.description) doc.description = draft.description;
  if (draft.examples && draft.examples.length > 0) doc.examples = draft.examples;
  if (draft.negatable === false) doc.negatable = false;
  if (draft.negated_verb) doc.negated_verb = draft.negated_verb;
  return doc;
}

/** Live dynamic label for the current draft (placeholders everywhere). */
export function draftPreview(draft: PatternDraft): string {
  return previewText(draftToWire(draft)).trim();
}

/** Reorder object positions; keeps the position objects themselves intact. */
export function moveObject(draft: PatternDraft, from: number, to: number): PatternDraft {
  const objects = [...draft.objects];
  if (from < 0 || from >= objects.length || to < 0 || to >= objects.length) return draft;
  const [item] = objects.splice(from, 1);
  objects.splice(to, 0, item as PositionDoc);
  return { ...draft, objects };
}

export function addObject(draft: PatternDraft, partial: Partial<PositionDoc> = {}): PatternDraft {
  const position: PositionDoc = {
    kind: "resource",
    required: true,
    thematic_label: partial.thematic_label ?? `OBJECT_${draft.objects.length + 1}`,
    ...partial,
  };
  return { ...draft, objects: [...draft.objects, position] };
}

export function removeObject(draft: PatternDraft, index: number): PatternDraft {
  return { ...draft, objects: draft.objects.filter((_, i) => i !== index) };
}

/** Map a server validation error onto a position card, if it names one. */
export function errorPositionLabel(err: ApiError): string | undefined {
  for (const key of ["label", "position", "thematic_label"]) {
    const value = err.details[key];
    if (typeof value === "string") return value;
  }
  return undefined;
}

interface EditorCallbacks {
  onCreated?: (typeId: string) => void;
}

export function renderTypeEditor(
  root: HTMLElement,
  api: ApiClient,
  callbacks: EditorCallbacks = {},
): void {
  let draft = emptyDraft();
  // keyed by position object identity: field edits mutate positions in place
  const expanded = new Set<PositionDoc>();
  let positionErrors = new Map<string, string>();

  const previewBox = el("p", { class: "preview", "data-role": "preview" });
  const errorBox = el("p", { class: "error", "data-role": "editor-error" });
  const objectList = el("div", { class: "position-list", "data-role": "objects" });

  const refreshPreview = (): void => {
    previewBox.textContent = draftPreview(draft) || "(empty draft)";
  };

  const restructure = (next: PatternDraft): void => {
    draft = next;
    renderObjects();
    refreshPreview();
  };

  const textField = (
    labelText: string,
    value: string,
    oninput: (value: string) => void,
    attrs: Record<string, string> = {},
  ): HTMLElement =>
    el(
      "label",
      { class: "field" },
      labelText,
      el("input", {
        type: "text",
        value,
        ...attrs,
        oninput: ((event: Event) => {
          oninput((event.target as HTMLInputElement).value);
        }) as EventListener,
      }),
    );

  const positionCard = (pos: PositionDoc, isSubject: boolean): HTMLElement => {
    const required = isSubject ? true : pos.required ?? true;
    // Text edits mutate the position and refresh the preview only, so typing
    // never rebuilds the card (and never loses focus); structural edits
    // rebuild the whole list.
    const patchText = (change: Partial<PositionDoc>): void => {
      Object.assign(pos, change);
      refreshPreview();
    };
    const patchStructure = (change: Partial<PositionDoc>): void => {
      Object.assign(pos, change);
      renderObjects();
      refreshPreview();
    };
    const indexOf = (): number => draft.objects.indexOf(pos);

    const title = el("strong", {}, pos.thematic_label || "(unnamed)");
    const card = el("div", {
      class: `position-card ${required ? "pos-required" : "pos-optional"}`,
      "data-role": isSubject ? "subject-card" : "object-card",
      "data-label": pos.thematic_label,
    });
    const head = el(
      "div",
      { class: "position-head" },
      title,
      el("span", { class: "muted" }, isSubject ? "subject" : required ? "required" : "optional"),
    );
    if (!isSubject) {
      card.setAttribute("draggable", "true");
      card.addEventListener("dragstart", (event) => {
        (event as DragEvent).dataTransfer?.setData("text/plain", String(indexOf()));
      });
      card.addEventListener("dragover", (event) => event.preventDefault());
      card.addEventListener("drop", (event) => {
        event.preventDefault();
        const raw = (event as DragEvent).dataTransfer?.getData("text/plain") ?? "";
        const from = Number.parseInt(raw, 10);
        if (!Number.isNaN(from)) restructure(moveObject(draft, from, indexOf()));
      });
      head.append(
        el("button", {
          type: "button",
          "data-role": "move-up",
          title: "Move up",
          onclick: (() => restructure(moveObject(draft, indexOf(), indexOf() - 1))) as EventListener,
        }, "▲"),
        el("button", {
          type: "button",
          "data-role": "move-down",
          title: "Move down",
          onclick: (() => restructure(moveObject(draft, indexOf(), indexOf() + 1))) as EventListener,
        }, "▼"),
        el("button", {
          type: "button",
          "data-role": "toggle",
          onclick: (() => {
            if (expanded.has(pos)) expanded.delete(pos);
            else expanded.add(pos);
            renderObjects();
          }) as EventListener,
        }, expanded.has(pos) ? "collapse" : "expand"),
        el("button", {
          type: "button",
          "data-role": "remove",
          onclick: (() => {
            expanded.delete(pos);
            restructure(removeObject(draft, indexOf()));
          }) as EventListener,
        }, "remove"),
      );
    }
    card.append(head);

    const positionError = positionErrors.get(pos.thematic_label);
    if (positionError) {
      card.append(el("p", { class: "error", "data-role": "position-error" }, positionError));
    }

    if (isSubject || expanded.has(pos)) {
      const body = el("div", { class: "position-body" });
      body.append(
        textField("Thematic label", pos.thematic_label, (v) => {
          patchText({ thematic_label: v });
          title.textContent = v || "(unnamed)";
          card.setAttribute("data-label", v);
        }, { "data-role": "thematic-label" }),
        textField("Placeholder", pos.placeholder ?? "",
          (v) => patchText({ placeholder: v || undefined }), { "data-role": "placeholder" }),
        textField("Preposition", pos.preposition ?? "",
          (v) => patchText({ preposition: v || undefined }), { "data-role": "preposition" }),
        textField("Postposition", pos.postposition ?? "",
          (v) => patchText({ postposition: v || undefined }), { "data-role": "postposition" }),
        textField("Description", pos.description ?? "",
          (v) => patchText({ description: v || undefined })),
      );
      if (!isSubject) {
        const typeSelect = el("select", {
          "data-role": "input-type",
          onchange: ((event: Event) => {
            const choice = (event.target as HTMLSelectElement).value as InputType;
            if (choice === "resource") patchStructure({ kind: "resource", datatype: undefined });
            else patchStructure({ kind: "literal", datatype: choice });
          }) as EventListener,
        });
        for (const choice of INPUT_TYPES) {
          const selected = pos.kind === "literal" ? pos.datatype === choice : choice === "resource";
          typeSelect.append(el("option", { value: choice, selected }, choice));
        }
        const requiredToggle = el("input", {
          type: "checkbox",
          checked: required,
          "data-role": "required",
          onchange: ((event: Event) => {
            const on = (event.target as HTMLInputElement).checked;
            patchStructure({ required: on, min: on ? 1 : 0 });
          }) as EventListener,
        });
        body.append(
          el("label", { class: "field" }, "Input type", typeSelect),
          el("label", { class: "field inline" }, requiredToggle, "required"),
          textField("Max values (blank = 1, 'unbounded' for any)",
            pos.max === undefined || pos.max === 1 ? "" : String(pos.max ?? "unbounded"),
            (v) => {
              const trimmed = v.trim();
              if (!trimmed) patchText({ max: undefined });
              else if (trimmed === "unbounded") patchText({ max: "unbounded" });
              else if (/^\d+$/.test(trimmed)) patchText({ max: Number(trimmed) });
            }),
        );
      }
      card.append(body);
    }
    return card;
  };

  const renderObjects = (): void => {
    swap(
      objectList,
      positionCard(draft.subject, true),
      ...draft.objects.map((pos) => positionCard(pos, false)),
    );
  };

  const submit = async (): Promise<void> => {
    positionErrors = new Map();
    try {
      const created = await api.createType(draftToWire(draft));
      errorBox.textContent = "";
      swap(
        root,
        el("div", { class: "panel" },
          el("h2", {}, "Statement type created"),
          el("p", { class: "preview", "data-role": "created-preview" }, created.formalized),
          el("p", {}, el("code", {}, created.id)),
          el("p", {},
            el("a", { href: `#/new/${encodeURIComponent(created.id)}` }, "Add a statement"),
          ),
        ),
      );
      callbacks.onCreated?.(created.id);
    } catch (err) {
      if (err instanceof ApiError) {
        const label = errorPositionLabel(err);
        if (label !== undefined && label !== "") {
          positionErrors.set(label, err.message);
          errorBox.textContent = "";
        } else {
          errorBox.textContent = err.message;
        }
        renderObjects();
      } else {
        errorBox.textContent = String(err);
      }
    }
  };

  const form = el(
    "div",
    { class: "panel editor" },
    el("h2", {}, "New statement type"),
    textField("Label", draft.label, (v) => {
      draft.label = v;
      refreshPreview();
    }, { "data-role": "label" }),
    textField("Verb", draft.verb, (v) => {
      draft.verb = v;
      refreshPreview();
    }, { "data-role": "verb" }),
    textField("Description", draft.description ?? "", (v) => {
      draft.description = v || undefined;
    }),
    el(
      "label",
      { class: "field" },
      "Example sentences (one per line)",
      el("textarea", {
        rows: "2",
        oninput: ((event: Event) => {
          draft.examples = (event.target as HTMLTextAreaElement).value
            .split("\n")
            .map((line) => line.trim())
            .filter(Boolean);
        }) as EventListener,
      }),
    ),
    el("h3", {}, "Positions"),
    objectList,
    el("button", {
      type: "button",
      "data-role": "add-object",
      onclick: (() => {
        const next = addObject(draft);
        expanded.add(next.objects[next.objects.length - 1] as PositionDoc);
        restructure(next);
      }) as EventListener,
    }, "Add object position"),
    el("h3", {}, "Preview"),
    previewBox,
    errorBox,
    el("button", {
      type: "button",
      class: "primary",
      "data-role": "create-type",
      onclick: (() => {
        void submit();
      }) as EventListener,
    }, "Create and insert statement type"),
  );

  swap(root, form);
  renderObjects();
  refreshPreview();
}
