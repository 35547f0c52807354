/** Statement page: rendered sentence with a version selector, the recorded
 * values of that version, a per-position edit timeline, and export links.
 */

import { ApiError, type ApiClient } from "./api.js";
import { el, swap } from "./dom.js";
import type { AnchorDoc, HistoryEvent, ValueDoc } from "./types.js";

function valueText(value: ValueDoc): string {
  if (value.iri !== undefined) return value.label ? `${value.label} <${value.iri}>` : value.iri;
  return value.lexical ?? "";
}

function versionTable(anchor: AnchorDoc): HTMLElement {
  const rows = Object.entries(anchor.version.values).map(([label, values]) =>
    el(
      "tr",
      {},
      el("th", {}, label),
      el("td", {}, values.map(valueText).join(" | ")),
    ),
  );
  return el("table", { class: "values", "data-role": "version-values" }, ...rows);
}

function historyTimeline(events: HistoryEvent[]): HTMLElement {
  const items = events.map((event) =>
    el(
      "li",
      { "data-role": "history-event" },
      el("strong", {}, event.version === null ? event.kind : `v${event.version} ${event.kind}`),
      el("span", { class: "muted" }, ` by ${event.by} at ${event.at}`),
      event.changes.length > 0
        ? el(
            "ul",
            {},
            ...event.changes.map((change) =>
              el("li", { "data-role": "position-change" }, `${change.thematic_label}: ${change.change}`),
            ),
          )
        : null,
    ),
  );
  return el("ol", { class: "timeline", "data-role": "history" }, ...items);
}

/** change events grouped per position, oldest first */
export function perPositionHistory(events: HistoryEvent[]): Map<string, string[]> {
  const byPosition = new Map<string, string[]>();
  for (const event of events) {
    for (const change of event.changes) {
      const entries = byPosition.get(change.thematic_label) ?? [];
      entries.push(event.version === null ? change.change : `v${event.version} ${change.change}`);
      byPosition.set(change.thematic_label, entries);
    }
  }
  return byPosition;
}

function positionHistoryTable(events: HistoryEvent[]): HTMLElement | null {
  const byPosition = perPositionHistory(events);
  if (byPosition.size === 0) return null;
  const rows = [...byPosition.entries()].map(([label, entries]) =>
    el(
      "tr",
      { "data-role": "position-history", "data-label": label },
      el("th", {}, label),
      el("td", {}, entries.join(", ")),
    ),
  );
  return el("table", { class: "values" }, ...rows);
}

export function renderStatementPage(root: HTMLElement, api: ApiClient, id: string): void {
  const load = async (version?: number): Promise<void> => {
    let anchor: AnchorDoc;
    try {
      anchor = await api.getStatement(id, { version });
    } catch (err) {
      if (err instanceof ApiError && err.status === 410) {
        swap(
          root,
          el(
            "div",
            { class: "panel" },
            el("h2", {}, "Statement deleted"),
            el("p", { class: "error", "data-role": "tombstone" }, err.message),
            el("pre", {}, JSON.stringify(err.details, null, 2)),
          ),
        );
        return;
      }
      swap(root, el("p", { class: "error" }, String(err)));
      return;
    }
    const { history } = await api.history(id);

    const versionSelect = el("select", {
      "data-role": "version-select",
      onchange: ((event: Event) => {
        void load(Number((event.target as HTMLSelectElement).value));
      }) as EventListener,
    });
    for (let n = 1; n <= anchor.latest_version; n += 1) {
      versionSelect.append(
        el("option", { value: String(n), selected: n === anchor.version.number }, `v${n}`),
      );
    }

    const agent = anchor.metadata.creator;
    swap(
      root,
      el(
        "div",
        { class: "panel" },
        el("h2", {}, anchor.type.split("/").pop() ?? anchor.type),
        el("p", { class: "sentence", "data-role": "statement-text" }, anchor.render?.text ?? ""),
        anchor.negated ? el("p", { class: "muted" }, "negated") : null,
        el(
          "p",
          { class: "muted" },
          `created by ${agent} · id `,
          el("code", {}, anchor.id),
        ),
        el("label", { class: "field inline" }, "Version ", versionSelect),
        versionTable(anchor),
        el("h3", {}, "History"),
        historyTimeline(history),
        positionHistoryTable(history),
        el(
          "p",
          {},
          el("a", { href: api.mindmapUrl(anchor.id, "json") }, "mind-map json"),
          " · ",
          el("a", { href: api.mindmapUrl(anchor.id, "dot") }, "mind-map dot"),
          " · ",
          el("a", { href: api.nanopubUrl(anchor.id) }, "nanopublication"),
        ),
        el("button", {
          type: "button",
          "data-role": "delete",
          onclick: (() => {
            const by = window.prompt("Delete this statement. Acting agent IRI:", agent);
            if (!by) return;
            api.deleteStatement(anchor.id, by).then(
              () => load(),
              (err) => window.alert(String(err)),
            );
          }) as EventListener,
        }, "Delete statement"),
      ),
    );
  };
  void load();
}
