/** Search views: a term box with results grouped by statement type, and a
 * faceted browser — pick a type, then narrow with one facet panel per
 * position showing value counts.
 */

import type { ApiClient } from "./api.js";
import { el, swap } from "./dom.js";
import type { AnchorDoc, FacetFilterDoc, FacetValueDoc, PatternDoc } from "./types.js";

function statementRow(anchor: AnchorDoc): HTMLElement {
  return el(
    "li",
    { "data-role": "hit" },
    el(
      "a",
      { href: `#/statements/${encodeURIComponent(anchor.id)}` },
      anchor.render?.text ?? anchor.id,
    ),
  );
}

/** A facet value currently being filtered on. */
export interface ActiveFilter {
  label: string;
  value: string;
  display: string;
}

export function filtersToWire(active: ActiveFilter[]): Record<string, FacetFilterDoc> {
  const wire: Record<string, FacetFilterDoc> = {};
  for (const filter of active) {
    const existing = wire[filter.label]?.one_of ?? [];
    wire[filter.label] = { one_of: [...existing, filter.value] };
  }
  return wire;
}

export function renderSearch(root: HTMLElement, api: ApiClient): void {
  const resultsBox = el("div", { "data-role": "term-results" });
  const facetedBox = el("div", { "data-role": "faceted-results" });
  const typeSelect = el("select", { "data-role": "facet-type" });
  let typeLabels = new Map<string, string>();
  let activeFilters: ActiveFilter[] = [];

  const runTermSearch = async (term: string): Promise<void> => {
    if (!term.trim()) {
      swap(resultsBox, el("p", { class: "muted", "data-role": "empty" }, "Enter a search term."));
      return;
    }
    const { groups } = await api.searchTerm(term);
    if (groups.length === 0) {
      swap(resultsBox, el("p", { class: "muted", "data-role": "empty" }, "No statements match."));
      return;
    }
    swap(
      resultsBox,
      ...groups.map((group) =>
        el(
          "section",
          { "data-role": "group" },
          el("h3", {}, typeLabels.get(group.statement_type) ?? group.statement_type),
          el("ul", {}, ...group.statements.map(statementRow)),
        ),
      ),
    );
  };

  const facetPanel = (label: string, values: FacetValueDoc[]): HTMLElement => {
    const buttons = values.map((value) =>
      el(
        "button",
        {
          type: "button",
          "data-role": "facet-value",
          "data-label": label,
          "data-value": value.value,
          onclick: (() => {
            activeFilters.push({ label, value: value.value, display: value.label });
            void runFaceted();
          }) as EventListener,
        },
        `${value.label} (${value.count})`,
      ),
    );
    return el(
      "div",
      { class: "facet-panel", "data-role": "facet-panel", "data-label": label },
      el("h4", {}, label),
      ...buttons,
    );
  };

  const runFaceted = async (): Promise<void> => {
    const statementType = typeSelect.value;
    if (!statementType) {
      swap(facetedBox, el("p", { class: "muted" }, "Pick a statement type to browse."));
      return;
    }
    const result = await api.searchFaceted({
      statement_type: statementType,
      filters: filtersToWire(activeFilters),
    });
    const chips = activeFilters.map((filter, index) =>
      el(
        "button",
        {
          type: "button",
          class: "chip",
          "data-role": "filter-chip",
          onclick: (() => {
            activeFilters = activeFilters.filter((_, i) => i !== index);
            void runFaceted();
          }) as EventListener,
        },
        `${filter.label}: ${filter.display} ×`,
      ),
    );
    swap(
      facetedBox,
      chips.length > 0 ? el("p", {}, ...chips) : null,
      el(
        "div",
        { class: "facet-row" },
        ...Object.entries(result.facets).map(([label, values]) => facetPanel(label, values)),
      ),
      result.statements.length === 0
        ? el("p", { class: "muted", "data-role": "empty" }, "No statements match.")
        : el("ul", { "data-role": "faceted-hits" }, ...result.statements.map(statementRow)),
    );
  };

  const termInput = el("input", {
    type: "search",
    placeholder: "Search statements…",
    "data-role": "term",
  });

  api.listTypes().then(({ types }) => {
    typeLabels = new Map(types.map((t: PatternDoc) => [t.id, t.label]));
    typeSelect.append(el("option", { value: "" }, "(pick a type)"));
    for (const t of types) {
      typeSelect.append(el("option", { value: t.id }, t.label));
    }
  }, () => undefined);

  typeSelect.addEventListener("change", () => {
    activeFilters = [];
    void runFaceted();
  });

  swap(
    root,
    el(
      "div",
      { class: "panel" },
      el("h2", {}, "Search"),
      el(
        "form",
        {
          onsubmit: ((event: Event) => {
            event.preventDefault();
            void runTermSearch(termInput.value);
          }) as EventListener,
        },
        termInput,
        el("button", { type: "submit" }, "Search"),
      ),
      resultsBox,
      el("h2", {}, "Browse by facet"),
      el("label", { class: "field inline" }, "Statement type ", typeSelect),
      facetedBox,
    ),
  );
  swap(resultsBox, el("p", { class: "muted", "data-role": "empty" }, "Enter a search term."));
}
