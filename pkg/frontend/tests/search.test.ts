// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { filtersToWire, renderSearch } from "../src/search.js";
import type { FacetFilterDoc, PatternDoc } from "../src/types.js";
import faceted from "./fixtures/faceted.json";
import rawPattern from "./fixtures/measurement-pattern.json";
import { click, flush, setInput, stubFetch, type RecordedCall } from "./helpers.js";

const measurement = rawPattern as unknown as PatternDoc;
const GRAM = "http://www.wikidata.org/entity/Q41803";

function mount(): { root: HTMLElement; calls: RecordedCall[] } {
  const { impl, calls } = stubFetch((call) => {
    if (call.method === "GET" && call.url.endsWith("/types")) {
      return { json: { types: [measurement] } };
    }
    if (call.method === "GET" && call.url.includes("/search?")) {
      const term = new URL(call.url).searchParams.get("term");
      return { json: term === "orange" ? faceted.term_orange : { groups: [] } };
    }
    if (call.method === "POST" && call.url.endsWith("/search/faceted")) {
      const body = call.body as { filters?: Record<string, FacetFilterDoc> };
      const narrowed = body.filters && Object.keys(body.filters).length > 0;
      return { json: narrowed ? faceted.narrowed : faceted.unfiltered };
    }
    return undefined;
  });
  const root = document.createElement("div");
  document.body.append(root);
  renderSearch(root, new ApiClient("http://svc", impl));
  return { root, calls };
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("filtersToWire", () => {
  it("groups active values into one_of filters per position", () => {
    const wire = filtersToWire([
      { label: "UNIT", value: "a", display: "a" },
      { label: "UNIT", value: "b", display: "b" },
      { label: "QUALITY", value: "q", display: "q" },
    ]);
    expect(wire).toEqual({ UNIT: { one_of: ["a", "b"] }, QUALITY: { one_of: ["q"] } });
  });
});

describe("search view", () => {
  it("prompts for a term and shows an empty state for no hits", async () => {
    const { root } = mount();
    await flush();
    expect(root.querySelector('[data-role="empty"]')?.textContent).toContain("Enter a search term");

    setInput(root.querySelector('[data-role="term"]'), "nothing-matches");
    root.querySelector("form")?.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await flush();
    expect(root.querySelector('[data-role="term-results"] [data-role="empty"]')?.textContent)
      .toContain("No statements match");
  });

  it("groups term hits by statement type with readable labels", async () => {
    const { root } = mount();
    await flush();
    setInput(root.querySelector('[data-role="term"]'), "orange");
    root.querySelector("form")?.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await flush();

    const groups = root.querySelectorAll('[data-role="group"]');
    expect(groups.length).toBeGreaterThan(0);
    expect(groups[0]?.querySelector("h3")?.textContent).toBe("measurement");
    const hits = groups[0]?.querySelectorAll('[data-role="hit"]') ?? [];
    expect([...hits].some((hit) => hit.textContent?.includes("orange has a Weight"))).toBe(true);
  });

  it("narrows the statement list when a facet value is picked", async () => {
    const { root, calls } = mount();
    await flush();

    const typeSelect = root.querySelector('[data-role="facet-type"]') as HTMLSelectElement;
    typeSelect.value = measurement.id;
    typeSelect.dispatchEvent(new Event("change", { bubbles: true }));
    await flush();

    expect(root.querySelectorAll('[data-role="faceted-hits"] [data-role="hit"]')).toHaveLength(3);
    const unitPanel = root.querySelector('[data-role="facet-panel"][data-label="UNIT"]');
    expect(unitPanel).not.toBeNull();
    const gramButton = unitPanel?.querySelector(`[data-value="${GRAM}"]`);
    expect(gramButton?.textContent).toBe("gram (2)");

    click(gramButton ?? null);
    await flush();

    const narrowedCall = calls.filter((c) => c.url.endsWith("/search/faceted")).pop();
    expect(narrowedCall?.body).toEqual({
      statement_type: measurement.id,
      filters: { UNIT: { one_of: [GRAM] } },
    });
    expect(root.querySelectorAll('[data-role="faceted-hits"] [data-role="hit"]')).toHaveLength(2);
    expect(root.querySelector('[data-role="filter-chip"]')?.textContent).toContain("gram");
  });

  it("clears the narrowing when the filter chip is removed", async () => {
    const { root } = mount();
    await flush();
    const typeSelect = root.querySelector('[data-role="facet-type"]') as HTMLSelectElement;
    typeSelect.value = measurement.id;
    typeSelect.dispatchEvent(new Event("change", { bubbles: true }));
    await flush();
    click(root.querySelector(`[data-role="facet-value"][data-value="${GRAM}"]`));
    await flush();
    expect(root.querySelectorAll('[data-role="faceted-hits"] [data-role="hit"]')).toHaveLength(2);

    click(root.querySelector('[data-role="filter-chip"]'));
    await flush();
    expect(root.querySelectorAll('[data-role="faceted-hits"] [data-role="hit"]')).toHaveLength(3);
  });
});
