// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  buildFormModel,
  formPayload,
  inputTypeFor,
  maxRows,
  renderEntryForm,
} from "../src/entry.js";
import type { PatternDoc } from "../src/types.js";
import createdFull from "./fixtures/created-full.json";
import createdMinimal from "./fixtures/created-minimal.json";
import createdNegated from "./fixtures/created-negated.json";
import rawPattern from "./fixtures/measurement-pattern.json";
import { click, flush, setInput, stubFetch, type RecordedCall } from "./helpers.js";

const measurement = rawPattern as unknown as PatternDoc;

interface CreationFixture {
  request: Record<string, unknown>;
  response: Record<string, unknown> & { render: { text: string } };
}

function mount(creation: CreationFixture): {
  root: HTMLElement;
  calls: RecordedCall[];
} {
  const { impl, calls } = stubFetch((call) => {
    if (call.method === "GET" && call.url.includes("/types/measurement")) {
      return { json: measurement };
    }
    if (call.method === "POST" && call.url.endsWith("/statements")) {
      return { status: 201, json: creation.response };
    }
    return undefined;
  });
  const root = document.createElement("div");
  document.body.append(root);
  renderEntryForm(root, new ApiClient("http://svc", impl), "measurement");
  return { root, calls };
}

function group(root: HTMLElement, label: string): HTMLElement {
  const node = root.querySelector(`[data-role="field-group"][data-label="${label}"]`);
  expect(node, `field group ${label}`).not.toBeNull();
  return node as HTMLElement;
}

function fillResource(root: HTMLElement, label: string, iri: string, name: string): void {
  setInput(group(root, label).querySelector('[data-role="iri"]'), iri);
  setInput(group(root, label).querySelector('[data-role="resource-label"]'), name);
}

function fillLiteral(root: HTMLElement, label: string, lexical: string): void {
  setInput(group(root, label).querySelector('[data-role="lexical"]'), lexical);
}

const GRAM = "http://www.wikidata.org/entity/Q41803";
const WEIGHT = "http://purl.obolibrary.org/obo/PATO_0000128";

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("form model", () => {
  it("creates one field per position in pattern order", () => {
    const model = buildFormModel(measurement);
    expect(model.fields.map((f) => f.position.thematic_label)).toEqual([
      "OBJECT",
      "QUALITY",
      "MAIN_VALUE",
      "UNIT",
      "CONFIDENCE_LEVEL",
      "LOWER_VALUE",
      "UPPER_VALUE",
      "CONF_UNIT",
    ]);
  });

  it("drops blank rows and empty positions from the payload", () => {
    const model = buildFormModel(measurement);
    (model.fields[0]!.rows[0]!).iri = " https://ex.org/apple ";
    (model.fields[2]!.rows[0]!).lexical = "212.45";
    const payload = formPayload(model);
    expect(payload.values).toEqual({
      OBJECT: [{ iri: "https://ex.org/apple" }],
      MAIN_VALUE: [{ lexical: "212.45" }],
    });
    expect(payload).not.toHaveProperty("negated");
  });

  it("maps literal datatypes to widget input types", () => {
    expect(inputTypeFor({ thematic_label: "X", datatype: "decimal" })).toBe("number");
    expect(inputTypeFor({ thematic_label: "X", datatype: "date" })).toBe("date");
    expect(inputTypeFor({ thematic_label: "X", datatype: "URL" })).toBe("url");
    expect(inputTypeFor({ thematic_label: "X", datatype: "text" })).toBe("text");
  });

  it("reads value-count caps from the position document", () => {
    expect(maxRows({ thematic_label: "X" })).toBe(1);
    expect(maxRows({ thematic_label: "X", max: 3 })).toBe(3);
    expect(maxRows({ thematic_label: "X", max: "unbounded" })).toBeNull();
    expect(maxRows({ thematic_label: "X", max: null })).toBeNull();
  });
});

describe("statement entry view", () => {
  it("renders resource pickers and typed literal inputs per position", async () => {
    const { root } = mount(createdFull as unknown as CreationFixture);
    await flush();
    expect(root.querySelectorAll('[data-role="field-group"]')).toHaveLength(8);
    expect(group(root, "OBJECT").querySelector('[data-role="iri"]')).not.toBeNull();
    expect(group(root, "OBJECT").classList.contains("pos-required")).toBe(true);
    const main = group(root, "MAIN_VALUE").querySelector('[data-role="lexical"]');
    expect((main as HTMLInputElement).type).toBe("number");
    expect(group(root, "CONFIDENCE_LEVEL").classList.contains("pos-optional")).toBe(true);
    expect(root.querySelector('[data-role="negate"]')).not.toBeNull();
  });

  it("round-trips the fully filled measurement form to the interval sentence", async () => {
    const { root, calls } = mount(createdFull as unknown as CreationFixture);
    await flush();
    fillResource(root, "OBJECT", "https://example.org/entity/apple1", "Apple");
    fillResource(root, "QUALITY", WEIGHT, "Weight");
    fillLiteral(root, "MAIN_VALUE", "212.45");
    fillResource(root, "UNIT", GRAM, "gram");
    fillLiteral(root, "CONFIDENCE_LEVEL", "95");
    fillLiteral(root, "LOWER_VALUE", "212.44");
    fillLiteral(root, "UPPER_VALUE", "212.47");
    fillResource(root, "CONF_UNIT", GRAM, "gram");

    click(root.querySelector('[data-role="create-statement"]'));
    await flush();

    // the submitted payload must be exactly the request whose real service
    // response (the frozen fixture) carries the rendered sentence
    const posted = calls.find((c) => c.method === "POST");
    expect(posted?.body).toEqual((createdFull as unknown as CreationFixture).request);
    expect(root.querySelector('[data-role="view-text"]')?.textContent).toBe(
      "Apple has a Weight of 212.45 gram (95 % Conf. Int.: 212.44 - 212.47 gram)",
    );
  });

  it("elides blank optional fields in the created sentence", async () => {
    const { root, calls } = mount(createdMinimal as unknown as CreationFixture);
    await flush();
    fillResource(root, "OBJECT", "https://example.org/entity/orange1", "orange");
    fillResource(root, "QUALITY", WEIGHT, "Weight");
    fillLiteral(root, "MAIN_VALUE", "153.6");
    fillResource(root, "UNIT", GRAM, "gram");

    click(root.querySelector('[data-role="create-statement"]'));
    await flush();

    const posted = calls.find((c) => c.method === "POST");
    expect(posted?.body).toEqual((createdMinimal as unknown as CreationFixture).request);
    expect(root.querySelector('[data-role="view-text"]')?.textContent).toBe(
      "orange has a Weight of 153.6 gram",
    );
  });

  it("negates the statement when the toggle is on", async () => {
    const { root, calls } = mount(createdNegated as unknown as CreationFixture);
    await flush();
    fillResource(root, "OBJECT", "https://example.org/entity/orange1", "orange");
    fillResource(root, "QUALITY", WEIGHT, "Weight");
    fillLiteral(root, "MAIN_VALUE", "153.6");
    fillResource(root, "UNIT", GRAM, "gram");
    const toggle = root.querySelector('[data-role="negate"]') as HTMLInputElement;
    toggle.checked = true;
    toggle.dispatchEvent(new Event("change", { bubbles: true }));

    click(root.querySelector('[data-role="create-statement"]'));
    await flush();

    const posted = calls.find((c) => c.method === "POST");
    expect(posted?.body).toEqual((createdNegated as unknown as CreationFixture).request);
    expect(root.querySelector('[data-role="view-text"]')?.textContent).toBe(
      "It is not the case that orange has a Weight of 153.6 gram",
    );
  });

  it("shows constraint violations next to the offending field", async () => {
    const { impl } = stubFetch((call) => {
      if (call.method === "GET" && call.url.includes("/types/measurement")) {
        return { json: measurement };
      }
      if (call.method === "POST" && call.url.endsWith("/statements")) {
        return {
          status: 409,
          json: {
            error: {
              code: "ConstraintViolation",
              message: "position 'UNIT' needs at least 1 value(s)",
              details: { position: "UNIT", supplied: 0 },
            },
          },
        };
      }
      return undefined;
    });
    const root = document.createElement("div");
    document.body.append(root);
    renderEntryForm(root, new ApiClient("http://svc", impl), "measurement");
    await flush();
    fillResource(root, "OBJECT", "https://example.org/entity/orange1", "orange");
    fillResource(root, "QUALITY", WEIGHT, "Weight");
    fillLiteral(root, "MAIN_VALUE", "153.6");

    click(root.querySelector('[data-role="create-statement"]'));
    await flush();

    const message = group(root, "UNIT").querySelector('[data-role="field-error"]');
    expect(message?.textContent).toContain("needs at least 1 value");
    expect(root.querySelector('[data-role="view-text"]')).toBeNull();
  });
});
