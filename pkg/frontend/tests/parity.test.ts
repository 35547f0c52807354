import { describe, expect, it } from "vitest";

import { formalize, previewText } from "../src/compose.js";
import type { PatternDraft } from "../src/types.js";
import rawRecords from "./fixtures/previews.json";

interface PreviewRecord {
  draft: PatternDraft;
  fill: Record<string, string[]>;
  negated: boolean;
  expected: string;
  formalized: string;
}

const records = rawRecords as unknown as PreviewRecord[];

// Each record freezes the service's actual /types/preview response for a
// scripted draft; the client-side composer must reproduce it byte for byte.
describe("preview parity with the service", () => {
  it("covers 50 scripted drafts", () => {
    expect(records).toHaveLength(50);
  });

  for (const [index, record] of records.entries()) {
    it(`draft ${index}: ${record.draft.label}`, () => {
      expect(previewText(record.draft, record.fill, record.negated)).toBe(record.expected);
      expect(formalize(record.draft)).toBe(record.formalized);
    });
  }
});
