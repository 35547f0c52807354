/** Test doubles shared by the UI suites. */

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export interface StubResult {
  status?: number;
  json: unknown;
}

export type StubHandler = (call: RecordedCall) => StubResult | undefined;

/** A fetch replacement that records calls and replays canned JSON bodies. */
export function stubFetch(handler: StubHandler): {
  impl: (url: string, init?: RequestInit) => Promise<Response>;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    const call: RecordedCall = {
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    };
    calls.push(call);
    const result = handler(call);
    if (result === undefined) {
      throw new Error(`unmocked request: ${call.method} ${call.url}`);
    }
    const status = result.status ?? 200;
    // the client only touches ok/status/statusText/text()
    return {
      ok: status >= 200 && status < 300,
      status,
      statusText: String(status),
      text: async () => JSON.stringify(result.json),
    } as unknown as Response;
  };
  return { impl, calls };
}

/** Let queued promise callbacks (fetch chains) run to completion. */
export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function setInput(element: Element | null, value: string): void {
  if (!(element instanceof HTMLInputElement) && !(element instanceof HTMLTextAreaElement)) {
    throw new Error("expected an input element");
  }
  element.value = value;
  element.dispatchEvent(new Event("input", { bubbles: true }));
}

export function click(element: Element | null): void {
  if (!(element instanceof HTMLElement)) throw new Error("expected an element to click");
  element.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}
