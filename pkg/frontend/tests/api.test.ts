import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { stubFetch } from "./helpers.js";

describe("ApiClient", () => {
  it("unwraps the error envelope into an ApiError", async () => {
    const { impl } = stubFetch(() => ({
      status: 409,
      json: {
        error: {
          code: "ConstraintViolation",
          message: "position 'UNIT' needs at least 1 value(s)",
          details: { position: "UNIT", supplied: 0 },
        },
      },
    }));
    const api = new ApiClient("http://svc", impl);
    const failure = await api
      .createStatement({ type: "t", values: {}, creator: "urn:x" })
      .then(() => null, (err: unknown) => err);
    expect(failure).toBeInstanceOf(ApiError);
    const apiError = failure as ApiError;
    expect(apiError.status).toBe(409);
    expect(apiError.code).toBe("ConstraintViolation");
    expect(apiError.details["position"]).toBe("UNIT");
  });

  it("wraps non-envelope failures with the raw body", async () => {
    const { impl } = stubFetch(() => ({ status: 502, json: "bad gateway" }));
    const api = new ApiClient("http://svc", impl);
    const failure = await api.listTypes().then(() => null, (err: unknown) => err);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).code).toBe("HttpError");
    expect((failure as ApiError).status).toBe(502);
  });

  it("reports unreachable services as status 0", async () => {
    const api = new ApiClient("http://svc", () => Promise.reject(new Error("refused")));
    const failure = await api.listTypes().then(() => null, (err: unknown) => err);
    expect((failure as ApiError).status).toBe(0);
    expect((failure as ApiError).code).toBe("Unreachable");
  });

  it("builds query strings only for supplied parameters", async () => {
    const { impl, calls } = stubFetch(() => ({ json: {} }));
    const api = new ApiClient("http://svc", impl);
    await api.getStatement("https://ex.org/statement/1", { version: 2, includeDeleted: true });
    await api.getStatement("https://ex.org/statement/1");
    await api.listStatements();
    expect(calls[0]?.url).toBe(
      "http://svc/statements/https://ex.org/statement/1?version=2&include_deleted=true",
    );
    expect(calls[1]?.url).toBe("http://svc/statements/https://ex.org/statement/1");
    expect(calls[2]?.url).toBe("http://svc/statements");
  });

  it("serializes request bodies as JSON", async () => {
    const { impl, calls } = stubFetch(() => ({ json: { registered: 1 } }));
    const api = new ApiClient("http://svc", impl);
    await api.registerLabels({ "https://ex.org/e": "thing" });
    expect(calls[0]?.method).toBe("POST");
    expect(calls[0]?.body).toEqual({ labels: { "https://ex.org/e": "thing" } });
  });
});
