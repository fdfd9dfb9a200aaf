import { afterEach, describe, expect, it, vi } from "vitest";

import { Api, ServerError } from "../src/api.js";

function mockFetch(status: number, body: unknown): ReturnType<typeof vi.fn> {
  const mock = vi.fn(async () =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    }),
  );
  vi.stubGlobal("fetch", mock);
  return mock;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("api client request shapes", () => {
  it("chart builds the documented query string, attrs joined in order", async () => {
    const mock = mockFetch(200, { attribute_id: "a", levels: [], total: 0 });
    await new Api().chart({
      mode: "partition",
      dataset: "Enc",
      attrs: ["Enc.Age"],
      granularity: "week",
      values: "percentage",
    });
    const url = mock.mock.calls[0][0] as string;
    expect(url).toBe("/api/chart?mode=partition&dataset=Enc&attrs=Enc.Age&granularity=week&values=percentage");
  });

  it("flow keeps selection order in attrs", async () => {
    const mock = mockFetch(200, { stages: [], nodes: [], links: [] });
    await new Api().chart({ mode: "flow", dataset: "Enc", attrs: ["Enc.B", "Enc.A"] });
    expect(mock.mock.calls[0][0]).toContain("attrs=Enc.B%2CEnc.A");
  });

  it("ops are posted without a seq (the server assigns it)", async () => {
    const mock = mockFetch(200, { seq: 1, kind: "FilterOut", mode: "MakeNew", created_attribute_ids: [], created_concern_name: null });
    await new Api().postOp({
      kind: "FilterOut",
      dataset_id: "Enc",
      target_attribute_id: "Enc.Gender",
      params: { levels: ["NULL"] },
    });
    const [url, init] = mock.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("/api/ops");
    const body = JSON.parse(init.body as string);
    expect(body).not.toHaveProperty("seq");
    expect(body.params.levels).toEqual(["NULL"]);
  });

  it("range uses PUT with ISO dates", async () => {
    const mock = mockFetch(200, { active_range: { start: "2021-01-01", end: "2021-01-05" } });
    await new Api().setRange({ start: "2021-01-01", end: "2021-01-05" });
    const [url, init] = mock.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("/api/range");
    expect(init.method).toBe("PUT");
  });

  it("delete probe returns the closure from the 409 body", async () => {
    const mock = mockFetch(409, {
      code: "DependencyViolation",
      message: "x",
      details: { seq: 1, dependents: [2, 3] },
    });
    const closure = await new Api().deleteProbe(1);
    expect(closure).toEqual([2, 3]);
    expect(mock.mock.calls[0][0]).toBe("/api/ops/1?cascade=false");
  });

  it("cascade delete goes to cascade=true", async () => {
    const mock = mockFetch(200, { removed: [1, 2] });
    const outcome = await new Api().deleteOp(1);
    expect(outcome.removed).toEqual([1, 2]);
    expect(mock.mock.calls[0][0]).toBe("/api/ops/1?cascade=true");
  });

  it("error bodies surface as ServerError with the server's code", async () => {
    mockFetch(422, { code: "UnknownLevel", message: "nope", details: {} });
    await expect(
      new Api().postOp({ kind: "FilterOut", dataset_id: "E", target_attribute_id: "E.G", params: {} }),
    ).rejects.toThrowError(ServerError);
  });

  it("export URL carries the same params as the chart query", () => {
    const url = new Api().exportSvgUrl({ mode: "rollup", dataset: "Enc", attrs: ["Enc.Gender"] });
    expect(url).toBe("/api/export/svg?mode=rollup&dataset=Enc&attrs=Enc.Gender");
  });
});
