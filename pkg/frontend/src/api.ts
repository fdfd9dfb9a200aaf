/** Thin typed client over the server API. Every state change in the app
 * round-trips through one of these calls; nothing touches files directly. */

import type {
  ApiError,
  Catalog,
  ChartResult,
  ConcernInfo,
  OpOutcome,
  OpRecord,
  RangeInfo,
} from "./types.js";
import type { ChartRequest } from "./state.js";

export class ServerError extends Error {
  constructor(public body: ApiError, public status: number) {
    super(`${body.code}: ${body.message}`);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  const body = (await response.json()) as ApiError;
  throw new ServerError(body, response.status);
}

function chartQuery(request: ChartRequest): string {
  const params = new URLSearchParams({
    mode: request.mode,
    dataset: request.dataset,
    attrs: request.attrs.join(","),
  });
  if (request.granularity) params.set("granularity", request.granularity);
  if (request.values) params.set("values", request.values);
  if (request.accumulate) params.set("accumulate", "true");
  return params.toString();
}

export class Api {
  constructor(private base = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(this.url("/api/health"));
      return response.ok;
    } catch {
      return false;
    }
  }

  async catalog(): Promise<Catalog> {
    return parseOrThrow(await fetch(this.url("/api/catalog")));
  }

  async upload(files: { name: string; blob: Blob }[]): Promise<{ catalog: Catalog }> {
    const form = new FormData();
    for (const { name, blob } of files) {
      form.append(name, blob, `${name}.csv`);
    }
    return parseOrThrow(await fetch(this.url("/api/data"), { method: "POST", body: form }));
  }

  async setRange(range: RangeInfo): Promise<{ active_range: RangeInfo }> {
    return parseOrThrow(
      await fetch(this.url("/api/range"), {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(range),
      }),
    );
  }

  async chart(request: ChartRequest): Promise<ChartResult> {
    return parseOrThrow(await fetch(this.url(`/api/chart?${chartQuery(request)}`)));
  }

  exportSvgUrl(request: ChartRequest): string {
    return this.url(`/api/export/svg?${chartQuery(request)}`);
  }

  async postOp(op: {
    kind: string;
    dataset_id: string;
    target_attribute_id: string;
    params: Record<string, unknown>;
  }): Promise<OpOutcome> {
    return parseOrThrow(
      await fetch(this.url("/api/ops"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(op),
      }),
    );
  }

  async ops(): Promise<{ ops: OpRecord[] }> {
    return parseOrThrow(await fetch(this.url("/api/ops")));
  }

  /** cascade=false is the confirmation probe: resolves to the dependent
   * closure the deletion would take along (server answers 409). */
  async deleteProbe(seq: number): Promise<number[]> {
    const response = await fetch(this.url(`/api/ops/${seq}?cascade=false`), { method: "DELETE" });
    if (response.status === 409) {
      const body = (await response.json()) as ApiError;
      return (body.details.dependents as number[]) ?? [];
    }
    const body = (await response.json()) as ApiError;
    throw new ServerError(body, response.status);
  }

  async deleteOp(seq: number): Promise<{ removed: number[] }> {
    return parseOrThrow(
      await fetch(this.url(`/api/ops/${seq}?cascade=true`), { method: "DELETE" }),
    );
  }

  async undo(): Promise<{ removed_seq: number }> {
    return parseOrThrow(await fetch(this.url("/api/undo"), { method: "POST" }));
  }

  async editConcern(
    kind: string,
    params: Record<string, unknown>,
  ): Promise<{ concerns: ConcernInfo[]; active_concern: string }> {
    return parseOrThrow(
      await fetch(this.url("/api/concerns"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ kind, params }),
      }),
    );
  }
}
