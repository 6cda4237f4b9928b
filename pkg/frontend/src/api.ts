/** Typed client for the signalkg HTTP API.
 *
 * All probability math happens on the server; this client only transports
 * and validates responses. At most one inference request is in flight: a
 * newer request aborts the older one, whose caller receives null.
 */

import {
  InferRequest,
  InferResponse,
  InferSchema,
  ModelSchema,
  ModelSummary,
  SimulateRequest,
  SimulateResponse,
  SimulateSchema,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly code: string,
  ) {
    super(message);
  }
}

async function readError(resp: Response): Promise<ApiError> {
  let code = "error";
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (body && typeof body === "object") {
      code = typeof body.error === "string" ? body.error : code;
      message = typeof body.message === "string" ? body.message : message;
    }
  } catch {
    // non-JSON error body: keep the status line
  }
  return new ApiError(message, resp.status, code);
}

export class ApiClient {
  private inferController: AbortController | null = null;

  constructor(readonly baseUrl: string = "") {}

  async getModel(): Promise<ModelSummary> {
    const resp = await fetch(`${this.baseUrl}/api/model`);
    if (!resp.ok) throw await readError(resp);
    return ModelSchema.parse(await resp.json());
  }

  /** Resolves null when superseded by a newer inference request. */
  async infer(request: InferRequest): Promise<InferResponse | null> {
    this.inferController?.abort();
    const controller = new AbortController();
    this.inferController = controller;
    let resp: Response;
    try {
      resp = await fetch(`${this.baseUrl}/api/infer`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      });
    } catch (err) {
      if (controller.signal.aborted) return null;
      throw err;
    }
    if (controller.signal.aborted) return null;
    if (!resp.ok) throw await readError(resp);
    return InferSchema.parse(await resp.json());
  }

  async simulate(request: SimulateRequest): Promise<SimulateResponse> {
    const resp = await fetch(`${this.baseUrl}/api/simulate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!resp.ok) throw await readError(resp);
    return SimulateSchema.parse(await resp.json());
  }
}
