/** Contract tests: replay recorded fixtures against the live service.
 *
 * Each test asserts both schema validity (zod) and value equality with the
 * recorded response, so any drift in the API or in the bundled scene fails
 * here before it can confuse the UI.
 */

import { readFileSync } from "node:fs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { InferSchema, ModelSchema, SimulateSchema } from "../src/types.js";
import { LiveServer, startServer } from "./helpers/server.js";

function fixture(name: string): unknown {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8"));
}

const GLASS = { observations: [{ sensor: "mic-1", class: "glass", result: true }] };

let server: LiveServer;
let api: ApiClient;

beforeAll(async () => {
  server = await startServer();
  api = new ApiClient(server.baseUrl);
}, 45_000);

afterAll(() => {
  server?.stop();
});

describe("GET /api/model", () => {
  it("matches the recorded scene summary", async () => {
    const live = await api.getModel();
    expect(ModelSchema.parse(live)).toEqual(fixture("model.json"));
  });
});

describe("POST /api/infer", () => {
  it("returns the recorded priors for empty evidence (exact)", async () => {
    const live = await api.infer({ observations: [], exact: true });
    expect(live).not.toBeNull();
    expect(InferSchema.parse(live)).toEqual(fixture("infer_prior_exact.json"));
    expect(live!.posteriors["entity(attacker)"]).toBe(0.5);
  });

  it("reproduces the recorded glass-detection posterior (exact)", async () => {
    const live = await api.infer({ ...GLASS, exact: true });
    expect(InferSchema.parse(live)).toEqual(fixture("infer_glass_exact.json"));
    expect(live!.posteriors["entity(attacker)"]).toBeCloseTo(0.97, 2);
  });

  it("is bit-stable for the recorded sampler run (seed 42)", async () => {
    const live = await api.infer({ ...GLASS, samples: 20000, seed: 42 });
    expect(InferSchema.parse(live)).toEqual(fixture("infer_glass_lw_seed42.json"));
  });

  it("replays identically when evidence is toggled away and back", async () => {
    const first = await api.infer({ ...GLASS, samples: 5000, seed: 9 });
    const unset = await api.infer({ observations: [], samples: 5000, seed: 9 });
    const again = await api.infer({ ...GLASS, samples: 5000, seed: 9 });
    expect(unset).not.toBeNull();
    expect(again).toEqual(first);
  });

  it("rejects impossible and malformed requests with distinct statuses", async () => {
    const conflicting = {
      observations: [
        { sensor: "mic-1", class: "glass", result: true },
        { sensor: "mic-1", class: "glass", result: false },
      ],
    };
    await expect(api.infer(conflicting)).rejects.toMatchObject({
      status: 422,
      code: "conflicting-evidence",
    });
    await expect(
      api.infer({ observations: "nope" } as never),
    ).rejects.toMatchObject({ status: 400 });
  });
});

describe("POST /api/simulate", () => {
  it("matches the recorded forced scenario for seed 4", async () => {
    const live = await api.simulate({ seed: 4, force: { "entity(attacker)": true } });
    expect(SimulateSchema.parse(live)).toEqual(fixture("simulate_seed4_forced.json"));
    expect(live.scenario["entity(attacker)"]).toBe(true);
  });

  it("produces observations that round-trip as evidence", async () => {
    const sim = await api.simulate({ seed: 11 });
    const posterior = await api.infer({ observations: sim.observations, exact: true });
    expect(posterior).not.toBeNull();
    for (const obs of sim.observations) {
      expect(posterior!.posteriors[`detected(${obs.sensor}, ${obs.class})`]).toBe(
        obs.result ? 1.0 : 0.0,
      );
    }
  });

  it("rejects unknown forced nodes", async () => {
    await expect(
      api.simulate({ seed: 0, force: { "entity(ghost)": true } }),
    ).rejects.toMatchObject({ status: 422 });
  });
});

describe("client-side error typing", () => {
  it("wraps HTTP errors in ApiError", async () => {
    try {
      await api.simulate({ seed: 0, force: { "entity(ghost)": true } });
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
    }
  });
});
