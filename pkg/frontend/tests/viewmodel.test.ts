/** View-model tests against recorded fixtures: every number the UI shows must
 * be traceable to an API response, never computed locally. */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { InferResponse, InferSchema, ModelSchema, ModelSummary } from "../src/types.js";
import {
  beforeAfterBars,
  evidenceFromToggles,
  exactAllowed,
  sceneLayout,
  toggleCycle,
  toggleKey,
  togglePairs,
  togglesFromObservations,
} from "../src/viewmodel.js";

function fixture(name: string): unknown {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8"));
}

const model: ModelSummary = ModelSchema.parse(fixture("model.json"));
const prior: InferResponse = InferSchema.parse(fixture("infer_prior_exact.json"));
const posterior: InferResponse = InferSchema.parse(fixture("infer_glass_exact.json"));

describe("before/after bars", () => {
  it("shows the 0.50 prior and 0.97 posterior for the bundled scenario", () => {
    const rows = beforeAfterBars(prior, posterior);
    const attacker = rows.find((r) => r.label === "entity(attacker)");
    expect(attacker).toBeDefined();
    expect(attacker!.beforeText).toBe("0.50");
    expect(attacker!.afterText).toBe("0.97");
    expect(attacker!.before).toBe(prior.posteriors["entity(attacker)"]);
    expect(attacker!.after).toBe(posterior.posteriors["entity(attacker)"]);
  });

  it("only surfaces cause-side nodes and copies values verbatim", () => {
    const rows = beforeAfterBars(prior, posterior);
    expect(new Set(rows.map((r) => r.kind))).toEqual(new Set(["entity", "action"]));
    for (const row of rows) {
      expect(row.before).toBe(prior.posteriors[row.label]);
      expect(row.after).toBe(posterior.posteriors[row.label]);
    }
  });
});

describe("scene layout", () => {
  it("maps the model fixture to the recorded pixel coordinates", async () => {
    const layout = sceneLayout(model);
    await expect(JSON.stringify(layout, null, 2) + "\n").toMatchFileSnapshot(
      "./fixtures/layout_snapshot.json",
    );
  });

  it("flips the y axis and keeps everything inside the canvas", () => {
    const layout = sceneLayout(model);
    const north = model.barriers.find((b) => b.id === "wall-north")!;
    const south = model.barriers.find((b) => b.id === "wall-south")!;
    const wallY = (id: string) => layout.walls.find((w) => w.id === id)!.y1;
    expect(wallY("wall-north")).toBeLessThan(wallY("wall-south"));
    expect(north.segment[0][1]).toBeGreaterThan(south.segment[0][1]);
    for (const s of layout.sensors) {
      expect(s.x).toBeGreaterThanOrEqual(0);
      expect(s.x).toBeLessThanOrEqual(layout.width);
      expect(s.y).toBeGreaterThanOrEqual(0);
      expect(s.y).toBeLessThanOrEqual(layout.height);
    }
  });

  it("survives an empty scene", () => {
    const empty = ModelSchema.parse({
      entities: [], actions: [], signals: [], signal_classes: [],
      sensors: [], rooms: [], barriers: [],
      bn_node_count: 0, enumeration_guard: 25,
    });
    const layout = sceneLayout(empty);
    expect(layout.rooms).toEqual([]);
    expect(layout.width).toBeGreaterThan(0);
  });
});

describe("observation toggles", () => {
  it("cycles unset -> true -> false -> unset", () => {
    expect(toggleCycle("unset")).toBe("true");
    expect(toggleCycle("true")).toBe("false");
    expect(toggleCycle("false")).toBe("unset");
  });

  it("derives one toggle per (sensor, detectable class)", () => {
    expect(togglePairs(model)).toEqual([{ sensor: "mic-1", cls: "glass" }]);
  });

  it("maps set toggles to the evidence payload and drops unset ones", () => {
    const toggles = new Map([
      [toggleKey("mic-1", "glass"), "true" as const],
      [toggleKey("mic-1", "footsteps"), "unset" as const],
    ]);
    expect(evidenceFromToggles(toggles)).toEqual([
      { sensor: "mic-1", class: "glass", result: true },
    ]);
  });

  it("applies simulated observations as toggles losslessly", () => {
    const observations = [
      { sensor: "mic-1", class: "glass", result: false, time: "t" },
    ];
    const toggles = togglesFromObservations(observations);
    expect(evidenceFromToggles(toggles)).toEqual([
      { sensor: "mic-1", class: "glass", result: false },
    ]);
  });
});

describe("exact checkbox gating", () => {
  it("is allowed only within the server's enumeration guard", () => {
    expect(exactAllowed(model)).toBe(true);
    expect(exactAllowed({ ...model, bn_node_count: 26, enumeration_guard: 25 })).toBe(false);
  });
});
