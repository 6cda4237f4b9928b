/** DOM wiring for the scenario explorer.
 *
 * Left: floor plan and observation toggles. Right: prior-vs-posterior bars
 * and the what-if simulator. The evidence panel always shows exactly the
 * evidence most recently sent to /api/infer.
 */

import { ApiClient, ApiError } from "./api.js";
import { InferRequest, InferResponse, ModelSummary, Observation } from "./types.js";
import {
  BarRow,
  SceneLayout,
  ToggleState,
  beforeAfterBars,
  evidenceFromToggles,
  exactAllowed,
  sceneLayout,
  toggleCycle,
  toggleKey,
  togglePairs,
  togglesFromObservations,
} from "./viewmodel.js";

const api = new ApiClient("");

interface UiState {
  model: ModelSummary | null;
  toggles: Map<string, ToggleState>;
  prior: InferResponse | null;
  posterior: InferResponse | null;
  lastSent: Observation[];
  lastSimulated: Observation[] | null;
}

const state: UiState = {
  model: null,
  toggles: new Map(),
  prior: null,
  posterior: null,
  lastSent: [],
  lastSimulated: null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const SVG_NS = "http://www.w3.org/2000/svg";

// --- floor plan -------------------------------------------------------------

function renderPlan(layout: SceneLayout): void {
  const svg = el<HTMLElement>("plan");
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  svg.replaceChildren();
  for (const room of layout.rooms) {
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(room.x));
    rect.setAttribute("y", String(room.y));
    rect.setAttribute("width", String(room.width));
    rect.setAttribute("height", String(room.height));
    rect.setAttribute("class", "room");
    svg.appendChild(rect);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(room.cx));
    text.setAttribute("y", String(room.cy));
    text.setAttribute("class", "room-label");
    text.textContent = room.label;
    svg.appendChild(text);
  }
  for (const wall of layout.walls) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(wall.x1));
    line.setAttribute("y1", String(wall.y1));
    line.setAttribute("x2", String(wall.x2));
    line.setAttribute("y2", String(wall.y2));
    line.setAttribute("class", "wall");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${wall.id}: ${wall.attenuationDb} dB`;
    line.appendChild(title);
    svg.appendChild(line);
  }
  for (const sensor of layout.sensors) {
    const mark = document.createElementNS(SVG_NS, "circle");
    mark.setAttribute("cx", String(sensor.x));
    mark.setAttribute("cy", String(sensor.y));
    mark.setAttribute("r", "7");
    mark.setAttribute("class", "sensor");
    svg.appendChild(mark);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(sensor.x + 10));
    text.setAttribute("y", String(sensor.y + 4));
    text.setAttribute("class", "sensor-label");
    text.textContent = sensor.label;
    svg.appendChild(text);
  }
}

// --- observation toggles ------------------------------------------------------

function renderToggles(model: ModelSummary): void {
  const host = el<HTMLDivElement>("toggles");
  host.replaceChildren();
  for (const { sensor, cls } of togglePairs(model)) {
    const key = toggleKey(sensor, cls);
    const current = state.toggles.get(key) ?? "unset";
    const button = document.createElement("button");
    button.className = `toggle toggle-${current}`;
    button.dataset.key = key;
    button.textContent = `${sensor} heard ${cls}: ${
      current === "unset" ? "no observation" : current
    }`;
    button.addEventListener("click", () => {
      state.toggles.set(key, toggleCycle(state.toggles.get(key) ?? "unset"));
      renderToggles(model);
      void runInference();
    });
    host.appendChild(button);
  }
  const clear = document.createElement("button");
  clear.className = "toggle toggle-clear";
  clear.textContent = "clear all observations";
  clear.addEventListener("click", () => {
    state.toggles.clear();
    renderToggles(model);
    void runInference();
  });
  host.appendChild(clear);
}

// --- sampler settings ---------------------------------------------------------

interface Settings {
  samples: number;
  seed: number;
  exact: boolean;
}

function readSettings(): Settings {
  return {
    samples: Number(el<HTMLInputElement>("samples").value) || 20000,
    seed: Number(el<HTMLInputElement>("seed").value) || 0,
    exact: el<HTMLInputElement>("exact").checked,
  };
}

function requestFor(observations: Observation[], settings: Settings): InferRequest {
  return settings.exact
    ? { observations, exact: true }
    : { observations, samples: settings.samples, seed: settings.seed };
}

// --- posterior bars --------------------------------------------------------------

function renderBars(rows: BarRow[]): void {
  const host = el<HTMLDivElement>("bars");
  host.replaceChildren();
  for (const row of rows) {
    const div = document.createElement("div");
    div.className = "bar-row";
    div.innerHTML = `
      <div class="bar-label" title="${row.label}">${row.label}</div>
      <div class="bar-pair">
        <div class="bar-track"><div class="bar-fill before" style="width:${row.before * 100}%"></div></div>
        <div class="bar-track"><div class="bar-fill after" style="width:${row.after * 100}%"></div></div>
      </div>
      <div class="bar-nums">${row.beforeText} &rarr; ${row.afterText}</div>`;
    host.appendChild(div);
  }
}

function renderEvidence(): void {
  const host = el<HTMLUListElement>("evidence");
  host.replaceChildren();
  if (!state.lastSent.length) {
    const li = document.createElement("li");
    li.textContent = "(none — showing priors)";
    host.appendChild(li);
  }
  for (const o of state.lastSent) {
    const li = document.createElement("li");
    li.textContent = `${o.sensor} / ${o.class} = ${o.result}`;
    host.appendChild(li);
  }
}

function renderDiagnostics(): void {
  const target = el<HTMLDivElement>("sampler-info");
  const p = state.posterior;
  if (!p) {
    target.textContent = "";
    return;
  }
  target.textContent =
    p.method === "exact"
      ? "exact enumeration"
      : `likelihood weighting, ${p.n_samples} samples, seed ${p.seed}, ` +
        `ESS ${p.effective_sample_size?.toFixed(0) ?? "?"}`;
}

// --- inference flow ---------------------------------------------------------------

function showError(message: string | null): void {
  const banner = el<HTMLDivElement>("error-banner");
  if (message === null) {
    banner.hidden = true;
    return;
  }
  el<HTMLSpanElement>("error-text").textContent = message;
  banner.hidden = false;
}

async function runInference(): Promise<void> {
  const settings = readSettings();
  const observations = evidenceFromToggles(state.toggles);
  try {
    // prior run (empty evidence) feeds the "before" bars
    const prior = state.prior ?? (await api.infer(requestFor([], settings)));
    if (prior === null) return;
    state.prior = prior;
    const posterior = observations.length
      ? await api.infer(requestFor(observations, settings))
      : prior;
    if (posterior === null) return; // superseded by a newer request
    state.posterior = posterior;
    state.lastSent = observations;
    showError(null);
    renderBars(beforeAfterBars(prior, posterior));
    renderEvidence();
    renderDiagnostics();
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      showError(`impossible evidence: ${err.message}`);
    } else {
      showError(err instanceof Error ? err.message : String(err));
    }
  }
}

// --- simulator ------------------------------------------------------------------

function renderSimulated(observations: Observation[], scenario: Record<string, boolean>): void {
  const host = el<HTMLDivElement>("sim-result");
  const truth = Object.entries(scenario)
    .filter(([, v]) => v)
    .map(([k]) => k);
  const lines = observations.map((o) => `${o.sensor} / ${o.class} = ${o.result}`);
  host.innerHTML =
    `<div class="sim-truth">ground truth: ${truth.join(", ") || "nothing happened"}</div>` +
    `<div class="sim-obs">observations: ${lines.join("; ") || "(none)"}</div>`;
  el<HTMLButtonElement>("apply-observations").disabled = false;
}

async function runSimulation(): Promise<void> {
  const model = state.model;
  if (!model) return;
  const seed = Number(el<HTMLInputElement>("sim-seed").value) || 0;
  const force: Record<string, boolean> = {};
  for (const entity of model.entities) {
    const select = el<HTMLSelectElement>(`force-${entity.id}`);
    if (select.value !== "free") force[`entity(${entity.id})`] = select.value === "present";
  }
  try {
    const result = await api.simulate({ seed, force });
    state.lastSimulated = result.observations;
    renderSimulated(result.observations, result.scenario);
    showError(null);
  } catch (err) {
    showError(err instanceof Error ? err.message : String(err));
  }
}

function renderForceControls(model: ModelSummary): void {
  const host = el<HTMLDivElement>("force-controls");
  host.replaceChildren();
  for (const entity of model.entities) {
    const label = document.createElement("label");
    label.textContent = `${entity.label} `;
    const select = document.createElement("select");
    select.id = `force-${entity.id}`;
    for (const option of ["free", "present", "absent"]) {
      const o = document.createElement("option");
      o.value = option;
      o.textContent = option;
      select.appendChild(o);
    }
    label.appendChild(select);
    host.appendChild(label);
  }
}

// --- boot -----------------------------------------------------------------------

async function loadScene(): Promise<void> {
  showError(null);
  try {
    const model = await api.getModel();
    state.model = model;
    state.prior = null;
    renderPlan(sceneLayout(model));
    renderToggles(model);
    renderForceControls(model);
    const exact = el<HTMLInputElement>("exact");
    exact.disabled = !exactAllowed(model);
    exact.checked = exactAllowed(model);
    el<HTMLSpanElement>("node-count").textContent =
      `${model.bn_node_count} nodes (enumeration guard ${model.enumeration_guard})`;
    await runInference();
  } catch (err) {
    showError(
      `cannot reach the signalkg service: ${err instanceof Error ? err.message : err}`,
    );
  }
}

export function boot(): void {
  el<HTMLButtonElement>("retry").addEventListener("click", () => void loadScene());
  el<HTMLButtonElement>("simulate").addEventListener("click", () => void runSimulation());
  el<HTMLButtonElement>("apply-observations").addEventListener("click", () => {
    if (!state.lastSimulated || !state.model) return;
    state.toggles = togglesFromObservations(state.lastSimulated);
    renderToggles(state.model);
    void runInference();
  });
  for (const id of ["samples", "seed", "exact"]) {
    el<HTMLInputElement>(id).addEventListener("change", () => {
      state.prior = null; // sampler settings change both runs
      void runInference();
    });
  }
  void loadScene();
}

boot();
