// DOM wiring for the explorer page: view switching, pan/zoom, node
// selection with neighbor highlighting, the emerging-cutoff slider, and
// the curation form driving the thesaurus round trip.

import { ApiClient } from "./api.js";
import { curate, CurationError } from "./curate.js";
import { exportSessionThesaurus } from "./state.js";
import { hitTestNode, render, type Canvas2D } from "./render.js";
import {
  initialViewState,
  type CurationAction,
  type DensityDocument,
  type MapDocument,
  type ViewMode,
  type ViewState,
} from "./types.js";

const api = new ApiClient("");
const state: ViewState = initialViewState();
let map: MapDocument | null = null;
let density: DensityDocument | null = null;
let neighborIds: Set<number> | null = null;

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const canvas = element<HTMLCanvasElement>("map-canvas");
const status = element<HTMLElement>("status-bar");
const detail = element<HTMLElement>("detail-panel");
const errorBox = element<HTMLElement>("error-box");

function viewport() {
  return { width: canvas.width, height: canvas.height };
}

function redraw(): void {
  if (!map) return;
  const ctx = canvas.getContext("2d") as unknown as Canvas2D;
  render(ctx, viewport(), map, state, { density, neighborIds });
}

function setStatus(): void {
  if (!map) return;
  const config = map.config;
  status.textContent =
    `${config.record_count} records - ${map.nodes.length} items - ` +
    `${map.edges.length} links - ${state.sessionLog.length} edits this session`;
}

function showError(message: string | null): void {
  errorBox.textContent = message ?? "";
  errorBox.style.display = message ? "block" : "none";
}

async function loadAll(): Promise<void> {
  map = await api.getMap();
  density = null;
  neighborIds = null;
  state.selectedId = null;
  setStatus();
  redraw();
}

async function switchMode(mode: ViewMode): Promise<void> {
  state.mode = mode;
  if (mode === "density" && density === null) {
    try {
      density = await api.getDensity();
    } catch (error) {
      showError(`density unavailable: ${String(error)}`);
    }
  }
  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-mode]")) {
    button.classList.toggle("active", button.dataset.mode === mode);
  }
  redraw();
}

async function selectNode(nodeId: number | null): Promise<void> {
  state.selectedId = nodeId;
  neighborIds = null;
  if (nodeId !== null && map) {
    try {
      const payload = await api.getNeighbors(nodeId);
      neighborIds = new Set(payload.neighbors.map((n) => n.id));
      const lines = payload.neighbors
        .slice(0, 15)
        .map((n) => `${n.label} (${n.strength})`);
      detail.textContent = `${payload.label}\nstrongest connections:\n` + lines.join("\n");
    } catch (error) {
      detail.textContent = String(error);
    }
  } else {
    detail.textContent = "";
  }
  redraw();
}

canvas.addEventListener("click", (event) => {
  if (!map) return;
  const rect = canvas.getBoundingClientRect();
  const node = hitTestNode(
    map, viewport(), state.transform,
    event.clientX - rect.left, event.clientY - rect.top,
  );
  void selectNode(node ? node.id : null);
});

canvas.addEventListener("wheel", (event) => {
  event.preventDefault();
  const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
  state.transform.scale = Math.min(Math.max(state.transform.scale * factor, 0.2), 40);
  redraw();
});

let dragging: { x: number; y: number } | null = null;
canvas.addEventListener("mousedown", (event) => {
  dragging = { x: event.clientX, y: event.clientY };
});
window.addEventListener("mouseup", () => {
  dragging = null;
});
window.addEventListener("mousemove", (event) => {
  if (!dragging) return;
  state.transform.tx += event.clientX - dragging.x;
  state.transform.ty += event.clientY - dragging.y;
  dragging = { x: event.clientX, y: event.clientY };
  redraw();
});

for (const button of document.querySelectorAll<HTMLButtonElement>("[data-mode]")) {
  button.addEventListener("click", () => void switchMode(button.dataset.mode as ViewMode));
}

const cutoffSlider = element<HTMLInputElement>("cutoff-slider");
const cutoffLabel = element<HTMLElement>("cutoff-label");
cutoffSlider.addEventListener("input", () => {
  state.cutoff = Number(cutoffSlider.value);
  cutoffLabel.textContent = state.cutoff.toFixed(2);
  redraw();
});

const form = element<HTMLFormElement>("curation-form");
form.addEventListener("submit", (event) => {
  event.preventDefault();
  const kind = element<HTMLSelectElement>("edit-kind").value;
  const label = element<HTMLInputElement>("edit-label").value;
  const target = element<HTMLInputElement>("edit-target").value;
  const action: CurationAction =
    kind === "merge"
      ? { kind: "merge", label, target }
      : kind === "remove_term"
        ? { kind: "remove_term", label }
        : { kind: "remove_term_and_studies", label };
  showError(null);
  void (async () => {
    try {
      map = await curate(api, action, state, map);
      neighborIds = null;
      state.selectedId = null;
      density = null;
      setStatus();
      redraw();
    } catch (error) {
      if (error instanceof CurationError) showError(error.message);
      else showError(String(error));
    }
  })();
});

element<HTMLButtonElement>("export-session").addEventListener("click", () => {
  const blob = new Blob([exportSessionThesaurus(state.sessionLog)],
                        { type: "text/tab-separated-values" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "session-thesaurus.tsv";
  link.click();
  URL.revokeObjectURL(link.href);
});

void (async () => {
  try {
    await loadAll();
    await switchMode("network");
  } catch (error) {
    showError(`failed to load map: ${String(error)}`);
  }
})();
