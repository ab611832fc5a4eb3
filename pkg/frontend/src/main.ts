// Wires the controls to the service: text input (debounced), sample
// loading, layer/head selectors (bounds from /api/model), filter toggles,
// and the per-head grid shortcut.

import {
  AnalyzeResponse,
  fetchModelInfo,
  fetchSample,
  postAnalyze,
  ModelInfo,
} from "./api.js";
import { AnalysisRunner, initialState, setSelector, UiState } from "./state.js";
import {
  attachTooltip,
  renderError,
  renderHeadGrid,
  renderHeatmap,
} from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function fillSelector(select: HTMLSelectElement, count: number, label: string) {
  select.innerHTML = `<option value="">${label}</option>`;
  for (let i = 0; i < count; i++) {
    const opt = document.createElement("option");
    opt.value = String(i);
    opt.textContent = String(i);
    select.appendChild(opt);
  }
}

export async function bootstrap(): Promise<void> {
  const textBox = el<HTMLTextAreaElement>("text-input");
  const layerSel = el<HTMLSelectElement>("layer-select");
  const headSel = el<HTMLSelectElement>("head-select");
  const special = el<HTMLInputElement>("filter-special");
  const punct = el<HTMLInputElement>("filter-punct");
  const stop = el<HTMLInputElement>("filter-stopwords");
  const showFiltered = el<HTMLInputElement>("show-filtered");
  const heatmap = el<HTMLDivElement>("heatmap");
  const grid = el<HTMLDivElement>("head-grid");
  const banner = el<HTMLDivElement>("error-banner");
  const tooltip = el<HTMLDivElement>("tooltip");
  const modelLabel = el<HTMLSpanElement>("model-label");

  let state: UiState = initialState();
  special.checked = state.filters.special;

  const info: ModelInfo = await fetchModelInfo();
  modelLabel.textContent = `${info.model_id} (${info.layers} layers x ${info.heads} heads)`;
  fillSelector(layerSel, info.layers, "all layers");
  fillSelector(headSel, info.heads, "all heads");
  headSel.disabled = true; // head needs a layer first

  const runner = new AnalysisRunner((next) => {
    state = next;
    renderError(banner, state.error);
    if (state.report) {
      grid.style.display = "none";
      heatmap.style.display = "block";
      renderHeatmap(heatmap, state.report, showFiltered.checked);
    }
  });

  attachTooltip(heatmap, tooltip);
  attachTooltip(grid, tooltip);

  textBox.addEventListener("input", () => {
    state = { ...state, text: textBox.value };
    runner.runDebounced(state);
  });

  el<HTMLButtonElement>("load-sample").addEventListener("click", async () => {
    try {
      const sample = await fetchSample();
      textBox.value = sample;
      state = { ...state, text: sample };
      void runner.run(state);
    } catch (err) {
      renderError(banner, String((err as Error).message));
    }
  });

  const selectorChanged = () => {
    const layer = layerSel.value === "" ? null : Number(layerSel.value);
    const head = headSel.value === "" ? null : Number(headSel.value);
    state = setSelector({ ...state }, layer, head);
    headSel.disabled = layer === null;
    if (layer === null) headSel.value = "";
    void runner.run(state);
  };
  layerSel.addEventListener("change", selectorChanged);
  headSel.addEventListener("change", selectorChanged);

  for (const [box, key] of [
    [special, "special"],
    [punct, "punctuation"],
    [stop, "stopwords"],
  ] as const) {
    box.addEventListener("change", () => {
      state = { ...state, filters: { ...state.filters, [key]: box.checked } };
      void runner.run(state);
    });
  }

  showFiltered.addEventListener("change", () => {
    if (state.report) renderHeatmap(heatmap, state.report, showFiltered.checked);
  });

  el<HTMLButtonElement>("head-grid-btn").addEventListener("click", async () => {
    const layer = layerSel.value === "" ? 0 : Number(layerSel.value);
    try {
      const reports = await gridRequests(state, layer, info.heads);
      heatmap.style.display = "none";
      grid.style.display = "grid";
      renderHeadGrid(grid, reports, layer);
      renderError(banner, null);
    } catch (err) {
      renderError(banner, String((err as Error).message));
    }
  });
}

/** One analyze request per head of the layer, preserving current filters. */
export function gridRequests(
  state: UiState,
  layer: number,
  heads: number,
  base = "",
): Promise<AnalyzeResponse[]> {
  const calls = [];
  for (let head = 0; head < heads; head++) {
    calls.push(
      postAnalyze(
        { text: state.text, layer, head, filters: { ...state.filters } },
        base,
      ),
    );
  }
  return Promise.all(calls);
}

if (typeof document !== "undefined" && document.getElementById("heatmap")) {
  void bootstrap();
}
