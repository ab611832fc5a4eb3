// UI state and request sequencing: at most one analyze request is live;
// a newer request supersedes an older in-flight one (last-write-wins).

import { AnalyzeRequest, AnalyzeResponse, postAnalyze } from "./api.js";

export interface Filters {
  special: boolean;
  punctuation: boolean;
  stopwords: boolean;
}

export interface UiState {
  text: string;
  layer: number | null;
  head: number | null;
  filters: Filters;
  report: AnalyzeResponse | null;
  pending: boolean;
  error: string | null;
}

export function initialState(): UiState {
  return {
    text: "",
    layer: null,
    head: null,
    filters: { special: true, punctuation: false, stopwords: false },
    report: null,
    pending: false,
    error: null,
  };
}

export function toRequest(state: UiState): AnalyzeRequest {
  return {
    text: state.text,
    layer: state.layer,
    head: state.head,
    filters: { ...state.filters },
  };
}

/** Clearing the layer always clears the head with it. */
export function setSelector(
  state: UiState,
  layer: number | null,
  head: number | null,
): UiState {
  return { ...state, layer, head: layer === null ? null : head };
}

export class AnalysisRunner {
  private seq = 0;
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private onUpdate: (state: UiState) => void,
    private base = "",
    private debounceMs = 400,
  ) {}

  /** Immediate run: control toggles and selector changes. */
  async run(state: UiState): Promise<UiState> {
    const ticket = ++this.seq;
    this.onUpdate({ ...state, pending: true });
    let next: UiState;
    try {
      const report = await postAnalyze(toRequest(state), this.base);
      next = { ...state, report, pending: false, error: null };
    } catch (err) {
      // keep the previous heatmap on failure
      next = { ...state, pending: false, error: String((err as Error).message) };
    }
    if (ticket !== this.seq) {
      return state; // superseded by a newer request
    }
    this.onUpdate(next);
    return next;
  }

  /** Debounced run: free-text edits. */
  runDebounced(state: UiState): void {
    if (this.debounceTimer !== null) {
      clearTimeout(this.debounceTimer);
    }
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      void this.run(state);
    }, this.debounceMs);
  }
}
