// DOM rendering: word spans with red backgrounds whose alpha equals the
// normalized score, hover tooltips, and the per-head mini-heatmap grid.

import { AnalyzeResponse, WordEntry } from "./api.js";

/** Same color rule as the static HTML renderer: red, alpha = norm score. */
export function wordBackground(norm: number | null): string {
  const alpha = norm === null ? 0 : Math.min(Math.max(norm, 0), 1);
  return `rgba(255, 0, 0, ${alpha})`;
}

export function tooltipText(entry: WordEntry): string {
  if (entry.filtered) {
    return "filtered";
  }
  const norm = entry.norm === null ? "-" : entry.norm.toFixed(4);
  return `${entry.text}\nnorm ${norm}\nraw ${entry.raw.toFixed(4)}\ntokens ${entry.token_count}`;
}

export function renderHeatmap(
  container: HTMLElement,
  report: AnalyzeResponse,
  showFiltered = true,
): void {
  container.textContent = "";
  for (const entry of report.words) {
    if (entry.filtered && !showFiltered) continue;
    const span = document.createElement("span");
    span.className = entry.filtered ? "word filtered" : "word";
    if (entry.special) span.classList.add("special");
    span.textContent = entry.text;
    if (!entry.filtered) {
      span.style.backgroundColor = wordBackground(entry.norm);
    }
    span.dataset.tooltip = tooltipText(entry);
    container.appendChild(span);
    container.appendChild(document.createTextNode(" "));
  }
}

export function attachTooltip(container: HTMLElement, tip: HTMLElement): void {
  container.addEventListener("mouseover", (ev) => {
    const target = ev.target as HTMLElement;
    if (target.dataset && target.dataset.tooltip) {
      tip.textContent = target.dataset.tooltip;
      tip.style.display = "block";
    }
  });
  container.addEventListener("mousemove", (ev) => {
    tip.style.left = `${(ev as MouseEvent).pageX + 12}px`;
    tip.style.top = `${(ev as MouseEvent).pageY + 12}px`;
  });
  container.addEventListener("mouseout", () => {
    tip.style.display = "none";
  });
}

export function renderHeadGrid(
  container: HTMLElement,
  reports: AnalyzeResponse[],
  layer: number,
): void {
  container.textContent = "";
  reports.forEach((report, head) => {
    const cell = document.createElement("div");
    cell.className = "head-cell";
    const label = document.createElement("h3");
    label.textContent = `layer ${layer}, head ${head}`;
    cell.appendChild(label);
    const body = document.createElement("div");
    body.className = "mini-heatmap";
    renderHeatmap(body, report);
    cell.appendChild(body);
    container.appendChild(cell);
  });
}

export function renderError(banner: HTMLElement, message: string | null): void {
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}
