/** DOM rendering. All values come straight from view-models; no state here. */

import { formatByteRate, formatClock, formatLatency, formatPercent } from "./format";
import type { FleetCard } from "./fleet";
import type { PlanView } from "./plans";
import type { ChartSeries } from "./scenario";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderBanner(container: HTMLElement, message: string | null): void {
  container.innerHTML = "";
  if (message) {
    container.appendChild(el("div", "banner", message));
  }
}

export function renderFleet(container: HTMLElement, cards: FleetCard[]): void {
  container.innerHTML = "";
  if (cards.length === 0) {
    container.appendChild(el("div", "empty", "no data — waiting for the first snapshot"));
    return;
  }
  for (const card of cards) {
    const box = el("article", "card" + (card.stale ? " stale" : ""));
    box.dataset["apId"] = card.apId;
    const head = el("header");
    head.appendChild(el("h3", undefined, card.name));
    head.appendChild(el("span", "mono", card.apId));
    if (card.stale) {
      const badge = el("span", "badge-stale", "STALE");
      badge.title = card.staleDetail ?? "";
      head.appendChild(badge);
    }
    box.appendChild(head);
    box.appendChild(el("div", "loc", `${card.locationTag} · seen ${formatClock(card.lastSeen)}`));
    for (const band of card.bands) {
      const row = el("div", "band-row");
      row.appendChild(el("span", "band", band.band));
      row.appendChild(el("span", "clients", `${band.clientCount} clients`));
      row.appendChild(el("span", "rate", formatByteRate(band.byteRateBps)));
      const gauge = el("span", "gauge");
      const fill = el("span", "gauge-fill");
      fill.style.width = formatPercent(band.airtime);
      fill.title = `airtime ${formatPercent(band.airtime)}`;
      gauge.appendChild(fill);
      row.appendChild(gauge);
      box.appendChild(row);
    }
    box.appendChild(renderSparkline(card.sparkline));
    container.appendChild(box);
  }
}

function renderSparkline(values: number[]): HTMLElement {
  const svgNs = "http://www.w3.org/2000/svg";
  const width = 240;
  const height = 36;
  const svg = document.createElementNS(svgNs, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "sparkline");
  if (values.length > 1) {
    const max = Math.max(...values, 1);
    const step = width / (values.length - 1);
    const points = values
      .map((v, i) => `${(i * step).toFixed(1)},${(height - (v / max) * (height - 2)).toFixed(1)}`)
      .join(" ");
    const line = document.createElementNS(svgNs, "polyline");
    line.setAttribute("points", points);
    svg.appendChild(line);
  }
  const wrapper = el("div", "spark-wrap");
  wrapper.appendChild(svg);
  return wrapper;
}

export function renderChart(container: HTMLElement, series: ChartSeries[]): void {
  container.innerHTML = "";
  const svgNs = "http://www.w3.org/2000/svg";
  const width = 560;
  const height = 220;
  const pad = 30;
  const svg = document.createElementNS(svgNs, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "chart");
  const all = series.flatMap((s) => s.points.map((p) => p.value));
  const ts = series.flatMap((s) => s.points.map((p) => p.t));
  if (all.length === 0) {
    container.appendChild(el("div", "empty", "no data"));
    return;
  }
  const vMax = Math.max(...all) * 1.1 || 1;
  const tMin = Math.min(...ts);
  const tMax = Math.max(...ts) || 1;
  const x = (t: number) => pad + ((t - tMin) / Math.max(tMax - tMin, 1)) * (width - 2 * pad);
  const y = (v: number) => height - pad - (v / vMax) * (height - 2 * pad);
  series.forEach((s, index) => {
    const line = document.createElementNS(svgNs, "polyline");
    line.setAttribute(
      "points",
      s.points.map((p) => `${x(p.t).toFixed(1)},${y(p.value).toFixed(1)}`).join(" "),
    );
    line.setAttribute("class", `series-${index}`);
    svg.appendChild(line);
  });
  const axis = document.createElementNS(svgNs, "text");
  axis.setAttribute("x", String(pad));
  axis.setAttribute("y", "14");
  axis.textContent = series.map((s) => s.label).join("  ·  ") + `  (max ${vMax.toFixed(1)})`;
  svg.appendChild(axis);
  container.appendChild(svg);
}

export function renderPlan(
  container: HTMLElement,
  view: PlanView,
  actions: { onApprove: () => void; onReject: () => void },
): void {
  container.innerHTML = "";
  const box = el("article", "plan");
  box.dataset["planId"] = view.planId;
  const head = el("header");
  head.appendChild(el("h3", undefined, view.planId));
  head.appendChild(el("span", `state state-${view.state.toLowerCase()}`, view.state));
  box.appendChild(head);
  box.appendChild(el("div", "alert-summary", view.alertSummary));

  const evidence = el("div", "evidence");
  evidence.appendChild(el("span", undefined, `pre ${formatLatency(view.preLatencyMs)}`));
  evidence.appendChild(el("span", undefined, `post ${formatLatency(view.postLatencyMs)}`));
  if (view.improvementMs !== null) {
    evidence.appendChild(el("span", "gain", `−${view.improvementMs.toFixed(2)} ms`));
  }
  box.appendChild(evidence);

  const table = el("table", "moves");
  const headRow = el("tr");
  for (const title of ["client", "action", "from", "target", "rate", "outcome"]) {
    headRow.appendChild(el("th", undefined, title));
  }
  table.appendChild(headRow);
  for (const move of view.moves) {
    const row = el("tr");
    row.appendChild(el("td", "mono", move.clientMac));
    row.appendChild(el("td", undefined, move.action));
    row.appendChild(el("td", undefined, move.from));
    row.appendChild(el("td", undefined, move.target));
    row.appendChild(el("td", undefined, formatByteRate(move.byteRateBps)));
    row.appendChild(el("td", `outcome-${move.outcome}`, move.outcome));
    table.appendChild(row);
  }
  box.appendChild(table);

  const buttons = el("div", "actions");
  const approveBtn = el("button", "approve", "Approve") as HTMLButtonElement;
  approveBtn.disabled = !view.canApprove;
  if (view.approveDisabledReason) approveBtn.title = view.approveDisabledReason;
  approveBtn.addEventListener("click", actions.onApprove);
  const rejectBtn = el("button", "reject", "Reject") as HTMLButtonElement;
  rejectBtn.disabled = view.state !== "SIMULATED";
  rejectBtn.addEventListener("click", actions.onReject);
  buttons.appendChild(approveBtn);
  buttons.appendChild(rejectBtn);
  if (view.approveDisabledReason) {
    buttons.appendChild(el("span", "gate-note", view.approveDisabledReason));
  }
  box.appendChild(buttons);

  const timeline = el("ol", "timeline");
  for (const entry of view.timeline) {
    timeline.appendChild(
      el("li", undefined, `${formatClock(entry.at)} ${entry.from}→${entry.to} by ${entry.actor}` +
        (entry.note ? ` — ${entry.note}` : "")),
    );
  }
  box.appendChild(timeline);
  container.appendChild(box);
}
