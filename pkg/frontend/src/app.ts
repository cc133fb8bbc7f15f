/** DOM shell. Wires the pure modules (state, fragments, chart, tuner)
 * to the controls and SVG panels in index.html. All logic that can run
 * without a document lives in those modules; this file only reads
 * widgets, writes attributes, and forwards events.
 */

import { PresetInfo, TuneRequestBody, TuneResponse, errorText } from "./api.js";
import {
  autoTuneTmax,
  clickToSpikeBin,
  histogramBars,
  linearScale,
  logScale,
  logTicks,
  stepCurvePath,
  Scale,
} from "./chart.js";
import {
  ControlState,
  POLICIES,
  Policy,
  applyPreset,
  buildRequestBody,
  enabledGroups,
  initialState,
  isHd,
  setBins,
  setEps,
  setGParams,
  setHd,
  setK,
  setLogX,
  setPIrm,
  setPolicy,
  setSeed,
  toggleSpike,
} from "./state.js";
import { GFamily } from "./fragments.js";
import { exportProfileText, importProfileText } from "./profileText.js";
import { TunerLoop } from "./tuner.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function svgEl(tag: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function clearSvg(svg: SVGSVGElement): { width: number; height: number } {
  while (svg.firstChild) {
    svg.removeChild(svg.firstChild);
  }
  const width = svg.viewBox.baseVal.width || svg.clientWidth || 400;
  const height = svg.viewBox.baseVal.height || svg.clientHeight || 200;
  return { width, height };
}

const PAD = { left: 42, right: 10, top: 10, bottom: 24 };

interface PanelGeometry {
  sx: Scale;
  r0: number;
  r1: number;
  d0: number;
  d1: number;
  plotH: number;
}

let state: ControlState = initialState();
let lastResponse: TuneResponse | null = null;
let presets: PresetInfo[] = [];
let dependentGeom: PanelGeometry | null = null;

const baseUrlInput = byId<HTMLInputElement>("base-url");
const presetSelect = byId<HTMLSelectElement>("preset");
const pIrmRange = byId<HTMLInputElement>("p-irm");
const pIrmLabel = byId<HTMLSpanElement>("p-irm-value");
const gGroup = byId<HTMLFieldSetElement>("g-group");
const gFamily = byId<HTMLSelectElement>("g-family");
const gAlpha = byId<HTMLInputElement>("g-alpha");
const gXm = byId<HTMLInputElement>("g-xm");
const gMu = byId<HTMLInputElement>("g-mu");
const gSigma = byId<HTMLInputElement>("g-sigma");
const fGroup = byId<HTMLFieldSetElement>("f-group");
const fK = byId<HTMLInputElement>("f-k");
const fEps = byId<HTMLInputElement>("f-eps");
const spikeStrip = byId<HTMLDivElement>("spike-strip");
const hdToggle = byId<HTMLInputElement>("hd-toggle");
const hdWarning = byId<HTMLSpanElement>("hd-warning");
const scaleLabel = byId<HTMLSpanElement>("scale-label");
const seedInput = byId<HTMLInputElement>("seed");
const policySelect = byId<HTMLSelectElement>("policy");
const binsInput = byId<HTMLInputElement>("bins");
const logToggle = byId<HTMLInputElement>("log-toggle");
const exportButton = byId<HTMLButtonElement>("export-profile");
const importInput = byId<HTMLInputElement>("import-profile");
const refreshButton = byId<HTMLButtonElement>("refresh");
const banner = byId<HTMLDivElement>("error-banner");
const busyDot = byId<HTMLSpanElement>("busy");
const statsLine = byId<HTMLDivElement>("stats");
const hrcSvg = byId<HTMLElement>("hrc-chart") as unknown as SVGSVGElement;
const panelSvgs = {
  dependent: byId<HTMLElement>("ird-dependent") as unknown as SVGSVGElement,
  independent: byId<HTMLElement>("ird-independent") as unknown as SVGSVGElement,
  merged: byId<HTMLElement>("ird-merged") as unknown as SVGSVGElement,
};

async function postTune(body: TuneRequestBody): Promise<TuneResponse> {
  const resp = await fetch(`${baseUrlInput.value}/v1/hrc`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!resp.ok) {
    const data: unknown = await resp.json().catch(() => null);
    const detail = data !== null && typeof data === "object" ? (data as { detail?: unknown }).detail : null;
    throw new Error(errorText(resp.status, detail));
  }
  return (await resp.json()) as TuneResponse;
}

const loop = new TunerLoop(postTune, {
  onResult: (response) => {
    lastResponse = response;
    banner.hidden = true;
    render(response);
  },
  onError: (message) => {
    banner.textContent = message;
    banner.hidden = false;
  },
  onBusy: (busy) => {
    busyDot.hidden = !busy;
  },
});

function update(next: ControlState): void {
  state = next;
  syncControls();
  loop.schedule(buildRequestBody(state));
}

/* ---- rendering ------------------------------------------------------- */

function makeXScale(d0: number, d1: number, r0: number, r1: number): Scale {
  return state.logX ? logScale(d0, d1, r0, r1) : linearScale(d0, d1, r0, r1);
}

function drawAxes(svg: SVGSVGElement, width: number, height: number, d0: number, d1: number, sx: Scale): void {
  const plotBottom = height - PAD.bottom;
  svg.appendChild(
    svgEl("line", { x1: PAD.left, y1: plotBottom, x2: width - PAD.right, y2: plotBottom, class: "axis" }),
  );
  svg.appendChild(svgEl("line", { x1: PAD.left, y1: PAD.top, x2: PAD.left, y2: plotBottom, class: "axis" }));
  const ticks = state.logX ? logTicks(d0, d1) : [d0, (d0 + d1) / 2, d1];
  for (const t of ticks) {
    const x = sx(t);
    svg.appendChild(svgEl("line", { x1: x, y1: plotBottom, x2: x, y2: plotBottom + 4, class: "axis" }));
    const label = svgEl("text", { x, y: plotBottom + 16, class: "tick", "text-anchor": "middle" });
    label.textContent = t >= 1000 ? t.toExponential(0) : String(Math.round(t * 1000) / 1000);
    svg.appendChild(label);
  }
}

function drawHrc(response: TuneResponse): void {
  const { width, height } = clearSvg(hrcSvg);
  const xs = response.hrc.normalized_sizes;
  const ys = response.hrc.hit_ratios;
  if (xs.length === 0) {
    return;
  }
  const d0 = Math.min(...xs);
  const d1 = Math.max(Math.max(...xs), 1);
  const sx = makeXScale(d0, d1, PAD.left, width - PAD.right);
  const sy = linearScale(0, 1, height - PAD.bottom, PAD.top);
  drawAxes(hrcSvg, width, height, d0, d1, sx);
  for (const frac of [0.25, 0.5, 0.75, 1.0]) {
    const y = sy(frac);
    hrcSvg.appendChild(svgEl("line", { x1: PAD.left, y1: y, x2: width - PAD.right, y2: y, class: "grid" }));
    const label = svgEl("text", { x: PAD.left - 6, y: y + 3, class: "tick", "text-anchor": "end" });
    label.textContent = frac.toFixed(2);
    hrcSvg.appendChild(label);
  }
  hrcSvg.appendChild(svgEl("path", { d: stepCurvePath(xs, ys, sx, sy), class: "hrc-line", fill: "none" }));
}

function drawHistogram(
  svg: SVGSVGElement,
  edges: number[],
  counts: number[],
  infCount: number,
): PanelGeometry | null {
  const { width, height } = clearSvg(svg);
  if (edges.length < 2) {
    return null;
  }
  const d0 = Math.max(edges[0]!, 0.5);
  const d1 = edges[edges.length - 1]!;
  const r0 = PAD.left;
  const r1 = width - PAD.right;
  const sx = makeXScale(d0, d1, r0, r1);
  const plotH = height - PAD.top - PAD.bottom;
  drawAxes(svg, width, height, d0, d1, sx);
  for (const bar of histogramBars(edges, counts, sx, plotH)) {
    svg.appendChild(
      svgEl("rect", {
        x: bar.x,
        y: PAD.top + bar.y,
        width: bar.width,
        height: bar.height,
        class: "bar",
      }),
    );
  }
  if (infCount > 0) {
    const note = svgEl("text", { x: r1, y: PAD.top + 10, class: "tick", "text-anchor": "end" });
    note.textContent = `∞: ${infCount}`;
    svg.appendChild(note);
  }
  return { sx, r0, r1, d0, d1, plotH };
}

function render(response: TuneResponse): void {
  drawHrc(response);
  const h = response.histograms;
  dependentGeom = drawHistogram(panelSvgs.dependent, h.dependent.bin_edges, h.dependent.bin_counts, h.dependent.inf_count);
  drawHistogram(panelSvgs.independent, h.independent.bin_edges, h.independent.bin_counts, h.independent.inf_count);
  drawHistogram(panelSvgs.merged, h.merged.bin_edges, h.merged.bin_counts, h.merged.inf_count);
  statsLine.textContent =
    `footprint ${response.footprint} · refs ${response.length} · ` +
    `non-concavity ${response.concavity_gap.toFixed(4)} · ${response.elapsed_ms.toFixed(0)} ms`;
}

/* ---- controls -------------------------------------------------------- */

function renderSpikeStrip(): void {
  while (spikeStrip.firstChild) {
    spikeStrip.removeChild(spikeStrip.firstChild);
  }
  const tMax = autoTuneTmax(state.f.k, state.f.spikes, state.f.eps, state.m);
  const binWidth = tMax / state.f.k;
  for (let i = 0; i < state.f.k; i++) {
    const cell = document.createElement("button");
    cell.type = "button";
    cell.className = state.f.spikes.includes(i) ? "spike on" : "spike";
    cell.textContent = String(i);
    cell.title = `bin ${i}: distances ${Math.round(i * binWidth) + 1}..${Math.round((i + 1) * binWidth)}`;
    cell.addEventListener("click", () => update(toggleSpike(state, i)));
    spikeStrip.appendChild(cell);
  }
}

function syncControls(): void {
  const groups = enabledGroups(state);
  pIrmRange.value = String(state.pIrm);
  pIrmLabel.textContent = state.pIrm.toFixed(2);
  gGroup.disabled = !groups.g;
  fGroup.disabled = !groups.f;
  gFamily.value = state.g.family;
  gAlpha.value = String(state.g.alpha);
  gXm.value = String(state.g.xM);
  gMu.value = String(state.g.mu);
  gSigma.value = String(state.g.sigma);
  gAlpha.parentElement!.hidden = state.g.family === "uniform" || state.g.family === "normal";
  gXm.parentElement!.hidden = state.g.family !== "pareto";
  gMu.parentElement!.hidden = state.g.family !== "normal";
  gSigma.parentElement!.hidden = state.g.family !== "normal";
  fK.value = String(state.f.k);
  fEps.value = String(state.f.eps);
  renderSpikeStrip();
  hdToggle.checked = isHd(state);
  hdWarning.hidden = !isHd(state);
  scaleLabel.textContent = `m=${state.m}, n=${state.n}`;
  seedInput.value = String(state.seed);
  policySelect.value = state.policy;
  binsInput.value = String(state.bins);
  logToggle.checked = state.logX;
}

function wireControls(): void {
  pIrmRange.addEventListener("input", () => update(setPIrm(state, Number(pIrmRange.value))));
  gFamily.addEventListener("change", () => update(setGParams(state, { family: gFamily.value as GFamily })));
  gAlpha.addEventListener("change", () => update(setGParams(state, { alpha: Number(gAlpha.value) })));
  gXm.addEventListener("change", () => update(setGParams(state, { xM: Number(gXm.value) })));
  gMu.addEventListener("change", () => update(setGParams(state, { mu: Number(gMu.value) })));
  gSigma.addEventListener("change", () => update(setGParams(state, { sigma: Number(gSigma.value) })));
  fK.addEventListener("change", () => update(setK(state, Number(fK.value))));
  fEps.addEventListener("change", () => update(setEps(state, Number(fEps.value))));
  hdToggle.addEventListener("change", () => update(setHd(state, hdToggle.checked)));
  seedInput.addEventListener("change", () => update(setSeed(state, Number(seedInput.value))));
  policySelect.addEventListener("change", () => update(setPolicy(state, policySelect.value as Policy)));
  binsInput.addEventListener("change", () => update(setBins(state, Number(binsInput.value))));
  logToggle.addEventListener("change", () => update(setLogX(state, logToggle.checked)));
  refreshButton.addEventListener("click", () => {
    loop.schedule(buildRequestBody(state));
    loop.flush();
  });
  baseUrlInput.addEventListener("change", () => {
    void loadPresets();
    update(state);
  });

  /* Clicking a distance bar on the dependent panel toggles the matching
   * spike bin, the same edit as clicking the strip. */
  panelSvgs.dependent.addEventListener("click", (event: MouseEvent) => {
    if (dependentGeom === null || !enabledGroups(state).f) {
      return;
    }
    const rect = panelSvgs.dependent.getBoundingClientRect();
    const viewW = panelSvgs.dependent.viewBox.baseVal.width || rect.width;
    const pixelX = ((event.clientX - rect.left) / rect.width) * viewW;
    const tMax = autoTuneTmax(state.f.k, state.f.spikes, state.f.eps, state.m);
    const bin = clickToSpikeBin(
      pixelX,
      dependentGeom.r0,
      dependentGeom.r1,
      dependentGeom.d0,
      dependentGeom.d1,
      state.logX,
      state.f.k,
      tMax,
    );
    if (bin !== null) {
      update(toggleSpike(state, bin));
    }
  });

  exportButton.addEventListener("click", () => {
    if (lastResponse === null) {
      return; // nothing tuned yet
    }
    const blob = new Blob([exportProfileText(state)], { type: "text/plain" });
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = "profile.conf";
    a.click();
    URL.revokeObjectURL(url);
  });

  importInput.addEventListener("change", () => {
    const file = importInput.files?.[0];
    if (!file) {
      return;
    }
    file.text().then(
      (text) => {
        try {
          update(importProfileText(state, text));
        } catch (err) {
          banner.textContent = String(err);
          banner.hidden = false;
        }
      },
      (err: unknown) => {
        banner.textContent = String(err);
        banner.hidden = false;
      },
    );
    importInput.value = "";
  });
}

async function loadPresets(): Promise<void> {
  try {
    const resp = await fetch(`${baseUrlInput.value}/v1/presets`);
    if (!resp.ok) {
      throw new Error(`presets request failed with status ${resp.status}`);
    }
    presets = (await resp.json()) as PresetInfo[];
    while (presetSelect.firstChild) {
      presetSelect.removeChild(presetSelect.firstChild);
    }
    const blank = document.createElement("option");
    blank.value = "";
    blank.textContent = "custom";
    presetSelect.appendChild(blank);
    for (const p of presets) {
      const opt = document.createElement("option");
      opt.value = p.name;
      opt.textContent = p.note ? `${p.name} (${p.note})` : p.name;
      presetSelect.appendChild(opt);
    }
  } catch (err) {
    banner.textContent = String(err);
    banner.hidden = false;
  }
}

function main(): void {
  for (const policy of POLICIES) {
    const opt = document.createElement("option");
    opt.value = policy;
    opt.textContent = policy.toUpperCase();
    policySelect.appendChild(opt);
  }
  presetSelect.addEventListener("change", () => {
    const chosen = presets.find((p) => p.name === presetSelect.value);
    if (chosen) {
      try {
        update(applyPreset(state, chosen));
      } catch (err) {
        banner.textContent = String(err);
        banner.hidden = false;
      }
    }
  });
  wireControls();
  syncControls();
  void loadPresets();
  loop.schedule(buildRequestBody(state));
  loop.flush();
}

main();
