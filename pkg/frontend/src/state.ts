/** Control-panel state and the pure reducers behind every widget.
 *
 * The rules the widgets enforce mirror the library's profile invariants:
 * a pure popularity stream (mix = 1) has no distance distribution, a pure
 * reuse stream (mix = 0) has no popularity distribution, anything between
 * carries both. Ranges are clamped here so the service never sees an
 * out-of-range field from slider input.
 */

import { TuneRequestBody, PresetInfo } from "./api.js";
import { FgenParams, GParams, G_DEFAULTS, parseF, parseG, renderF, renderG } from "./fragments.js";

export type Policy = "lru" | "fifo" | "clock" | "lfu";

export const POLICIES: Policy[] = ["lru", "fifo", "clock", "lfu"];

/* Interactive scale caps; the service rejects anything bigger with 413. */
export const MAX_M = 100_000;
export const MAX_N = 10_000_000;

export const DEFAULT_SCALE = { m: 100, n: 10_000 };
export const HD_SCALE = { m: 10_000, n: 1_000_000 };
export const DEFAULT_SEED = 20260214;

export interface ControlState {
  pIrm: number;
  g: GParams;
  f: FgenParams;
  m: number;
  n: number;
  seed: number;
  policy: Policy;
  bins: number;
  logX: boolean;
}

/** Starting point: the first spiky preset at interactive scale. */
export function initialState(): ControlState {
  return {
    pIrm: 0.0,
    g: { ...G_DEFAULTS },
    f: { k: 20, spikes: [0, 3], eps: 0.005 },
    m: DEFAULT_SCALE.m,
    n: DEFAULT_SCALE.n,
    seed: DEFAULT_SEED,
    policy: "lru",
    bins: 48,
    logX: true,
  };
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

function clampInt(value: number, lo: number, hi: number): number {
  return clamp(Math.round(value), lo, hi);
}

/** Which control groups are live for the current mixing weight. */
export function enabledGroups(state: ControlState): { f: boolean; g: boolean } {
  return { f: state.pIrm < 1, g: state.pIrm > 0 };
}

export function setPIrm(state: ControlState, value: number): ControlState {
  return { ...state, pIrm: clamp(value, 0, 1) };
}

export function setPolicy(state: ControlState, policy: Policy): ControlState {
  return { ...state, policy };
}

export function setSeed(state: ControlState, seed: number): ControlState {
  return { ...state, seed: Math.round(seed) };
}

export function setBins(state: ControlState, bins: number): ControlState {
  return { ...state, bins: clampInt(bins, 1, 512) };
}

export function setLogX(state: ControlState, logX: boolean): ControlState {
  return { ...state, logX };
}

export function setScale(state: ControlState, m: number, n: number): ControlState {
  return { ...state, m: clampInt(m, 1, MAX_M), n: clampInt(n, 1, MAX_N) };
}

export function setHd(state: ControlState, hd: boolean): ControlState {
  const scale = hd ? HD_SCALE : DEFAULT_SCALE;
  return setScale(state, scale.m, scale.n);
}

export function isHd(state: ControlState): boolean {
  return state.m >= HD_SCALE.m || state.n >= HD_SCALE.n;
}

export function setGParams(state: ControlState, g: Partial<GParams>): ControlState {
  const merged = { ...state.g, ...g };
  merged.alpha = Math.max(merged.alpha, 1e-6);
  merged.xM = Math.max(merged.xM, 1);
  merged.sigma = Math.max(merged.sigma, 0);
  return { ...state, g: merged };
}

/** Changing k keeps spikes that still fit; an emptied list falls back to
 * bin 0 because a distance distribution needs at least one spike. */
export function setK(state: ControlState, k: number): ControlState {
  const next = clampInt(k, 1, 512);
  const spikes = state.f.spikes.filter((s) => s < next);
  return { ...state, f: { ...state.f, k: next, spikes: spikes.length ? spikes : [0] } };
}

export function setEps(state: ControlState, eps: number): ControlState {
  return { ...state, f: { ...state.f, eps: clamp(eps, 0, 0.999) } };
}

export function toggleSpike(state: ControlState, bin: number): ControlState {
  if (!Number.isInteger(bin) || bin < 0 || bin >= state.f.k) {
    return state;
  }
  const has = state.f.spikes.includes(bin);
  if (has && state.f.spikes.length === 1) {
    return state; // the last spike stays
  }
  const spikes = has
    ? state.f.spikes.filter((s) => s !== bin)
    : [...state.f.spikes, bin].sort((a, b) => a - b);
  return { ...state, f: { ...state.f, spikes } };
}

export function setSpikes(state: ControlState, spikes: number[]): ControlState {
  const valid = [...new Set(spikes)]
    .filter((s) => Number.isInteger(s) && s >= 0 && s < state.f.k)
    .sort((a, b) => a - b);
  if (valid.length === 0) {
    return state;
  }
  return { ...state, f: { ...state.f, spikes: valid } };
}

/** Populate every control from a catalog entry, keeping the current scale
 * unless the preset recommends a larger one. */
export function applyPreset(state: ControlState, preset: PresetInfo): ControlState {
  const f = parseF(preset.f);
  const g = parseG(preset.g);
  const m = Math.max(state.m, preset.recommended_min_m ?? 1);
  const n = Math.max(state.n, preset.recommended_min_n ?? 1);
  return setScale(
    {
      ...state,
      pIrm: clamp(preset.p_irm, 0, 1),
      g: g ?? state.g,
      f: f ?? state.f,
    },
    m,
    n,
  );
}

/** The POST body for the current controls. Only the distributions the
 * mixing weight actually uses are sent. */
export function buildRequestBody(state: ControlState): TuneRequestBody {
  const groups = enabledGroups(state);
  const body: TuneRequestBody = {
    p_irm: state.pIrm,
    m: state.m,
    n: state.n,
    seed: state.seed,
    policy: state.policy,
    bins: state.bins,
  };
  if (groups.f) {
    body.f = renderF(state.f);
  }
  if (groups.g) {
    body.g = renderG(state.g);
  }
  return body;
}
