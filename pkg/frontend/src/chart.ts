/** Pure chart geometry: axis scales, step-curve paths, histogram bar
 * layout, and the mapping from a click on the distance panel back to a
 * spike bin. Everything here returns numbers and path strings; the DOM
 * layer only pastes them into SVG attributes.
 */

export interface Scale {
  (x: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (x) => r0 + ((x - d0) / span) * (r1 - r0);
}

/** Log-x cache-size axis. Domain must be positive; points at or below
 * zero clamp to the left edge. */
export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const lo = Math.log(Math.max(d0, Number.MIN_VALUE));
  const hi = Math.log(Math.max(d1, Number.MIN_VALUE));
  const span = hi - lo || 1;
  return (x) => (x <= 0 ? r0 : r0 + ((Math.log(x) - lo) / span) * (r1 - r0));
}

/** SVG path for a step function that holds ys[i] on [xs[i], xs[i+1]). */
export function stepCurvePath(xs: number[], ys: number[], sx: Scale, sy: Scale): string {
  if (xs.length === 0 || xs.length !== ys.length) {
    return "";
  }
  const parts = [`M ${sx(xs[0]!).toFixed(2)} ${sy(ys[0]!).toFixed(2)}`];
  for (let i = 1; i < xs.length; i++) {
    parts.push(`H ${sx(xs[i]!).toFixed(2)}`);
    parts.push(`V ${sy(ys[i]!).toFixed(2)}`);
  }
  return parts.join(" ");
}

export interface Bar {
  x: number;
  y: number;
  width: number;
  height: number;
  index: number;
}

/** Lay histogram bins out over a panel. Bin edges come from the service
 * (log-spaced summary bins); bars are drawn in x-scale space so they line
 * up with the curve axis. Zero-count bins produce zero-height bars. */
export function histogramBars(
  edges: number[],
  counts: number[],
  sx: Scale,
  panelHeight: number,
): Bar[] {
  const total = counts.reduce((a, b) => a + b, 0);
  const peak = counts.reduce((a, b) => Math.max(a, b), 0);
  if (edges.length !== counts.length + 1 || total === 0 || peak === 0) {
    return [];
  }
  const bars: Bar[] = [];
  for (let i = 0; i < counts.length; i++) {
    const x0 = sx(edges[i]!);
    const x1 = sx(edges[i + 1]!);
    const h = (counts[i]! / peak) * panelHeight;
    bars.push({ x: x0, y: panelHeight - h, width: Math.max(x1 - x0, 0.5), height: h, index: i });
  }
  return bars;
}

/** Auto-tuned distance-range upper bound for an fgen spec: the range is
 * sized so the mean drawn distance equals the footprint, never smaller
 * than one integer per bin. */
export function autoTuneTmax(k: number, spikes: number[], eps: number, m: number): number {
  const spikeSet = new Set(spikes);
  const spikeMass = spikes.length > 0 ? (1 - eps) / spikes.length : 0;
  const holeCount = k - spikes.length;
  const holeMass = holeCount > 0 ? eps / holeCount : 0;
  let weighted = 0;
  for (let i = 1; i <= k; i++) {
    weighted += (2 * i - 1) * (spikeSet.has(i - 1) ? spikeMass : holeMass);
  }
  if (weighted <= 0) {
    return k;
  }
  return Math.max(Math.ceil((2 * m * k) / weighted), k);
}

/** Which fgen bin a distance belongs to. */
export function distanceToSpikeBin(distance: number, k: number, tMax: number): number {
  const width = tMax / k;
  return Math.min(Math.max(Math.floor((distance - 0.5) / width), 0), k - 1);
}

/** Invert a click on the distance panel to a spike bin: pixel -> distance
 * through the inverse of the x scale, then distance -> bin. Returns null
 * outside the plotted domain. */
export function clickToSpikeBin(
  pixelX: number,
  r0: number,
  r1: number,
  d0: number,
  d1: number,
  log: boolean,
  k: number,
  tMax: number,
): number | null {
  if (pixelX < Math.min(r0, r1) || pixelX > Math.max(r0, r1) || r1 === r0) {
    return null;
  }
  const t = (pixelX - r0) / (r1 - r0);
  const distance = log
    ? Math.exp(Math.log(Math.max(d0, Number.MIN_VALUE)) + t * (Math.log(d1) - Math.log(Math.max(d0, Number.MIN_VALUE))))
    : d0 + t * (d1 - d0);
  if (!Number.isFinite(distance) || distance <= 0) {
    return null;
  }
  return distanceToSpikeBin(distance, k, tMax);
}

/** Tick positions for a log axis: decades inside the domain. */
export function logTicks(d0: number, d1: number): number[] {
  const ticks: number[] = [];
  const start = Math.ceil(Math.log10(Math.max(d0, Number.MIN_VALUE)));
  const end = Math.floor(Math.log10(Math.max(d1, d0)));
  for (let e = start; e <= end; e++) {
    ticks.push(10 ** e);
  }
  return ticks;
}
