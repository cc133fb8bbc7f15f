import { describe, expect, it } from "vitest";
import {
  autoTuneTmax,
  clickToSpikeBin,
  distanceToSpikeBin,
  histogramBars,
  linearScale,
  logScale,
  logTicks,
  stepCurvePath,
} from "../src/chart.js";

describe("scales", () => {
  it("linear maps domain endpoints to range endpoints", () => {
    const s = linearScale(0, 10, 0, 100);
    expect(s(0)).toBe(0);
    expect(s(10)).toBe(100);
    expect(s(5)).toBe(50);
  });

  it("log maps decades evenly", () => {
    const s = logScale(1, 100, 0, 100);
    expect(s(1)).toBeCloseTo(0, 9);
    expect(s(10)).toBeCloseTo(50, 9);
    expect(s(100)).toBeCloseTo(100, 9);
    expect(s(0)).toBe(0); // nonpositive clamps to the left edge
  });

  it("log decade ticks stay inside the domain", () => {
    expect(logTicks(1, 1000)).toEqual([1, 10, 100, 1000]);
    expect(logTicks(5, 500)).toEqual([10, 100]);
  });
});

describe("step curve path", () => {
  it("holds each hit ratio until the next cache size", () => {
    const sx = linearScale(0, 1, 0, 100);
    const sy = linearScale(0, 1, 100, 0);
    const path = stepCurvePath([0.25, 0.5, 1.0], [0.1, 0.4, 0.9], sx, sy);
    expect(path).toBe("M 25.00 90.00 H 50.00 V 60.00 H 100.00 V 10.00");
  });

  it("handles empty or mismatched input", () => {
    const s = linearScale(0, 1, 0, 1);
    expect(stepCurvePath([], [], s, s)).toBe("");
    expect(stepCurvePath([1], [1, 2], s, s)).toBe("");
  });
});

describe("histogram bars", () => {
  it("lays bins out against the x scale with the peak at full height", () => {
    const sx = linearScale(0, 30, 0, 300);
    const bars = histogramBars([0, 10, 30], [2, 4], sx, 100);
    expect(bars.length).toBe(2);
    expect(bars[0]).toMatchObject({ x: 0, width: 100, height: 50, y: 50, index: 0 });
    expect(bars[1]).toMatchObject({ x: 100, width: 200, height: 100, y: 0, index: 1 });
  });

  it("returns nothing for empty or inconsistent histograms", () => {
    const sx = linearScale(0, 1, 0, 1);
    expect(histogramBars([0, 1], [0], sx, 100)).toEqual([]);
    expect(histogramBars([0, 1, 2], [5], sx, 100)).toEqual([]);
  });
});

describe("distance range auto-tune", () => {
  // Frozen against the Python library's auto-tuner on the same inputs.
  it("matches the library's tuner bin for bin", () => {
    expect(autoTuneTmax(5, [2], 0.005, 10_000)).toBe(20_000);
    expect(autoTuneTmax(20, [0, 3], 0.005, 10_000)).toBe(97_827);
    expect(autoTuneTmax(20, [0, 3], 0.005, 100)).toBe(979);
    expect(autoTuneTmax(30, [1, 2], 0.005, 1_000)).toBe(14_496);
    expect(autoTuneTmax(15, [1, 3, 5, 9], 0.01, 10_000)).toBe(29_797);
    expect(autoTuneTmax(3, [0, 1, 2], 0, 50)).toBe(100);
  });

  it("never returns fewer integers than bins", () => {
    expect(autoTuneTmax(1, [0], 0, 1)).toBe(2);
    expect(autoTuneTmax(100, [99], 0, 1)).toBe(100);
  });
});

describe("spike bin lookup", () => {
  it("assigns distances to half-open integer bins", () => {
    // k=5, t_max=20000 -> width 4000; bins cover [1,4000], [4001,8000], ...
    expect(distanceToSpikeBin(1, 5, 20_000)).toBe(0);
    expect(distanceToSpikeBin(4000, 5, 20_000)).toBe(0);
    expect(distanceToSpikeBin(4001, 5, 20_000)).toBe(1);
    expect(distanceToSpikeBin(20_000, 5, 20_000)).toBe(4);
    expect(distanceToSpikeBin(99_999, 5, 20_000)).toBe(4); // clamps high
    expect(distanceToSpikeBin(0, 5, 20_000)).toBe(0); // clamps low
  });

  it("inverts a linear-axis click to the bin under the pointer", () => {
    expect(clickToSpikeBin(0, 0, 100, 1, 20_000, false, 5, 20_000)).toBe(0);
    expect(clickToSpikeBin(50, 0, 100, 1, 20_000, false, 5, 20_000)).toBe(2);
    expect(clickToSpikeBin(100, 0, 100, 1, 20_000, false, 5, 20_000)).toBe(4);
    expect(clickToSpikeBin(-5, 0, 100, 1, 20_000, false, 5, 20_000)).toBeNull();
    expect(clickToSpikeBin(105, 0, 100, 1, 20_000, false, 5, 20_000)).toBeNull();
  });

  it("inverts a log-axis click through the exponential", () => {
    // domain [1, 10000] over [0, 100]: pixel 50 -> distance 100
    expect(clickToSpikeBin(50, 0, 100, 1, 10_000, true, 4, 10_000)).toBe(0);
    expect(clickToSpikeBin(100, 0, 100, 1, 10_000, true, 4, 10_000)).toBe(3);
    // bin 1 starts at distance 2501; log position of 2501 is ~84.9
    expect(clickToSpikeBin(85, 0, 100, 1, 10_000, true, 4, 10_000)).toBe(1);
  });
});
