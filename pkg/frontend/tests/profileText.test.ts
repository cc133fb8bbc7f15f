import { describe, expect, it } from "vitest";
import { exportProfileText, importProfileText } from "../src/profileText.js";
import { initialState, setPIrm, setScale, setSeed } from "../src/state.js";

describe("export", () => {
  it("writes the exact key = value layout the CLI reads", () => {
    let s = initialState();
    s = setPIrm(s, 0.45);
    s = { ...s, f: { k: 30, spikes: [1, 2], eps: 0.005 } };
    s = setScale(s, 1000, 100_000);
    s = setSeed(s, 20260214);
    expect(exportProfileText(s)).toBe(
      "p_irm = 0.45\n" +
        "g = zipf:1.2\n" +
        "f = fgen:30:0.005:1,2\n" +
        "m = 1000\n" +
        "n = 100000\n" +
        "seed = 20260214\n",
    );
  });

  it("writes none for the side the mixing weight disables", () => {
    expect(exportProfileText(setPIrm(initialState(), 0))).toContain("g = none");
    expect(exportProfileText(setPIrm(initialState(), 1))).toContain("f = none");
  });
});

describe("import", () => {
  it("round-trips through export", () => {
    let s = initialState();
    s = setPIrm(s, 0.45);
    s = { ...s, f: { k: 30, spikes: [1, 2], eps: 0.005 }, g: { ...s.g, family: "pareto" as const, alpha: 2.5 } };
    s = setScale(s, 1000, 100_000);
    const back = importProfileText(initialState(), exportProfileText(s));
    expect(back.pIrm).toBe(s.pIrm);
    expect(back.g).toEqual(s.g);
    expect(back.f).toEqual(s.f);
    expect(back.m).toBe(s.m);
    expect(back.n).toBe(s.n);
    expect(back.seed).toBe(s.seed);
  });

  it("keeps current controls for a none side and ignores CLI-only keys", () => {
    const base = initialState();
    const text = "p_irm = 1\ng = zipf:2\nf = none\nrw = 0.7\nsizedist = 1:1\nm = 200\nn = 20000\n";
    const s = importProfileText(base, text);
    expect(s.pIrm).toBe(1);
    expect(s.g.alpha).toBe(2);
    expect(s.f).toEqual(base.f); // none leaves the disabled controls alone
    expect(s.m).toBe(200);
  });

  it("strips comments and blank lines", () => {
    const s = importProfileText(initialState(), "# tuned by hand\n\np_irm = 0.5 # mixed\n");
    expect(s.pIrm).toBe(0.5);
  });

  it("reports the line number of a malformed line", () => {
    expect(() => importProfileText(initialState(), "p_irm = 0.2\nbogus line\n")).toThrow(/line 2/);
    expect(() => importProfileText(initialState(), "m = ten\n")).toThrow(/line 1.*number/);
    expect(() => importProfileText(initialState(), "p_irm = 1.5\n")).toThrow(/\[0, 1\]/);
  });

  it("clamps imported scale to the service caps", () => {
    const s = importProfileText(initialState(), "m = 10000000\nn = 900000000\n");
    expect(s.m).toBe(100_000);
    expect(s.n).toBe(10_000_000);
  });
});
