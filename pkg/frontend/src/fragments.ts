/** Parse and render the compact distribution fragments the service and CLI
 * share: `fgen:<k>:<eps>:<spike,bins>` for distance distributions and
 * `zipf:1.2`, `pareto:2.5,1`, `normal:mu,sigma`, `uniform` for popularity.
 * Empirical (file-backed) fragments are CLI-only and rejected here.
 */

export type GFamily = "zipf" | "pareto" | "normal" | "uniform";

export interface FgenParams {
  k: number;
  spikes: number[];
  eps: number;
}

export interface GParams {
  family: GFamily;
  alpha: number; // zipf, pareto
  xM: number; // pareto
  mu: number;
  sigma: number; // normal
}

export const G_DEFAULTS: GParams = { family: "zipf", alpha: 1.2, xM: 1, mu: 1, sigma: 1 };

function num(text: string, what: string): number {
  const value = Number(text);
  if (!Number.isFinite(value) || text.trim() === "") {
    throw new Error(`${what} must be a number, got ${JSON.stringify(text)}`);
  }
  return value;
}

/** `fgen:20:0.005:0,3` -> params; `none` -> null. */
export function parseF(fragment: string): FgenParams | null {
  const text = fragment.trim();
  if (text === "none" || text === "") {
    return null;
  }
  if (text.startsWith("empirical:")) {
    throw new Error("empirical distance distributions need the CLI");
  }
  const parts = text.split(":");
  if (parts[0] !== "fgen" || parts.length !== 4) {
    throw new Error(`expected fgen:<k>:<eps>:<spikes>, got ${JSON.stringify(text)}`);
  }
  const k = num(parts[1]!, "k");
  const eps = num(parts[2]!, "eps");
  const spikes = parts[3]!.split(",").map((s) => num(s, "spike bin"));
  if (!Number.isInteger(k) || k < 1) {
    throw new Error("k must be a positive integer");
  }
  if (eps < 0 || eps >= 1) {
    throw new Error("eps must lie in [0, 1)");
  }
  if (spikes.length === 0 || spikes.some((s) => !Number.isInteger(s) || s < 0 || s >= k)) {
    throw new Error("spike bins must be integers in [0, k)");
  }
  return { k, spikes: [...new Set(spikes)].sort((a, b) => a - b), eps };
}

export function renderF(params: FgenParams | null): string {
  if (params === null) {
    return "none";
  }
  return `fgen:${params.k}:${params.eps}:${params.spikes.join(",")}`;
}

/** `zipf:1.2` / `pareto:2.5,1` / `normal:0,3` / `uniform`; `none` -> null. */
export function parseG(fragment: string): GParams | null {
  const text = fragment.trim();
  if (text === "none" || text === "") {
    return null;
  }
  if (text.startsWith("empirical:")) {
    throw new Error("empirical popularity distributions need the CLI");
  }
  const [family, rest] = text.split(":", 2) as [string, string | undefined];
  const args = rest === undefined || rest === "" ? [] : rest.split(",").map((a) => num(a, family));
  const out: GParams = { ...G_DEFAULTS };
  switch (family) {
    case "uniform":
      if (args.length > 0) throw new Error("uniform takes no parameters");
      out.family = "uniform";
      return out;
    case "zipf":
      if (args.length > 1) throw new Error("zipf takes at most one parameter");
      out.family = "zipf";
      out.alpha = args[0] ?? 1.2;
      return out;
    case "pareto":
      if (args.length > 2) throw new Error("pareto takes at most two parameters");
      out.family = "pareto";
      out.alpha = args[0] ?? 2.5;
      out.xM = args[1] ?? 1;
      return out;
    case "normal":
      if (args.length !== 2) throw new Error("normal needs mu,sigma");
      out.family = "normal";
      out.mu = args[0]!;
      out.sigma = args[1]!;
      return out;
    default:
      throw new Error(`unknown popularity family ${JSON.stringify(family)}`);
  }
}

export function renderG(params: GParams | null): string {
  if (params === null) {
    return "none";
  }
  switch (params.family) {
    case "uniform":
      return "uniform";
    case "zipf":
      return `zipf:${params.alpha}`;
    case "pareto":
      return `pareto:${params.alpha},${params.xM}`;
    case "normal":
      return `normal:${params.mu},${params.sigma}`;
  }
}
