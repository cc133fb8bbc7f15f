/** Export controls as the key = value profile text the CLI consumes, and
 * import such text back into controls. The layout matches what the
 * generator tooling itself writes, so an exported file feeds straight
 * into full-scale generation.
 */

import { ControlState, enabledGroups, setScale } from "./state.js";
import { parseF, parseG, renderF, renderG } from "./fragments.js";

export function exportProfileText(state: ControlState): string {
  const groups = enabledGroups(state);
  const lines = [
    `p_irm = ${state.pIrm}`,
    `g = ${groups.g ? renderG(state.g) : "none"}`,
    `f = ${groups.f ? renderF(state.f) : "none"}`,
    `m = ${state.m}`,
    `n = ${state.n}`,
    `seed = ${state.seed}`,
  ];
  return lines.join("\n") + "\n";
}

function parseNumber(value: string, lineno: number): number {
  const parsed = Number(value);
  if (!Number.isFinite(parsed) || value.trim() === "") {
    throw new Error(`line ${lineno}: expected a number, got ${JSON.stringify(value)}`);
  }
  return parsed;
}

/** Merge profile text into existing controls. Unknown keys and anything
 * only the CLI understands (rw, sizedist) are ignored rather than lost
 * errors; malformed lines throw with their line number. */
export function importProfileText(state: ControlState, text: string): ControlState {
  let next = { ...state };
  let m = state.m;
  let n = state.n;
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const lineno = i + 1;
    const stripped = lines[i]!.replace(/#.*$/, "").trim();
    if (stripped === "") {
      continue;
    }
    const eq = stripped.indexOf("=");
    if (eq < 0) {
      throw new Error(`line ${lineno}: expected key = value`);
    }
    const key = stripped.slice(0, eq).trim();
    const value = stripped.slice(eq + 1).trim();
    switch (key) {
      case "p_irm": {
        const p = parseNumber(value, lineno);
        if (p < 0 || p > 1) {
          throw new Error(`line ${lineno}: p_irm must lie in [0, 1]`);
        }
        next.pIrm = p;
        break;
      }
      case "g": {
        const g = parseG(value);
        if (g !== null) {
          next.g = g;
        }
        break;
      }
      case "f": {
        const f = parseF(value);
        if (f !== null) {
          next.f = f;
        }
        break;
      }
      case "m":
        m = parseNumber(value, lineno);
        break;
      case "n":
        n = parseNumber(value, lineno);
        break;
      case "seed":
        next.seed = parseNumber(value, lineno);
        break;
      default:
        break;
    }
  }
  return setScale(next, m, n);
}
