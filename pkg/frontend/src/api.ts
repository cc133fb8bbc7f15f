/** Wire types for the tuner service JSON endpoints. */

export interface PresetInfo {
  name: string;
  p_irm: number;
  g: string;
  f: string;
  note: string | null;
  recommended_min_m: number | null;
  recommended_min_n: number | null;
}

export interface CurvePayload {
  policy: string;
  sizes: number[];
  normalized_sizes: number[];
  hit_ratios: number[];
  footprint: number;
  length: number;
}

export interface HistogramPayload {
  bin_edges: number[];
  bin_counts: number[];
  inf_count: number;
  total: number;
}

export interface TuneResponse {
  hrc: CurvePayload;
  histograms: {
    dependent: HistogramPayload;
    independent: HistogramPayload;
    merged: HistogramPayload;
  };
  footprint: number;
  length: number;
  concavity_gap: number;
  profile: string | null;
  elapsed_ms: number;
}

/** Body for POST /v1/hrc. Distributions travel as fragment strings. */
export interface TuneRequestBody {
  p_irm: number;
  f?: string;
  g?: string;
  m: number;
  n: number;
  seed: number;
  policy: string;
  bins: number;
}

export interface FieldError {
  field: string;
  message: string;
}

/** Service error payloads: 400 carries a field list, 413/422 a string. */
export function errorText(status: number, detail: unknown): string {
  if (Array.isArray(detail)) {
    const parts = (detail as FieldError[]).map((e) => `${e.field}: ${e.message}`);
    return parts.join("; ");
  }
  if (typeof detail === "string") {
    return detail;
  }
  return `request failed with status ${status}`;
}
