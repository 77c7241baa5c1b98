import Papa from "papaparse";

/** Exact column order written by the experiment harness. */
export const CSV_HEADER = [
  "sweep_name",
  "sweep_value",
  "method",
  "bits",
  "seed",
  "wsr_bps_hz",
  "outer_iterations",
  "wall_time_ms",
] as const;

export const METHODS = ["MM", "SCA", "FixedIRS", "NoIRS"] as const;
export type Method = (typeof METHODS)[number];

export interface SweepRecord {
  sweepName: string;
  sweepValue: number;
  method: Method;
  bits: number;
  seed: number;
  wsr: number;
}

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** Parse a harness results CSV; rejects header drift and malformed rows. */
export function parseRecords(csvText: string): SweepRecord[] {
  const parsed = Papa.parse<Record<string, string>>(csvText.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== CSV_HEADER.join(",")) {
    const missing = CSV_HEADER.filter((c) => !fields.includes(c));
    throw new SchemaError(
      `CSV schema mismatch; missing columns: [${missing.join(", ")}]`,
    );
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("CSV has no data rows");
  }
  return parsed.data.map((row, i) => {
    const sweepValue = Number(row.sweep_value);
    const bits = Number(row.bits);
    const seed = Number(row.seed);
    const wsr = Number(row.wsr_bps_hz);
    if (![sweepValue, bits, seed, wsr].every(Number.isFinite)) {
      throw new SchemaError(`non-numeric value in row ${i + 2}`);
    }
    if (!METHODS.includes(row.method as Method)) {
      throw new SchemaError(`unknown method ${JSON.stringify(row.method)} in row ${i + 2}`);
    }
    return {
      sweepName: row.sweep_name,
      sweepValue,
      method: row.method as Method,
      bits,
      seed,
      wsr,
    };
  });
}
