import Papa from "papaparse";

export const CANONICAL_HEADER = [
  "protocol", "d", "g", "T", "tau", "q1", "coherent_info", "s_output",
  "s_exchange", "leak_pair", "leak_target", "norm_drift", "n_steps",
  "wall_time",
] as const;

export interface ResultRow {
  protocol: "qb" | "ctap";
  d: number;
  g: number;
  T: number;
  tau: number;
  q1: number;
  coherent_info: number;
  s_output: number;
  s_exchange: number;
  leak_pair: number;
  leak_target: number;
  norm_drift: number;
  n_steps: number;
  wall_time: number;
}

export class SchemaError extends Error {}

export function parseResultCsv(text: string): ResultRow[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse error: ${parsed.errors[0].message}`);
  }
  const records = parsed.data;
  if (records.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = records[0];
  const expected = CANONICAL_HEADER as readonly string[];
  if (header.length !== expected.length ||
      header.some((h, i) => h !== expected[i])) {
    throw new SchemaError(
      `unexpected header [${header.join(",")}]; expected [${expected.join(",")}]`);
  }
  const rows: ResultRow[] = [];
  for (const rec of records.slice(1)) {
    if (rec.length !== expected.length) {
      throw new SchemaError(`row has ${rec.length} fields, expected ${expected.length}`);
    }
    const protocol = rec[0];
    if (protocol !== "qb" && protocol !== "ctap") {
      throw new SchemaError(`unknown protocol ${protocol}`);
    }
    rows.push({
      protocol,
      d: parseInt(rec[1], 10),
      g: parseFloat(rec[2]),
      T: parseFloat(rec[3]),
      tau: parseFloat(rec[4]),
      q1: parseFloat(rec[5]),
      coherent_info: parseFloat(rec[6]),
      s_output: parseFloat(rec[7]),
      s_exchange: parseFloat(rec[8]),
      leak_pair: parseFloat(rec[9]),
      leak_target: parseFloat(rec[10]),
      norm_drift: parseFloat(rec[11]),
      n_steps: parseInt(rec[12], 10),
      wall_time: parseFloat(rec[13]),
    });
  }
  return rows;
}
