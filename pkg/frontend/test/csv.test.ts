import { describe, expect, it } from "vitest";
import { CANONICAL_HEADER, parseResultCsv, SchemaError } from "../src/csv";

const HEADER = CANONICAL_HEADER.join(",");

function row(protocol: string, d: number, g: number, q1: number,
             leakPair = 1e-5, leakTarget = 1e-3): string {
  return [protocol, d, g, 3.14, 0, q1, q1, 0.5, 0.1,
          leakPair, leakTarget, 1e-10, 120, 0.05].join(",");
}

describe("parseResultCsv", () => {
  it("parses a valid file into typed rows", () => {
    const rows = parseResultCsv(`${HEADER}\n${row("qb", 2, 0.1, 0.9)}\n${row("ctap", 4, 0.2, 0.95)}\n`);
    expect(rows).toHaveLength(2);
    expect(rows[0].protocol).toBe("qb");
    expect(rows[0].d).toBe(2);
    expect(rows[1].q1).toBeCloseTo(0.95, 12);
    expect(rows[1].n_steps).toBe(120);
  });

  it("rejects an empty file", () => {
    expect(() => parseResultCsv("")).toThrow(SchemaError);
  });

  it("rejects a wrong header", () => {
    expect(() => parseResultCsv("protocol,d,g\nqb,2,0.1\n")).toThrow(SchemaError);
  });

  it("rejects reordered columns", () => {
    const reordered = [...CANONICAL_HEADER].reverse().join(",");
    expect(() => parseResultCsv(`${reordered}\n`)).toThrow(SchemaError);
  });

  it("rejects an unknown protocol", () => {
    expect(() => parseResultCsv(`${HEADER}\n${row("stirap", 2, 0.1, 0.9)}\n`)).toThrow(SchemaError);
  });

  it("rejects a short row", () => {
    expect(() => parseResultCsv(`${HEADER}\nqb,2,0.1\n`)).toThrow(SchemaError);
  });

  it("preserves 17-significant-digit values", () => {
    const v = "0.94074312345678901";
    const fields = `qb,2,${v},1,0,${v},${v},0,0,0,0,0,1,0`;
    const rows = parseResultCsv(`${HEADER}\n${fields}\n`);
    expect(rows[0].q1).toBe(parseFloat(v));
  });

  it("accepts NaN result columns from failed grid points", () => {
    const fields = "qb,2,0.1,nan,nan,nan,nan,nan,nan,nan,nan,nan,0,nan";
    const rows = parseResultCsv(`${HEADER}\n${fields}\n`);
    expect(Number.isNaN(rows[0].q1)).toBe(true);
  });
});
