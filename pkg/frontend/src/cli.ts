import * as fs from "fs";
import { parseResultCsv, ResultRow, SchemaError } from "./csv";
import { FigureVariant, renderFigure, SelectionError } from "./figures";

const USAGE = `usage: figplots --variant fig1|fig1-inset|fig2 --input FILE [--input FILE ...] --output FILE [--g VALUE]

Renders an SVG figure from uscbus sweep CSV files.
  fig1        Q1 vs g, one curve per (protocol, d); QB dashed, CTAP solid
  fig1-inset  CTAP Q1 vs d at a single g (default 0.6; set with --g)
  fig2        leakage vs g on a log y-axis; leak_target solid, leak_pair dashed`;

interface Args {
  variant: FigureVariant;
  inputs: string[];
  output: string;
  g?: number;
}

export function parseArgs(argv: string[]): Args {
  let variant: string | undefined;
  const inputs: string[] = [];
  let output: string | undefined;
  let g: number | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = (): string => {
      const v = argv[++i];
      if (v === undefined) throw new Error(`missing value for ${arg}`);
      return v;
    };
    switch (arg) {
      case "--variant": variant = next(); break;
      case "--input": inputs.push(next()); break;
      case "--output": output = next(); break;
      case "--g": {
        g = parseFloat(next());
        if (!Number.isFinite(g)) throw new Error("--g must be a finite number");
        break;
      }
      case "--help":
      case "-h":
        throw new Error(USAGE);
      default:
        throw new Error(`unknown argument ${arg}`);
    }
  }
  if (variant !== "fig1" && variant !== "fig1-inset" && variant !== "fig2") {
    throw new Error(`--variant must be fig1, fig1-inset, or fig2 (got ${variant ?? "nothing"})`);
  }
  if (inputs.length === 0) throw new Error("at least one --input is required");
  if (!output) throw new Error("--output is required");
  return { variant, inputs, output, g };
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n${USAGE}\n`);
    return 1;
  }
  try {
    const rows: ResultRow[] = [];
    for (const path of args.inputs) {
      if (!fs.existsSync(path)) {
        throw new SchemaError(`input file not found: ${path}`);
      }
      rows.push(...parseResultCsv(fs.readFileSync(path, "utf-8")));
    }
    const svg = renderFigure(args.variant, rows, { g: args.g });
    fs.writeFileSync(args.output, svg, "utf-8");
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof SelectionError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
