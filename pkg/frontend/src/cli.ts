/**
 * plot --csv PATH --out DIR [--probe NAME]
 *
 * Renders one SVG per (probe, lambda) cell of a sweep CSV and writes a
 * manifest with the input hash and per-panel output hashes.  Re-running on
 * identical input produces identical files and an identical manifest.
 */

import { createHash } from "node:crypto";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { basename, join } from "node:path";

import { buildPanels, panelFileName } from "./panels.js";
import { parseSweepCsv, SchemaError } from "./schema.js";
import { renderPanelSvg } from "./svg.js";

const TOOL = "vpmetrology-plots 0.1.0";

interface PlotArgs {
  csv: string;
  out: string;
  probe?: string;
}

function usage(): string {
  return "usage: plot --csv PATH --out DIR [--probe NAME]";
}

function parseArgs(argv: string[]): PlotArgs {
  if (argv[0] !== "plot") {
    throw new Error(`unknown command ${argv[0] ?? "(none)"}; ${usage()}`);
  }
  const args: Partial<PlotArgs> = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}; ${usage()}`);
    if (flag === "--csv") args.csv = value;
    else if (flag === "--out") args.out = value;
    else if (flag === "--probe") args.probe = value;
    else throw new Error(`unknown flag ${flag}; ${usage()}`);
  }
  if (!args.csv || !args.out) throw new Error(usage());
  return args as PlotArgs;
}

const sha256 = (data: string | Buffer): string =>
  createHash("sha256").update(data).digest("hex");

export function runPlot(args: PlotArgs): string[] {
  const csvBytes = readFileSync(args.csv);
  const rows = parseSweepCsv(csvBytes.toString("utf-8"));
  const panels = buildPanels(rows, args.probe);
  mkdirSync(args.out, { recursive: true });

  const manifestPanels = [];
  const written: string[] = [];
  for (const panel of panels) {
    const svg = renderPanelSvg(panel);
    const file = panelFileName(panel);
    writeFileSync(join(args.out, file), svg);
    written.push(file);
    manifestPanels.push({
      file,
      probe: panel.probe,
      lambda: panel.lambda,
      schemes: panel.series.map((s) => s.scheme),
      rows: panel.rowCount,
      sha256: sha256(svg),
    });
  }
  const manifest = {
    tool: TOOL,
    csv: { file: basename(args.csv), sha256: sha256(csvBytes) },
    panels: manifestPanels,
  };
  writeFileSync(join(args.out, "manifest.json"), JSON.stringify(manifest, null, 2) + "\n");
  return written;
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const files = runPlot(args);
    console.log(`wrote ${files.length} panel(s) and manifest.json to ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (process.argv[1] && basename(process.argv[1]) === "cli.js") {
  process.exit(main(process.argv.slice(2)));
}
