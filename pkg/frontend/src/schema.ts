/**
 * The fixed sweep CSV schema and its parser.
 *
 * Plotting never recomputes statistics: theory lines and empirical markers
 * for a (scheme, phi) point both come from the same parsed row.
 */

export const CSV_COLUMNS = [
  "probe",
  "scheme",
  "n",
  "phi",
  "delta",
  "lambda",
  "M",
  "accounting",
  "seed",
  "mu_ideal",
  "mu_scheme",
  "bias_theory",
  "bias_emp",
  "stat_theory",
  "stat_emp",
  "mse",
] as const;

export interface SweepRow {
  probe: string;
  scheme: string; // noisy | qec | vp
  n: number;
  phi: number;
  delta: number;
  lambda: number;
  m: number;
  accounting: string;
  seed: number;
  muIdeal: number;
  muScheme: number;
  biasTheory: number;
  biasEmp: number;
  statTheory: number;
  statEmp: number;
  mse: number;
}

export class SchemaError extends Error {}

function splitCsvLine(line: string): string[] {
  // the schema is purely numeric/identifier valued; quoting never occurs
  return line.split(",").map((c) => c.trim());
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new SchemaError("CSV is empty");
  }
  const header = splitCsvLine(lines[0]);
  const expected = [...CSV_COLUMNS];
  const missing = expected.filter((c) => !header.includes(c));
  const extra = header.filter((c) => !(expected as string[]).includes(c));
  if (missing.length > 0 || extra.length > 0) {
    throw new SchemaError(
      `CSV header does not match the sweep schema` +
        (missing.length ? `; missing: ${missing.join(", ")}` : "") +
        (extra.length ? `; unexpected: ${extra.join(", ")}` : ""),
    );
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const col = (cells: string[], name: (typeof CSV_COLUMNS)[number]) =>
    cells[index.get(name)!];
  const num = (cells: string[], name: (typeof CSV_COLUMNS)[number], line: number) => {
    const raw = col(cells, name);
    const value = Number(raw);
    if (raw === undefined || raw === "" || Number.isNaN(value)) {
      throw new SchemaError(`line ${line}: column ${name} has non-numeric value ${raw}`);
    }
    return value;
  };

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = splitCsvLine(lines[i]);
    if (cells.length !== header.length) {
      throw new SchemaError(`line ${i + 1}: expected ${header.length} cells, got ${cells.length}`);
    }
    rows.push({
      probe: col(cells, "probe"),
      scheme: col(cells, "scheme"),
      n: num(cells, "n", i + 1),
      phi: num(cells, "phi", i + 1),
      delta: num(cells, "delta", i + 1),
      lambda: num(cells, "lambda", i + 1),
      m: num(cells, "M", i + 1),
      accounting: col(cells, "accounting"),
      seed: num(cells, "seed", i + 1),
      muIdeal: num(cells, "mu_ideal", i + 1),
      muScheme: num(cells, "mu_scheme", i + 1),
      biasTheory: num(cells, "bias_theory", i + 1),
      biasEmp: num(cells, "bias_emp", i + 1),
      statTheory: num(cells, "stat_theory", i + 1),
      statEmp: num(cells, "stat_emp", i + 1),
      mse: num(cells, "mse", i + 1),
    });
  }
  if (rows.length === 0) {
    throw new SchemaError("CSV has a header but no data rows");
  }
  return rows;
}
