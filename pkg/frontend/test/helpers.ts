import { CSV_COLUMNS } from "../src/schema.js";

export interface RowSpec {
  probe: string;
  scheme: string;
  n: number;
  phi: number;
  lambda: number;
  biasTheory: number;
  mse: number;
}

export function makeCsv(rows: RowSpec[], columns: readonly string[] = CSV_COLUMNS): string {
  const lines = [columns.join(",")];
  for (const r of rows) {
    const record: Record<string, string | number> = {
      probe: r.probe,
      scheme: r.scheme,
      n: r.n,
      phi: r.phi,
      delta: 0.05,
      lambda: r.lambda,
      M: 1000000000,
      accounting: "copies",
      seed: 7,
      mu_ideal: 0.2,
      mu_scheme: 0.19,
      bias_theory: r.biasTheory,
      bias_emp: r.biasTheory * 1.01,
      stat_theory: 1e-10,
      stat_emp: 1.1e-10,
      mse: r.mse,
    };
    lines.push(columns.map((c) => String(record[c] ?? "")).join(","));
  }
  return lines.join("\n") + "\n";
}

export function gridRows(
  probes: string[],
  lambdas: number[],
  schemes: Array<[string, number]>,
  phiCount = 5,
): RowSpec[] {
  const rows: RowSpec[] = [];
  for (const probe of probes) {
    for (const lambda of lambdas) {
      for (const [scheme, n] of schemes) {
        for (let k = 0; k < phiCount; k++) {
          const phi = -0.15 + (0.3 * k) / (phiCount - 1);
          const bias = 1e-3 * (n + 1) * (Math.abs(phi) + 0.01);
          rows.push({ probe, scheme, n, phi, lambda, biasTheory: bias, mse: bias * bias * 1.2 });
        }
      }
    }
  }
  return rows;
}
