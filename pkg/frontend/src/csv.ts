/**
 * Strict readers for the two tabular artifacts produced by the experiment
 * harness: the results CSV (typed, fixed column set) and the headerless
 * square vote-matrix CSV.
 */

export const RESULT_COLUMNS = [
  "run_id",
  "graph_family",
  "p",
  "d",
  "rho",
  "model",
  "k",
  "n",
  "lambda1",
  "lambda2",
  "alpha",
  "rule",
  "method",
  "trial",
  "type1",
  "type2",
  "total",
  "precision",
  "recall",
  "tp",
  "fp",
  "fn",
  "tn",
  "seed",
] as const;

export type ResultColumn = (typeof RESULT_COLUMNS)[number];

const STRING_COLUMNS: ReadonlySet<ResultColumn> = new Set([
  "run_id",
  "graph_family",
  "model",
  "rule",
  "method",
]);

const INT_COLUMNS: ReadonlySet<ResultColumn> = new Set([
  "p",
  "d",
  "k",
  "n",
  "seed",
  "trial",
]);

// integral in per-trial rows, fractional in mean/std aggregate rows
const COUNT_COLUMNS: ReadonlySet<ResultColumn> = new Set(["tp", "fp", "fn", "tn"]);

/** One results row; `trial` is a trial index or "mean" / "std". */
export interface ResultRow {
  run_id: string;
  graph_family: string;
  p: number;
  d: number;
  rho: number;
  model: string;
  k: number;
  n: number;
  lambda1: number;
  lambda2: number;
  alpha: number;
  rule: string;
  method: string;
  trial: number | "mean" | "std";
  type1: number;
  type2: number;
  total: number;
  precision: number;
  recall: number;
  tp: number;
  fp: number;
  fn: number;
  tn: number;
  seed: number;
}

export class SchemaError extends Error {}

/** Parse the results CSV text; any deviation names the offending column. */
export function parseResults(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header line");
  }
  const header = lines[0].split(",");
  for (let i = 0; i < RESULT_COLUMNS.length; i++) {
    if (header[i] !== RESULT_COLUMNS[i]) {
      throw new SchemaError(
        `column ${i + 1} must be "${RESULT_COLUMNS[i]}", found "${header[i] ?? ""}"`,
      );
    }
  }
  if (header.length !== RESULT_COLUMNS.length) {
    throw new SchemaError(
      `unexpected extra column "${header[RESULT_COLUMNS.length]}"`,
    );
  }
  if (lines.length === 1) {
    throw new SchemaError("empty CSV: header but no data rows");
  }
  const rows: ResultRow[] = [];
  for (let li = 1; li < lines.length; li++) {
    const cells = lines[li].split(",");
    if (cells.length !== RESULT_COLUMNS.length) {
      throw new SchemaError(
        `row ${li + 1} has ${cells.length} cells, expected ${RESULT_COLUMNS.length}`,
      );
    }
    const row: Record<string, string | number> = {};
    const isAggregate = cells[RESULT_COLUMNS.indexOf("trial")] === "mean"
      || cells[RESULT_COLUMNS.indexOf("trial")] === "std";
    for (let ci = 0; ci < RESULT_COLUMNS.length; ci++) {
      const col = RESULT_COLUMNS[ci];
      const raw = cells[ci];
      if (STRING_COLUMNS.has(col)) {
        row[col] = raw;
        continue;
      }
      if (col === "trial" && (raw === "mean" || raw === "std")) {
        row[col] = raw;
        continue;
      }
      const num = Number(raw);
      if (raw === "" || Number.isNaN(num)) {
        throw new SchemaError(
          `column "${col}" (row ${li + 1}): cannot parse "${raw}" as a number`,
        );
      }
      const mustBeInt =
        INT_COLUMNS.has(col) || (COUNT_COLUMNS.has(col) && !isAggregate);
      if (mustBeInt && !Number.isInteger(num)) {
        throw new SchemaError(
          `column "${col}" (row ${li + 1}): expected an integer, found "${raw}"`,
        );
      }
      row[col] = num;
    }
    rows.push(row as unknown as ResultRow);
  }
  return rows;
}

/** Parse a headerless square vote-matrix CSV into a row-major matrix. */
export function parseVoteMatrix(text: string): number[][] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty vote matrix CSV");
  }
  const matrix = lines.map((line, li) =>
    line.split(",").map((cell) => {
      const num = Number(cell);
      if (cell === "" || Number.isNaN(num)) {
        throw new SchemaError(`row ${li + 1}: cannot parse "${cell}" as a number`);
      }
      return num;
    }),
  );
  const p = matrix.length;
  for (let i = 0; i < p; i++) {
    if (matrix[i].length !== p) {
      throw new SchemaError(
        `row ${i + 1} has ${matrix[i].length} cells, expected ${p} (square matrix)`,
      );
    }
  }
  return matrix;
}

/** Rows holding per-trial measurements (aggregates excluded). */
export function trialRows(rows: ResultRow[]): ResultRow[] {
  return rows.filter((r) => typeof r.trial === "number");
}

/** Rows holding the documented mean-over-trials aggregates. */
export function meanRows(rows: ResultRow[]): ResultRow[] {
  return rows.filter((r) => r.trial === "mean");
}
