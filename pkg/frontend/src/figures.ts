/**
 * The six figure kinds emitted from experiment artifacts:
 *
 *  - error surface over (n, lambda2), one panel per reconstruction rule
 *  - total-error-vs-n curves
 *  - total-error-vs-lambda2 curves
 *  - type I / type II errors vs n, one colour family per alpha
 *  - recall-precision curves indexed by alpha, crossed by dashed n-isolines
 *  - ranked vote-frequency bars for one node's candidate list
 *
 * Every plotted value is a mean-over-trials aggregate row from the results
 * CSV (or a raw vote-matrix cell); the plotter never aggregates further.
 * Missing cells become gaps in the stroke, never interpolated segments.
 */

import { meanRows, ResultRow, SchemaError } from "./csv.js";
import {
  DEFAULT_FRAME,
  extentOf,
  fmt,
  Frame,
  heat,
  seriesColor,
  SvgDoc,
  xScale,
  yScale,
} from "./svg.js";

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function requireMeans(rows: ResultRow[]): ResultRow[] {
  const means = meanRows(rows);
  if (means.length === 0) {
    throw new SchemaError('no "mean" aggregate rows in the results CSV');
  }
  return means;
}

function cell(
  means: ResultRow[],
  match: Partial<Record<keyof ResultRow, unknown>>,
): ResultRow | null {
  const hits = means.filter((r) =>
    Object.entries(match).every(([k, v]) => r[k as keyof ResultRow] === v),
  );
  return hits.length > 0 ? hits[0] : null;
}

/** Error surface over (n, lambda2): a grid heatmap per reconstruction rule. */
export function errorSurface(rows: ResultRow[], frame: Frame = DEFAULT_FRAME): string {
  const means = requireMeans(rows).filter((r) => r.method === "N1");
  const rules = [...new Set(means.map((r) => r.rule))].sort();
  const ns = uniqueSorted(means.map((r) => r.n));
  const l2s = uniqueSorted(means.map((r) => r.lambda2));
  const totals = means.map((r) => r.total);
  const lo = Math.min(...totals);
  const hi = Math.max(...totals, lo + 1e-12);

  const doc = new SvgDoc(frame);
  const innerW = frame.width - frame.margin.left - frame.margin.right;
  const innerH = frame.height - frame.margin.top - frame.margin.bottom;
  const panelW = innerW / rules.length;
  doc.text(frame.width / 2, 20, "Total error over n and lambda2", "middle", 13, 'font-weight="bold"');
  rules.forEach((rule, pi) => {
    const px0 = frame.margin.left + pi * panelW;
    const cw = (panelW - 16) / l2s.length;
    const ch = innerH / ns.length;
    doc.text(px0 + (panelW - 16) / 2, frame.margin.top - 6, rule.toUpperCase(), "middle", 11);
    ns.forEach((n, ri) => {
      l2s.forEach((l2, ci) => {
        const hit = cell(means, { rule, n, lambda2: l2 });
        const x = px0 + ci * cw;
        const y = frame.margin.top + ri * ch;
        if (hit === null) {
          // missing cell: left as a visible gap (hatched outline only)
          doc.rect(x, y, cw - 1, ch - 1, "none", 'stroke="#bbb" stroke-dasharray="3,3"');
        } else {
          doc.rect(x, y, cw - 1, ch - 1, heat((hit.total - lo) / (hi - lo)));
        }
      });
      doc.text(px0 - 4, frame.margin.top + ri * ch + ch / 2 + 3, `n=${fmt(n)}`, "end", 9);
    });
    l2s.forEach((l2, ci) => {
      doc.text(
        px0 + ci * cw + cw / 2,
        frame.height - frame.margin.bottom + 14,
        fmt(l2),
        "middle",
        9,
      );
    });
  });
  doc.text(frame.width / 2, frame.height - 10, "lambda2", "middle", 12);
  doc.text(
    frame.margin.left - 44,
    frame.height / 2,
    `total error ${fmt(lo)}..${fmt(hi)} (dark = high)`,
    "middle",
    10,
    `transform="rotate(-90 ${fmt(frame.margin.left - 44)} ${fmt(frame.height / 2)})"`,
  );
  return doc.render();
}

interface CurveOptions {
  rule?: string;
  frame?: Frame;
}

function curveChart(
  means: ResultRow[],
  xKey: "n" | "lambda2",
  seriesKey: "n" | "lambda2",
  title: string,
  frame: Frame,
): string {
  const xs = uniqueSorted(means.map((r) => r[xKey]));
  const seriesVals = uniqueSorted(means.map((r) => r[seriesKey]));
  const doc = new SvgDoc(frame);
  const sx = xScale(extentOf(xs), frame);
  const sy = yScale(extentOf([0, ...means.map((r) => r.total)]), frame);
  doc.axes(sx, sy, xKey, "total error", title, xs);
  const legend: Array<{ label: string; color: string }> = [];
  seriesVals.forEach((sv, si) => {
    const pts = xs.map((x) => {
      const hit = cell(means, { [xKey]: x, [seriesKey]: sv });
      return hit === null ? null : ([sx.map(x), sy.map(hit.total)] as [number, number]);
    });
    const color = seriesColor(si);
    doc.path(pts, color);
    for (const pt of pts) if (pt !== null) doc.circle(pt[0], pt[1], 2.5, color);
    legend.push({ label: `${seriesKey}=${fmt(sv)}`, color });
  });
  doc.legend(legend);
  return doc.render();
}

/** Mean total error against sample size, one curve per lambda2 value. */
export function errorVsN(rows: ResultRow[], opts: CurveOptions = {}): string {
  const rule = opts.rule ?? "and";
  const means = requireMeans(rows).filter((r) => r.method === "N1" && r.rule === rule);
  if (means.length === 0) {
    throw new SchemaError(`no aggregate rows for rule "${rule}"`);
  }
  return curveChart(
    means,
    "n",
    "lambda2",
    `Total error vs n (${rule.toUpperCase()} rule)`,
    opts.frame ?? DEFAULT_FRAME,
  );
}

/** Mean total error against lambda2, one curve per sample size. */
export function errorVsLambda2(rows: ResultRow[], opts: CurveOptions = {}): string {
  const rule = opts.rule ?? "and";
  const means = requireMeans(rows).filter((r) => r.method === "N1" && r.rule === rule);
  if (means.length === 0) {
    throw new SchemaError(`no aggregate rows for rule "${rule}"`);
  }
  return curveChart(
    means,
    "lambda2",
    "n",
    `Total error vs lambda2 (${rule.toUpperCase()} rule)`,
    opts.frame ?? DEFAULT_FRAME,
  );
}

/** Type I and type II error curves vs n, one colour family per alpha. */
export function typeErrorsVsN(rows: ResultRow[], opts: CurveOptions = {}): string {
  const rule = opts.rule ?? "and";
  const frame = opts.frame ?? DEFAULT_FRAME;
  const means = requireMeans(rows).filter((r) => r.method === "N1" && r.rule === rule);
  if (means.length === 0) {
    throw new SchemaError(`no aggregate rows for rule "${rule}"`);
  }
  const alphas = uniqueSorted(means.map((r) => r.alpha));
  const ns = uniqueSorted(means.map((r) => r.n));
  const doc = new SvgDoc(frame);
  const sx = xScale(extentOf(ns), frame);
  const sy = yScale(
    extentOf([0, ...means.map((r) => r.type1), ...means.map((r) => r.type2)]),
    frame,
  );
  doc.axes(sx, sy, "n", "error rate", `Type I (solid) and type II (dashed) vs n (${rule.toUpperCase()})`, ns);
  const legend: Array<{ label: string; color: string; dashed?: boolean }> = [];
  alphas.forEach((alpha, ai) => {
    const color = seriesColor(ai);
    for (const [metric, dashed] of [
      ["type1", false],
      ["type2", true],
    ] as const) {
      const pts = ns.map((n) => {
        const hit = cell(means, { n, alpha });
        return hit === null ? null : ([sx.map(n), sy.map(hit[metric])] as [number, number]);
      });
      doc.path(pts, color, dashed);
    }
    legend.push({ label: `alpha=${fmt(alpha)}`, color });
  });
  doc.legend(legend);
  return doc.render();
}

/** Recall-precision curves per alpha, crossed by dashed n-isolines. */
export function recallPrecision(rows: ResultRow[], opts: CurveOptions = {}): string {
  const rule = opts.rule ?? "and";
  const frame = opts.frame ?? DEFAULT_FRAME;
  const means = requireMeans(rows).filter((r) => r.method === "N1" && r.rule === rule);
  if (means.length === 0) {
    throw new SchemaError(`no aggregate rows for rule "${rule}"`);
  }
  const alphas = uniqueSorted(means.map((r) => r.alpha));
  const ns = uniqueSorted(means.map((r) => r.n));
  const doc = new SvgDoc(frame);
  const sx = xScale(extentOf([0, 1]), frame);
  const sy = yScale(extentOf([0, 1]), frame);
  doc.axes(sx, sy, "recall", "precision", `Recall vs precision (${rule.toUpperCase()} rule)`);
  const legend: Array<{ label: string; color: string; dashed?: boolean }> = [];
  alphas.forEach((alpha, ai) => {
    const color = seriesColor(ai);
    const pts = ns.map((n) => {
      const hit = cell(means, { n, alpha });
      return hit === null ? null : ([sx.map(hit.recall), sy.map(hit.precision)] as [number, number]);
    });
    doc.path(pts, color);
    for (const pt of pts) if (pt !== null) doc.circle(pt[0], pt[1], 2.5, color);
    legend.push({ label: `alpha=${fmt(alpha)}`, color });
  });
  // n-isolines: same-n points joined across the alpha family, recall
  // increasing to the right as n grows
  for (const n of ns) {
    const pts = alphas.map((alpha) => {
      const hit = cell(means, { n, alpha });
      return hit === null ? null : ([sx.map(hit.recall), sy.map(hit.precision)] as [number, number]);
    });
    doc.path(pts, "#333", true);
    const anchor = pts.find((p) => p !== null);
    if (anchor) doc.text(anchor[0] + 4, anchor[1] - 5, `n=${fmt(n)}`, "start", 9);
  }
  legend.push({ label: "n-isolines", color: "#333", dashed: true });
  doc.legend(legend);
  return doc.render();
}

/** Ranked vote-frequency bars for one node's candidate list (1-based labels). */
export function voteFrequencies(
  matrix: number[][],
  node: number,
  frame: Frame = DEFAULT_FRAME,
): string {
  const p = matrix.length;
  if (!Number.isInteger(node) || node < 0 || node >= p) {
    throw new SchemaError(`node ${node} out of range for a ${p}-node vote matrix`);
  }
  const entries = matrix[node]
    .map((freq, vertex) => ({ freq, vertex }))
    .filter((e) => e.vertex !== node)
    .sort((a, b) => b.freq - a.freq || a.vertex - b.vertex);
  const doc = new SvgDoc(frame);
  const innerW = frame.width - frame.margin.left - frame.margin.right;
  const innerH = frame.height - frame.margin.top - frame.margin.bottom;
  const barW = innerW / entries.length;
  const maxFreq = Math.max(...entries.map((e) => e.freq), 1e-12);
  doc.text(
    frame.width / 2,
    20,
    `Ranked vote frequencies for node ${node + 1}`,
    "middle",
    13,
    'font-weight="bold"',
  );
  entries.forEach((e, i) => {
    const h = (e.freq / maxFreq) * innerH;
    const x = frame.margin.left + i * barW;
    const y = frame.height - frame.margin.bottom - h;
    doc.rect(x, y, Math.max(barW - 2, 1), h, seriesColor(0));
    doc.text(x + barW / 2, frame.height - frame.margin.bottom + 12, String(e.vertex + 1), "middle", 8);
    if (e.freq > 0) {
      doc.text(x + barW / 2, y - 3, fmt(e.freq), "middle", 8);
    }
  });
  doc.text(frame.width / 2, frame.height - 10, "candidate vertex (ranked)", "middle", 12);
  doc.line(
    frame.margin.left,
    frame.height - frame.margin.bottom,
    frame.width - frame.margin.right,
    frame.height - frame.margin.bottom,
    "#333",
  );
  return doc.render();
}
