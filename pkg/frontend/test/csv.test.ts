import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import {
  meanRows,
  parseResults,
  parseVoteMatrix,
  RESULT_COLUMNS,
  SchemaError,
  trialRows,
} from "../src/csv.js";

const golden = readFileSync(new URL("./golden/results.csv", import.meta.url), "utf8");

describe("parseResults", () => {
  it("reads the golden results file", () => {
    const rows = parseResults(golden);
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0].graph_family).toBe("star");
    expect(rows[0].p).toBe(9);
    expect(typeof rows[0].total).toBe("number");
  });

  it("separates trial rows from aggregates", () => {
    const rows = parseResults(golden);
    const trials = trialRows(rows);
    const means = meanRows(rows);
    expect(trials.length + means.length).toBeLessThan(rows.length + 1);
    expect(means.every((r) => r.trial === "mean")).toBe(true);
    expect(trials.every((r) => Number.isInteger(r.trial))).toBe(true);
  });

  it("rejects an empty file", () => {
    expect(() => parseResults("")).toThrow(SchemaError);
  });

  it("rejects a header-only file", () => {
    expect(() => parseResults(RESULT_COLUMNS.join(",") + "\n")).toThrow(/no data rows/);
  });

  it("names a missing column", () => {
    const broken = golden.replace("graph_family", "family");
    expect(() => parseResults(broken)).toThrow(/column 2 must be "graph_family"/);
  });

  it("names an unparseable numeric column", () => {
    const lines = golden.split("\n");
    const cells = lines[1].split(",");
    cells[16] = "oops"; // "total"
    lines[1] = cells.join(",");
    expect(() => parseResults(lines.join("\n"))).toThrow(/column "total".*oops/);
  });

  it("rejects ragged rows", () => {
    const lines = golden.split("\n");
    lines[1] = lines[1] + ",extra";
    expect(() => parseResults(lines.join("\n"))).toThrow(/cells, expected/);
  });
});

describe("parseVoteMatrix", () => {
  it("reads the golden vote matrix", () => {
    const text = readFileSync(new URL("./golden/votes_L.csv", import.meta.url), "utf8");
    const m = parseVoteMatrix(text);
    expect(m.length).toBe(9);
    expect(m.every((row) => row.length === 9)).toBe(true);
    expect(m[0][0]).toBe(0);
  });

  it("rejects non-square input", () => {
    expect(() => parseVoteMatrix("1,2\n3\n")).toThrow(/square/);
  });

  it("rejects empty input", () => {
    expect(() => parseVoteMatrix("")).toThrow(SchemaError);
  });
});
