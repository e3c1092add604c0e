#!/usr/bin/env node
/**
 * emit --kind <surface|curves|rp|votes> --in <csv> --out <fig.svg> [flags]
 *
 * kinds:
 *   surface          error heatmap over (n, lambda2), one panel per rule
 *   curves           total-error curves; --x n (default) or --x lambda2,
 *                    --errors split draws type I/II per-alpha families
 *   rp               recall-precision curves with alpha and n families
 *   votes            ranked vote-frequency bars; reads a vote-matrix CSV,
 *                    --node <1-based vertex> selects the row
 * flags:
 *   --rule and|or    reconstruction rule to plot (default and)
 */

import { readFileSync, writeFileSync, existsSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";
import { parseResults, parseVoteMatrix } from "./csv.js";
import {
  errorSurface,
  errorVsLambda2,
  errorVsN,
  recallPrecision,
  typeErrorsVsN,
  voteFrequencies,
} from "./figures.js";

interface Args {
  command: string;
  kind: string;
  input: string;
  output: string;
  rule: string;
  x: string;
  errors: string;
  node: number;
}

export function parseArgs(argv: string[]): Args {
  const args: Args = {
    command: argv[0] ?? "",
    kind: "",
    input: "",
    output: "",
    rule: "and",
    x: "n",
    errors: "total",
    node: 1,
  };
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      throw new Error(`flag ${flag} is missing a value`);
    }
    switch (flag) {
      case "--kind":
        args.kind = value;
        break;
      case "--in":
        args.input = value;
        break;
      case "--out":
        args.output = value;
        break;
      case "--rule":
        args.rule = value;
        break;
      case "--x":
        args.x = value;
        break;
      case "--errors":
        args.errors = value;
        break;
      case "--node":
        args.node = Number(value);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (args.command !== "emit") {
    throw new Error(`unknown command "${args.command}"; only "emit" is supported`);
  }
  for (const [name, v] of [
    ["--kind", args.kind],
    ["--in", args.input],
    ["--out", args.output],
  ] as const) {
    if (!v) throw new Error(`${name} is required`);
  }
  return args;
}

export function emit(args: Args): void {
  const text = readFileSync(args.input, "utf8");
  let svg: string;
  switch (args.kind) {
    case "surface":
      svg = errorSurface(parseResults(text));
      break;
    case "curves": {
      const rows = parseResults(text);
      if (args.errors === "split") {
        svg = typeErrorsVsN(rows, { rule: args.rule });
      } else if (args.x === "lambda2") {
        svg = errorVsLambda2(rows, { rule: args.rule });
      } else {
        svg = errorVsN(rows, { rule: args.rule });
      }
      break;
    }
    case "rp":
      svg = recallPrecision(parseResults(text), { rule: args.rule });
      break;
    case "votes":
      svg = voteFrequencies(parseVoteMatrix(text), args.node - 1);
      break;
    default:
      throw new Error(`unknown kind "${args.kind}" (surface|curves|rp|votes)`);
  }
  const dir = dirname(args.output);
  if (dir && !existsSync(dir)) mkdirSync(dir, { recursive: true });
  writeFileSync(args.output, svg);
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");

if (invokedDirectly) {
  try {
    emit(parseArgs(process.argv.slice(2)));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(2);
  }
}
