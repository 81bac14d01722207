#!/usr/bin/env node
/**
 * fsrk-plots: render figures from fsrk CSV exports.
 *
 *   fsrk-plots region   --in scan.csv [--in scan2.csv ...] --out region.svg
 *                       [--label name ...] [--title text]
 *   fsrk-plots snapshot --in run.csv [--in run2.csv ...] --out fig.svg
 *                       [--time t] [--label name ...] [--title text]
 *
 * Metadata sidecars (<csv>.meta.json) are picked up automatically when
 * present. Exit codes: 0 success, 1 schema mismatch or bad input, 2 usage.
 */

import { existsSync, writeFileSync } from "node:fs";
import process from "node:process";

import { SchemaError, readMetadata, readRegion, readSnapshot } from "./csv.js";
import { RegionInput, plotRegion } from "./regionPlot.js";
import { SnapshotInput, plotSnapshot } from "./snapshotPlot.js";

interface Args {
  command: string;
  inputs: string[];
  labels: string[];
  out?: string;
  time?: number;
  title: string;
}

export function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  const args: Args = { command: command ?? "", inputs: [], labels: [], title: "" };
  for (let k = 0; k < rest.length; k++) {
    const flag = rest[k];
    const need = (): string => {
      const value = rest[++k];
      if (value === undefined) throw new UsageError(`${flag} needs a value`);
      return value;
    };
    switch (flag) {
      case "--in":
        args.inputs.push(need());
        break;
      case "--label":
        args.labels.push(need());
        break;
      case "--out":
        args.out = need();
        break;
      case "--time":
        args.time = Number(need());
        break;
      case "--title":
        args.title = need();
        break;
      default:
        throw new UsageError(`unknown flag ${flag}`);
    }
  }
  return args;
}

export class UsageError extends Error {}

function runRegion(args: Args): string {
  const inputs: RegionInput[] = args.inputs.map((path, index) => {
    const metaPath = `${path}.meta.json`;
    return {
      grid: readRegion(path),
      meta: existsSync(metaPath) ? readMetadata(metaPath) : undefined,
      label: args.labels[index],
    };
  });
  return plotRegion(inputs, args.title);
}

function runSnapshot(args: Args): string {
  const inputs: SnapshotInput[] = args.inputs.map((path, index) => ({
    snapshot: readSnapshot(path),
    label: args.labels[index],
  }));
  return plotSnapshot(inputs, args.time, args.title);
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
    if (!["region", "snapshot"].includes(args.command)) {
      throw new UsageError("command must be 'region' or 'snapshot'");
    }
    if (args.inputs.length === 0) throw new UsageError("need at least one --in");
    if (!args.out) throw new UsageError("need --out");
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  try {
    const svg = args.command === "region" ? runRegion(args) : runSnapshot(args);
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema mismatch: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      console.error(`missing input: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
