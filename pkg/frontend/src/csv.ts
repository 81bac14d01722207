/**
 * Parsers for the two CSV contracts emitted by the fsrk CLI.
 *
 * Region scans: header `re,im,absR,stable,component`, one row per grid
 * point, row-major over a rectangular grid. Trajectory snapshots:
 * header `t,y_1,...,y_n`. Both fail loudly on schema mismatch, naming
 * the missing column.
 */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface RegionGrid {
  re: number[];
  im: number[];
  /** absR[i][j] at im[i], re[j]; Infinity where the scan hit a pole */
  absR: number[][];
  stable: boolean[][];
  component: number[][];
}

export interface RegionMetadata {
  scheme: string;
  ray_weights: number[];
  poles: [number, number][];
  intercept: number | null;
  holes?: { bounding_box: number[]; cells: number }[];
}

export interface Snapshot {
  times: number[];
  /** states[row][k] = y_{k+1} at times[row] */
  states: number[][];
}

const REGION_HEADER = ["re", "im", "absR", "stable", "component"];

function splitLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.length > 0);
}

function parseValue(raw: string, line: number, column: string): number {
  if (raw === "inf") return Infinity;
  const value = Number(raw);
  if (!Number.isFinite(value) && raw !== "inf") {
    throw new SchemaError(
      `line ${line}: column '${column}' has non-numeric value '${raw}'`,
    );
  }
  return value;
}

export function parseRegionCsv(text: string): RegionGrid {
  const lines = splitLines(text);
  if (lines.length < 2) throw new SchemaError("region CSV has no data rows");
  const header = lines[0].split(",");
  for (const column of REGION_HEADER) {
    if (!header.includes(column)) {
      throw new SchemaError(`region CSV missing column '${column}'`);
    }
  }
  const index = REGION_HEADER.map((column) => header.indexOf(column));

  const reSeen: number[] = [];
  const imSeen: number[] = [];
  const rows: [number, number, number, number, number][] = [];
  for (let k = 1; k < lines.length; k++) {
    const parts = lines[k].split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(`line ${k + 1}: expected ${header.length} fields`);
    }
    const [re, im, absR, stable, component] = index.map((i, which) =>
      parseValue(parts[i], k + 1, REGION_HEADER[which]),
    );
    if (reSeen.length === 0 || re > reSeen[reSeen.length - 1]) reSeen.push(re);
    if (imSeen.length === 0 || im > imSeen[imSeen.length - 1]) imSeen.push(im);
    rows.push([re, im, absR, stable, component]);
  }
  const nRe = reSeen.length;
  const nIm = imSeen.length;
  if (nRe * nIm !== rows.length) {
    throw new SchemaError(
      `region CSV is not a rectangular grid: ${rows.length} rows, ` +
        `inferred ${nIm} x ${nRe}`,
    );
  }
  const absR: number[][] = [];
  const stable: boolean[][] = [];
  const component: number[][] = [];
  for (let i = 0; i < nIm; i++) {
    absR.push(new Array<number>(nRe));
    stable.push(new Array<boolean>(nRe));
    component.push(new Array<number>(nRe));
  }
  rows.forEach(([, , a, s, c], flat) => {
    const i = Math.floor(flat / nRe);
    const j = flat % nRe;
    absR[i][j] = a;
    stable[i][j] = s !== 0;
    component[i][j] = c;
  });
  return { re: reSeen, im: imSeen, absR, stable, component };
}

export function parseSnapshotCsv(text: string): Snapshot {
  const lines = splitLines(text);
  if (lines.length < 2) throw new SchemaError("snapshot CSV has no data rows");
  const header = lines[0].split(",");
  if (header[0] !== "t") {
    throw new SchemaError("snapshot CSV missing column 't'");
  }
  for (let k = 1; k < header.length; k++) {
    if (header[k] !== `y_${k}`) {
      throw new SchemaError(`snapshot CSV missing column 'y_${k}'`);
    }
  }
  if (header.length < 3) {
    throw new SchemaError("snapshot CSV needs at least two state columns");
  }
  const times: number[] = [];
  const states: number[][] = [];
  for (let k = 1; k < lines.length; k++) {
    const parts = lines[k].split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(`line ${k + 1}: expected ${header.length} fields`);
    }
    times.push(parseValue(parts[0], k + 1, "t"));
    states.push(parts.slice(1).map((v, j) => parseValue(v, k + 1, `y_${j + 1}`)));
  }
  return { times, states };
}

export function readRegion(path: string): RegionGrid {
  return parseRegionCsv(readFileSync(path, "utf8"));
}

export function readSnapshot(path: string): Snapshot {
  return parseSnapshotCsv(readFileSync(path, "utf8"));
}

export function readMetadata(path: string): RegionMetadata {
  const doc = JSON.parse(readFileSync(path, "utf8"));
  if (!Array.isArray(doc.poles)) {
    throw new SchemaError("metadata sidecar missing 'poles' list");
  }
  return doc as RegionMetadata;
}
