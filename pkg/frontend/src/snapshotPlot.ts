/**
 * Solution snapshots: the two species of a reaction-diffusion state
 * (first half of the state vector on top, second half below) against
 * x in [0, 1], one colored series per input run, at the snapshot
 * nearest a requested time (default: the last one).
 */

import { Snapshot } from "./csv.js";
import {
  Frame,
  SERIES_COLORS,
  axes,
  document as svgDocument,
  polyline,
} from "./svg.js";

export interface SnapshotInput {
  snapshot: Snapshot;
  label?: string;
}

function pickRow(snapshot: Snapshot, time?: number): number {
  if (time === undefined) return snapshot.times.length - 1;
  let best = 0;
  for (let k = 1; k < snapshot.times.length; k++) {
    if (Math.abs(snapshot.times[k] - time) < Math.abs(snapshot.times[best] - time)) {
      best = k;
    }
  }
  return best;
}

function panel(
  series: { values: number[]; label?: string }[],
  yLabel: string,
  offsetY: number,
  width: number,
  height: number,
): string {
  const all = series.flatMap((s) => s.values);
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const pad = 0.05 * (hi - lo || 1);
  const frame: Frame = {
    width,
    height,
    margin: 44,
    xMin: 0,
    xMax: 1,
    yMin: lo - pad,
    yMax: hi + pad,
  };
  const parts: string[] = [`<g transform="translate(0 ${offsetY})">`];
  parts.push(axes(frame, "x", yLabel));
  series.forEach((s, index) => {
    const color = SERIES_COLORS[index % SERIES_COLORS.length];
    const n = s.values.length;
    const points: [number, number][] = s.values.map(
      (v, j) => [j / (n - 1), v] as [number, number],
    );
    parts.push(polyline(points, frame, color));
    if (s.label) {
      parts.push(
        `<text x="${width - frame.margin - 6}" y="${frame.margin + 14 + 14 * index}" ` +
          `font-size="11" text-anchor="end" fill="${color}">${s.label}</text>`,
      );
    }
  });
  parts.push("</g>");
  return parts.join("\n");
}

export function plotSnapshot(
  inputs: SnapshotInput[],
  time?: number,
  title = "",
): string {
  if (inputs.length === 0) throw new Error("no snapshot inputs");
  const width = 640;
  const panelHeight = 260;
  const tops: { values: number[]; label?: string }[] = [];
  const bottoms: { values: number[]; label?: string }[] = [];
  let stampedTime = 0;
  for (const input of inputs) {
    const row = pickRow(input.snapshot, time);
    const state = input.snapshot.states[row];
    stampedTime = input.snapshot.times[row];
    const half = Math.floor(state.length / 2);
    tops.push({ values: state.slice(0, half), label: input.label });
    bottoms.push({ values: state.slice(half), label: input.label });
  }
  const header = title || `solution at t = ${stampedTime}`;
  const body = [
    `<text x="${width / 2}" y="16" font-size="13" text-anchor="middle">${header}</text>`,
    panel(tops, "T", 20, width, panelHeight),
    panel(bottoms, "C", 20 + panelHeight, width, panelHeight),
  ].join("\n");
  return svgDocument(width, 20 + 2 * panelHeight + 10, body);
}
