/**
 * Stability-region figures from region-scan grids.
 *
 * The |R| = 1 boundary is contoured with d3-contour on the clipped
 * magnitude field; contour polygons keep their interior rings, so holes
 * in the stability region render as excluded automatically (even-odd
 * fill). Poles from the metadata sidecar are marked with crosses.
 */

import { contours } from "d3-contour";

import { RegionGrid, RegionMetadata } from "./csv.js";
import {
  Frame,
  SERIES_COLORS,
  axes,
  crossMarker,
  document as svgDocument,
  xPixel,
  yPixel,
} from "./svg.js";

const CLIP = 8; // |R| values above this (incl. Infinity) saturate

export interface RegionInput {
  grid: RegionGrid;
  meta?: RegionMetadata;
  label?: string;
}

function boundaryPath(grid: RegionGrid, frame: Frame): string[] {
  const nRe = grid.re.length;
  const nIm = grid.im.length;
  // reflect the clipped magnitude so polygons enclose the *stable* set
  // (CLIP - |R| >= CLIP - 1 exactly where |R| <= 1); unstable islands
  // inside it become interior rings
  const values = new Float64Array(nRe * nIm);
  for (let i = 0; i < nIm; i++) {
    for (let j = 0; j < nRe; j++) {
      const v = grid.absR[i][j];
      values[i * nRe + j] = CLIP - (Number.isFinite(v) ? Math.min(v, CLIP) : CLIP);
    }
  }
  const generator = contours().size([nRe, nIm]).thresholds([CLIP - 1.0]);
  const [level] = generator(Array.from(values));
  const toData = (gx: number, gy: number): [number, number] => {
    const re = grid.re[0] + (gx / (nRe - 1)) * (grid.re[nRe - 1] - grid.re[0]);
    const im = grid.im[0] + (gy / (nIm - 1)) * (grid.im[nIm - 1] - grid.im[0]);
    return [re, im];
  };
  return level.coordinates.map((polygon) => {
    let d = "";
    for (const ring of polygon) {
      ring.forEach(([gx, gy], k) => {
        const [re, im] = toData(gx, gy);
        d += `${k === 0 ? "M" : "L"}${xPixel(frame, re).toFixed(2)},` +
          `${yPixel(frame, im).toFixed(2)}`;
      });
      d += "Z";
    }
    return d;
  });
}

export function plotRegion(inputs: RegionInput[], title = ""): string {
  if (inputs.length === 0) throw new Error("no region inputs");
  const first = inputs[0].grid;
  const frame: Frame = {
    width: 640,
    height: 560,
    margin: 48,
    xMin: first.re[0],
    xMax: first.re[first.re.length - 1],
    yMin: first.im[0],
    yMax: first.im[first.im.length - 1],
  };
  const parts: string[] = [];
  parts.push(axes(frame, "Re z", "Im z"));
  if (title) {
    parts.push(
      `<text x="${frame.width / 2}" y="18" font-size="13" ` +
        `text-anchor="middle">${title}</text>`,
    );
  }
  const fillRegion = inputs.length === 1;
  inputs.forEach((input, index) => {
    const color = SERIES_COLORS[index % SERIES_COLORS.length];
    for (const d of boundaryPath(input.grid, frame)) {
      const fill = fillRegion
        ? ` fill="${color}" fill-opacity="0.12" fill-rule="evenodd"`
        : ` fill="none"`;
      parts.push(
        `<path class="stability-boundary" d="${d}"${fill} ` +
          `stroke="${color}" stroke-width="1.5"/>`,
      );
    }
    if (input.label) {
      parts.push(
        `<text x="${frame.width - frame.margin - 6}" ` +
          `y="${frame.margin + 14 + 14 * index}" font-size="11" ` +
          `text-anchor="end" fill="${color}">${input.label}</text>`,
      );
    }
    const poles = input.meta?.poles ?? [];
    for (const [re, im] of poles) {
      if (re >= frame.xMin && re <= frame.xMax && im >= frame.yMin && im <= frame.yMax) {
        parts.push(crossMarker(frame, re, im, color));
      }
    }
  });
  return svgDocument(frame.width, frame.height, parts.join("\n"));
}
