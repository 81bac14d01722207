/** Minimal SVG assembly: figures are built as plain strings, no DOM. */

export interface Frame {
  width: number;
  height: number;
  margin: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export function xPixel(frame: Frame, x: number): number {
  const inner = frame.width - 2 * frame.margin;
  return frame.margin + ((x - frame.xMin) / (frame.xMax - frame.xMin)) * inner;
}

export function yPixel(frame: Frame, y: number): number {
  const inner = frame.height - 2 * frame.margin;
  return frame.height - frame.margin - ((y - frame.yMin) / (frame.yMax - frame.yMin)) * inner;
}

function ticks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12; v += chosen) {
    out.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return out;
}

export function axes(frame: Frame, xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  const x0 = frame.margin;
  const x1 = frame.width - frame.margin;
  const y0 = frame.margin;
  const y1 = frame.height - frame.margin;
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${x1 - x0}" height="${y1 - y0}" ` +
      `fill="none" stroke="#444" stroke-width="1"/>`,
  );
  for (const t of ticks(frame.xMin, frame.xMax, 8)) {
    const px = xPixel(frame, t);
    parts.push(`<line x1="${px}" y1="${y1}" x2="${px}" y2="${y1 + 4}" stroke="#444"/>`);
    parts.push(
      `<text x="${px}" y="${y1 + 16}" font-size="10" text-anchor="middle">` +
        `${formatTick(t)}</text>`,
    );
  }
  for (const t of ticks(frame.yMin, frame.yMax, 8)) {
    const py = yPixel(frame, t);
    parts.push(`<line x1="${x0 - 4}" y1="${py}" x2="${x0}" y2="${py}" stroke="#444"/>`);
    parts.push(
      `<text x="${x0 - 6}" y="${py + 3}" font-size="10" text-anchor="end">` +
        `${formatTick(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${frame.height - 4}" font-size="11" ` +
      `text-anchor="middle">${xLabel}</text>`,
  );
  parts.push(
    `<text x="12" y="${(y0 + y1) / 2}" font-size="11" text-anchor="middle" ` +
      `transform="rotate(-90 12 ${(y0 + y1) / 2})">${yLabel}</text>`,
  );
  return parts.join("\n");
}

function formatTick(v: number): string {
  const rounded = Math.round(v * 1e6) / 1e6;
  return String(rounded);
}

export function polyline(
  points: [number, number][],
  frame: Frame,
  stroke: string,
  width = 1.5,
  dash = "",
): string {
  const attr = dash ? ` stroke-dasharray="${dash}"` : "";
  const path = points
    .map(([x, y]) => `${xPixel(frame, x).toFixed(2)},${yPixel(frame, y).toFixed(2)}`)
    .join(" ");
  return `<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${attr} points="${path}"/>`;
}

export function crossMarker(frame: Frame, x: number, y: number, color: string): string {
  const px = xPixel(frame, x);
  const py = yPixel(frame, y);
  const r = 4;
  return (
    `<g stroke="${color}" stroke-width="1.5" class="pole-marker">` +
    `<line x1="${px - r}" y1="${py - r}" x2="${px + r}" y2="${py + r}"/>` +
    `<line x1="${px - r}" y1="${py + r}" x2="${px + r}" y2="${py - r}"/>` +
    `</g>`
  );
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    `\n</svg>\n`
  );
}

export const SERIES_COLORS = ["#1f6fb2", "#c23b22", "#2e854b", "#8452a1", "#b2851f"];
