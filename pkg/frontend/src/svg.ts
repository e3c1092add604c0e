/**
 * Minimal deterministic SVG assembly: fixed styling, fixed number
 * formatting, no timestamps or random ids, so identical inputs yield
 * byte-identical documents.
 */

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(values: number[]): Extent {
  if (values.length === 0) {
    throw new Error("extent of empty value list");
  }
  let min = values[0];
  let max = values[0];
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min === max) {
    // widen degenerate ranges so scales stay invertible
    min -= 0.5;
    max += 0.5;
  }
  return { min, max };
}

/** Fixed decimal formatting keeps output independent of locale and jitter. */
export function fmt(v: number): string {
  if (Number.isInteger(v) && Math.abs(v) < 1e9) return String(v);
  return v.toFixed(4).replace(/0+$/, "").replace(/\.$/, "");
}

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 420,
  margin: { top: 36, right: 24, bottom: 48, left: 60 },
};

export class Scale {
  constructor(
    readonly domain: Extent,
    readonly range: [number, number],
  ) {}

  map(v: number): number {
    const t = (v - this.domain.min) / (this.domain.max - this.domain.min);
    return this.range[0] + t * (this.range[1] - this.range[0]);
  }
}

export function xScale(domain: Extent, frame: Frame): Scale {
  return new Scale(domain, [frame.margin.left, frame.width - frame.margin.right]);
}

export function yScale(domain: Extent, frame: Frame): Scale {
  return new Scale(domain, [frame.height - frame.margin.bottom, frame.margin.top]);
}

/** Evenly spaced tick values across a domain. */
export function ticks(domain: Extent, count = 5): number[] {
  const out: number[] = [];
  for (let i = 0; i < count; i++) {
    out.push(domain.min + ((domain.max - domain.min) * i) / (count - 1));
  }
  return out;
}

export const SERIES_COLORS = [
  "#1f4e79",
  "#b2461b",
  "#3c7a3c",
  "#6d3f8f",
  "#8a7020",
  "#20707a",
];

export function seriesColor(index: number): string {
  return SERIES_COLORS[index % SERIES_COLORS.length];
}

/** Grayscale fill for a 0..1 intensity (dark = high). */
export function heat(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const level = Math.round(240 - clamped * 200);
  return `rgb(${level},${level},${level})`;
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(readonly frame: Frame) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" ` +
        `height="${frame.height}" viewBox="0 0 ${frame.width} ${frame.height}" ` +
        `font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${frame.width}" height="${frame.height}" fill="white"/>`,
    );
  }

  raw(element: string): void {
    this.parts.push(element);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, extra = ""): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="1"${extra ? ` ${extra}` : ""}/>`,
    );
  }

  /** Polyline with gaps: null points break the stroke, never interpolated. */
  path(points: Array<[number, number] | null>, stroke: string, dashed = false): void {
    const segments: string[] = [];
    let current: string[] = [];
    for (const pt of points) {
      if (pt === null) {
        if (current.length > 1) segments.push(current.join(" "));
        current = [];
      } else {
        current.push(`${fmt(pt[0])},${fmt(pt[1])}`);
      }
    }
    if (current.length > 1) segments.push(current.join(" "));
    for (const seg of segments) {
      this.parts.push(
        `<polyline points="${seg}" fill="none" stroke="${stroke}" stroke-width="1.5"` +
          `${dashed ? ' stroke-dasharray="5,4"' : ""}/>`,
      );
    }
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, extra = ""): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}"${extra ? ` ${extra}` : ""}/>`,
    );
  }

  text(x: number, y: number, content: string, anchor = "start", size = 11, extra = ""): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
        `font-size="${size}"${extra ? ` ${extra}` : ""}>${escapeXml(content)}</text>`,
    );
  }

  /** Axis lines, ticks and labels for a standard x/y chart. */
  axes(
    sx: Scale,
    sy: Scale,
    xLabel: string,
    yLabel: string,
    title: string,
    xTickValues?: number[],
    yTickValues?: number[],
  ): void {
    const f = this.frame;
    const x0 = f.margin.left;
    const x1 = f.width - f.margin.right;
    const y0 = f.height - f.margin.bottom;
    const y1 = f.margin.top;
    this.line(x0, y0, x1, y0, "#333");
    this.line(x0, y0, x0, y1, "#333");
    for (const t of xTickValues ?? ticks(sx.domain)) {
      const px = sx.map(t);
      this.line(px, y0, px, y0 + 4, "#333");
      this.text(px, y0 + 16, fmt(t), "middle", 10);
    }
    for (const t of yTickValues ?? ticks(sy.domain)) {
      const py = sy.map(t);
      this.line(x0 - 4, py, x0, py, "#333");
      this.text(x0 - 7, py + 3, fmt(t), "end", 10);
    }
    this.text((x0 + x1) / 2, f.height - 10, xLabel, "middle", 12);
    this.text(14, (y0 + y1) / 2, yLabel, "middle", 12, `transform="rotate(-90 14 ${fmt((y0 + y1) / 2)})"`);
    this.text((x0 + x1) / 2, 20, title, "middle", 13, 'font-weight="bold"');
  }

  legend(entries: Array<{ label: string; color: string; dashed?: boolean }>): void {
    const f = this.frame;
    let y = f.margin.top + 6;
    const x = f.width - f.margin.right - 120;
    for (const e of entries) {
      this.line(x, y - 4, x + 18, y - 4, e.color, e.dashed ? 'stroke-dasharray="5,4"' : "");
      this.text(x + 24, y, e.label, "start", 10);
      y += 14;
    }
  }

  render(): string {
    return [...this.parts, "</svg>", ""].join("\n");
  }
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
