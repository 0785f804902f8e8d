// Client charting layer: renders a ChartSpec into an inline SVG for the
// gallery thumbnails, the live finalize preview, and the card preview page.
// Server-side SVG export stays authoritative for downloads.

import type { ChartSpecDto } from "./types";

const W = 640;
const H = 360;
const PAD = { left: 48, right: 120, top: 40, bottom: 36 };
const PX0 = PAD.left;
const PY0 = PAD.top;
const PX1 = W - PAD.right;
const PY1 = H - PAD.bottom;

const PALETTE = [
  "#4e79a7",
  "#f28e2b",
  "#e15759",
  "#76b7b2",
  "#59a14f",
  "#edc949",
  "#b07aa1",
  "#ff9da7",
  "#9c755f",
  "#bab0ac",
];

const SVG_NS = "http://www.w3.org/2000/svg";

function el(
  tag: string,
  attrs: Record<string, string | number>,
  text?: string,
): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function color(i: number): string {
  return PALETTE[i % PALETTE.length];
}

function range(values: (number | null)[], includeZero = true): [number, number] {
  const present = values.filter((v): v is number => v !== null);
  if (!present.length) return [0, 1];
  let lo = Math.min(...present);
  let hi = Math.max(...present);
  if (includeZero) {
    lo = Math.min(lo, 0);
    hi = Math.max(hi, 0);
  }
  if (lo === hi) hi = lo + 1;
  return [lo, hi];
}

function sy(v: number, lo: number, hi: number): number {
  return PY1 - ((v - lo) / (hi - lo)) * (PY1 - PY0);
}

function slotCenter(i: number, n: number): number {
  return PX0 + ((i + 0.5) * (PX1 - PX0)) / Math.max(1, n);
}

function parseNum(text: string): number | null {
  const t = text.trim();
  if (!t) return null;
  const v = Number(t);
  return Number.isFinite(v) ? v : null;
}

function axes(svg: SVGElement, lo: number, hi: number): void {
  for (let i = 0; i < 5; i++) {
    const v = lo + (i * (hi - lo)) / 4;
    const y = sy(v, lo, hi);
    svg.appendChild(
      el("line", { x1: PX0, y1: y, x2: PX1, y2: y, stroke: "#e5e5e5" }),
    );
    svg.appendChild(
      el(
        "text",
        { x: PX0 - 6, y: y + 4, "text-anchor": "end", "font-size": 10, fill: "#666" },
        Number(v.toPrecision(4)).toString(),
      ),
    );
  }
  svg.appendChild(el("line", { x1: PX0, y1: PY0, x2: PX0, y2: PY1, stroke: "#333" }));
  svg.appendChild(el("line", { x1: PX0, y1: PY1, x2: PX1, y2: PY1, stroke: "#333" }));
}

function categoryLabels(svg: SVGElement, labels: string[]): void {
  const n = labels.length;
  const step = Math.max(1, Math.ceil(n / 10));
  for (let i = 0; i < n; i += step) {
    svg.appendChild(
      el(
        "text",
        {
          x: slotCenter(i, n),
          y: PY1 + 14,
          "text-anchor": "middle",
          "font-size": 10,
          fill: "#666",
        },
        labels[i].length > 14 ? labels[i].slice(0, 13) + "…" : labels[i],
      ),
    );
  }
}

function legend(svg: SVGElement, entries: [string, string][]): void {
  entries.slice(0, 12).forEach(([label, fill], i) => {
    const y = PY0 + i * 18;
    svg.appendChild(el("rect", { x: PX1 + 12, y, width: 10, height: 10, fill }));
    svg.appendChild(
      el(
        "text",
        { x: PX1 + 27, y: y + 9, "font-size": 11, fill: "#333" },
        label.length > 15 ? label.slice(0, 14) + "…" : label,
      ),
    );
  });
}

function drawBars(svg: SVGElement, spec: ChartSpecDto, stacked: boolean): void {
  const n = spec.categories.length;
  let lo: number;
  let hi: number;
  if (stacked) {
    const sums = spec.categories.map((_, ci) => {
      let pos = 0;
      let neg = 0;
      for (const s of spec.series) {
        const p = s.points[ci];
        if (p !== null && p !== undefined) {
          if (p >= 0) pos += p;
          else neg += p;
        }
      }
      return [pos, neg];
    });
    [lo, hi] = range(sums.flat());
  } else {
    [lo, hi] = range(spec.series.flatMap((s) => s.points));
  }
  axes(svg, lo, hi);
  const zero = sy(Math.max(Math.min(0, hi), lo), lo, hi);
  const slot = (PX1 - PX0) / Math.max(1, n);
  const grouped = !stacked && spec.series.length > 1;
  const barW = grouped ? (slot * 0.8) / spec.series.length : slot * 0.6;

  for (let ci = 0; ci < n; ci++) {
    let up = 0;
    let down = 0;
    spec.series.forEach((s, si) => {
      const p = s.points[ci];
      if (p === null || p === undefined) return;
      let y0: number;
      let y1: number;
      if (stacked) {
        if (p >= 0) {
          y0 = sy(up + p, lo, hi);
          y1 = sy(up, lo, hi);
          up += p;
        } else {
          y0 = sy(down, lo, hi);
          y1 = sy(down + p, lo, hi);
          down += p;
        }
        const x = slotCenter(ci, n) - barW / 2;
        svg.appendChild(
          el("rect", {
            x,
            y: Math.min(y0, y1),
            width: barW,
            height: Math.abs(y1 - y0),
            fill: color(si),
            class: "pt",
          }),
        );
      } else {
        const x = grouped
          ? PX0 + ci * slot + slot * 0.1 + si * barW
          : slotCenter(ci, n) - barW / 2;
        const y = sy(p, lo, hi);
        svg.appendChild(
          el("rect", {
            x,
            y: Math.min(y, zero),
            width: barW,
            height: Math.abs(zero - y),
            fill: color(si),
            class: "pt",
          }),
        );
      }
    });
  }
  categoryLabels(svg, spec.categories);
  legend(svg, spec.series.map((s, i) => [s.name, color(i)]));
}

function drawLines(svg: SVGElement, spec: ChartSpecDto, filled: boolean): void {
  const n = spec.categories.length;
  const [lo, hi] = range(spec.series.flatMap((s) => s.points));
  axes(svg, lo, hi);
  const baseY = sy(Math.max(Math.min(0, hi), lo), lo, hi);
  spec.series.forEach((s, si) => {
    const coords = s.points
      .map((p, i) => (p === null ? null : [slotCenter(i, n), sy(p, lo, hi)]))
      .filter((c): c is [number, number] => c !== null);
    if (coords.length >= 2) {
      if (filled) {
        const d =
          `M ${coords[0][0]} ${baseY} ` +
          coords.map(([x, y]) => `L ${x} ${y}`).join(" ") +
          ` L ${coords[coords.length - 1][0]} ${baseY} Z`;
        svg.appendChild(
          el("path", { d, fill: color(si), "fill-opacity": 0.25, stroke: "none" }),
        );
      }
      svg.appendChild(
        el("polyline", {
          points: coords.map(([x, y]) => `${x},${y}`).join(" "),
          fill: "none",
          stroke: color(si),
          "stroke-width": 2,
        }),
      );
    }
    s.points.forEach((p, i) => {
      if (p === null) return;
      svg.appendChild(
        el("circle", {
          cx: slotCenter(i, n),
          cy: sy(p, lo, hi),
          r: 3,
          fill: color(si),
          class: "pt",
        }),
      );
    });
  });
  categoryLabels(svg, spec.categories);
  legend(svg, spec.series.map((s, i) => [s.name, color(i)]));
}

function drawPie(svg: SVGElement, spec: ChartSpecDto, donut: boolean): void {
  const series = spec.series[0];
  if (!series) return;
  const cx = (PX0 + PX1) / 2;
  const cy = (PY0 + PY1) / 2;
  const r = Math.min(PX1 - PX0, PY1 - PY0) / 2 - 6;
  const rIn = r * 0.55;
  const entries = series.points
    .map((p, i) => [i, p] as const)
    .filter((e): e is readonly [number, number] => e[1] !== null);
  const total = entries.reduce((acc, [, v]) => acc + v, 0);
  if (total <= 0) return;
  let cum = 0;
  for (const [i, v] of entries) {
    const frac = v / total;
    if (frac >= 1) {
      svg.appendChild(el("circle", { cx, cy, r, fill: color(i), class: "pt" }));
      if (donut) svg.appendChild(el("circle", { cx, cy, r: rIn, fill: "#fff" }));
      cum += v;
      continue;
    }
    const a0 = -Math.PI / 2 + 2 * Math.PI * (cum / total);
    const a1 = -Math.PI / 2 + 2 * Math.PI * ((cum + v) / total);
    const laf = frac > 0.5 ? 1 : 0;
    const [x0, y0] = [cx + r * Math.cos(a0), cy + r * Math.sin(a0)];
    const [x1, y1] = [cx + r * Math.cos(a1), cy + r * Math.sin(a1)];
    let d: string;
    if (donut) {
      const [ix0, iy0] = [cx + rIn * Math.cos(a0), cy + rIn * Math.sin(a0)];
      const [ix1, iy1] = [cx + rIn * Math.cos(a1), cy + rIn * Math.sin(a1)];
      d = `M ${x0} ${y0} A ${r} ${r} 0 ${laf} 1 ${x1} ${y1} L ${ix1} ${iy1} A ${rIn} ${rIn} 0 ${laf} 0 ${ix0} ${iy0} Z`;
    } else {
      d = `M ${cx} ${cy} L ${x0} ${y0} A ${r} ${r} 0 ${laf} 1 ${x1} ${y1} Z`;
    }
    svg.appendChild(el("path", { d, fill: color(i), class: "pt" }));
    cum += v;
  }
  legend(
    svg,
    entries.map(([i]) => [spec.categories[i] ?? `row ${i}`, color(i)]),
  );
}

function drawScatter(svg: SVGElement, spec: ChartSpecDto): void {
  const series = spec.series[0];
  if (!series) return;
  const xs = spec.categories.map(parseNum);
  const [xLo, xHi] = range(xs, false);
  const [yLo, yHi] = range(series.points);
  axes(svg, yLo, yHi);
  series.points.forEach((p, i) => {
    const x = xs[i];
    if (p === null || x === null || x === undefined) return;
    const px = PX0 + ((x - xLo) / (xHi - xLo)) * (PX1 - PX0);
    svg.appendChild(
      el("circle", { cx: px, cy: sy(p, yLo, yHi), r: 4, fill: color(0), class: "pt" }),
    );
  });
  legend(svg, [[series.name, color(0)]]);
}

function drawHistogram(svg: SVGElement, spec: ChartSpecDto): void {
  const values = spec.categories
    .map(parseNum)
    .filter((v): v is number => v !== null);
  if (!values.length) {
    axes(svg, 0, 1);
    return;
  }
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const bins = lo === hi ? 1 : 10;
  const width = lo === hi ? 1 : (hi - lo) / bins;
  const counts = new Array<number>(bins).fill(0);
  for (const v of values) {
    counts[Math.min(Math.floor((v - lo) / width), bins - 1)]++;
  }
  const [cLo, cHi] = range(counts);
  axes(svg, cLo, cHi);
  const slot = (PX1 - PX0) / bins;
  counts.forEach((count, i) => {
    const y = sy(count, cLo, cHi);
    svg.appendChild(
      el("rect", {
        x: PX0 + i * slot + slot * 0.05,
        y,
        width: slot * 0.9,
        height: PY1 - y,
        fill: color(0),
        class: "bin",
      }),
    );
  });
}

function drawBoxes(svg: SVGElement, spec: ChartSpecDto): void {
  const series = spec.series[0];
  if (!series) return;
  const order: string[] = [];
  const groups = new Map<string, number[]>();
  series.points.forEach((p, i) => {
    if (p === null) return;
    const key = spec.categories[i] ?? `row ${i}`;
    if (!groups.has(key)) {
      groups.set(key, []);
      order.push(key);
    }
    groups.get(key)!.push(p);
  });
  const all = [...groups.values()].flat();
  const [lo, hi] = range(all, false);
  axes(svg, lo, hi);
  const n = Math.max(1, order.length);
  const slot = (PX1 - PX0) / n;
  const median = (vals: number[]) => {
    const mid = Math.floor(vals.length / 2);
    return vals.length % 2 ? vals[mid] : (vals[mid - 1] + vals[mid]) / 2;
  };
  order.forEach((key, gi) => {
    const vals = [...groups.get(key)!].sort((a, b) => a - b);
    const half = Math.floor(vals.length / 2);
    const lower = half ? vals.slice(0, half) : vals.slice(0, 1);
    const upper = half ? vals.slice(-half) : vals.slice(-1);
    const q1 = median(lower);
    const q3 = median(upper);
    const med = median(vals);
    const cx = slotCenter(gi, n);
    const w = slot * 0.4;
    svg.appendChild(
      el("line", {
        x1: cx,
        y1: sy(vals[0], lo, hi),
        x2: cx,
        y2: sy(vals[vals.length - 1], lo, hi),
        stroke: "#333",
      }),
    );
    svg.appendChild(
      el("rect", {
        x: cx - w / 2,
        y: sy(q3, lo, hi),
        width: w,
        height: Math.max(1, sy(q1, lo, hi) - sy(q3, lo, hi)),
        fill: color(0),
        "fill-opacity": 0.6,
        stroke: "#333",
        class: "box",
      }),
    );
    svg.appendChild(
      el("line", {
        x1: cx - w / 2,
        y1: sy(med, lo, hi),
        x2: cx + w / 2,
        y2: sy(med, lo, hi),
        stroke: "#333",
        "stroke-width": 2,
      }),
    );
  });
  categoryLabels(svg, order);
}

function drawHeatmap(svg: SVGElement, spec: ChartSpecDto): void {
  const n = Math.max(1, spec.categories.length);
  const m = Math.max(1, spec.series.length);
  const present = spec.series.flatMap((s) => s.points).filter((p): p is number => p !== null);
  const lo = present.length ? Math.min(...present) : 0;
  const hi = present.length ? Math.max(...present) : 1;
  const span = hi > lo ? hi - lo : 1;
  const cw = (PX1 - PX0) / n;
  const ch = (PY1 - PY0) / m;
  spec.series.forEach((s, si) => {
    s.points.forEach((p, ci) => {
      if (p === null) return;
      const t = (p - lo) / span;
      const shade = (channelLo: number, channelHi: number) =>
        Math.round(channelLo + (channelHi - channelLo) * t);
      const fill = `rgb(${shade(247, 8)}, ${shade(251, 48)}, ${shade(255, 107)})`;
      svg.appendChild(
        el("rect", {
          x: PX0 + ci * cw,
          y: PY0 + si * ch,
          width: cw,
          height: ch,
          fill,
          stroke: "#fff",
          class: "pt",
        }),
      );
    });
    svg.appendChild(
      el(
        "text",
        {
          x: PX0 - 6,
          y: PY0 + (si + 0.5) * ch + 4,
          "text-anchor": "end",
          "font-size": 10,
          fill: "#666",
        },
        s.name,
      ),
    );
  });
  categoryLabels(svg, spec.categories);
}

export function renderChart(container: HTMLElement, spec: ChartSpecDto): void {
  container.innerHTML = "";
  const svg = el("svg", {
    viewBox: `0 0 ${W} ${H}`,
    width: "100%",
    "font-family": "sans-serif",
    role: "img",
  });
  if (spec.labels.title) {
    svg.appendChild(
      el(
        "text",
        {
          x: (PX0 + PX1) / 2,
          y: 22,
          "text-anchor": "middle",
          "font-size": 15,
          fill: "#111",
        },
        spec.labels.title,
      ),
    );
  }
  switch (spec.idiom) {
    case "bar_chart":
    case "grouped_bar_chart":
      drawBars(svg, spec, false);
      break;
    case "stacked_bar_chart":
      drawBars(svg, spec, true);
      break;
    case "line_chart":
      drawLines(svg, spec, false);
      break;
    case "area_chart":
      drawLines(svg, spec, true);
      break;
    case "pie_chart":
      drawPie(svg, spec, false);
      break;
    case "donut_chart":
      drawPie(svg, spec, true);
      break;
    case "scatter_plot":
      drawScatter(svg, spec);
      break;
    case "histogram":
      drawHistogram(svg, spec);
      break;
    case "box_plot":
      drawBoxes(svg, spec);
      break;
    case "heatmap":
      drawHeatmap(svg, spec);
      break;
    default:
      drawBars(svg, spec, false);
  }
  if (spec.labels.x_label) {
    svg.appendChild(
      el(
        "text",
        { x: (PX0 + PX1) / 2, y: H - 6, "text-anchor": "middle", "font-size": 11, fill: "#333" },
        spec.labels.x_label,
      ),
    );
  }
  container.appendChild(svg);
}
