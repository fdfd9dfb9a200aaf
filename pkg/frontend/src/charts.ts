/** Hand-rolled SVG chart rendering.
 *
 * The same renderers draw the large detail chart and the thumbnails: at
 * thumbnail scale (`axes: false`) only the marks are emitted, no labels or
 * axis lines. Countable marks carry class="mark", matching the server's
 * exported SVGs.
 */

import type {
  CrossTabResult,
  HistogramResult,
  PartitionResult,
  RollupResult,
  SankeyResult,
} from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ChartOpts {
  width: number;
  height: number;
  axes: boolean;
}

export const DETAIL_OPTS: ChartOpts = { width: 760, height: 420, axes: true };
export const THUMB_OPTS: ChartOpts = { width: 150, height: 72, axes: false };

function svgRoot(opts: ChartOpts): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(opts.width));
  svg.setAttribute("height", String(opts.height));
  svg.setAttribute("viewBox", `0 0 ${opts.width} ${opts.height}`);
  return svg;
}

function el(
  parent: SVGElement,
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
  parent.appendChild(node);
  return node;
}

function margins(opts: ChartOpts) {
  return opts.axes
    ? { left: 150, right: 30, top: 10, bottom: 26 }
    : { left: 0, right: 0, top: 0, bottom: 0 };
}

/** Horizontal bars, one mark per level; labels only at detail scale. */
export function renderBars(
  result: RollupResult,
  opts: ChartOpts,
  onLevelClick?: (level: string) => void,
  selected?: Set<string>,
): SVGSVGElement {
  const svg = svgRoot(opts);
  const m = margins(opts);
  const plotWidth = opts.width - m.left - m.right;
  const n = result.levels.length || 1;
  const rowHeight = Math.min(32, (opts.height - m.top - m.bottom) / n);
  const barHeight = Math.max(2, rowHeight * 0.75);
  const maxCount = Math.max(1, ...result.levels.map((l) => l.count));

  result.levels.forEach((entry, index) => {
    const y = m.top + index * rowHeight;
    const width = (plotWidth * entry.count) / maxCount;
    const bar = el(svg, "rect", {
      class: "mark",
      x: m.left,
      y,
      width: Math.max(width, 0.5),
      height: barHeight,
      fill: entry.color,
    });
    if (selected?.has(entry.level)) {
      bar.setAttribute("stroke", "#222222");
      bar.setAttribute("stroke-width", "2");
    }
    if (onLevelClick) {
      bar.addEventListener("click", () => onLevelClick(entry.level));
      (bar as SVGElement & { style: CSSStyleDeclaration }).style.cursor = "pointer";
    }
    if (opts.axes) {
      const label = el(
        svg,
        "text",
        { class: "axis-label", x: m.left - 6, y: y + barHeight - 4, "text-anchor": "end" },
        entry.level,
      );
      if (onLevelClick) {
        label.addEventListener("click", () => onLevelClick(entry.level));
        (label as SVGElement & { style: CSSStyleDeclaration }).style.cursor = "pointer";
      }
      el(svg, "text", { class: "value", x: m.left + width + 4, y: y + barHeight - 4 }, String(entry.count));
    }
  });
  if (opts.axes) {
    el(svg, "line", {
      class: "axis",
      x1: m.left,
      y1: m.top,
      x2: m.left,
      y2: opts.height - m.bottom,
      stroke: "#888888",
    });
  }
  return svg;
}

/** Vertical histogram, one mark per bin. */
export function renderHistogram(result: HistogramResult, opts: ChartOpts): SVGSVGElement {
  const svg = svgRoot(opts);
  const m = margins(opts);
  const plotWidth = opts.width - m.left - m.right;
  const plotHeight = opts.height - m.top - m.bottom;
  const bins = result.bins;
  if (!bins.length) {
    return svg;
  }
  const maxCount = Math.max(1, ...bins.map((b) => b.count));
  const binWidth = plotWidth / bins.length;
  bins.forEach((bin, index) => {
    const height = (plotHeight * bin.count) / maxCount;
    el(svg, "rect", {
      class: "mark",
      x: m.left + index * binWidth,
      y: m.top + plotHeight - height,
      width: Math.max(binWidth - 1, 0.5),
      height,
      fill: "#59A14F",
    });
  });
  if (opts.axes) {
    el(svg, "line", {
      class: "axis",
      x1: m.left,
      y1: m.top + plotHeight,
      x2: m.left + plotWidth,
      y2: m.top + plotHeight,
      stroke: "#888888",
    });
    el(svg, "text", { class: "axis-label", x: m.left, y: opts.height - 6 }, String(bins[0].lo));
    el(
      svg,
      "text",
      { class: "axis-label", x: m.left + plotWidth, y: opts.height - 6, "text-anchor": "end" },
      String(bins[bins.length - 1].hi),
    );
  }
  return svg;
}

/** Multi-line chart, one mark polyline per level, optional min/max bands. */
export function renderLines(
  result: PartitionResult,
  colors: Map<string, string>,
  opts: ChartOpts,
  bands = true,
): SVGSVGElement {
  const svg = svgRoot(opts);
  const m = margins(opts);
  const plotWidth = opts.width - m.left - m.right;
  const plotHeight = opts.height - m.top - m.bottom;
  const buckets = result.series[0]?.points.map((p) => p.bucket_start) ?? [];
  if (!buckets.length) {
    return svg;
  }
  const top = Math.max(1e-9, ...result.series.flatMap((s) => s.points.map((p) => p.band_max)));
  const xOf = (index: number) =>
    m.left + (plotWidth * index) / Math.max(buckets.length - 1, 1);
  const yOf = (value: number) => m.top + plotHeight - (plotHeight * value) / top;

  for (const series of result.series) {
    const color = colors.get(series.level) ?? "#4E79A7";
    const showBand = bands && series.points.some((p) => p.band_min !== p.band_max);
    if (showBand) {
      const upper = series.points.map((p, i) => `${xOf(i)},${yOf(p.band_max)}`);
      const lower = [...series.points].reverse().map((p, i) =>
        `${xOf(series.points.length - 1 - i)},${yOf(p.band_min)}`,
      );
      el(svg, "polygon", {
        class: "band",
        points: [...upper, ...lower].join(" "),
        fill: color,
        opacity: 0.18,
      });
    }
    el(svg, "polyline", {
      class: "mark",
      points: series.points.map((p, i) => `${xOf(i)},${yOf(p.value)}`).join(" "),
      fill: "none",
      stroke: color,
      "stroke-width": 2,
    });
  }
  if (opts.axes) {
    el(svg, "line", {
      class: "axis",
      x1: m.left,
      y1: m.top + plotHeight,
      x2: m.left + plotWidth,
      y2: m.top + plotHeight,
      stroke: "#888888",
    });
    el(svg, "text", { class: "axis-label", x: m.left, y: opts.height - 6 }, buckets[0]);
    el(
      svg,
      "text",
      { class: "axis-label", x: m.left + plotWidth, y: opts.height - 6, "text-anchor": "end" },
      buckets[buckets.length - 1],
    );
  }
  return svg;
}

/** Horizontal segmented bars, one mark per segment entry. */
export function renderSegments(
  result: CrossTabResult,
  colors: Map<string, string>,
  opts: ChartOpts,
  percentage = false,
): SVGSVGElement {
  const svg = svgRoot(opts);
  const m = margins(opts);
  const plotWidth = opts.width - m.left - m.right;
  const n = result.bars.length || 1;
  const rowHeight = Math.min(32, (opts.height - m.top - m.bottom) / n);
  const barHeight = Math.max(2, rowHeight * 0.75);
  const maxTotal = Math.max(1, ...result.bars.map((b) => b.total));

  result.bars.forEach((bar, index) => {
    const y = m.top + index * rowHeight;
    let x = m.left;
    for (const segment of bar.segments) {
      const fraction = percentage ? segment.percent / 100 : segment.count / maxTotal;
      const width = plotWidth * fraction;
      el(svg, "rect", {
        class: "mark",
        x,
        y,
        width: Math.max(width, 0),
        height: barHeight,
        fill: colors.get(segment.segment_level) ?? "#BAB0AC",
      });
      x += width;
    }
    if (opts.axes) {
      el(
        svg,
        "text",
        { class: "axis-label", x: m.left - 6, y: y + barHeight - 4, "text-anchor": "end" },
        bar.bar_level,
      );
      el(svg, "text", { class: "value", x: x + 4, y: y + barHeight - 4 }, String(bar.total));
    }
  });
  return svg;
}

/** Flow diagram, one mark path per link. */
export function renderSankey(
  result: SankeyResult,
  stageColors: Map<string, string>[],
  opts: ChartOpts,
): SVGSVGElement {
  const svg = svgRoot(opts);
  const m = margins(opts);
  const labelPad = opts.axes ? 110 : 0;
  const left = m.left === 0 ? labelPad : m.left;
  const plotWidth = opts.width - left - m.right - labelPad;
  const plotHeight = opts.height - m.top - m.bottom;
  const nodeWidth = opts.axes ? 16 : 6;
  const gap = opts.axes ? 6 : 2;
  const span = (plotWidth - nodeWidth) / Math.max(result.stages.length - 1, 1);

  interface NodeBox {
    x: number;
    y: number;
    height: number;
    total: number;
    outUsed: number;
    inUsed: number;
  }
  const geometry: Map<string, NodeBox>[] = [];
  result.nodes.forEach((stageNodes, stageIndex) => {
    const total = Math.max(1, stageNodes.reduce((sum, node) => sum + node.total, 0));
    const usable = plotHeight - gap * Math.max(stageNodes.length - 1, 0);
    let y = m.top;
    const placed = new Map<string, NodeBox>();
    for (const node of stageNodes) {
      const height = (usable * node.total) / total;
      placed.set(node.level, { x: left + stageIndex * span, y, height, total: node.total, outUsed: 0, inUsed: 0 });
      y += height + gap;
    }
    geometry.push(placed);
  });

  for (const link of result.links) {
    const source = geometry[link.from_stage]?.get(link.from_level);
    const target = geometry[link.from_stage + 1]?.get(link.to_level);
    if (!source || !target) continue;
    const sourceScale = source.total ? source.height / source.total : 0;
    const targetScale = target.total ? target.height / target.total : 0;
    const thickness = Math.max(link.weight * sourceScale, 0.5);
    const y0 = source.y + source.outUsed + thickness / 2;
    const y1 = target.y + target.inUsed + (link.weight * targetScale) / 2;
    source.outUsed += link.weight * sourceScale;
    target.inUsed += link.weight * targetScale;
    const x0 = source.x + nodeWidth;
    const x1 = target.x;
    const mid = (x0 + x1) / 2;
    el(svg, "path", {
      class: "mark",
      d: `M ${x0} ${y0} C ${mid} ${y0}, ${mid} ${y1}, ${x1} ${y1}`,
      fill: "none",
      stroke: "#999999",
      "stroke-opacity": 0.5,
      "stroke-width": thickness,
    });
  }

  geometry.forEach((placed, stageIndex) => {
    const colors = stageColors[stageIndex] ?? new Map();
    for (const [level, node] of placed) {
      el(svg, "rect", {
        class: "node",
        x: node.x,
        y: node.y,
        width: nodeWidth,
        height: Math.max(node.height, 0.5),
        fill: colors.get(level) ?? "#4E79A7",
      });
      if (opts.axes) {
        const first = stageIndex === 0;
        el(
          svg,
          "text",
          {
            class: "axis-label",
            x: first ? node.x - 6 : node.x + nodeWidth + 6,
            y: node.y + node.height / 2 + 4,
            "text-anchor": first ? "end" : "start",
          },
          level,
        );
      }
    }
  });
  return svg;
}
