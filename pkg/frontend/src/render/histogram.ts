import type { AnalysisReport } from "../api/types";

// Three series over one shared set of bin edges. The counterfactual bars
// sit right next to the included ones inside each bin group so the eye
// compares those two first; excluded trails in grey. Okabe-Ito hues.

export const SERIES = [
  { key: "included", color: "#0072B2" },
  { key: "counterfactual", color: "#E69F00" },
  { key: "excluded", color: "#999999" },
] as const;

const WIDTH = 640;
const HEIGHT = 220;
const PAD = { top: 8, right: 8, bottom: 22, left: 8 };

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function seriesCounts(report: AnalysisReport): Record<(typeof SERIES)[number]["key"], number[]> {
  // included and excluded live in the naive comparison; the counterfactual
  // comparison reuses the same edges with the matched subset as group B
  return {
    included: report.naive.histogram.countsA,
    counterfactual: report.counterfactual.histogram.countsB,
    excluded: report.naive.histogram.countsB,
  };
}

export function renderHistogram(report: AnalysisReport): HTMLElement {
  const edges = report.naive.histogram.binEdges;
  const counts = seriesCounts(report);
  const bins = edges.length - 1;
  const peak = Math.max(1, ...SERIES.flatMap(({ key }) => counts[key]));

  const svg = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "histogram",
    role: "img",
  }) as SVGSVGElement;

  const plotWidth = WIDTH - PAD.left - PAD.right;
  const plotHeight = HEIGHT - PAD.top - PAD.bottom;
  const groupWidth = plotWidth / bins;
  const barWidth = groupWidth / (SERIES.length + 1);

  for (let bin = 0; bin < bins; bin++) {
    SERIES.forEach(({ key, color }, s) => {
      const count = counts[key][bin];
      const height = (count / peak) * plotHeight;
      const rect = svgEl("rect", {
        x: String(PAD.left + bin * groupWidth + s * barWidth),
        y: String(PAD.top + plotHeight - height),
        width: String(barWidth),
        height: String(height),
        fill: color,
        "data-series": key,
        "data-bin": String(bin),
        "data-count": String(count),
      });
      svg.appendChild(rect);
    });
  }

  const axis = svgEl("line", {
    x1: String(PAD.left), y1: String(PAD.top + plotHeight),
    x2: String(WIDTH - PAD.right), y2: String(PAD.top + plotHeight),
    stroke: "#333",
  });
  svg.appendChild(axis);

  for (const [edge, anchor, x] of [
    [edges[0], "start", PAD.left],
    [edges[edges.length - 1], "end", WIDTH - PAD.right],
  ] as const) {
    const label = svgEl("text", {
      x: String(x),
      y: String(HEIGHT - 6),
      "text-anchor": anchor,
      class: "axis-label",
    });
    label.textContent = String(edge);
    svg.appendChild(label);
  }

  const sizes: Record<string, number> = {
    included: report.naive.groupASize,
    counterfactual: report.counterfactual.groupBSize,
    excluded: report.naive.groupBSize,
  };
  const legend = document.createElement("div");
  legend.className = "legend";
  for (const { key, color } of SERIES) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = color;
    item.append(swatch, `${key} (n=${sizes[key]})`);
    legend.appendChild(item);
  }

  const panel = document.createElement("div");
  panel.className = "distribution-panel";
  panel.append(svg, legend);
  return panel;
}
