// SVG rendering for the run-comparison view. Pure string builders: easy
// to test and to diff between runs.

import { MetricRow, RunPanel, formatSI } from "./viewmodel.js";

const BAR_H = 14;
const ROW_H = 38;
const LABEL_W = 150;
const BAR_W = 240;
const VALUE_W = 110;

export const CONSTRAINT_COLOR = "#90a4ae";
export const ACHIEVED_COLOR = "#1565c0";
export const VIOLATION_COLOR = "#d32f2f";
export const VULN_AXIS_COLOR = "#d32f2f";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function barPair(row: MetricRow, y: number): string {
  const scale = Math.max(
    row.constraint ?? 0,
    row.achieved,
    Number.MIN_VALUE,
  );
  const w = (v: number) => Math.max(1, (v / scale) * BAR_W);
  const achievedColor = row.violated ? VIOLATION_COLOR : ACHIEVED_COLOR;
  const parts: string[] = [];
  parts.push(
    `<text x="0" y="${y + BAR_H + 4}" class="metric-label${row.violated ? " violated" : ""}">` +
      `${esc(row.label)}${row.lowerBound ? " (min)" : ""}</text>`,
  );
  if (row.constraint != null) {
    parts.push(
      `<rect x="${LABEL_W}" y="${y}" width="${w(row.constraint)}" height="${BAR_H}"` +
        ` fill="${CONSTRAINT_COLOR}"><title>constraint ${formatSI(row.constraint, row.unit)}</title></rect>`,
    );
  } else {
    parts.push(
      `<text x="${LABEL_W}" y="${y + BAR_H - 2}" class="unbounded">unbounded</text>`,
    );
  }
  parts.push(
    `<rect x="${LABEL_W}" y="${y + BAR_H + 2}" width="${w(row.achieved)}" height="${BAR_H}"` +
      ` fill="${achievedColor}"><title>achieved ${formatSI(row.achieved, row.unit)}</title></rect>`,
  );
  parts.push(
    `<text x="${LABEL_W + BAR_W + 8}" y="${y + BAR_H + 4}" class="metric-value">` +
      `${esc(formatSI(row.achieved, row.unit))} / ${esc(formatSI(row.constraint, row.unit))}</text>`,
  );
  return parts.join("");
}

// Vulnerability marker on its own (red) axis at the right edge.
function vulnerabilityMarker(
  panel: RunPanel,
  height: number,
  vulnMax: number,
): string {
  if (panel.vulnerability == null) return "";
  const axisX = LABEL_W + BAR_W + VALUE_W + 30;
  const usable = height - 30;
  const frac = vulnMax > 0 ? panel.vulnerability / vulnMax : 0;
  const y = 15 + usable * (1 - frac);
  return (
    `<line x1="${axisX}" y1="10" x2="${axisX}" y2="${height - 10}"` +
      ` stroke="${VULN_AXIS_COLOR}" stroke-width="1"/>` +
    `<circle cx="${axisX}" cy="${y}" r="6" fill="${VULN_AXIS_COLOR}" class="vuln-marker"/>` +
    `<text x="${axisX + 10}" y="${y + 4}" class="vuln-value" fill="${VULN_AXIS_COLOR}">` +
      `${panel.vulnerability.toPrecision(4)}</text>`
  );
}

export function renderMetricChart(
  panel: RunPanel,
  hidden: Set<string> = new Set(),
  vulnMax = 1,
): string {
  const rows = panel.metrics.filter((r) => !hidden.has(r.key));
  const height = Math.max(rows.length * ROW_H + 20, 90);
  const width = LABEL_W + BAR_W + VALUE_W + 110;
  const body = rows.map((r, i) => barPair(r, 12 + i * ROW_H)).join("");
  return (
    `<svg class="metric-chart" width="${width}" height="${height}"` +
      ` viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">` +
    body +
    vulnerabilityMarker(panel, height, vulnMax) +
    `</svg>`
  );
}

export function renderPartitionDiagram(panel: RunPanel): string {
  const blockW = 86;
  const blockH = 30;
  const gap = 6;
  const labelW = 70;
  const maxPerRow = Math.max(1, ...panel.partition.map((g) => g.modules.length));
  const width = labelW + maxPerRow * (blockW + gap) + 10;
  const height = panel.partition.length * (blockH + 14) + 10;
  const parts: string[] = [];
  panel.partition.forEach((group, gi) => {
    const y = 6 + gi * (blockH + 14);
    parts.push(
      `<text x="0" y="${y + blockH / 2 + 4}" class="domain-label">${esc(group.domain)}</text>`,
    );
    group.modules.forEach((m, mi) => {
      const x = labelW + mi * (blockW + gap);
      parts.push(
        `<g class="module-block" data-module="${esc(m.id)}" data-config="${m.config}">` +
          `<rect x="${x}" y="${y}" width="${blockW}" height="${blockH}" rx="4"` +
          ` fill="${m.color}"><title>${esc(m.id)}: ${m.config}</title></rect>` +
          `<text x="${x + blockW / 2}" y="${y + blockH / 2 + 4}" text-anchor="middle"` +
          ` class="module-label">${esc(m.id)}</text></g>`,
      );
    });
  });
  return (
    `<svg class="partition" width="${width}" height="${height}"` +
      ` viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">` +
    parts.join("") +
    `</svg>`
  );
}
