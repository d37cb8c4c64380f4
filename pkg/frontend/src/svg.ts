/**
 * Deterministic SVG rendering: fixed canvas, fixed float formatting, no
 * timestamps — identical input panels yield byte-identical files.
 */

import type { Panel, PanelSeries } from "./panels.js";

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { left: 70, right: 20, top: 44, bottom: 52 };

const COLORS: Record<string, string> = {
  noisy: "#c23b22",
  qec: "#2e4866",
  vp2: "#1a7f3c",
  vp3: "#7b3fa0",
};

const fmt = (v: number): string => v.toFixed(2);

function color(scheme: string): string {
  return COLORS[scheme] ?? "#555555";
}

function markerShape(
  kind: PanelSeries["marker"],
  x: number,
  y: number,
  fill: string,
): string {
  const r = 3.5;
  switch (kind) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`;
    case "triangle": {
      const pts = [
        [x, y - r],
        [x - r, y + r],
        [x + r, y + r],
      ]
        .map(([px, py]) => `${fmt(px)},${fmt(py)}`)
        .join(" ");
      return `<polygon points="${pts}" fill="${fill}"/>`;
    }
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${fmt(2 * r)}" height="${fmt(
        2 * r,
      )}" fill="${fill}"/>`;
  }
}

export function renderPanelSvg(panel: Panel): string {
  const phis = panel.series.flatMap((s) => s.points.map((p) => p.phi));
  const values = panel.series.flatMap((s) =>
    s.points.flatMap((p) => [p.theory, p.empirical]),
  );
  const xMin = Math.min(...phis);
  const xMax = Math.max(...phis);
  const xSpan = xMax - xMin || 1;
  const logMin = Math.floor(Math.log10(Math.min(...values)));
  const logMax = Math.ceil(Math.log10(Math.max(...values)));
  const logSpan = logMax - logMin || 1;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xPix = (phi: number) => MARGIN.left + ((phi - xMin) / xSpan) * plotW;
  const yPix = (v: number) =>
    MARGIN.top + (1 - (Math.log10(v) - logMin) / logSpan) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${MARGIN.left}" y="24" font-family="sans-serif" font-size="15">` +
      `${panel.probe}, dominant eigenvalue ${panel.lambda}</text>`,
  );

  // y decade gridlines and labels
  for (let e = logMin; e <= logMax; e++) {
    const y = yPix(Math.pow(10, e));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${WIDTH - MARGIN.right}" y2="${fmt(
        y,
      )}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" ` +
        `font-family="sans-serif" font-size="11">1e${e}</text>`,
    );
  }
  // x ticks at five evenly spaced phis
  for (let k = 0; k <= 4; k++) {
    const phi = xMin + (xSpan * k) / 4;
    const x = xPix(phi);
    parts.push(
      `<line x1="${fmt(x)}" y1="${HEIGHT - MARGIN.bottom}" x2="${fmt(x)}" y2="${
        HEIGHT - MARGIN.bottom + 5
      }" stroke="#000000" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(x)}" y="${HEIGHT - MARGIN.bottom + 20}" text-anchor="middle" ` +
        `font-family="sans-serif" font-size="11">${phi.toFixed(3)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#000000" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 10}" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="12">phase</text>`,
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="12" transform="rotate(-90 16 ${
        MARGIN.top + plotH / 2
      })">squared bias / total error</text>`,
  );

  // theory lines, then markers on top
  for (const series of panel.series) {
    const stroke = color(series.scheme);
    const path = series.points
      .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(xPix(p.phi))} ${fmt(yPix(p.theory))}`)
      .join(" ");
    parts.push(`<path d="${path}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`);
  }
  for (const series of panel.series) {
    const fill = color(series.scheme);
    for (const p of series.points) {
      parts.push(markerShape(series.marker, xPix(p.phi), yPix(p.empirical), fill));
    }
  }

  // legend
  let ly = MARGIN.top + 12;
  for (const series of panel.series) {
    const fill = color(series.scheme);
    const lx = WIDTH - MARGIN.right - 96;
    parts.push(
      `<line x1="${lx}" y1="${fmt(ly - 4)}" x2="${lx + 22}" y2="${fmt(ly - 4)}" ` +
        `stroke="${fill}" stroke-width="1.5"/>`,
    );
    parts.push(markerShape(series.marker, lx + 11, ly - 4, fill));
    parts.push(
      `<text x="${lx + 28}" y="${fmt(ly)}" font-family="sans-serif" font-size="12">` +
        `${series.scheme}</text>`,
    );
    ly += 18;
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
