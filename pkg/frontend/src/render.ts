/**
 * Pure SVG rendering of the graph view: top-down (x, y) projection with z as
 * an elevation tint, classification badges per node, human trajectory
 * polylines with footprint circles. No DOM access — main.ts injects the
 * string — so everything here is unit-testable.
 */

import { Badge, ScenarioDoc } from "./api.js";
import { GraphViewState } from "./state.js";

export const BADGE_COLORS: Record<Badge, string> = {
  occupied: "#d62728",
  isolated: "#ff7f0e",
  visible: "#1f77b4",
  unaffected: "#9a9a9a",
};

export interface Viewport {
  width: number;
  height: number;
  margin: number;
}

export const DEFAULT_VIEWPORT: Viewport = { width: 900, height: 640, margin: 30 };

export interface Projection {
  toScreen(x: number, y: number): [number, number];
}

/** Fit the scenario's bounding box into the viewport, preserving aspect. */
export function fitProjection(doc: ScenarioDoc, vp: Viewport = DEFAULT_VIEWPORT): Projection {
  const xs = doc.nodes.map((n) => n.xyz[0]);
  const ys = doc.nodes.map((n) => n.xyz[1]);
  const minX = Math.min(...xs);
  const minY = Math.min(...ys);
  const spanX = Math.max(...xs) - minX || 1;
  const spanY = Math.max(...ys) - minY || 1;
  const scale = Math.min(
    (vp.width - 2 * vp.margin) / spanX,
    (vp.height - 2 * vp.margin) / spanY,
  );
  return {
    toScreen(x, y) {
      // flip y: world +y points up, SVG +y points down
      return [
        vp.margin + (x - minX) * scale,
        vp.height - vp.margin - (y - minY) * scale,
      ];
    },
  };
}

function elevationTint(z: number): string {
  // z is metres above the ground floor; darken slightly with height
  const shade = Math.max(0, Math.min(60, Math.round(z * 12)));
  return `rgb(${255 - shade},${255 - shade},${255 - shade})`;
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function renderGraph(
  view: GraphViewState,
  vp: Viewport = DEFAULT_VIEWPORT,
  selected: string | null = null,
): string {
  const { doc, badges, preview } = view;
  const proj = fitProjection(doc, vp);
  const pos = new Map(doc.nodes.map((n) => [n.id, proj.toScreen(n.xyz[0], n.xyz[1])]));
  const previewSet = new Set(preview?.nodes ?? []);
  const parts: string[] = [];

  for (const [a, b] of doc.edges) {
    const pa = pos.get(a);
    const pb = pos.get(b);
    if (!pa || !pb) continue;
    parts.push(
      `<line class="edge" x1="${pa[0].toFixed(1)}" y1="${pa[1].toFixed(1)}" ` +
        `x2="${pb[0].toFixed(1)}" y2="${pb[1].toFixed(1)}" stroke="#cccccc"/>`,
    );
  }

  for (const human of doc.humans) {
    const pts = human.waypoints
      .map(([x, y]) => proj.toScreen(x, y).map((v) => v.toFixed(1)).join(","))
      .join(" ");
    if (human.waypoints.length > 1) {
      parts.push(
        `<polyline class="trajectory" data-human="${esc(human.id)}" points="${pts}" ` +
          `fill="none" stroke="#d62728" stroke-dasharray="4 3"/>`,
      );
    }
    const wp = human.waypoints[0];
    if (wp) {
      const [cx, cy] = proj.toScreen(wp[0], wp[1]);
      parts.push(
        `<circle class="footprint" data-human="${esc(human.id)}" cx="${cx.toFixed(1)}" ` +
          `cy="${cy.toFixed(1)}" r="10" fill="#d6272833" stroke="#d62728"/>`,
      );
    }
  }

  for (const node of doc.nodes) {
    const [cx, cy] = pos.get(node.id)!;
    const badge: Badge = badges[node.id] ?? "unaffected";
    const ring = previewSet.has(node.id) ? ' stroke="#000000" stroke-width="2.5"' : "";
    const halo = node.id === selected ? ' filter="url(#sel)"' : "";
    parts.push(
      `<circle class="node badge-${badge}" data-node="${esc(node.id)}" ` +
        `cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="6" ` +
        `fill="${BADGE_COLORS[badge]}"${ring}${halo}>` +
        `<title>${esc(node.id)} (${esc(node.region)}, ${badge})</title></circle>`,
      `<circle class="tint" cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="2" ` +
        `fill="${elevationTint(node.xyz[2])}"/>`,
    );
  }

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${vp.width} ${vp.height}" ` +
    `width="${vp.width}" height="${vp.height}">` +
    `<defs><filter id="sel"><feDropShadow dx="0" dy="0" stdDeviation="3"/></filter></defs>` +
    parts.join("") +
    `</svg>`
  );
}

export function renderLegend(): string {
  const entries = (Object.keys(BADGE_COLORS) as Badge[])
    .map(
      (b) =>
        `<span class="legend-entry"><span class="swatch" ` +
        `style="background:${BADGE_COLORS[b]}"></span>${b}</span>`,
    )
    .join(" ");
  return `<div class="legend">${entries}</div>`;
}
