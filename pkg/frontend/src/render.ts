// Deterministic SVG rendering: circular layout by node id, a fixed
// visual palette, index badges on greens and reds, shade halos on base
// tuples. Pure string output so it can be snapshot tested headlessly.

import type { Colour, Shade } from "./types";
import { describeColour, type GraphView } from "./view";

const SIZE = 360;
const RADIUS = 130;

export function colourStyle(c: Colour): { stroke: string; dash: string } {
  switch (c.kind) {
    case "greenI":
    case "greenSuper":
      return { stroke: "#1a7f37", dash: "" };
    case "white":
    case "whiteF":
      return { stroke: "#8b949e", dash: "4 3" };
    case "yellow":
      return { stroke: "#d4a72c", dash: "" };
    case "black":
      return { stroke: "#24292f", dash: "" };
    case "red":
      return { stroke: "#cf222e", dash: "" };
  }
}

function layout(nodes: number[]): Map<number, { x: number; y: number }> {
  const out = new Map<number, { x: number; y: number }>();
  const centre = SIZE / 2;
  nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / Math.max(nodes.length, 1) - Math.PI / 2;
    out.set(node, {
      x: Math.round(centre + RADIUS * Math.cos(angle)),
      y: Math.round(centre + RADIUS * Math.sin(angle)),
    });
  });
  return out;
}

function shadeText(s: Shade): string {
  return "all" in s && s.all ? "S=all" : `S={${(s as { set: number[] }).set.join(",")}}`;
}

export function renderSvg(graph: GraphView): string {
  const pos = layout(graph.nodes);
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${SIZE} ${SIZE}" width="${SIZE}" height="${SIZE}">`,
  ];
  const edges = [...graph.edges].sort((a, b) => a.u - b.u || a.v - b.v);
  for (const e of edges) {
    const p = pos.get(e.u)!;
    const q = pos.get(e.v)!;
    const { stroke, dash } = colourStyle(e.colour);
    parts.push(
      `<line x1="${p.x}" y1="${p.y}" x2="${q.x}" y2="${q.y}" stroke="${stroke}"` +
        (dash ? ` stroke-dasharray="${dash}"` : "") +
        ` stroke-width="2"/>`,
    );
    const mx = Math.round((p.x + q.x) / 2);
    const my = Math.round((p.y + q.y) / 2);
    parts.push(
      `<text x="${mx}" y="${my}" font-size="11" fill="${stroke}" text-anchor="middle">` +
        `${escapeXml(describeColour(e.colour))}</text>`,
    );
  }
  const shades = [...graph.shades].sort((a, b) =>
    a.base.join(",") < b.base.join(",") ? -1 : 1,
  );
  for (const s of shades) {
    const first = pos.get(s.base[0]);
    if (!first) continue;
    parts.push(
      `<circle cx="${first.x}" cy="${first.y}" r="22" fill="none" ` +
        `stroke="#d4a72c" stroke-opacity="0.5">` +
        `<title>base (${s.base.join(",")}): ${escapeXml(shadeText(s.shade))}</title></circle>`,
    );
  }
  for (const node of graph.nodes) {
    const p = pos.get(node)!;
    parts.push(
      `<circle cx="${p.x}" cy="${p.y}" r="14" fill="#f6f8fa" stroke="#24292f"/>`,
      `<text x="${p.x}" y="${p.y + 4}" font-size="12" text-anchor="middle">${node}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
