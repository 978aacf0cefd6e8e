/** Graph view: renders the graph export as an SVG string with kind-based
 * styling classes, plus a node-details panel (assertions mentioning the
 * node; for systems, every primary-purpose phrasing current and
 * superseded). */

import type {
  GraphExport,
  GraphNode,
  SessionPayload,
} from "../types.js";

const COLUMN_FOR_TYPE: Record<GraphNode["type"], number> = {
  system: 0,
  aspect: 1,
  action: 2,
  purpose: 3,
};

const NODE_WIDTH = 200;
const NODE_HEIGHT = 36;
const COLUMN_GAP = 60;
const ROW_GAP = 16;

interface Position {
  x: number;
  y: number;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Deterministic layered layout: one column per node type, nodes stacked in
 * served order. */
export function layout(graph: GraphExport): Map<string, Position> {
  const rows: Record<number, number> = {};
  const positions = new Map<string, Position>();
  for (const node of graph.nodes) {
    const column = COLUMN_FOR_TYPE[node.type];
    const row = rows[column] ?? 0;
    rows[column] = row + 1;
    positions.set(node.id, {
      x: column * (NODE_WIDTH + COLUMN_GAP),
      y: row * (NODE_HEIGHT + ROW_GAP),
    });
  }
  return positions;
}

export function renderGraphSvg(graph: GraphExport): string {
  if (graph.nodes.length === 0) {
    return (
      '<svg xmlns="http://www.w3.org/2000/svg" width="400" height="80">' +
      '<text x="10" y="40" class="empty-state">Nothing articulated yet.</text>' +
      "</svg>"
    );
  }
  const positions = layout(graph);
  const width = 4 * (NODE_WIDTH + COLUMN_GAP);
  const height =
    Math.max(...[...positions.values()].map((p) => p.y)) + NODE_HEIGHT + ROW_GAP;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">`,
  ];
  for (const edge of graph.edges) {
    const from = positions.get(edge.source);
    const to = positions.get(edge.target);
    if (from === undefined || to === undefined) {
      continue;
    }
    parts.push(
      `<line class="edge ${edge.type}" ` +
        `x1="${from.x + NODE_WIDTH / 2}" y1="${from.y + NODE_HEIGHT / 2}" ` +
        `x2="${to.x + NODE_WIDTH / 2}" y2="${to.y + NODE_HEIGHT / 2}"/>`,
    );
  }
  for (const node of graph.nodes) {
    const pos = positions.get(node.id)!;
    const classes = ["node", node.type, node.kind];
    if (node.status !== undefined) {
      classes.push(node.status);
    }
    parts.push(
      `<g class="${classes.join(" ")}" data-id="${escapeXml(node.id)}">` +
        `<rect x="${pos.x}" y="${pos.y}" width="${NODE_WIDTH}" height="${NODE_HEIGHT}"/>` +
        `<text x="${pos.x + 8}" y="${pos.y + 22}">${escapeXml(node.label)}</text>` +
        "</g>",
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Details shown when a node is selected. */
export function renderNodeDetails(
  session: SessionPayload,
  nodeId: string,
): string {
  const lines: string[] = [`Selected: ${nodeId}`];
  const system = session.systems.find((s) => s.id === nodeId);
  if (system !== undefined) {
    lines.push(`System ${system.name} (${system.kind})`);
    const primaries = session.purposes.filter(
      (p) => p.kind === "primary" && p.owner_system === nodeId,
    );
    for (const purpose of primaries) {
      lines.push(`Primary purpose (${purpose.status}): ${purpose.verb_phrase}`);
    }
  }
  const purpose = session.purposes.find((p) => p.id === nodeId);
  if (purpose !== undefined) {
    lines.push(`Purpose (${purpose.kind}, ${purpose.status}): ${purpose.verb_phrase}`);
  }
  const mentions = session.assertions.filter(
    (a) => a.status === "current" && a.referenced_entities.includes(nodeId),
  );
  lines.push(
    mentions.length === 0
      ? "No current assertions reference this node."
      : `Referenced by: ${mentions.map((a) => a.id).join(", ")}`,
  );
  return lines.join("\n");
}
