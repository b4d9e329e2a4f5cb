// Dialogue graph view: BFS layering into columns, rendered as inline SVG.
// Unreachable states are drawn red, end states with a double ring.

import { DialogueGraphView } from "./api.js";

const COLUMN_WIDTH = 170;
const ROW_HEIGHT = 70;
const RADIUS = 24;

interface Placed {
  name: string;
  x: number;
  y: number;
  reachable: boolean;
  end: boolean;
}

export function layoutGraph(graph: DialogueGraphView): string {
  const adjacency = new Map<string, string[]>();
  for (const entry of graph.entries) {
    const list = adjacency.get(entry.currentState) ?? [];
    list.push(entry.nextState);
    adjacency.set(entry.currentState, list);
  }
  const incoming = new Set(graph.entries.map((e) => e.nextState));
  const roots = graph.states
    .filter((s) => !incoming.has(s.name) || s.name.toLowerCase().startsWith("start"))
    .map((s) => s.name);
  const depth = new Map<string, number>();
  const queue: string[] = [];
  for (const root of roots.length ? roots : graph.states.slice(0, 1).map((s) => s.name)) {
    depth.set(root, 0);
    queue.push(root);
  }
  while (queue.length) {
    const state = queue.shift()!;
    for (const next of adjacency.get(state) ?? []) {
      if (!depth.has(next)) {
        depth.set(next, (depth.get(state) ?? 0) + 1);
        queue.push(next);
      }
    }
  }
  let extraColumn = 0;
  for (const s of graph.states) {
    if (!depth.has(s.name)) {
      // Unreachable islands go in their own trailing columns.
      extraColumn += 1;
      depth.set(s.name, Math.max(0, ...depth.values()) + 1);
    }
  }
  const byColumn = new Map<number, string[]>();
  for (const state of graph.states) {
    const column = depth.get(state.name) ?? 0;
    const list = byColumn.get(column) ?? [];
    list.push(state.name);
    byColumn.set(column, list);
  }
  const placed = new Map<string, Placed>();
  for (const [column, names] of byColumn) {
    names.forEach((name, row) => {
      const meta = graph.states.find((s) => s.name === name)!;
      placed.set(name, {
        name,
        x: 60 + column * COLUMN_WIDTH,
        y: 50 + row * ROW_HEIGHT,
        reachable: meta.reachable,
        end: meta.end,
      });
    });
  }
  const width = 120 + Math.max(0, ...[...byColumn.keys()]) * COLUMN_WIDTH;
  const height =
    100 + Math.max(0, ...[...byColumn.values()].map((list) => list.length - 1)) * ROW_HEIGHT;

  const edges = graph.entries
    .map((entry) => {
      const from = placed.get(entry.currentState);
      const to = placed.get(entry.nextState);
      if (!from || !to) {
        return "";
      }
      const label = esc(entry.id);
      const mx = (from.x + to.x) / 2;
      const my = (from.y + to.y) / 2 - 8;
      return (
        `<line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}" class="edge"` +
        ` marker-end="url(#arrow)"><title>${esc(entry.utterance)}</title></line>` +
        `<text x="${mx}" y="${my}" class="edge-label">${label}</text>`
      );
    })
    .join("");
  const nodes = [...placed.values()]
    .map((node) => {
      const cls = node.reachable ? "state" : "state unreachable";
      const ring = node.end
        ? `<circle cx="${node.x}" cy="${node.y}" r="${RADIUS + 4}" class="end-ring"/>`
        : "";
      return (
        `<g class="${cls}" data-state="${esc(node.name)}">${ring}` +
        `<circle cx="${node.x}" cy="${node.y}" r="${RADIUS}"/>` +
        `<text x="${node.x}" y="${node.y + 4}">${esc(node.name)}</text></g>`
      );
    })
    .join("");
  return (
    `<svg class="dialogue-graph" viewBox="0 0 ${width} ${height}"` +
    ` xmlns="http://www.w3.org/2000/svg">` +
    `<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="26" refY="4"` +
    ` orient="auto"><path d="M0,0 L8,4 L0,8 z"/></marker></defs>` +
    edges +
    nodes +
    `</svg>`
  );
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
