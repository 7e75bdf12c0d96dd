// Canvas interactions for the gadget editor: click empty space to add a
// node, drag between nodes to toggle an edge, use the tool buttons to mark
// endpoints / the global set / cross edges, right-click (or tool) to delete.

import { NODE_RADIUS } from "./render.js";
import type { Draft } from "./state.js";
import {
  addNode,
  freshNodeName,
  removeNode,
  setEndpoint,
  toggleCrossEdge,
  toggleEdge,
  toggleMarked,
} from "./state.js";

export type Tool = "draw" | "delete" | "mark-c" | "mark-d" | "mark-a" | "cross";

export interface EditorView {
  draft: Draft;
  tool: Tool;
  positions: Map<string, { x: number; y: number }>;
  pendingCross: number | null; // chosen top-copy node position
  dragFrom: string | null;
}

export function createEditorView(draft: Draft): EditorView {
  return { draft, tool: "draw", positions: new Map(), pendingCross: null, dragFrom: null };
}

export function nodeAt(view: EditorView, x: number, y: number): string | null {
  for (const [name, p] of view.positions) {
    const dx = p.x - x;
    const dy = p.y - y;
    if (dx * dx + dy * dy <= (NODE_RADIUS + 4) ** 2) return name;
  }
  return null;
}

export function placeNode(view: EditorView, name: string, x: number, y: number): void {
  view.positions.set(name, { x, y });
}

/** Apply a click with the active tool; returns the updated draft. */
export function clickAt(view: EditorView, x: number, y: number): Draft {
  const hit = nodeAt(view, x, y);
  const draft = view.draft;
  switch (view.tool) {
    case "draw":
      if (hit === null) {
        const name = freshNodeName(draft);
        view.positions.set(name, { x, y });
        view.draft = addNode(draft, name);
      }
      return view.draft;
    case "delete":
      if (hit !== null) {
        view.positions.delete(hit);
        view.draft = removeNode(draft, hit);
      }
      return view.draft;
    case "mark-c":
      if (hit !== null) view.draft = setEndpoint(draft, "c", hit);
      return view.draft;
    case "mark-d":
      if (hit !== null) view.draft = setEndpoint(draft, "d", hit);
      return view.draft;
    case "mark-a":
      if (hit !== null) view.draft = toggleMarked(draft, hit);
      return view.draft;
    case "cross": {
      if (hit === null) return view.draft;
      const index = draft.nodes.indexOf(hit) + 1;
      if (view.pendingCross === null) {
        view.pendingCross = index;
      } else {
        view.draft = toggleCrossEdge(draft, view.pendingCross, index);
        view.pendingCross = null;
      }
      return view.draft;
    }
  }
}

export function dragBetween(view: EditorView, from: string, to: string): Draft {
  if (view.tool === "draw" && from !== to) {
    view.draft = toggleEdge(view.draft, from, to);
  }
  return view.draft;
}

export function drawEditor(canvas: HTMLCanvasElement, view: EditorView): void {
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const draft = view.draft;

  ctx.strokeStyle = "#5a6475";
  ctx.lineWidth = 1.5;
  for (const [a, b] of draft.edges) {
    const pa = view.positions.get(a);
    const pb = view.positions.get(b);
    if (!pa || !pb) continue;
    ctx.beginPath();
    ctx.moveTo(pa.x, pa.y);
    ctx.lineTo(pb.x, pb.y);
    ctx.stroke();
  }

  if (draft.kind === "node") {
    ctx.strokeStyle = "#3f7fbf";
    ctx.setLineDash([5, 4]);
    for (const [i, j] of draft.crossEdges) {
      const a = draft.nodes[i - 1];
      const b = draft.nodes[j - 1];
      const pa = a && view.positions.get(a);
      const pb = b && view.positions.get(b);
      if (!pa || !pb) continue;
      ctx.beginPath();
      ctx.moveTo(pa.x, pa.y + 6);
      ctx.lineTo(pb.x, pb.y + 6);
      ctx.stroke();
    }
    ctx.setLineDash([]);
  }

  for (const name of draft.nodes) {
    const p = view.positions.get(name);
    if (!p) continue;
    const isC = draft.c === name;
    const isD = draft.d === name;
    const isMarked = draft.marked.includes(name);
    const pendingIdx = view.pendingCross !== null && draft.nodes[view.pendingCross - 1] === name;
    ctx.beginPath();
    ctx.arc(p.x, p.y, NODE_RADIUS, 0, Math.PI * 2);
    ctx.fillStyle = isMarked ? "#cdeccd" : isC || isD ? "#f6e3b3" : "#dde4f0";
    ctx.fill();
    ctx.strokeStyle = pendingIdx ? "#3f7fbf" : "#2c3443";
    ctx.lineWidth = pendingIdx ? 3 : 1.5;
    ctx.stroke();
    ctx.fillStyle = "#1d2330";
    ctx.font = "10px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    let label = name;
    if (isC) label = `c:${name}`;
    if (isD) label = `d:${name}`;
    ctx.fillText(label, p.x, p.y);
  }

  if (draft.kind === "node") {
    ctx.fillStyle = "#7a8394";
    ctx.font = "11px system-ui, sans-serif";
    ctx.textAlign = "left";
    ctx.fillText("cross tool: click a first-copy node, then a second-copy node", 10, canvas.height - 10);
  }
}
