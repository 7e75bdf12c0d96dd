// Canvas drawing for structures and for the editor's draft.

import { layoutStructure } from "./layout.js";
import { elementKey } from "./types.js";
import type { StructureDoc } from "./types.js";
import type { GraphView } from "./verdict.js";
import { isDirectedSchema } from "./verdict.js";

export const NODE_RADIUS = 11;

export interface DrawOptions {
  highlighted?: Set<string>;
  positive?: boolean;
}

function drawArrowhead(
  ctx: CanvasRenderingContext2D,
  x1: number,
  y1: number,
  x2: number,
  y2: number,
) {
  const angle = Math.atan2(y2 - y1, x2 - x1);
  const tipX = x2 - Math.cos(angle) * NODE_RADIUS;
  const tipY = y2 - Math.sin(angle) * NODE_RADIUS;
  ctx.beginPath();
  ctx.moveTo(tipX, tipY);
  ctx.lineTo(tipX - 9 * Math.cos(angle - 0.45), tipY - 9 * Math.sin(angle - 0.45));
  ctx.lineTo(tipX - 9 * Math.cos(angle + 0.45), tipY - 9 * Math.sin(angle + 0.45));
  ctx.closePath();
  ctx.fill();
}

export function drawStructure(
  canvas: HTMLCanvasElement,
  doc: StructureDoc,
  options: DrawOptions = {},
): void {
  const ctx = canvas.getContext("2d")!;
  const width = canvas.width;
  const height = canvas.height;
  ctx.clearRect(0, 0, width, height);
  const positions = layoutStructure(doc, width, height);
  const directed = isDirectedSchema(doc);
  const highlighted = options.highlighted ?? new Set<string>();

  const seen = new Set<string>();
  for (const t of doc.relations["E"] ?? []) {
    const a = elementKey(t[0]);
    const b = elementKey(t[1]);
    if (a === b) continue;
    const undirectedKey = a < b ? `${a}|${b}` : `${b}|${a}`;
    if (!directed) {
      if (seen.has(undirectedKey)) continue;
      seen.add(undirectedKey);
    }
    const pa = positions.get(a)!;
    const pb = positions.get(b)!;
    const isWitnessEdge =
      highlighted.has(a) && highlighted.has(b) && highlighted.size > 0;
    ctx.strokeStyle = isWitnessEdge ? "#e07b00" : "#5a6475";
    ctx.lineWidth = isWitnessEdge ? 3 : 1.5;
    ctx.beginPath();
    ctx.moveTo(pa.x, pa.y);
    ctx.lineTo(pb.x, pb.y);
    ctx.stroke();
    if (directed) {
      ctx.fillStyle = ctx.strokeStyle;
      drawArrowhead(ctx, pa.x, pa.y, pb.x, pb.y);
    }
  }

  // self loops as small circles above the node
  for (const t of doc.relations["E"] ?? []) {
    const a = elementKey(t[0]);
    if (a !== elementKey(t[1])) continue;
    const p = positions.get(a)!;
    ctx.strokeStyle = "#5a6475";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.arc(p.x, p.y - NODE_RADIUS - 6, 7, 0, Math.PI * 2);
    ctx.stroke();
  }

  for (const e of doc.universe) {
    const key = elementKey(e);
    const p = positions.get(key)!;
    const hot = highlighted.has(key);
    ctx.beginPath();
    ctx.arc(p.x, p.y, NODE_RADIUS, 0, Math.PI * 2);
    ctx.fillStyle = hot ? "#ffd9a8" : "#dde4f0";
    ctx.fill();
    ctx.strokeStyle = hot ? "#e07b00" : "#2c3443";
    ctx.lineWidth = hot ? 2.5 : 1.5;
    ctx.stroke();
    ctx.fillStyle = "#1d2330";
    ctx.font = "10px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    const label = key.length > 9 ? `${key.slice(0, 8)}…` : key;
    ctx.fillText(label, p.x, p.y);
  }
}

export function renderGraphPanel(container: HTMLElement, view: GraphView): void {
  container.innerHTML = "";
  const title = document.createElement("h4");
  title.textContent = view.title;
  const canvas = document.createElement("canvas");
  canvas.width = 360;
  canvas.height = 240;
  const label = document.createElement("p");
  label.className = view.positive ? "membership positive" : "membership negative";
  label.textContent = view.memberLabel;
  container.append(title, canvas, label);
  if (view.witnessNote) {
    const note = document.createElement("p");
    note.className = "witness-note";
    note.textContent = view.witnessNote;
    container.append(note);
  }
  drawStructure(canvas, view.structure, {
    highlighted: view.highlighted,
    positive: view.positive,
  });
}
