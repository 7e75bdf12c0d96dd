// Deterministic force-directed layout. Positions are seeded by a digest of
// the structure document, so the same structure always renders the same way.

import { elementKey } from "./types.js";
import type { StructureDoc } from "./types.js";
import { undirectedEdgePairs } from "./verdict.js";

export interface Point {
  x: number;
  y: number;
}

export function digest(text: string): number {
  // FNV-1a, 32 bit
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Row pin for tagged two-copy drawings: copy 1 on the top row, copy 2 below. */
function pinnedRow(e: StructureDoc["universe"][number]): number | null {
  if (typeof e === "string" || typeof e === "number") return null;
  const [base, copy] = e;
  if (base.length === 1 && (copy === 1 || copy === 2)) return copy;
  return null;
}

export function layoutStructure(
  doc: StructureDoc,
  width = 360,
  height = 260,
  iterations = 180,
): Map<string, Point> {
  const keys = doc.universe.map(elementKey);
  const rng = mulberry32(digest(JSON.stringify(doc)));
  const pos = new Map<string, Point>();
  const pinned = new Map<string, number>();
  doc.universe.forEach((e, i) => {
    const key = keys[i];
    pos.set(key, {
      x: 40 + rng() * (width - 80),
      y: 40 + rng() * (height - 80),
    });
    const row = pinnedRow(e);
    if (row !== null) pinned.set(key, row);
  });
  if (keys.length <= 1) {
    for (const key of keys) pos.set(key, { x: width / 2, y: height / 2 });
    return pos;
  }

  const edges = undirectedEdgePairs(doc);
  const ideal = Math.min(width, height) / Math.max(2, Math.sqrt(keys.length) + 1);
  for (let step = 0; step < iterations; step++) {
    const force = new Map<string, Point>(keys.map((k) => [k, { x: 0, y: 0 }]));
    for (let i = 0; i < keys.length; i++) {
      for (let j = i + 1; j < keys.length; j++) {
        const a = pos.get(keys[i])!;
        const b = pos.get(keys[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const rep = (ideal * ideal) / d2;
        dx *= rep;
        dy *= rep;
        const fa = force.get(keys[i])!;
        const fb = force.get(keys[j])!;
        fa.x += dx;
        fa.y += dy;
        fb.x -= dx;
        fb.y -= dy;
      }
    }
    for (const [a, b] of edges) {
      const pa = pos.get(a)!;
      const pb = pos.get(b)!;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = (dist - ideal) * 0.08;
      const fa = force.get(a)!;
      const fb = force.get(b)!;
      fa.x += (dx / dist) * pull * ideal * 0.5;
      fa.y += (dy / dist) * pull * ideal * 0.5;
      fb.x -= (dx / dist) * pull * ideal * 0.5;
      fb.y -= (dy / dist) * pull * ideal * 0.5;
    }
    const cool = 1 - step / iterations;
    for (const key of keys) {
      const p = pos.get(key)!;
      const f = force.get(key)!;
      const len = Math.max(Math.sqrt(f.x * f.x + f.y * f.y), 0.01);
      const cap = 8 * cool + 0.5;
      p.x += (f.x / len) * Math.min(len, cap);
      p.y += (f.y / len) * Math.min(len, cap);
      p.x = Math.min(width - 24, Math.max(24, p.x));
      p.y = Math.min(height - 24, Math.max(24, p.y));
      const row = pinned.get(key);
      if (row !== undefined) {
        p.y = row === 1 ? height * 0.3 : height * 0.7;
      }
    }
  }
  return pos;
}
