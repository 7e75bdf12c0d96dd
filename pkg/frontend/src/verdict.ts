// Pure view model for rendering verdicts: which side is positive, which
// nodes to highlight, what the labels say. The UI computes nothing itself;
// everything shown traces back to the service response fields.

import { elementKey } from "./types.js";
import type { StructureDoc, VerdictDoc, WitnessDoc } from "./types.js";

export interface GraphView {
  title: string;
  structure: StructureDoc;
  memberLabel: string;
  positive: boolean;
  highlighted: Set<string>; // element keys of witness nodes
  witnessNote: string | null;
}

export interface VerdictView {
  status: "valid" | "invalid" | "unknown";
  headline: string;
  decider: string;
  conditions: string[];
  sourceView: GraphView | null; // the counterexample
  targetView: GraphView | null; // its image under the candidate
  bound: number | null;
}

function witnessNote(w: WitnessDoc | undefined): string | null {
  if (!w) return null;
  if (w.nodes.length === 0) return `${w.kind} witness: the empty set`;
  return `${w.kind} witness: {${w.nodes.join(", ")}}`;
}

export function buildVerdictView(
  verdict: VerdictDoc,
  appliedCounterexample: StructureDoc | null,
): VerdictView {
  const conditions = verdict.conditions ?? [];
  if (verdict.status === "valid") {
    return {
      status: "valid",
      headline: "Valid: the candidate is a correct reduction.",
      decider: verdict.decider,
      conditions,
      sourceView: null,
      targetView: null,
      bound: null,
    };
  }
  if (verdict.status === "unknown") {
    return {
      status: "unknown",
      headline: `No counterexample up to ${verdict.bound} elements (search cannot confirm).`,
      decider: verdict.decider,
      conditions,
      sourceView: null,
      targetView: null,
      bound: verdict.bound ?? null,
    };
  }
  const source = verdict.source!;
  const target = verdict.target!;
  const sourcePositive = source.member;
  const highlight = (w: WitnessDoc | undefined, positive: boolean): Set<string> => {
    if (!w || !positive) return new Set();
    return new Set(w.nodes.map((n) => n));
  };
  const sourceView: GraphView = {
    title: "counterexample G",
    structure: verdict.counterexample!,
    memberLabel: source.member ? "in the source problem" : "not in the source problem",
    positive: sourcePositive,
    highlighted: highlight(source.witness, sourcePositive),
    witnessNote: witnessNote(source.witness),
  };
  const targetView: GraphView | null = appliedCounterexample
    ? {
        title: "its image under the candidate",
        structure: appliedCounterexample,
        memberLabel: target.member ? "in the target problem" : "not in the target problem",
        positive: !sourcePositive,
        highlighted: highlight(target.witness, target.member),
        witnessNote: witnessNote(target.witness),
      }
    : null;
  return {
    status: "invalid",
    headline: "Invalid: memberships disagree on the counterexample below.",
    decider: verdict.decider,
    conditions,
    sourceView,
    targetView,
    bound: null,
  };
}

export function structureNodeKeys(doc: StructureDoc): string[] {
  return doc.universe.map(elementKey);
}

export function undirectedEdgePairs(doc: StructureDoc, relation = "E"): [string, string][] {
  const seen = new Set<string>();
  const out: [string, string][] = [];
  for (const t of doc.relations[relation] ?? []) {
    const a = elementKey(t[0]);
    const b = elementKey(t[1]);
    const key = a < b ? `${a}|${b}` : `${b}|${a}`;
    if (seen.has(key)) continue;
    seen.add(key);
    out.push([a, b]);
  }
  return out;
}

export function isDirectedSchema(doc: StructureDoc): boolean {
  const sym = doc.schema.find((s) => s.name === "E");
  return sym ? !sym.symmetric : false;
}
