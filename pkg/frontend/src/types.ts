// Wire format mirrors of the service documents.

export interface RelationSymbolDoc {
  name: string;
  arity: number;
  symmetric: boolean;
}

export type ElementDoc = string | number | [Array<string | number>, number];

export interface StructureDoc {
  schema: RelationSymbolDoc[];
  universe: ElementDoc[];
  relations: Record<string, ElementDoc[][]>;
}

export interface EdgeGadgetDoc {
  kind: "edge";
  graph: StructureDoc;
  c: string;
  d: string;
}

export interface NodeGadgetDoc {
  kind: "node";
  node_graph: StructureDoc;
  cross_edges: [number, number][];
}

export interface GlobalGadgetDoc {
  kind: "global";
  graph: StructureDoc;
  marked: string[];
}

export type GadgetDoc = EdgeGadgetDoc | NodeGadgetDoc | GlobalGadgetDoc;

export interface ProblemDoc {
  kind?: string;
  k?: number;
  fo?: string;
}

export interface ValidationRequest {
  gadget?: GadgetDoc;
  cookbook?: unknown;
  interpretation?: unknown;
  source_problem: ProblemDoc;
  target_problem: ProblemDoc;
  budget?: number;
}

export interface WitnessDoc {
  kind: string;
  nodes: string[];
}

export interface SideDoc {
  member: boolean;
  witness?: WitnessDoc;
}

export interface VerdictDoc {
  status: "valid" | "invalid" | "unknown";
  decider: string;
  conditions?: string[];
  counterexample?: StructureDoc;
  source?: SideDoc;
  target?: SideDoc;
  bound?: number;
}

export interface ViolationDoc {
  condition: string;
  arity: number;
  message: string;
}

export interface ServiceError {
  error: string;
  report?: { ok: boolean; violations: ViolationDoc[] };
}

export function elementKey(e: ElementDoc): string {
  if (typeof e === "string" || typeof e === "number") return String(e);
  const [base, copy] = e;
  return `(${base.map(String).sort().join(",")},${copy})`;
}
