// The "for every / create" panel: per gadget kind, the instruction rows the
// draft induces, as renderable mini-graphs with new parts flagged.

import type { Draft } from "./state.js";

export interface MiniNode {
  id: string;
  label: string;
  fresh: boolean; // created in this step (drawn accented)
  marked?: boolean;
}

export interface MiniEdge {
  from: string;
  to: string;
  fresh: boolean;
  directed?: boolean;
}

export interface MiniGraph {
  nodes: MiniNode[];
  edges: MiniEdge[];
}

export interface RecipeRow {
  forEvery: MiniGraph;
  create: MiniGraph;
  caption: string;
}

function nodeRow(ids: string[], fresh: boolean, labels?: string[]): MiniNode[] {
  return ids.map((id, i) => ({ id, label: labels ? labels[i] : id, fresh }));
}

export function recipeRows(draft: Draft): RecipeRow[] {
  if (draft.kind === "edge") {
    const gadgetNodes: MiniNode[] = draft.nodes.map((n) => ({
      id: n,
      label: n === draft.c ? "u*" : n === draft.d ? "v*" : n,
      fresh: n !== draft.c && n !== draft.d,
    }));
    return [
      {
        caption: "every node is copied",
        forEvery: { nodes: nodeRow(["v"], false), edges: [] },
        create: { nodes: nodeRow(["v*"], true), edges: [] },
      },
      {
        caption: "every edge becomes the gadget, endpoints at u*, v*",
        forEvery: {
          nodes: nodeRow(["u", "v"], false),
          edges: [{ from: "u", to: "v", fresh: false }],
        },
        create: {
          nodes: gadgetNodes,
          edges: draft.edges.map(([a, b]) => ({
            from: a === draft.c ? "u*" : a === draft.d ? "v*" : a,
            to: b === draft.c ? "u*" : b === draft.d ? "v*" : b,
            fresh: true,
          })),
        },
      },
    ];
  }
  if (draft.kind === "node") {
    const top = draft.nodes.map((_, i) => `${i + 1}>`);
    const bottom = draft.nodes.map((_, i) => `${i + 1}<`);
    const copyEdges = (ids: string[]): MiniEdge[] =>
      draft.edges.map(([a, b]) => ({
        from: ids[draft.nodes.indexOf(a)],
        to: ids[draft.nodes.indexOf(b)],
        fresh: false,
      }));
    return [
      {
        caption: "every node becomes the node graph",
        forEvery: { nodes: nodeRow(["v"], false), edges: [] },
        create: {
          nodes: draft.nodes.map((n, i) => ({ id: `${i + 1}`, label: n, fresh: true })),
          edges: draft.edges.map(([a, b]) => ({
            from: `${draft.nodes.indexOf(a) + 1}`,
            to: `${draft.nodes.indexOf(b) + 1}`,
            fresh: true,
          })),
        },
      },
      {
        caption: "every directed edge adds the cross edges between the two copies",
        forEvery: {
          nodes: nodeRow(["u", "v"], false),
          edges: [{ from: "u", to: "v", fresh: false, directed: true }],
        },
        create: {
          nodes: [...nodeRow(top, false), ...nodeRow(bottom, false)],
          edges: [
            ...copyEdges(top),
            ...copyEdges(bottom),
            ...draft.crossEdges.map(([i, j]) => ({
              from: `${i}>`,
              to: `${j}<`,
              fresh: true,
            })),
          ],
        },
      },
    ];
  }
  const globalNodes: MiniNode[] = draft.nodes.map((n) => ({
    id: n,
    label: n,
    fresh: true,
    marked: draft.marked.includes(n),
  }));
  return [
    {
      caption: "once: the global graph (marked nodes join every source node)",
      forEvery: { nodes: [], edges: [] },
      create: {
        nodes: globalNodes,
        edges: draft.edges.map(([a, b]) => ({ from: a, to: b, fresh: true })),
      },
    },
    {
      caption: "every node is copied and connected to the marked set",
      forEvery: { nodes: nodeRow(["v"], false), edges: [] },
      create: {
        nodes: [
          { id: "v*", label: "v*", fresh: true },
          ...globalNodes.map((n) => ({ ...n, fresh: false })),
        ],
        edges: draft.marked.map((m) => ({ from: "v*", to: m, fresh: true })),
      },
    },
    {
      caption: "every edge is copied",
      forEvery: {
        nodes: nodeRow(["u", "v"], false),
        edges: [{ from: "u", to: "v", fresh: false }],
      },
      create: {
        nodes: nodeRow(["u*", "v*"], false),
        edges: [{ from: "u*", to: "v*", fresh: true }],
      },
    },
  ];
}
