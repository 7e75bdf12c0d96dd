import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  EditorState,
  addNode,
  buildRequest,
  draftIssues,
  draftToGadgetDoc,
  emptyDraft,
  removeNode,
  setEndpoint,
  toggleCrossEdge,
  toggleEdge,
  toggleMarked,
} from "../src/state.js";
import type { Draft } from "../src/state.js";

const gadgetDocs = JSON.parse(
  readFileSync(new URL("./fixtures/gadget_docs.json", import.meta.url), "utf-8"),
);

function drawTriangle(): Draft {
  let d = emptyDraft("edge");
  for (const n of ["c", "d", "w"]) d = addNode(d, n);
  d = toggleEdge(d, "c", "d");
  d = toggleEdge(d, "c", "w");
  d = toggleEdge(d, "d", "w");
  d = setEndpoint(d, "c", "c");
  d = setEndpoint(d, "d", "d");
  return d;
}

function drawHamcyclePath(): Draft {
  let d = emptyDraft("node");
  for (const n of ["a", "b", "c"]) d = addNode(d, n);
  d = toggleEdge(d, "a", "b");
  d = toggleEdge(d, "b", "c");
  d = toggleCrossEdge(d, 3, 1);
  return d;
}

function drawGlobalNode(): Draft {
  let d = emptyDraft("global");
  d = addNode(d, "g");
  d = toggleMarked(d, "g");
  return d;
}

describe("draft serialization round-trips against the engine's documents", () => {
  it("triangle edge gadget matches the recorded document", () => {
    expect(draftToGadgetDoc(drawTriangle())).toEqual(gadgetDocs.triangle);
  });

  it("hamcycle node gadget matches the recorded document", () => {
    expect(draftToGadgetDoc(drawHamcyclePath())).toEqual(gadgetDocs.hamcycle);
  });

  it("global clique gadget matches the recorded document", () => {
    expect(draftToGadgetDoc(drawGlobalNode())).toEqual(gadgetDocs.global);
  });

  it("shrinking the triangle to a bare edge matches the recorded document", () => {
    const bare = removeNode(drawTriangle(), "w");
    expect(draftToGadgetDoc(bare)).toEqual(gadgetDocs.bare_edge);
  });

  it("serialization is stable (serialize twice, same bytes)", () => {
    const a = JSON.stringify(draftToGadgetDoc(drawTriangle()));
    const b = JSON.stringify(draftToGadgetDoc(drawTriangle()));
    expect(a).toBe(b);
  });
});

describe("editor operations", () => {
  it("deleting a node cascades its incident edges and marks", () => {
    let d = drawTriangle();
    d = removeNode(d, "w");
    expect(d.nodes).toEqual(["c", "d"]);
    expect(d.edges).toEqual([["c", "d"]]);
    d = removeNode(d, "c");
    expect(d.edges).toEqual([]);
    expect(d.c).toBeNull();
  });

  it("rejects coinciding endpoints locally", () => {
    let d = emptyDraft("edge");
    d = addNode(d, "x");
    d = addNode(d, "y");
    d = setEndpoint(d, "c", "x");
    d = setEndpoint(d, "d", "x");
    expect(draftIssues(d).some((i) => i.message.includes("distinct"))).toBe(true);
  });

  it("allows an empty marked set on a global gadget", () => {
    let d = emptyDraft("global");
    d = addNode(d, "g");
    expect(draftIssues(d)).toEqual([]);
    expect(draftToGadgetDoc(d)).toMatchObject({ kind: "global", marked: [] });
  });

  it("toggling an edge twice removes it, in either orientation", () => {
    let d = emptyDraft("edge");
    d = addNode(d, "x");
    d = addNode(d, "y");
    d = toggleEdge(d, "x", "y");
    d = toggleEdge(d, "y", "x");
    expect(d.edges).toEqual([]);
  });
});

describe("history and staleness", () => {
  it("appends attempts and drops stale responses", () => {
    const state = new EditorState("edge", {
      source: { kind: "vertex-cover", k: 1 },
      target: { kind: "feedback-vertex-set", k: 1 },
    });
    state.draft = drawTriangle();
    const request = buildRequest(state.draft, state.pair);
    const first = state.nextSequence();
    const second = state.nextSequence();
    expect(
      state.record(second, request, { status: "valid", decider: "x" }),
    ).toBe(true);
    // the slower, older response arrives late and must be discarded
    expect(
      state.record(first, request, { status: "invalid", decider: "x" }),
    ).toBe(false);
    expect(state.history).toHaveLength(1);
    expect(state.history[0].verdict.status).toBe("valid");
  });
});
