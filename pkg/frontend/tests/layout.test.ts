import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { digest, layoutStructure, mulberry32 } from "../src/layout.js";
import { recipeRows } from "../src/recipe.js";
import { addNode, emptyDraft, toggleCrossEdge, toggleEdge } from "../src/state.js";
import { elementKey } from "../src/types.js";

const recorded = JSON.parse(
  readFileSync(new URL("./fixtures/recorded_service.json", import.meta.url), "utf-8"),
);

describe("deterministic layout", () => {
  it("prng is reproducible", () => {
    const a = mulberry32(digest("hello"));
    const b = mulberry32(digest("hello"));
    expect([a(), a(), a()]).toEqual([b(), b(), b()]);
  });

  it("same structure lays out identically across calls", () => {
    const doc = recorded["bare-edge-vc-fvs"].response.counterexample;
    const first = layoutStructure(doc);
    const second = layoutStructure(doc);
    expect([...first.entries()]).toEqual([...second.entries()]);
  });

  it("different structures get different seeds", () => {
    const a = recorded["bare-edge-vc-fvs"].response.counterexample;
    const b = recorded["bare-edge-vc-fvs"].applied_counterexample;
    expect(digest(JSON.stringify(a))).not.toBe(digest(JSON.stringify(b)));
  });

  it("tagged single-base elements pin to their copy rows", () => {
    const doc = {
      schema: [{ name: "E", arity: 2, symmetric: true }],
      universe: [
        [["a"], 1],
        [["a"], 2],
        [["b"], 1],
        [["b"], 2],
      ] as [string[], number][],
      relations: { E: [] as never[] },
    };
    const pos = layoutStructure(doc, 300, 200);
    const top1 = pos.get(elementKey([["a"], 1] as never))!;
    const top2 = pos.get(elementKey([["b"], 1] as never))!;
    const bottom = pos.get(elementKey([["a"], 2] as never))!;
    expect(top1.y).toBe(top2.y);
    expect(bottom.y).toBeGreaterThan(top1.y);
  });
});

describe("recipe panel rows", () => {
  it("edge gadget shows copy-node and replace-edge steps", () => {
    let d = emptyDraft("edge");
    for (const n of ["c", "d"]) d = addNode(d, n);
    d = toggleEdge(d, "c", "d");
    const rows = recipeRows({ ...d, c: "c", d: "d" });
    expect(rows).toHaveLength(2);
    expect(rows[0].create.nodes[0].fresh).toBe(true);
    expect(rows[1].forEvery.edges[0].directed).toBeUndefined();
  });

  it("node gadget shows the two-copy cross-edge step", () => {
    let d = emptyDraft("node");
    for (const n of ["a", "b", "c"]) d = addNode(d, n);
    d = toggleEdge(d, "a", "b");
    d = toggleEdge(d, "b", "c");
    d = toggleCrossEdge(d, 3, 1);
    const rows = recipeRows(d);
    expect(rows).toHaveLength(2);
    expect(rows[1].forEvery.edges[0].directed).toBe(true);
    const fresh = rows[1].create.edges.filter((e) => e.fresh);
    expect(fresh).toEqual([{ from: "3>", to: "1<", fresh: true }]);
  });

  it("global gadget shows three steps", () => {
    let d = emptyDraft("global");
    d = addNode(d, "g");
    const rows = recipeRows(d);
    expect(rows).toHaveLength(3);
    expect(rows[0].forEvery.nodes).toHaveLength(0);
  });
});
