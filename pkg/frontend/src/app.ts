// Page wiring: editor canvas, recipe panel, problem pair, submit, verdict.

import { ApiError, applyCandidate, submitValidation } from "./api.js";
import { clickAt, createEditorView, drawEditor, dragBetween, nodeAt } from "./editor.js";
import type { EditorView, Tool } from "./editor.js";
import { recipeRows } from "./recipe.js";
import { renderGraphPanel } from "./render.js";
import {
  EditorState,
  buildRequest,
  draftIssues,
  draftToGadgetDoc,
  emptyDraft,
} from "./state.js";
import type { GadgetKind, ProblemPair } from "./state.js";
import { buildVerdictView } from "./verdict.js";
import type { VerdictDoc } from "./types.js";

const PAIRS: Record<string, { label: string; pair: ProblemPair; kind: GadgetKind }> = {
  "vc-fvs": {
    label: "k-VertexCover to k-FeedbackVertexSet (edge gadget)",
    pair: {
      source: { kind: "vertex-cover", k: 2 },
      target: { kind: "feedback-vertex-set", k: 2 },
    },
    kind: "edge",
  },
  hamcycle: {
    label: "directed to undirected HamCycle (node gadget)",
    pair: { source: { kind: "hamcycle-d" }, target: { kind: "hamcycle-u" } },
    kind: "node",
  },
  clique: {
    label: "3-Clique to 4-Clique (global gadget)",
    pair: { source: { kind: "clique", k: 3 }, target: { kind: "clique", k: 4 } },
    kind: "global",
  },
};

function el<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("editor-canvas");
  const pairSelect = el<HTMLSelectElement>("pair-select");
  const kSource = el<HTMLInputElement>("k-source");
  const kTarget = el<HTMLInputElement>("k-target");
  const toolbar = el<HTMLDivElement>("toolbar");
  const issuesBox = el<HTMLUListElement>("issues");
  const recipeBox = el<HTMLDivElement>("recipe");
  const verdictBox = el<HTMLDivElement>("verdict");
  const historyBox = el<HTMLOListElement>("history");
  const submitButton = el<HTMLButtonElement>("submit");
  const resetButton = el<HTMLButtonElement>("reset");
  const jsonBox = el<HTMLTextAreaElement>("candidate-json");

  for (const [value, p] of Object.entries(PAIRS)) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = p.label;
    pairSelect.append(option);
  }

  let state = new EditorState("edge", PAIRS["vc-fvs"].pair);
  let view: EditorView = createEditorView(state.draft);

  function currentPair(): ProblemPair {
    const preset = PAIRS[pairSelect.value];
    const pair: ProblemPair = JSON.parse(JSON.stringify(preset.pair));
    if (pair.source.kind === "vertex-cover") {
      pair.source.k = Number(kSource.value) || 1;
      pair.target.k = Number(kSource.value) || 1;
    }
    if (pair.source.kind === "clique") {
      pair.source.k = Number(kSource.value) || 3;
      pair.target.k = Number(kTarget.value) || 4;
    }
    return pair;
  }

  function refresh(): void {
    view.draft = state.draft;
    drawEditor(canvas, view);
    const issues = draftIssues(state.draft);
    issuesBox.innerHTML = "";
    for (const issue of issues) {
      const li = document.createElement("li");
      li.textContent = issue.message;
      issuesBox.append(li);
    }
    submitButton.disabled = issues.length > 0;
    renderRecipe();
    try {
      jsonBox.value = JSON.stringify({ gadget: draftToGadgetDoc(state.draft) }, null, 2);
    } catch {
      jsonBox.value = "(draft incomplete)";
    }
  }

  function renderRecipe(): void {
    recipeBox.innerHTML = "";
    for (const row of recipeRows(state.draft)) {
      const rowEl = document.createElement("div");
      rowEl.className = "recipe-row";
      const forEvery = document.createElement("div");
      forEvery.className = "recipe-cell";
      forEvery.innerHTML = `<span class="cell-head">for every</span>`;
      forEvery.append(miniGraph(row.forEvery));
      const create = document.createElement("div");
      create.className = "recipe-cell";
      create.innerHTML = `<span class="cell-head">create</span>`;
      create.append(miniGraph(row.create));
      const caption = document.createElement("p");
      caption.className = "recipe-caption";
      caption.textContent = row.caption;
      rowEl.append(forEvery, create, caption);
      recipeBox.append(rowEl);
    }
  }

  function miniGraph(g: { nodes: { id: string; label: string; fresh: boolean; marked?: boolean }[]; edges: { from: string; to: string; fresh: boolean; directed?: boolean }[] }): HTMLElement {
    const box = document.createElement("div");
    box.className = "mini-graph";
    if (g.nodes.length === 0) {
      box.textContent = "(nothing)";
      return box;
    }
    const mini = document.createElement("canvas");
    mini.width = 150;
    mini.height = 84;
    box.append(mini);
    const ctx = mini.getContext("2d")!;
    const pos = new Map<string, { x: number; y: number }>();
    const topIds = g.nodes.filter((n) => n.id.endsWith(">"));
    const bottomIds = g.nodes.filter((n) => n.id.endsWith("<"));
    if (topIds.length && bottomIds.length) {
      topIds.forEach((n, i) => pos.set(n.id, { x: 25 + (i * 100) / Math.max(1, topIds.length - 1), y: 22 }));
      bottomIds.forEach((n, i) => pos.set(n.id, { x: 25 + (i * 100) / Math.max(1, bottomIds.length - 1), y: 62 }));
    } else {
      g.nodes.forEach((n, i) => {
        const angle = (2 * Math.PI * i) / g.nodes.length - Math.PI / 2;
        pos.set(n.id, {
          x: 75 + (g.nodes.length > 1 ? 45 * Math.cos(angle) : 0),
          y: 42 + (g.nodes.length > 1 ? 26 * Math.sin(angle) : 0),
        });
      });
    }
    for (const edge of g.edges) {
      const a = pos.get(edge.from);
      const b = pos.get(edge.to);
      if (!a || !b) continue;
      ctx.strokeStyle = edge.fresh ? "#2565c7" : "#97a0b0";
      ctx.lineWidth = edge.fresh ? 2 : 1.2;
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
      if (edge.directed) {
        const angle = Math.atan2(b.y - a.y, b.x - a.x);
        ctx.fillStyle = ctx.strokeStyle;
        ctx.beginPath();
        ctx.moveTo(b.x - 7 * Math.cos(angle), b.y - 7 * Math.sin(angle));
        ctx.lineTo(b.x - 13 * Math.cos(angle - 0.4), b.y - 13 * Math.sin(angle - 0.4));
        ctx.lineTo(b.x - 13 * Math.cos(angle + 0.4), b.y - 13 * Math.sin(angle + 0.4));
        ctx.fill();
      }
    }
    for (const node of g.nodes) {
      const p = pos.get(node.id)!;
      ctx.beginPath();
      ctx.arc(p.x, p.y, 7, 0, Math.PI * 2);
      ctx.fillStyle = node.marked ? "#cdeccd" : node.fresh ? "#bcd6f7" : "#e4e8f0";
      ctx.fill();
      ctx.strokeStyle = node.fresh ? "#2565c7" : "#555e6e";
      ctx.stroke();
      ctx.fillStyle = "#1d2330";
      ctx.font = "8px system-ui, sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(node.label.slice(0, 4), p.x, p.y + 2.5);
    }
    return box;
  }

  async function submit(): Promise<void> {
    const pair = currentPair();
    state.pair = pair;
    const request = buildRequest(state.draft, pair);
    const seq = state.nextSequence();
    verdictBox.innerHTML = `<p class="pending">validating…</p>`;
    try {
      const verdict = await submitValidation(request);
      let applied = null;
      if (verdict.status === "invalid" && verdict.counterexample) {
        applied = await applyCandidate(request.gadget, verdict.counterexample);
      }
      if (!state.record(seq, request, verdict)) return; // stale response
      renderVerdict(verdict, applied);
      renderHistory();
    } catch (error) {
      if (error instanceof ApiError) {
        verdictBox.innerHTML = "";
        const head = document.createElement("p");
        head.className = "error";
        head.textContent = `service error (${error.status}): ${error.message}`;
        verdictBox.append(head);
        const report = error.body?.report;
        if (report) {
          const list = document.createElement("ul");
          for (const violation of report.violations) {
            const li = document.createElement("li");
            li.textContent = `${violation.condition}: ${violation.message}`;
            list.append(li);
          }
          verdictBox.append(list);
        }
      } else {
        verdictBox.innerHTML = `<p class="error">${String(error)}</p>`;
      }
    }
  }

  function renderVerdict(verdict: VerdictDoc, applied: Parameters<typeof buildVerdictView>[1]): void {
    const model = buildVerdictView(verdict, applied);
    verdictBox.innerHTML = "";
    const head = document.createElement("p");
    head.className = `headline ${model.status}`;
    head.textContent = model.headline;
    verdictBox.append(head);
    const meta = document.createElement("p");
    meta.className = "decider";
    meta.textContent = `decided by: ${model.decider}`;
    verdictBox.append(meta);
    if (model.conditions.length) {
      const list = document.createElement("ul");
      for (const condition of model.conditions) {
        const li = document.createElement("li");
        li.textContent = condition;
        list.append(li);
      }
      verdictBox.append(list);
    }
    if (model.sourceView) {
      const row = document.createElement("div");
      row.className = "counterexample-row";
      const left = document.createElement("div");
      const right = document.createElement("div");
      row.append(left, right);
      verdictBox.append(row);
      renderGraphPanel(left, model.sourceView);
      if (model.targetView) renderGraphPanel(right, model.targetView);
    }
  }

  function renderHistory(): void {
    historyBox.innerHTML = "";
    state.history.forEach((attempt, index) => {
      const li = document.createElement("li");
      const status = attempt.verdict.status;
      li.textContent = `attempt ${index + 1}: ${status}`;
      li.className = status;
      historyBox.append(li);
    });
    const previous = state.previousAttempt();
    const compare = el<HTMLParagraphElement>("compare-previous");
    if (previous) {
      const latest = state.history[state.history.length - 1];
      compare.textContent =
        previous.verdict.status === latest.verdict.status
          ? `no change from the previous attempt (${previous.verdict.status})`
          : `changed from ${previous.verdict.status} to ${latest.verdict.status}`;
    } else {
      compare.textContent = "";
    }
  }

  // --- event wiring ---------------------------------------------------------

  toolbar.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const tool = target.dataset.tool as Tool | undefined;
    if (!tool) return;
    view.tool = tool;
    view.pendingCross = null;
    for (const button of toolbar.querySelectorAll("button")) {
      button.classList.toggle("active", button === target);
    }
    refresh();
  });

  let dragStart: string | null = null;
  canvas.addEventListener("mousedown", (event) => {
    const rect = canvas.getBoundingClientRect();
    dragStart = nodeAt(view, event.clientX - rect.left, event.clientY - rect.top);
  });
  canvas.addEventListener("mouseup", (event) => {
    const rect = canvas.getBoundingClientRect();
    const x = event.clientX - rect.left;
    const y = event.clientY - rect.top;
    const end = nodeAt(view, x, y);
    if (dragStart && end && dragStart !== end) {
      dragBetween(view, dragStart, end);
      state.draft = view.draft;
    } else {
      clickAt(view, x, y);
      state.draft = view.draft;
    }
    dragStart = null;
    refresh();
  });

  pairSelect.addEventListener("change", () => {
    const preset = PAIRS[pairSelect.value];
    state = new EditorState(preset.kind, preset.pair);
    view = createEditorView(state.draft);
    const parametric = preset.pair.source.kind !== "hamcycle-d";
    el<HTMLDivElement>("k-row").style.display = parametric ? "flex" : "none";
    el<HTMLDivElement>("k-target-row").style.display =
      preset.pair.source.kind === "clique" ? "flex" : "none";
    verdictBox.innerHTML = "";
    historyBox.innerHTML = "";
    refresh();
  });

  submitButton.addEventListener("click", () => void submit());
  resetButton.addEventListener("click", () => {
    state.draft = emptyDraft(state.draft.kind);
    view = createEditorView(state.draft);
    refresh();
  });

  refresh();
}

document.addEventListener("DOMContentLoaded", main);
