"""Exact decision procedures for the built-in problem collection.

Every positive answer for a built-in problem comes with a witness that
verify_witness accepts independently. Solvers are plain backtracking; instances
are desk scale by design.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import MalformedDocument, SchemaMismatch
from .structures import (
    Schema,
    Structure,
    directed_graph_schema,
    element_key,
    undirected_graph_schema,
)

BUILTIN_KINDS = (
    "clique",
    "independent-set",
    "vertex-cover",
    "feedback-vertex-set",
    "hamcycle-u",
    "hamcycle-d",
)
_PARAMETRIC = {"clique", "independent-set", "vertex-cover", "feedback-vertex-set"}


@dataclass(frozen=True)
class ProblemDef:
    kind: str  # builtin kind, "fo", or "empty"
    k: Optional[int] = None
    sentence: object = None  # logic.Formula for kind == "fo"
    fo_schema: Optional[Schema] = None

    def __post_init__(self):
        if self.kind in _PARAMETRIC:
            if self.k is None or self.k < 0:
                raise ValueError(f"{self.kind} needs a parameter k >= 0")
        elif self.kind in ("hamcycle-u", "hamcycle-d", "empty"):
            if self.k is not None:
                raise ValueError(f"{self.kind} takes no parameter")
        elif self.kind == "fo":
            if self.sentence is None:
                raise ValueError("fo problems need a sentence")
        else:
            raise ValueError(f"unknown problem kind {self.kind!r}")

    @property
    def schema(self) -> Schema:
        if self.kind == "fo":
            if self.fo_schema is not None:
                return self.fo_schema
            from .logic import formula_schema

            return formula_schema(self.sentence)
        if self.kind == "hamcycle-d":
            return directed_graph_schema()
        if self.kind == "empty":
            return undirected_graph_schema()
        return undirected_graph_schema()

    def label(self) -> str:
        if self.kind in _PARAMETRIC:
            return f"{self.k}-{self.kind}"
        return self.kind


@dataclass(frozen=True)
class Witness:
    kind: str
    nodes: tuple  # subset for set problems, cyclic sequence for hamcycle

    def to_doc(self) -> dict:
        return {"kind": self.kind, "nodes": [str(n) for n in self.nodes]}


@dataclass(frozen=True)
class Decision:
    member: bool
    witness: Optional[Witness] = None


def _check_schema(p: ProblemDef, s: Structure) -> None:
    if s.schema != p.schema:
        raise SchemaMismatch(
            f"problem {p.label()} expects schema {p.schema.names}, got {s.schema.names}"
        )


def _neighbours(s: Structure) -> dict:
    adj = {v: set() for v in s.universe}
    for (u, v) in s.relations["E"]:
        if u != v:
            adj[u].add(v)
    return adj


def _find_clique(s: Structure, k: int, complement: bool) -> Optional[tuple]:
    """Least k-subset (by universe order) that is a clique / independent set."""
    nodes = list(s.universe)
    adj = _neighbours(s)

    def compatible(u, v):
        linked = v in adj[u]
        return not linked if complement else linked

    def extend(chosen: list, start: int) -> Optional[list]:
        if len(chosen) == k:
            return list(chosen)
        if len(nodes) - start < k - len(chosen):
            return None
        for i in range(start, len(nodes)):
            v = nodes[i]
            if all(compatible(u, v) for u in chosen):
                chosen.append(v)
                res = extend(chosen, i + 1)
                if res is not None:
                    return res
                chosen.pop()
        return None

    found = extend([], 0)
    return tuple(found) if found is not None else None


def _is_acyclic(universe: tuple, edges: frozenset, removed: set) -> bool:
    """Undirected acyclicity of the graph minus the removed nodes."""
    parent = {v: v for v in universe if v not in removed}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seen = set()
    for (u, v) in edges:
        if u in removed or v in removed:
            continue
        if (v, u) in seen:
            continue
        seen.add((u, v))
        if u == v:
            return False
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def _find_cycle(s: Structure, removed: set) -> Optional[list]:
    """Some cycle in the undirected graph minus removed nodes, as a node list."""
    neigh = _neighbours(s)
    adj = {
        v: sorted((w for w in neigh[v] if w not in removed), key=s.position)
        for v in s.universe
        if v not in removed
    }
    visited: set = set()

    def dfs(v, parent, pathstack, on_path):
        visited.add(v)
        for w in adj[v]:
            if w == parent:
                continue
            if w in on_path:
                return pathstack[on_path[w]:]
            if w not in visited:
                on_path[w] = len(pathstack)
                pathstack.append(w)
                res = dfs(w, v, pathstack, on_path)
                if res is not None:
                    return res
                pathstack.pop()
                del on_path[w]
        return None

    for root in adj:
        if root in visited:
            continue
        res = dfs(root, None, [root], {root: 0})
        if res is not None:
            return res
    return None


def _vertex_cover(s: Structure, k: int) -> Optional[tuple]:
    """Least-ish vertex cover of size <= k, by branching on an uncovered edge."""
    edges = sorted(
        {tuple(sorted(e, key=s.position)) for e in s.relations["E"] if e[0] != e[1]},
        key=lambda e: (s.position(e[0]), s.position(e[1])),
    )

    def solve(chosen: set, budget: int) -> Optional[set]:
        uncovered = next((e for e in edges if e[0] not in chosen and e[1] not in chosen), None)
        if uncovered is None:
            return set(chosen)
        if budget == 0:
            return None
        for v in uncovered:
            res = solve(chosen | {v}, budget - 1)
            if res is not None:
                return res
        return None

    res = solve(set(), k)
    if res is None:
        return None
    return tuple(sorted(res, key=s.position))


def _feedback_vertex_set(s: Structure, k: int) -> Optional[tuple]:
    """Node set of size <= k whose removal kills every undirected cycle."""

    def solve(removed: set, budget: int) -> Optional[set]:
        cycle = _find_cycle(s, removed)
        if cycle is None:
            return set(removed)
        if budget == 0:
            return None
        for v in sorted(cycle, key=s.position):
            res = solve(removed | {v}, budget - 1)
            if res is not None:
                return res
        return None

    res = solve(set(), k)
    if res is None:
        return None
    return tuple(sorted(res, key=s.position))


def _ham_cycle(s: Structure, directed: bool) -> Optional[tuple]:
    n = len(s.universe)
    if directed:
        if n < 2:
            return None
    else:
        if n < 3:
            return None
    succ = {v: [] for v in s.universe}
    for (u, v) in s.relations["E"]:
        if u != v:
            succ[u].append(v)
    for v in succ:
        succ[v] = sorted(set(succ[v]), key=s.position)
    start = s.universe[0]
    order = []

    def extend(v, visited):
        if len(order) == n:
            return start in succ[v]
        for w in succ[v]:
            if w in visited:
                continue
            visited.add(w)
            order.append(w)
            if extend(w, visited):
                return True
            order.pop()
            visited.remove(w)
        return False

    order.append(start)
    if extend(start, {start}):
        return tuple(order)
    return None


def decide(p: ProblemDef, s: Structure) -> Decision:
    """Exact membership with a verifying witness for built-in kinds."""
    _check_schema(p, s)
    if p.kind == "empty":
        return Decision(False)
    if p.kind == "fo":
        from .logic import model_check

        return Decision(model_check(p.sentence, s, {}))
    if p.kind == "clique":
        found = _find_clique(s, p.k, complement=False)
        return Decision(found is not None, Witness("clique", found) if found is not None else None)
    if p.kind == "independent-set":
        found = _find_clique(s, p.k, complement=True)
        return Decision(found is not None, Witness("independent-set", found) if found is not None else None)
    if p.kind == "vertex-cover":
        found = _vertex_cover(s, p.k)
        return Decision(found is not None, Witness("vertex-cover", found) if found is not None else None)
    if p.kind == "feedback-vertex-set":
        found = _feedback_vertex_set(s, p.k)
        return Decision(found is not None, Witness("feedback-vertex-set", found) if found is not None else None)
    if p.kind == "hamcycle-u":
        found = _ham_cycle(s, directed=False)
        return Decision(found is not None, Witness("hamcycle-u", found) if found is not None else None)
    if p.kind == "hamcycle-d":
        found = _ham_cycle(s, directed=True)
        return Decision(found is not None, Witness("hamcycle-d", found) if found is not None else None)
    raise AssertionError(p.kind)


def verify_witness(p: ProblemDef, s: Structure, w: Witness) -> bool:
    """Independent check that w certifies membership of s in p."""
    _check_schema(p, s)
    if p.kind in ("empty", "fo"):
        return False
    nodes = tuple(w.nodes)
    if any(v not in s._pos for v in nodes):
        return False
    edges = s.relations["E"]
    if p.kind == "clique":
        return (
            len(set(nodes)) == len(nodes) == p.k
            and all((u, v) in edges for i, u in enumerate(nodes) for v in nodes[i + 1:])
        )
    if p.kind == "independent-set":
        return (
            len(set(nodes)) == len(nodes) == p.k
            and all((u, v) not in edges for i, u in enumerate(nodes) for v in nodes[i + 1:])
        )
    if p.kind == "vertex-cover":
        chosen = set(nodes)
        return len(chosen) == len(nodes) and len(chosen) <= p.k and all(
            u in chosen or v in chosen for (u, v) in edges if u != v
        )
    if p.kind == "feedback-vertex-set":
        chosen = set(nodes)
        return (
            len(chosen) == len(nodes)
            and len(chosen) <= p.k
            and _is_acyclic(s.universe, edges, chosen)
        )
    if p.kind in ("hamcycle-u", "hamcycle-d"):
        if len(set(nodes)) != len(nodes) or set(nodes) != set(s.universe):
            return False
        n = len(nodes)
        if p.kind == "hamcycle-u" and n < 3:
            return False
        if p.kind == "hamcycle-d" and n < 2:
            return False
        return all((nodes[i], nodes[(i + 1) % n]) in edges for i in range(n))
    raise AssertionError(p.kind)


def problem_to_doc(p: ProblemDef) -> dict:
    if p.kind == "fo":
        from .logic import formula_to_text

        return {"fo": formula_to_text(p.sentence)}
    doc = {"kind": p.kind}
    if p.k is not None:
        doc["k"] = p.k
    return doc


def problem_from_doc(doc: dict, fo_schema: Optional[Schema] = None) -> ProblemDef:
    if not isinstance(doc, dict):
        raise MalformedDocument("problem document must be an object")
    if "fo" in doc:
        from .logic import parse_formula

        sentence = parse_formula(doc["fo"])
        return ProblemDef("fo", sentence=sentence, fo_schema=fo_schema)
    try:
        return ProblemDef(doc["kind"], doc.get("k"))
    except (KeyError, ValueError) as exc:
        raise MalformedDocument(f"bad problem document: {exc}") from exc


def parse_problem_name(name: str) -> ProblemDef:
    """CLI names: <k>-clique, <k>-vc, <k>-fvs, <k>-is, hamcycle-u, hamcycle-d."""
    short = {
        "clique": "clique",
        "is": "independent-set",
        "vc": "vertex-cover",
        "fvs": "feedback-vertex-set",
    }
    if name in ("hamcycle-u", "hamcycle-d", "empty"):
        return ProblemDef(name if name != "empty" else "empty")
    head, sep, tail = name.partition("-")
    if sep and head.isdigit():
        kind = short.get(tail, tail if tail in _PARAMETRIC else None)
        if kind:
            return ProblemDef(kind, int(head))
    valid = sorted(["<k>-" + s for s in short] + ["hamcycle-u", "hamcycle-d", "fo:<file>"])
    raise ValueError(f"unknown problem name {name!r}; valid names: {', '.join(valid)}")
