"""Cookbook reductions: instruction sets, well-formedness, application, gadget
shorthands, and recipe structures.

A reduction is a finite set of instructions (type, gadget). The gadget universe
consists of tagged elements (A, j): A names a subset of the type's universe
{1..k}, j is a copy index. Elements with A = {1..k} are fresh (created per
occurrence of the type); elements with A a proper subset are inherited from the
instruction of A's type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .errors import (
    LiftFailure,
    MalformedDocument,
    NotWellFormed,
    SchemaMismatch,
    SemanticsViolation,
)
from .structures import (
    RelationSymbol,
    Schema,
    Structure,
    TaggedElement,
    canonical_form,
    directed_graph_schema,
    element_key,
    enumerate_embeddings,
    enumerate_structures,
    induced_substructure,
    structure_from_doc,
    structure_to_doc,
    undirected_graph_schema,
)

MAX_REDUCTION_ARITY = 4


def _full_base(k: int) -> frozenset:
    return frozenset(range(1, k + 1))


def _sorted_universe(elements: Iterable) -> tuple:
    return tuple(sorted(elements, key=element_key))


@dataclass(frozen=True)
class Instruction:
    source_type: Structure  # canonical representative, universe (1..k)
    gadget: Structure  # over the target schema, TaggedElement universe

    @property
    def arity(self) -> int:
        return len(self.source_type.universe)

    @property
    def fresh(self) -> int:
        full = _full_base(self.arity)
        return sum(1 for e in self.gadget.universe if e.base == full)

    def normalized(self) -> "Instruction":
        g = self.gadget
        ordered = _sorted_universe(g.universe)
        if ordered != g.universe:
            g = Structure(g.schema, ordered, g.relations)
        return Instruction(self.source_type, g)


@dataclass(frozen=True)
class CookbookReduction:
    source_schema: Schema
    target_schema: Schema
    instructions: tuple[Instruction, ...]

    def __post_init__(self):
        for ins in self.instructions:
            if ins.source_type.schema != self.source_schema:
                raise SchemaMismatch("instruction type is not over the source schema")
            if ins.gadget.schema != self.target_schema:
                raise SchemaMismatch("instruction gadget is not over the target schema")
        norm = tuple(sorted(
            (ins.normalized() for ins in self.instructions),
            key=lambda i: _type_key(i.source_type),
        ))
        types = [i.source_type for i in norm]
        if len(set(types)) != len(types):
            raise ValueError("instructions must have pairwise distinct source types")
        arity = max((i.arity for i in norm), default=0)
        if arity > MAX_REDUCTION_ARITY:
            raise ValueError(
                f"reduction arity {arity} exceeds the cap {MAX_REDUCTION_ARITY}"
            )
        object.__setattr__(self, "instructions", norm)

    @property
    def support(self) -> tuple[Structure, ...]:
        return tuple(i.source_type for i in self.instructions)

    @property
    def arity(self) -> int:
        return max((i.arity for i in self.instructions), default=0)

    def instruction_for(self, t: Structure) -> Optional[Instruction]:
        for i in self.instructions:
            if i.source_type == t:
                return i
        return None

    def max_gadget_size(self) -> int:
        return max((len(i.gadget.universe) for i in self.instructions), default=0)


def _type_key(t: Structure):
    return (
        len(t.universe),
        tuple(sorted((n, tuple(sorted(r))) for n, r in t.relations.items())),
    )


@dataclass(frozen=True)
class Violation:
    condition: str  # P1..P5, or a structural precondition
    instruction_arity: int
    message: str

    def to_doc(self) -> dict:
        return {
            "condition": self.condition,
            "arity": self.instruction_arity,
            "message": self.message,
        }


@dataclass(frozen=True)
class WellformedReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> tuple[str, ...]:
        return tuple(sorted({v.condition for v in self.violations}))

    def to_doc(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_doc() for v in self.violations]}

    def __str__(self):
        if self.ok:
            return "well-formed"
        return "; ".join(f"{v.condition}: {v.message}" for v in self.violations)


def _type_of_subset(t: Structure, subset: frozenset) -> Structure:
    return canonical_form(induced_substructure(t, subset))


def _isomorphisms(t: Structure, target: Structure):
    """All isomorphisms from t onto target (same size), as element maps."""
    if len(t.universe) != len(target.universe):
        return
    for emb in enumerate_embeddings(t, target):
        yield emb.as_dict()


def _automorphisms(t: Structure):
    yield from _isomorphisms(t, t)


def _rigid_image(mapping: dict, e: TaggedElement) -> TaggedElement:
    return TaggedElement(frozenset(mapping[b] for b in e.base), e.copy)


def _is_rigid_embedding(small: Structure, big: Structure, base_map: dict) -> bool:
    """Check that (A,j) -> (base_map(A), j) embeds small into big (induced)."""
    try:
        img = {e: _rigid_image(base_map, e) for e in small.universe}
    except KeyError:
        return False
    image = set(img.values())
    if len(image) != len(small.universe):
        return False
    if not image.issubset(set(big.universe)):
        return False
    for sym in small.schema:
        sm = small.relations[sym.name]
        bg = big.relations[sym.name]
        for tup in sm:
            if tuple(img[x] for x in tup) not in bg:
                return False
        for tup in bg:
            if image.issuperset(tup):
                pre = tuple(_rigid_preimage(img, x) for x in tup)
                if None in pre or tuple(pre) not in sm:
                    return False
    return True


def _rigid_preimage(img: dict, e: TaggedElement) -> Optional[TaggedElement]:
    for k, v in img.items():
        if v == e:
            return k
    return None


@lru_cache(maxsize=4096)
def validate_wellformed(rho: CookbookReduction) -> WellformedReport:
    """Check the syntactic instruction conditions plus the automorphism lift.

    Violations are report content; the function never raises on bad reductions.
    """
    violations: list[Violation] = []
    support = {ins.source_type: ins for ins in rho.instructions}

    for ins in rho.instructions:
        t, gadget, k = ins.source_type, ins.gadget, ins.arity
        full = _full_base(k)
        elems = gadget.universe
        bad_shape = False
        for e in elems:
            if not isinstance(e, TaggedElement) or not all(
                isinstance(b, int) for b in e.base
            ):
                violations.append(Violation(
                    "P1", k, f"gadget element {e!r} is not a tagged subset of {{1..{k}}}"
                ))
                bad_shape = True
            elif not e.base.issubset(full):
                violations.append(Violation(
                    "P1", k, f"gadget element {e!r} has base outside {{1..{k}}}"
                ))
                bad_shape = True
        if bad_shape:
            continue

        by_base: dict[frozenset, set[int]] = {}
        for e in elems:
            by_base.setdefault(e.base, set()).add(e.copy)
        for base, copies in by_base.items():
            m = max(copies)
            if copies != set(range(1, m + 1)):
                violations.append(Violation(
                    "P1", k,
                    f"copy indices over base {sorted(base)} are {sorted(copies)}, "
                    f"expected 1..{m} downward closed",
                ))

        for e in elems:
            if e.base == full:
                continue
            sub_t = _type_of_subset(t, e.base)
            sub_ins = support.get(sub_t)
            if sub_ins is None:
                violations.append(Violation(
                    "P2", k,
                    f"element {e!r}: the type of its base is not in the support",
                ))
                continue
            wanted = TaggedElement(_full_base(len(e.base)), e.copy)
            if wanted not in sub_ins.gadget.universe:
                violations.append(Violation(
                    "P2", k,
                    f"element {e!r}: {wanted!r} is missing from the sub-instruction gadget",
                ))

        for sym in gadget.schema:
            for tup in gadget.relations[sym.name]:
                union = frozenset().union(*(x.base for x in tup)) if tup else frozenset()
                if union == full:
                    continue
                if _type_of_subset(t, union) not in support:
                    violations.append(Violation(
                        "P3", k,
                        f"tuple {sym.name}{tuple(tup)} spans base {sorted(union)} "
                        "whose type is not in the support",
                    ))

        for sub_t, sub_ins in support.items():
            k2 = len(sub_t.universe)
            if k2 >= k:
                continue
            for subset in itertools.combinations(t.universe, k2):
                a = frozenset(subset)
                if _type_of_subset(t, a) != sub_t:
                    continue
                ok = any(
                    _is_rigid_embedding(sub_ins.gadget, gadget, iso)
                    for iso in _isomorphisms(sub_t, induced_substructure(t, a))
                )
                if not ok:
                    violations.append(Violation(
                        "P4", k,
                        f"no isomorphism onto subset {sorted(a)} lifts to an embedding "
                        "of the sub-instruction gadget",
                    ))

        for auto in _automorphisms(t):
            if all(auto[i] == i for i in t.universe):
                continue
            rigid = {}
            ok = True
            for e in elems:
                img = _rigid_image(auto, e)
                if img not in gadget._pos:
                    ok = False
                    break
                rigid[e] = img
            if ok:
                for sym in gadget.schema:
                    rel = gadget.relations[sym.name]
                    for tup in rel:
                        if tuple(rigid[x] for x in tup) not in rel:
                            ok = False
                            break
                    if not ok:
                        break
            if not ok:
                violations.append(Violation(
                    "P5", k,
                    f"automorphism {auto} of the type has no copy-preserving lift",
                ))

    return WellformedReport(tuple(violations))


def _iso_type_cached(s: Structure, cache: dict, subset: frozenset) -> Structure:
    t = cache.get(subset)
    if t is None:
        t = canonical_form(induced_substructure(s, subset))
        cache[subset] = t
    return t


def apply_reduction(rho: CookbookReduction, s: Structure, *, verify: bool = True) -> Structure:
    """Build the target structure for s.

    Universe: every (A, j) where A's type carries an instruction with j-th fresh
    element. Relations: per occurrence, the image of the gadget's tuples under
    the least isomorphism. With verify (default), the result is re-checked
    against the application semantics and a SemanticsViolation is raised on any
    discrepancy instead of silently repairing it.
    """
    report = validate_wellformed(rho)
    if not report.ok:
        raise NotWellFormed(report)
    if s.schema != rho.source_schema:
        raise SchemaMismatch(
            f"structure schema {s.schema.names} != reduction source schema "
            f"{rho.source_schema.names}"
        )

    support = {ins.source_type: ins for ins in rho.instructions}
    type_cache: dict[frozenset, Structure] = {}
    occurrences: list[tuple[frozenset, Instruction]] = []
    for size in range(0, rho.arity + 1):
        for subset in itertools.combinations(s.universe, size):
            a = frozenset(subset)
            t = _iso_type_cached(s, type_cache, a)
            ins = support.get(t)
            if ins is not None:
                occurrences.append((a, ins))

    universe: set[TaggedElement] = set()
    for a, ins in occurrences:
        full = _full_base(ins.arity)
        for e in ins.gadget.universe:
            if e.base == full:
                universe.add(TaggedElement(a, e.copy))
    ordered = _sorted_universe(universe)

    relations: dict[str, set] = {sym.name: set() for sym in rho.target_schema}
    chosen_iso: dict[frozenset, dict] = {}
    for a, ins in occurrences:
        sub = induced_substructure(s, a)
        iso = next(_isomorphisms(ins.source_type, sub), None)
        if iso is None:  # cannot happen: the type matched
            raise SemanticsViolation(f"no isomorphism onto occurrence {sorted(a, key=element_key)}")
        chosen_iso[a] = iso
        for sym in ins.gadget.schema:
            for tup in ins.gadget.relations[sym.name]:
                relations[sym.name].add(tuple(_rigid_image(iso, x) for x in tup))

    out = Structure(rho.target_schema, ordered, {n: list(r) for n, r in relations.items()})

    if verify:
        _verify_semantics(rho, s, out, occurrences, chosen_iso, type_cache)
    return out


def _verify_semantics(rho, s, out, occurrences, chosen_iso, type_cache) -> None:
    support = {ins.source_type: ins for ins in rho.instructions}

    # condition 1: the universe is exactly the fresh elements of all occurrences
    expected = set()
    for a, ins in occurrences:
        full = _full_base(ins.arity)
        for e in ins.gadget.universe:
            if e.base == full:
                expected.add(TaggedElement(a, e.copy))
    if expected != set(out.universe):
        raise SemanticsViolation("built universe differs from the instruction-defined one")

    # condition 2: every tuple spans a base set whose type has an instruction
    for sym in out.schema:
        for tup in out.relations[sym.name]:
            union = frozenset().union(*(x.base for x in tup)) if tup else frozenset()
            if _iso_type_cached(s, type_cache, union) not in support:
                raise SemanticsViolation(
                    f"tuple {sym.name}{tuple(tup)} spans a set whose type has no instruction"
                )

    # condition 3: some isomorphism per occurrence embeds the gadget
    out_elems = set(out.universe)
    for a, ins in occurrences:
        sub = induced_substructure(s, a)
        isos = [chosen_iso[a]] + [
            iso for iso in _isomorphisms(ins.source_type, sub) if iso != chosen_iso[a]
        ]
        if not any(_occurrence_embeds(ins.gadget, out, iso, out_elems) for iso in isos):
            raise SemanticsViolation(
                f"no isomorphism onto occurrence {sorted(a, key=element_key)} embeds its gadget"
            )


def _occurrence_embeds(gadget: Structure, out: Structure, iso: dict, out_elems: set) -> bool:
    img = {}
    for e in gadget.universe:
        v = _rigid_image(iso, e)
        if v not in out_elems:
            return False
        img[e] = v
    image = set(img.values())
    inv = {v: k for k, v in img.items()}
    for sym in gadget.schema:
        grel = gadget.relations[sym.name]
        orel = out.relations[sym.name]
        for tup in grel:
            if tuple(img[x] for x in tup) not in orel:
                return False
        for tup in orel:
            if image.issuperset(tup):
                if tuple(inv[x] for x in tup) not in grel:
                    return False
    return True


# --- gadget shorthands -----------------------------------------------------


@dataclass(frozen=True)
class EdgeGadget:
    """Replace every undirected edge by a copy of `graph`, identifying the
    endpoints with the distinguished nodes c and d."""

    graph: Structure
    c: object
    d: object


@dataclass(frozen=True)
class NodeGadget:
    """Replace every node of a digraph by a copy of `node_graph` (undirected);
    for every directed edge (u, v), connect u's copy to v's copy by the
    cross-edges, given as pairs of 1-based node positions."""

    node_graph: Structure
    cross_edges: frozenset  # of (int, int)


@dataclass(frozen=True)
class GlobalGadget:
    """Disjointly add `graph` once and connect every source node to the marked
    subset; source nodes and edges are copied."""

    graph: Structure
    marked: frozenset


GadgetSpec = EdgeGadget | NodeGadget | GlobalGadget


def _type_empty(schema: Schema) -> Structure:
    return Structure(schema, (), {})


def _type_vertex(schema: Schema) -> Structure:
    return Structure(schema, (1,), {})


def _type_edge_undirected() -> Structure:
    return Structure(undirected_graph_schema(), (1, 2), {"E": [(1, 2)]})


def _type_edge_directed() -> Structure:
    return Structure(directed_graph_schema(), (1, 2), {"E": [(1, 2)]})


def from_gadget(spec: GadgetSpec) -> CookbookReduction:
    """Expand a gadget shorthand into the corresponding cookbook reduction."""
    target = undirected_graph_schema()
    if isinstance(spec, EdgeGadget):
        g = spec.graph
        if g.schema != target:
            raise SchemaMismatch("edge gadget graph must be an undirected graph")
        if spec.c == spec.d or spec.c not in g._pos or spec.d not in g._pos:
            raise MalformedDocument("edge gadget needs two distinct endpoint nodes")
        source = undirected_graph_schema()
        rest = [v for v in g.universe if v not in (spec.c, spec.d)]
        relabel = {spec.c: TaggedElement(frozenset({1}), 1), spec.d: TaggedElement(frozenset({2}), 1)}
        for i, v in enumerate(rest, start=1):
            relabel[v] = TaggedElement(frozenset({1, 2}), i)
        instructions = (
            Instruction(
                _type_vertex(source),
                Structure(target, [TaggedElement(frozenset({1}), 1)], {}),
            ),
            Instruction(_type_edge_undirected(), g.rename(relabel)),
        )
        rho = CookbookReduction(source, target, instructions)
    elif isinstance(spec, NodeGadget):
        n = spec.node_graph
        if n.schema != target:
            raise SchemaMismatch("node graph must be an undirected graph")
        m = len(n.universe)
        for (i, j) in spec.cross_edges:
            if not (1 <= i <= m and 1 <= j <= m):
                raise MalformedDocument(f"cross edge ({i},{j}) outside 1..{m}")
        source = directed_graph_schema()
        one = {v: TaggedElement(frozenset({1}), i) for i, v in enumerate(n.universe, start=1)}
        two = {v: TaggedElement(frozenset({2}), i) for i, v in enumerate(n.universe, start=1)}
        pair_universe = list(one.values()) + list(two.values())
        pair_edges = (
            [(one[u], one[v]) for (u, v) in n.relations["E"]]
            + [(two[u], two[v]) for (u, v) in n.relations["E"]]
            + [
                (TaggedElement(frozenset({1}), i), TaggedElement(frozenset({2}), j))
                for (i, j) in spec.cross_edges
            ]
        )
        instructions = (
            Instruction(
                _type_vertex(source),
                Structure(
                    target, list(one.values()),
                    {"E": [(one[u], one[v]) for (u, v) in n.relations["E"]]},
                ),
            ),
            Instruction(
                _type_edge_directed(),
                Structure(target, pair_universe, {"E": pair_edges}),
            ),
        )
        rho = CookbookReduction(source, target, instructions)
    elif isinstance(spec, GlobalGadget):
        g = spec.graph
        if g.schema != target:
            raise SchemaMismatch("global gadget graph must be an undirected graph")
        if not spec.marked.issubset(set(g.universe)):
            raise MalformedDocument("marked nodes must belong to the global graph")
        source = undirected_graph_schema()
        glob = {v: TaggedElement(frozenset(), i) for i, v in enumerate(g.universe, start=1)}
        glob_edges = [(glob[u], glob[v]) for (u, v) in g.relations["E"]]
        v1 = TaggedElement(frozenset({1}), 1)
        v2 = TaggedElement(frozenset({2}), 1)
        marked = [glob[v] for v in g.universe if v in spec.marked]
        instructions = (
            Instruction(
                _type_empty(source),
                Structure(target, list(glob.values()), {"E": glob_edges}),
            ),
            Instruction(
                _type_vertex(source),
                Structure(
                    target,
                    [v1] + list(glob.values()),
                    {"E": glob_edges + [(v1, a) for a in marked]},
                ),
            ),
            Instruction(
                _type_edge_undirected(),
                Structure(
                    target,
                    [v1, v2] + list(glob.values()),
                    {
                        "E": glob_edges
                        + [(v1, a) for a in marked]
                        + [(v2, a) for a in marked]
                        + [(v1, v2)]
                    },
                ),
            ),
        )
        rho = CookbookReduction(source, target, instructions)
    else:
        raise TypeError(f"not a gadget spec: {spec!r}")

    report = validate_wellformed(rho)
    if not report.ok:
        if "P5" in report.conditions():
            raise LiftFailure(str(report))
        raise NotWellFormed(report)
    return rho


def classify_gadget(rho: CookbookReduction) -> Optional[GadgetSpec]:
    """Recover the shorthand when rho matches one of the three templates exactly."""
    if not validate_wellformed(rho).ok:
        return None
    for spec in _classification_candidates(rho):
        try:
            if from_gadget(spec) == rho:
                return spec
        except (LiftFailure, NotWellFormed, MalformedDocument, SchemaMismatch):
            continue
    return None


def _classification_candidates(rho: CookbookReduction):
    target = undirected_graph_schema()
    if rho.target_schema != target:
        return
    support = {ins.source_type: ins for ins in rho.instructions}
    u_source = undirected_graph_schema()
    d_source = directed_graph_schema()

    if rho.source_schema == u_source and set(support) == {
        _type_vertex(u_source), _type_edge_undirected()
    }:
        edge_ins = support[_type_edge_undirected()]
        c = TaggedElement(frozenset({1}), 1)
        d = TaggedElement(frozenset({2}), 1)
        fresh = sorted(
            (e for e in edge_ins.gadget.universe if e.base == frozenset({1, 2})),
            key=lambda e: e.copy,
        )
        names = {c: "c", d: "d"}
        names.update({e: f"g{e.copy}" for e in fresh})
        if set(edge_ins.gadget.universe) == set(names):
            graph = Structure(
                target,
                [names[e] for e in [c, d] + fresh],
                {"E": [tuple(names[x] for x in t) for t in edge_ins.gadget.relations["E"]]},
            )
            yield EdgeGadget(graph, "c", "d")

    if rho.source_schema == d_source and set(support) == {
        _type_vertex(d_source), _type_edge_directed()
    }:
        v_ins = support[_type_vertex(d_source)]
        copies = sorted(e.copy for e in v_ins.gadget.universe)
        m = len(v_ins.gadget.universe)
        if copies == list(range(1, m + 1)) and all(
            e.base == frozenset({1}) for e in v_ins.gadget.universe
        ):
            node_graph = Structure(
                target,
                list(range(1, m + 1)),
                {"E": [tuple(x.copy for x in t) for t in v_ins.gadget.relations["E"]]},
            )
            e_ins = support[_type_edge_directed()]
            cross = set()
            for (a, b) in e_ins.gadget.relations["E"]:
                if a.base == frozenset({1}) and b.base == frozenset({2}):
                    cross.add((a.copy, b.copy))
            yield NodeGadget(node_graph, frozenset(cross))

    if rho.source_schema == u_source and set(support) == {
        _type_empty(u_source), _type_vertex(u_source), _type_edge_undirected()
    }:
        g_ins = support[_type_empty(u_source)]
        m = len(g_ins.gadget.universe)
        copies = sorted(e.copy for e in g_ins.gadget.universe)
        if copies == list(range(1, m + 1)):
            names = {e: f"g{e.copy}" for e in g_ins.gadget.universe}
            graph = Structure(
                target,
                [f"g{i}" for i in range(1, m + 1)],
                {"E": [tuple(names[x] for x in t) for t in g_ins.gadget.relations["E"]]},
            )
            v_ins = support[_type_vertex(u_source)]
            v1 = TaggedElement(frozenset({1}), 1)
            marked = frozenset(
                f"g{b.copy}"
                for (a, b) in v_ins.gadget.relations["E"]
                if a == v1 and b.base == frozenset()
            )
            yield GlobalGadget(graph, marked)


# --- recipes ---------------------------------------------------------------


@dataclass(frozen=True)
class Recipe:
    """One structure packaging a whole reduction: the disjoint gadgets, a unary
    colour relation per type marking its gadget's universe, and a binary
    inheritance relation from inherited elements to their originals."""

    structure: Structure
    types: tuple  # pairs (type name, type structure), in enumeration order


def enumerate_types(schema: Schema, max_arity: int, *, allow_loops: bool = False):
    """Canonical isomorphism-type representatives of arity 0..max_arity."""
    for k in range(max_arity + 1):
        yield from enumerate_structures(schema, k, canonical_only=True, allow_loops=allow_loops)


def build_recipe(rho: CookbookReduction, r: int) -> Recipe:
    """The recipe structure over target schema + colours + inheritance.

    Types absent from the support contribute the reduction applied to their
    representative.
    """
    if rho.arity > r:
        raise ValueError(f"reduction arity {rho.arity} exceeds requested arity {r}")
    report = validate_wellformed(rho)
    if not report.ok:
        raise NotWellFormed(report)

    support = {ins.source_type: ins for ins in rho.instructions}
    types = list(enumerate_types(rho.source_schema, r))
    names: dict[Structure, str] = {}
    per_arity: dict[int, int] = {}
    for t in types:
        k = len(t.universe)
        per_arity[k] = per_arity.get(k, 0) + 1
        names[t] = f"t{k}_{per_arity[k]}"

    gadgets: dict[Structure, Structure] = {}
    for t in types:
        ins = support.get(t)
        gadgets[t] = ins.gadget if ins is not None else apply_reduction(rho, t)

    symbols = list(rho.target_schema.symbols)
    symbols.append(RelationSymbol("Inh", 2))
    for t in types:
        symbols.append(RelationSymbol(f"Col_{names[t]}", 1))
    schema = Schema(tuple(symbols))

    universe = []
    relations: dict[str, list] = {sym.name: [] for sym in schema}
    part = {}
    for t in types:
        g = gadgets[t]
        for e in g.universe:
            el = (names[t], e)
            universe.append(el)
            part[(names[t], e)] = el
            relations[f"Col_{names[t]}"].append((el,))
        for sym in rho.target_schema:
            for tup in g.relations[sym.name]:
                relations[sym.name].append(tuple((names[t], x) for x in tup))

    for t in types:
        k = len(t.universe)
        g = gadgets[t]
        for e in g.universe:
            if e.base == _full_base(k):
                continue
            sub_t = _type_of_subset(t, e.base)
            original = (names[sub_t], TaggedElement(_full_base(len(e.base)), e.copy))
            relations["Inh"].append(((names[t], e), original))

    structure = Structure(schema, universe, relations)
    return Recipe(structure, tuple((names[t], t) for t in types))


# --- document formats ------------------------------------------------------


def schema_to_doc(schema: Schema) -> list:
    return [
        {"name": sym.name, "arity": sym.arity, "symmetric": sym.symmetric}
        for sym in schema
    ]


def reduction_to_doc(rho: CookbookReduction) -> dict:
    return {
        "source_schema": schema_to_doc(rho.source_schema),
        "target_schema": schema_to_doc(rho.target_schema),
        "instructions": [
            {
                "type": structure_to_doc(ins.source_type),
                "gadget": structure_to_doc(ins.gadget),
            }
            for ins in rho.instructions
        ],
    }


def reduction_from_doc(doc: dict) -> CookbookReduction:
    if not isinstance(doc, dict):
        raise MalformedDocument("reduction document must be an object")
    try:
        source = structure_from_doc({"schema": doc["source_schema"], "universe": [], "relations": {}}).schema
        target = structure_from_doc({"schema": doc["target_schema"], "universe": [], "relations": {}}).schema
        instructions = []
        for ins in doc["instructions"]:
            t = structure_from_doc(ins["type"])
            g = structure_from_doc(ins["gadget"])
            instructions.append(Instruction(t, g))
    except MalformedDocument:
        raise
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"bad reduction document: {exc}") from exc
    for ins in instructions:
        if not all(isinstance(e, TaggedElement) for e in ins.gadget.universe):
            raise MalformedDocument("gadget universes must consist of tagged elements")
        if not is_canonical_type(ins.source_type):
            raise MalformedDocument(
                "instruction types must be canonical representatives over {1..k}"
            )
    try:
        return CookbookReduction(source, target, tuple(instructions))
    except (ValueError, SchemaMismatch) as exc:
        raise MalformedDocument(f"bad reduction document: {exc}") from exc


def is_canonical_type(t: Structure) -> bool:
    if t.universe != tuple(range(1, len(t.universe) + 1)):
        return False
    return canonical_form(t) == t


def gadget_spec_to_doc(spec: GadgetSpec) -> dict:
    if isinstance(spec, EdgeGadget):
        return {
            "kind": "edge",
            "graph": structure_to_doc(spec.graph),
            "c": spec.c,
            "d": spec.d,
        }
    if isinstance(spec, NodeGadget):
        return {
            "kind": "node",
            "node_graph": structure_to_doc(spec.node_graph),
            "cross_edges": sorted([i, j] for (i, j) in spec.cross_edges),
        }
    if isinstance(spec, GlobalGadget):
        return {
            "kind": "global",
            "graph": structure_to_doc(spec.graph),
            "marked": sorted(spec.marked, key=element_key),
        }
    raise TypeError(f"not a gadget spec: {spec!r}")


def gadget_spec_from_doc(doc: dict) -> GadgetSpec:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise MalformedDocument("gadget document needs a kind")
    kind = doc["kind"]
    try:
        if kind == "edge":
            return EdgeGadget(structure_from_doc(doc["graph"]), doc["c"], doc["d"])
        if kind == "node":
            return NodeGadget(
                structure_from_doc(doc["node_graph"]),
                frozenset((int(i), int(j)) for i, j in doc["cross_edges"]),
            )
        if kind == "global":
            return GlobalGadget(
                structure_from_doc(doc["graph"]),
                frozenset(doc["marked"]),
            )
    except MalformedDocument:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad gadget document: {exc}") from exc
    raise MalformedDocument(f"unknown gadget kind {kind!r}")
