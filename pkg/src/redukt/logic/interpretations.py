"""Quantifier-free interpretations and their evaluation.

An interpretation maps a source structure to the quotient of a definable tuple
set by a definable congruence. Evaluation verifies, per input, that the
equality formula really is a congruence and fails loudly otherwise.

Variable conventions (documented in the wire format):
  universe formula   x1..xd          plus xidx when copies > 1
  equality formula   x1..xd, y1..yd  plus xidx / yidx
  relation formulas  a{p}_1..a{p}_d  plus a{p}idx, for argument positions p
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from ..errors import MalformedDocument, NotACongruence, SchemaMismatch
from ..structures import Schema, Structure, structure_from_doc
from .formulas import (
    And,
    Bottom,
    Eq,
    Formula,
    IndexIs,
    Iff,
    Implies,
    Not,
    Or,
    Rel,
    Top,
    conj,
    disj,
    formula_to_text,
    free_vars,
    is_quantifier_free,
    parse_formula,
)

DENSE_PAIR_LIMIT = 250_000
DNF_BRANCH_CAP = 60_000


def universe_vars(d: int, copying: bool) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, d + 1)) + (("xidx",) if copying else ())


def equality_vars(d: int, copying: bool) -> tuple[str, ...]:
    xs = tuple(f"x{i}" for i in range(1, d + 1)) + (("xidx",) if copying else ())
    ys = tuple(f"y{i}" for i in range(1, d + 1)) + (("yidx",) if copying else ())
    return xs + ys


def relation_vars(d: int, arity: int, copying: bool) -> tuple[str, ...]:
    out: list[str] = []
    for p in range(1, arity + 1):
        out.extend(f"a{p}_{i}" for i in range(1, d + 1))
        if copying:
            out.append(f"a{p}idx")
    return tuple(out)


@dataclass(frozen=True)
class QfInterpretation:
    source_schema: Schema
    target_schema: Schema
    dimension: int
    copies: int
    phi_universe: Formula
    phi_equal: Formula
    phi_rel_items: tuple[tuple[str, Formula], ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.copies < 1:
            raise ValueError("copies must be >= 1")
        names = {n for n, _ in self.phi_rel_items}
        if names != set(self.target_schema.names):
            raise SchemaMismatch(
                f"relation formulas {sorted(names)} do not match target schema "
                f"{self.target_schema.names}"
            )
        for f in (self.phi_universe, self.phi_equal) + tuple(f for _, f in self.phi_rel_items):
            if not is_quantifier_free(f):
                raise ValueError("interpretation formulas must be quantifier-free")
        object.__setattr__(
            self, "phi_rel_items", tuple(sorted(self.phi_rel_items))
        )

    @property
    def plain(self) -> bool:
        return self.copies == 1

    @property
    def phi_relations(self) -> dict[str, Formula]:
        return dict(self.phi_rel_items)

    @property
    def block_width(self) -> int:
        return self.dimension + (0 if self.plain else 1)


def make_interpretation(
    source_schema: Schema,
    target_schema: Schema,
    dimension: int,
    phi_universe: Formula,
    phi_equal: Formula,
    phi_relations: dict[str, Formula],
    copies: int = 1,
) -> QfInterpretation:
    return QfInterpretation(
        source_schema,
        target_schema,
        dimension,
        copies,
        phi_universe,
        phi_equal,
        tuple(sorted(phi_relations.items())),
    )


def identity_interpretation(schema: Schema) -> QfInterpretation:
    rels = {
        sym.name: Rel(sym.name, tuple(f"a{p}_1" for p in range(1, sym.arity + 1)))
        for sym in schema
    }
    return make_interpretation(schema, schema, 1, Top(), Eq("x1", "y1"), rels)


def complement_interpretation(schema: Schema) -> QfInterpretation:
    """Graph complement: edges between distinct nodes without a source edge."""
    rels = {
        "E": conj([Not(Rel("E", ("a1_1", "a2_1"))), Not(Eq("a1_1", "a2_1"))])
    }
    return make_interpretation(schema, schema, 1, Top(), Eq("x1", "y1"), rels)


# --- quantifier-free formula compilation ------------------------------------


class _Compiled:
    __slots__ = ("factory",)

    def __init__(self, factory):
        self.factory = factory


_compile_cache: dict[tuple[int, tuple[str, ...]], _Compiled] = {}
_keepalive: list[Formula] = []


def compile_qf(phi: Formula, variables: tuple[str, ...]):
    """Compile a quantifier-free formula to `make(structure) -> f(args) -> bool`.

    Copy-index variables are ordinary argument positions holding ints.
    """
    key = (id(phi), variables)
    hit = _compile_cache.get(key)
    if hit is not None:
        return hit.factory
    index = {v: i for i, v in enumerate(variables)}
    rel_names: list[str] = []

    def expr(f: Formula) -> str:
        if isinstance(f, Top):
            return "True"
        if isinstance(f, Bottom):
            return "False"
        if isinstance(f, Rel):
            if f.name not in rel_names:
                rel_names.append(f.name)
            args = ", ".join(f"a[{index[x]}]" for x in f.args)
            return f"(({args},) in R_{f.name})" if len(f.args) == 1 else f"(({args}) in R_{f.name})"
        if isinstance(f, Eq):
            return f"(a[{index[f.left]}] == a[{index[f.right]}])"
        if isinstance(f, IndexIs):
            return f"(a[{index[f.var]}] == {f.value})"
        if isinstance(f, Not):
            return f"(not {expr(f.sub)})"
        if isinstance(f, And):
            return "(" + " and ".join(expr(p) for p in f.parts) + ")" if f.parts else "True"
        if isinstance(f, Or):
            return "(" + " or ".join(expr(p) for p in f.parts) + ")" if f.parts else "False"
        if isinstance(f, Implies):
            return f"((not {expr(f.left)}) or {expr(f.right)})"
        if isinstance(f, Iff):
            return f"({expr(f.left)} == {expr(f.right)})"
        raise ValueError(f"not quantifier-free: {f!r}")

    body = expr(phi)
    args = ", ".join(f"R_{n}" for n in rel_names)
    src = f"def _make({args}):\n    def _f(a):\n        return {body}\n    return _f\n"
    ns: dict = {}
    exec(src, ns)  # generated from a trusted AST, no user text involved
    rel_tuple = tuple(rel_names)

    def factory(s: Structure):
        return ns["_make"](*(s.relations[n] for n in rel_tuple))

    _compile_cache[key] = _Compiled(factory)
    _keepalive.append(phi)
    return factory


# --- DNF + join machinery ----------------------------------------------------


def to_dnf(phi: Formula, cap: int = DNF_BRANCH_CAP) -> Optional[list[list[tuple]]]:
    """Flat disjunctive normal form as literal lists, or None past the cap.

    Literals: ("eq", u, v, positive) | ("rel", name, args, positive) |
    ("idx", var, value, positive).
    """

    def lits(f: Formula, positive: bool) -> Optional[list[list[tuple]]]:
        if isinstance(f, Top):
            return [[]] if positive else []
        if isinstance(f, Bottom):
            return [] if positive else [[]]
        if isinstance(f, Eq):
            return [[("eq", f.left, f.right, positive)]]
        if isinstance(f, Rel):
            return [[("rel", f.name, f.args, positive)]]
        if isinstance(f, IndexIs):
            return [[("idx", f.var, f.value, positive)]]
        if isinstance(f, Not):
            return lits(f.sub, not positive)
        if isinstance(f, Implies):
            return lits(Or((Not(f.left), f.right)), positive)
        if isinstance(f, Iff):
            a, b = f.left, f.right
            expanded = Or((And((a, b)), And((Not(a), Not(b)))))
            return lits(expanded, positive)
        parts = f.parts if isinstance(f, (And, Or)) else None
        if parts is None:
            raise ValueError(f"not quantifier-free: {f!r}")
        disjunctive = isinstance(f, Or) if positive else isinstance(f, And)
        branches_per_part = []
        for p in parts:
            sub = lits(p, positive)
            if sub is None:
                return None
            branches_per_part.append(sub)
        if disjunctive:
            out = [b for sub in branches_per_part for b in sub]
            return out if len(out) <= cap else None
        # conjunctive: distribute
        out = [[]]
        for sub in branches_per_part:
            nxt = []
            for base in out:
                for branch in sub:
                    nxt.append(base + branch)
                    if len(nxt) > cap:
                        return None
            out = nxt
        return out

    return lits(phi, True)


def _literal_vars(lit: tuple) -> tuple[str, ...]:
    kind = lit[0]
    if kind == "eq":
        return (lit[1], lit[2])
    if kind == "rel":
        return tuple(lit[2])
    return (lit[1],)


def _eval_literal(lit: tuple, env: dict, s: Structure) -> bool:
    kind = lit[0]
    if kind == "eq":
        res = env[lit[1]] == env[lit[2]]
    elif kind == "rel":
        res = tuple(env[x] for x in lit[2]) in s.relations[lit[1]]
    else:
        res = env[lit[1]] == lit[2]
    return res if lit[3] else not res


def enumerate_block_tuples(
    phi: Formula,
    blocks: tuple[tuple[str, ...], ...],
    selected: list[tuple],
    s: Structure,
) -> set[tuple]:
    """All assignments of selected tuples to the blocks satisfying phi.

    Joins a DNF of phi when available, bucketing on cross-block equalities;
    falls back to dense evaluation of the compiled formula otherwise.
    """
    r = len(blocks)
    n = len(selected)
    if n == 0:
        return set()
    dense_cost = n ** r
    branches = to_dnf(phi) if dense_cost > 50_000 else None
    if branches is None:
        variables = tuple(v for b in blocks for v in b)
        f = compile_qf(phi, variables)(s)
        if dense_cost > DENSE_PAIR_LIMIT:
            from ..errors import ExplosionGuard

            raise ExplosionGuard(
                f"interpretation too large to evaluate densely ({dense_cost} combinations)"
            )
        out = set()
        for combo in itertools.product(selected, repeat=r):
            flat = tuple(x for t in combo for x in t)
            if f(flat):
                out.add(combo)
        return out

    var_block = {}
    var_pos = {}
    for bi, b in enumerate(blocks):
        for pi, v in enumerate(b):
            var_block[v] = bi
            var_pos[v] = pi

    local_cache: dict[tuple, list[tuple]] = {}
    out: set[tuple] = set()
    for branch in branches:
        per_block: list[list[tuple]] = [[] for _ in range(r)]
        cross: list[tuple] = []
        local: list[list[tuple]] = [[] for _ in range(r)]
        ok = True
        for lit in branch:
            vs = _literal_vars(lit)
            bs = {var_block.get(v) for v in vs}
            if None in bs:
                ok = False  # literal over an unknown variable
                break
            if len(bs) == 1:
                local[bs.pop()].append(lit)
            else:
                cross.append(lit)
        if not ok:
            continue

        def block_candidates(bi: int) -> list[tuple]:
            key = (bi, tuple(sorted(map(repr, local[bi]))))
            hit = local_cache.get(key)
            if hit is not None:
                return hit
            res = []
            for t in selected:
                env = {v: t[var_pos[v]] for v in blocks[bi]}
                if all(_eval_literal(l, env, s) for l in local[bi]):
                    res.append(t)
            local_cache[key] = res
            return res

        cands = [block_candidates(bi) for bi in range(r)]
        if any(not c for c in cands):
            continue

        # join blocks left to right; a cross literal applies at the step where
        # its last block arrives, positive equalities become hash-join keys
        step_eqs: list[list[tuple]] = [[] for _ in range(r)]
        step_rest: list[list[tuple]] = [[] for _ in range(r)]
        for lit in cross:
            bset = {var_block[v] for v in _literal_vars(lit)}
            last = max(bset)
            if lit[0] == "eq" and lit[3] and len(bset) == 2:
                step_eqs[last].append(lit)
            else:
                step_rest[last].append(lit)

        partial: list[tuple] = [()]
        for bi in range(r):
            keys = []
            for lit in step_eqs[bi]:
                u, v = lit[1], lit[2]
                if var_block[u] != bi:
                    u, v = v, u
                keys.append((u, v))  # u in block bi, v in an earlier block
            bucket: dict[tuple, list[tuple]] = {}
            for t in cands[bi]:
                k = tuple(t[var_pos[u]] for (u, _) in keys)
                bucket.setdefault(k, []).append(t)
            rest = step_rest[bi]
            nxt = []
            for combo in partial:
                env = {
                    v: combo[b][var_pos[v]]
                    for b in range(bi)
                    for v in blocks[b]
                }
                want = tuple(env[w] for (_, w) in keys)
                for t in bucket.get(want, []):
                    if rest:
                        env2 = dict(env)
                        env2.update({v: t[var_pos[v]] for v in blocks[bi]})
                        if not all(_eval_literal(l, env2, s) for l in rest):
                            continue
                    nxt.append(combo + (t,))
            partial = nxt
            if not partial:
                break
        out.update(partial)
    return out


# --- evaluation ---------------------------------------------------------------


def solve_qf_tuples(
    phi: Formula,
    variables: tuple[str, ...],
    domains: dict[str, tuple],
    s: Structure,
    scan_limit: int = 200_000,
) -> list[tuple]:
    """All assignments (as tuples aligned with `variables`) satisfying phi.

    Prefers solving a DNF branch-wise: positive equalities merge variables
    into classes, pinned index values fix them, and only the free classes are
    enumerated. Falls back to scanning the full product when no tractable DNF
    exists and the product is small enough.
    """
    total = 1
    for v in variables:
        total *= len(domains[v])
    branches = to_dnf(phi) if total > 4096 else None
    if branches is None:
        if total > scan_limit:
            from ..errors import ExplosionGuard

            raise ExplosionGuard(
                f"universe formula needs a {total}-tuple scan, above the limit"
            )
        f = compile_qf(phi, variables)(s)
        doms = [domains[v] for v in variables]
        return [t for t in itertools.product(*doms) if f(t)]

    position = {v: i for i, v in enumerate(variables)}
    out: set[tuple] = set()
    for branch in branches:
        parent = {v: v for v in variables}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        pinned: dict[str, object] = {}
        rest: list[tuple] = []
        feasible = True
        for lit in branch:
            if lit[0] == "eq" and lit[3]:
                a, b = find(lit[1]), find(lit[2])
                if a != b:
                    parent[a] = b
            elif lit[0] == "idx" and lit[3]:
                rest.append(lit)
                pinned[lit[1]] = lit[2]
            else:
                rest.append(lit)
        classes: dict[str, list[str]] = {}
        for v in variables:
            classes.setdefault(find(v), []).append(v)
        roots = sorted(classes, key=lambda r: position[r])
        class_domain = []
        for r in roots:
            members = classes[r]
            pins = {pinned[v] for v in members if v in pinned}
            if len(pins) > 1:
                feasible = False
                break
            if pins:
                value = pins.pop()
                dom = [value] if value in domains[members[0]] else []
            else:
                dom = list(domains[members[0]])
                for v in members[1:]:
                    dom = [x for x in dom if x in set(domains[v])]
            if not dom:
                feasible = False
                break
            class_domain.append(dom)
        if not feasible:
            continue
        check = [lit for lit in rest if not (lit[0] == "idx" and lit[3])]
        for combo in itertools.product(*class_domain):
            env = {}
            for r, value in zip(roots, combo):
                for v in classes[r]:
                    env[v] = value
            if all(_eval_literal(lit, env, s) for lit in check):
                out.add(tuple(env[v] for v in variables))
    return sorted(out, key=lambda t: tuple(
        s.position(x) if x in s._pos else (len(s.universe) + int(x)) for x in t
    ))


def _selected_tuples(psi: QfInterpretation, s: Structure) -> list[tuple]:
    d = psi.dimension
    variables = universe_vars(d, not psi.plain)
    domains = {v: tuple(s.universe) for v in variables}
    if not psi.plain:
        domains["xidx"] = tuple(range(1, psi.copies + 1))
    return solve_qf_tuples(psi.phi_universe, variables, domains, s)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def eval_interpretation(psi: QfInterpretation, s: Structure) -> Structure:
    """Quotient structure defined by psi on s.

    Raises NotACongruence if the equality formula is not an equivalence on the
    selected tuples or not compatible with some relation formula.
    """
    if s.schema != psi.source_schema:
        raise SchemaMismatch(
            f"structure schema {s.schema.names} != interpretation source schema "
            f"{psi.source_schema.names}"
        )
    d = psi.dimension
    copying = not psi.plain
    selected = _selected_tuples(psi, s)

    blocks2 = (universe_vars(d, copying), tuple(
        v.replace("x", "y", 1) for v in universe_vars(d, copying)
    ))
    pairs = enumerate_block_tuples(psi.phi_equal, blocks2, selected, s)

    for t in selected:
        if (t, t) not in pairs:
            raise NotACongruence("equality formula is not reflexive", witness=(t, t))
    uf = _UnionFind(selected)
    for (a, b) in pairs:
        uf.union(a, b)
    classes: dict[tuple, list[tuple]] = {}
    for t in selected:
        classes.setdefault(uf.find(t), []).append(t)
    by_rep: dict[tuple, list[tuple]] = {}
    for members in classes.values():
        rep = min(members, key=lambda t: tuple(s.position(e) for e in t[:d]) + t[d:])
        by_rep[rep] = members
    expected_pairs = sum(len(m) ** 2 for m in by_rep.values())
    if len(pairs) != expected_pairs:
        witness = _equivalence_witness(by_rep, pairs)
        raise NotACongruence(
            "equality formula is not symmetric/transitive on the selected tuples",
            witness=witness,
        )

    rep_of = {}
    for rep, members in by_rep.items():
        for m in members:
            rep_of[m] = rep
    reps = sorted(by_rep, key=lambda t: tuple(s.position(e) for e in t[:d]) + t[d:])

    relations: dict[str, set] = {}
    for name, phi in psi.phi_rel_items:
        arity = psi.target_schema.symbol(name).arity
        blocks = tuple(
            relation_vars(d, arity, copying)[p * psi.block_width:(p + 1) * psi.block_width]
            for p in range(arity)
        )
        sat = enumerate_block_tuples(phi, blocks, selected, s)
        lifted = set()
        grouped: dict[tuple, int] = {}
        for combo in sat:
            key = tuple(rep_of[t] for t in combo)
            lifted.add(key)
            grouped[key] = grouped.get(key, 0) + 1
        for key, count in grouped.items():
            full = 1
            for t in key:
                full *= len(by_rep[t])
            if count != full:
                missing = _compat_witness(key, by_rep, sat)
                raise NotACongruence(
                    f"relation formula for {name} is not compatible with the equality",
                    witness=missing,
                )
        relations[name] = lifted

    return Structure(psi.target_schema, reps, {n: list(r) for n, r in relations.items()})


def _equivalence_witness(by_rep, pairs):
    for rep, members in by_rep.items():
        for a in members:
            for b in members:
                if (a, b) not in pairs:
                    return (a, b)
    return None


def _compat_witness(key, by_rep, sat):
    for combo in itertools.product(*(by_rep[t] for t in key)):
        if combo not in sat:
            return combo
    return None


# --- document format ----------------------------------------------------------


def interpretation_to_doc(psi: QfInterpretation) -> dict:
    from ..cookbook import schema_to_doc

    return {
        "source_schema": schema_to_doc(psi.source_schema),
        "target_schema": schema_to_doc(psi.target_schema),
        "dimension": psi.dimension,
        "copies": psi.copies,
        "universe": formula_to_text(psi.phi_universe),
        "equal": formula_to_text(psi.phi_equal),
        "relations": {n: formula_to_text(f) for n, f in psi.phi_rel_items},
    }


def interpretation_from_doc(doc: dict) -> QfInterpretation:
    from ..structures import structure_from_doc

    if not isinstance(doc, dict):
        raise MalformedDocument("interpretation document must be an object")
    try:
        source = structure_from_doc(
            {"schema": doc["source_schema"], "universe": [], "relations": {}}
        ).schema
        target = structure_from_doc(
            {"schema": doc["target_schema"], "universe": [], "relations": {}}
        ).schema
        return make_interpretation(
            source,
            target,
            int(doc["dimension"]),
            parse_formula(doc["universe"]),
            parse_formula(doc["equal"]),
            {n: parse_formula(f) for n, f in doc["relations"].items()},
            copies=int(doc.get("copies", 1)),
        )
    except MalformedDocument:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad interpretation document: {exc}") from exc
