"""Translations between cookbook reductions and quantifier-free interpretations,
plus inverse substitution of formulas through an interpretation.

The reduction-to-interpretation direction encodes element sets as padded
tuples: a set {a1..am} becomes any (k+1)-tuple (a1,...,am,f,...,f) with f
distinct from am, so the interpretation needs source structures with at least
two elements. Copy indices are carried by an extra coordinate first (the
copying stage) and then compiled away by encoding index i as a padding block
whose i-th coordinate is the odd one out (the plain stage).
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

from ..cookbook import CookbookReduction, Instruction, _full_base
from ..errors import (
    ArityLimitExceeded,
    MissingOrder,
    NotInFragment,
    NotSetRespecting,
    NotWellFormed,
)
from ..structures import (
    MAX_TYPE_ARITY,
    RelationSymbol,
    Schema,
    Structure,
    TaggedElement,
    canonical_form,
    enumerate_structures,
    find_isomorphism,
    induced_substructure,
)
from ..cookbook import MAX_REDUCTION_ARITY, validate_wellformed
from .formulas import (
    And,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    IndexIs,
    Implies,
    Not,
    Or,
    Rel,
    Top,
    conj,
    disj,
    neg,
    subst_vars,
    substitute_index,
)
from .interpretations import (
    QfInterpretation,
    compile_qf,
    equality_vars,
    make_interpretation,
    relation_vars,
    universe_vars,
)

ORDER_SYMBOL = "leq"


def _psi_set_encoding(xs: tuple[str, ...], m: int) -> Formula:
    """(x1..x_{k+1}) encodes a set of exactly m distinct elements."""
    k = len(xs) - 1
    parts: list[Formula] = []
    if m == 0:
        parts.extend(Eq(xs[i], xs[i + 1]) for i in range(k))
    else:
        parts.append(neg(Eq(xs[m - 1], xs[m])))
        parts.extend(Eq(xs[i], xs[i + 1]) for i in range(m, k))
        parts.extend(
            neg(Eq(xs[i1], xs[i2]))
            for i1 in range(m)
            for i2 in range(i1 + 1, m)
        )
    return conj(parts)


def _type_diagram(t: Structure, xs: tuple[str, ...]) -> Formula:
    """The (x1..xm) span an induced copy of t via x_i -> i."""
    pos = {e: i for i, e in enumerate(t.universe)}
    parts: list[Formula] = []
    for sym in t.schema:
        rel = t.relations[sym.name]
        for combo in itertools.product(t.universe, repeat=sym.arity):
            atom = Rel(sym.name, tuple(xs[pos[e]] for e in combo))
            parts.append(atom if combo in rel else neg(atom))
    return conj(parts)


def _gadget_order(ins: Instruction) -> list[TaggedElement]:
    return list(ins.gadget.universe)


def cookbook_to_qf(rho: CookbookReduction, stage: str = "plain") -> QfInterpretation:
    """Equivalent interpretation, for sources with at least two elements.

    stage="copying" returns the (arity+1)-dimensional interpretation with a
    copy coordinate; stage="plain" additionally compiles the copy coordinate
    into a padding block, dimension arity + copies + 1 (copies padded to >= 3).
    """
    if stage not in ("copying", "plain"):
        raise ValueError(f"stage must be 'copying' or 'plain', got {stage!r}")
    report = validate_wellformed(rho)
    if not report.ok:
        raise NotWellFormed(report)

    k = rho.arity
    ell = max(rho.max_gadget_size(), 1)
    d = k + 1
    xs = tuple(f"x{i}" for i in range(1, d + 1))
    ys = tuple(f"y{i}" for i in range(1, d + 1))

    orders = {ins: _gadget_order(ins) for ins in rho.instructions}

    def rep_location(ins: Instruction, j: int) -> tuple[frozenset, int]:
        e = orders[ins][j - 1]
        return e.base, e.copy

    # universe: encode a supported set, with a copy index small enough
    u_parts = []
    for ins in rho.instructions:
        m = ins.arity
        size = len(orders[ins])
        if size == 0:
            continue
        u_parts.append(conj([
            _psi_set_encoding(xs, m),
            _type_diagram(ins.source_type, xs),
            disj(IndexIs("xidx", j) for j in range(1, size + 1)),
        ]))
    phi_u = disj(u_parts)

    # equality: both tuples denote the same concrete gadget element, i.e. the
    # located base sets coincide element-wise and the located copies agree
    eq_parts = []
    for ins_a in rho.instructions:
        for j_a in range(1, len(orders[ins_a]) + 1):
            base_a, copy_a = rep_location(ins_a, j_a)
            for ins_b in rho.instructions:
                for j_b in range(1, len(orders[ins_b]) + 1):
                    base_b, copy_b = rep_location(ins_b, j_b)
                    if copy_a != copy_b or len(base_a) != len(base_b):
                        continue
                    for beta in itertools.permutations(sorted(base_b)):
                        ties = [
                            Eq(xs[i - 1], ys[bj - 1])
                            for i, bj in zip(sorted(base_a), beta)
                        ]
                        eq_parts.append(conj([
                            _psi_set_encoding(xs, ins_a.arity),
                            _type_diagram(ins_a.source_type, xs),
                            IndexIs("xidx", j_a),
                            _psi_set_encoding(ys, ins_b.arity),
                            _type_diagram(ins_b.source_type, ys),
                            IndexIs("yidx", j_b),
                            *ties,
                        ]))
    phi_eq = disj(eq_parts)

    # relations: some occurrence, located from the argument blocks' own
    # coordinates, instantiates a gadget tuple that spans its whole type
    rel_formulas: dict[str, Formula] = {}
    for sym in rho.target_schema:
        r = sym.arity
        blocks = [
            tuple(f"a{p}_{i}" for i in range(1, d + 1)) for p in range(1, r + 1)
        ]
        idxs = [f"a{p}idx" for p in range(1, r + 1)]
        branches = []
        for ins in rho.instructions:
            t, m = ins.source_type, ins.arity
            for gtuple in sorted(ins.gadget.relations[sym.name], key=repr):
                union = frozenset().union(*(g.base for g in gtuple)) if gtuple else frozenset()
                if union != _full_base(m):
                    continue  # covered by the instruction of the spanned subset
                # per argument block: which gadget element it denotes, via any
                # instruction whose located element matches the base size/copy
                per_block_options = []
                for p, g in enumerate(gtuple):
                    opts = []
                    for ins_p in rho.instructions:
                        for j_p in range(1, len(orders[ins_p]) + 1):
                            base_p, copy_p = rep_location(ins_p, j_p)
                            if copy_p != g.copy or len(base_p) != len(g.base):
                                continue
                            for beta in itertools.permutations(sorted(g.base)):
                                # beta lists which occurrence elements the
                                # block's base coordinates denote, aligned with
                                # sorted(base_p)
                                opts.append((ins_p, j_p, tuple(sorted(base_p)), beta))
                    per_block_options.append(opts)
                for assignment in itertools.product(*per_block_options):
                    provider: dict[int, str] = {}
                    lits: list[Formula] = []
                    ok = True
                    for p, (ins_p, j_p, coords, beta) in enumerate(assignment):
                        lits.append(_psi_set_encoding(blocks[p], ins_p.arity))
                        lits.append(_type_diagram(ins_p.source_type, blocks[p]))
                        lits.append(IndexIs(idxs[p], j_p))
                        for ci, occ_elem in zip(coords, beta):
                            var = blocks[p][ci - 1]
                            if occ_elem in provider:
                                lits.append(Eq(provider[occ_elem], var))
                            else:
                                provider[occ_elem] = var
                    if set(provider) != set(range(1, m + 1)):
                        ok = False  # occurrence not fully located
                    if not ok:
                        continue
                    enum_vars = tuple(provider[i] for i in range(1, m + 1))
                    lits.append(_type_diagram(t, enum_vars))
                    lits.extend(
                        neg(Eq(enum_vars[i], enum_vars[j]))
                        for i in range(m)
                        for j in range(i + 1, m)
                    )
                    branches.append(conj(lits))
        rel_formulas[sym.name] = disj(branches)

    if ell == 1:
        # a single copy index is constant: resolve its atoms, giving a plain
        # interpretation of dimension arity+1 with nothing left to lower
        phi_u = substitute_index(phi_u, "xidx", 1)
        phi_eq = substitute_index(substitute_index(phi_eq, "xidx", 1), "yidx", 1)
        for name in list(rel_formulas):
            f = rel_formulas[name]
            for p in range(1, rho.target_schema.symbol(name).arity + 1):
                f = substitute_index(f, f"a{p}idx", 1)
            rel_formulas[name] = f

    copying = make_interpretation(
        rho.source_schema,
        rho.target_schema,
        d,
        phi_u,
        phi_eq,
        rel_formulas,
        copies=ell,
    )
    if stage == "copying" or ell == 1:
        return copying

    # plain stage: pick, per nonempty set encoding, one canonical padding block
    # built from the tuple's own last set element and filler, so the defining
    # tuple set stays small; empty-set encodings keep a free padding
    pad = max(ell, 3)
    enc_vars = tuple(f"x{q}" for q in range(d + 1, d + pad + 1))
    u_parts = []
    for ins in rho.instructions:
        m = ins.arity
        size = len(orders[ins])
        if size == 0:
            continue
        for i in range(1, min(size, ell) + 1):
            part = [
                _psi_set_encoding(xs, m),
                _type_diagram(ins.source_type, xs),
                _index_encoding(enc_vars, i),
            ]
            if m >= 1:
                others = [v for q, v in enumerate(enc_vars, start=1) if q != i]
                part.append(Eq(enc_vars[i - 1], xs[m - 1]))
                part.append(Eq(others[0], xs[m]))
            u_parts.append(conj(part))
    phi_u_plain = disj(u_parts)

    lowered = lower_copying(copying)
    return make_interpretation(
        rho.source_schema,
        rho.target_schema,
        lowered.dimension,
        phi_u_plain,
        lowered.phi_equal,
        dict(lowered.phi_rel_items),
        copies=1,
    )


def _index_encoding(vs: tuple[str, ...], i: int) -> Formula:
    """The padding block encodes index i: the i-th coordinate is the odd one."""
    others = [v for q, v in enumerate(vs, start=1) if q != i]
    parts: list[Formula] = [
        Eq(a, b) for a, b in zip(others, others[1:])
    ]
    parts.append(neg(Eq(vs[i - 1], others[0])))
    return conj(parts)


def lower_copying(psi: QfInterpretation) -> QfInterpretation:
    """Compile the copy coordinate of a copying interpretation into a padding
    block of >= 3 extra element coordinates (needs two distinct elements)."""
    if psi.plain:
        return psi
    d0 = psi.dimension
    pad = max(psi.copies, 3)
    d = d0 + pad

    def enc_block(prefix: str) -> tuple[str, ...]:
        return tuple(f"{prefix}{q}" for q in range(d0 + 1, d + 1))

    u_parts = []
    for i in range(1, psi.copies + 1):
        u_parts.append(conj([
            _index_encoding(enc_block("x"), i),
            substitute_index(psi.phi_universe, "xidx", i),
        ]))
    phi_u = disj(u_parts)

    eq_parts = []
    for i1 in range(1, psi.copies + 1):
        for i2 in range(1, psi.copies + 1):
            body = substitute_index(
                substitute_index(psi.phi_equal, "xidx", i1), "yidx", i2
            )
            eq_parts.append(conj([
                _index_encoding(enc_block("x"), i1),
                _index_encoding(enc_block("y"), i2),
                body,
            ]))
    phi_eq = disj(eq_parts)

    rels: dict[str, Formula] = {}
    for name, phi in psi.phi_rel_items:
        arity = psi.target_schema.symbol(name).arity
        branches = []
        for combo in itertools.product(range(1, psi.copies + 1), repeat=arity):
            body = phi
            parts = []
            for p, i in enumerate(combo, start=1):
                body = substitute_index(body, f"a{p}idx", i)
                parts.append(_index_encoding(enc_block(f"a{p}_"), i))
            branches.append(conj(parts + [body]))
        rels[name] = disj(branches)

    return make_interpretation(
        psi.source_schema, psi.target_schema, d, phi_u, phi_eq, rels, copies=1
    )


# --- interpretation -> cookbook (ordered sources) ----------------------------


def _ordered_types(schema: Schema, arity: int) -> list[Structure]:
    """Canonical representatives of linearly ordered types of the given arity."""
    if ORDER_SYMBOL not in schema:
        raise MissingOrder(f"source schema lacks the order symbol {ORDER_SYMBOL!r}")
    reduced = Schema(tuple(s for s in schema.symbols if s.name != ORDER_SYMBOL))
    out = []
    for s in enumerate_structures(reduced, arity):
        relations = {n: list(r) for n, r in s.relations.items()}
        relations[ORDER_SYMBOL] = [
            (i, j) for i in s.universe for j in s.universe if i <= j
        ]
        out.append(canonical_form(Structure(schema, s.universe, relations)))
    return out


def _order_of(t: Structure) -> list:
    """Universe of t sorted by its linear order relation."""
    leq = t.relations[ORDER_SYMBOL]
    return sorted(t.universe, key=lambda e: sum(1 for x in t.universe if (x, e) in leq))


def _check_set_respecting(psi: QfInterpretation, bound: int) -> None:
    """Verify, over all ordered structures of size <= bound, that the equality
    formula only merges tuples over the same element set (and is a congruence,
    via the evaluator)."""
    from .interpretations import eval_interpretation

    d = psi.dimension
    eq = compile_qf(psi.phi_equal, equality_vars(d, False))
    u = compile_qf(psi.phi_universe, universe_vars(d, False))
    for size in range(1, bound + 1):
        for t in _ordered_types(psi.source_schema, size):
            fu = u(t)
            feq = eq(t)
            sel = [tt for tt in itertools.product(t.universe, repeat=d) if fu(tt)]
            for t1 in sel:
                for t2 in sel:
                    if feq(t1 + t2) and set(t1) != set(t2):
                        raise NotSetRespecting(
                            "equality formula merges tuples over different sets",
                            witness=(t, t1, t2),
                        )
            eval_interpretation(psi, t)  # raises NotACongruence on failure


def qf_to_cookbook(psi: QfInterpretation) -> CookbookReduction:
    """Equivalent cookbook reduction for linearly ordered source structures.

    Requires a plain, set-respecting interpretation whose source schema carries
    the order symbol. Fresh counts are the equality classes of the defining
    tuples over each ordered type; relations are read off the class
    representatives.
    """
    if not psi.plain:
        raise NotInFragment("the cookbook construction needs a plain interpretation")
    if ORDER_SYMBOL not in psi.source_schema:
        raise MissingOrder(f"source schema lacks the order symbol {ORDER_SYMBOL!r}")
    d = psi.dimension
    max_target_arity = max(s.arity for s in psi.target_schema.symbols)
    bound = d * max_target_arity
    if bound > MAX_REDUCTION_ARITY:
        raise ArityLimitExceeded(
            f"would need types of arity {bound}, above the cap {MAX_REDUCTION_ARITY}"
        )
    _check_set_respecting(psi, 2 * d)

    u_by_type: dict[Structure, object] = {}
    classes_full: dict[Structure, list[tuple]] = {}  # type -> class reps, in order

    types_by_arity: dict[int, list[Structure]] = {}
    for k in range(1, bound + 1):
        types_by_arity[k] = _ordered_types(psi.source_schema, k)

    u_compiled = compile_qf(psi.phi_universe, universe_vars(d, False))
    eq_compiled = compile_qf(psi.phi_equal, equality_vars(d, False))

    def surjective_tuples(t: Structure, elems: tuple) -> list[tuple]:
        if len(elems) > d:
            return []
        fu = u_compiled(t)
        return [
            tt
            for tt in itertools.product(elems, repeat=d)
            if set(tt) == set(elems) and fu(tt)
        ]

    def partition(t: Structure, tuples: list[tuple]) -> list[list[tuple]]:
        feq = eq_compiled(t)
        groups: list[list[tuple]] = []
        for tt in tuples:
            for g in groups:
                if feq(tt + g[0]):
                    g.append(tt)
                    break
            else:
                groups.append([tt])
        key = {e: i for i, e in enumerate(t.universe)}
        groups.sort(key=lambda g: min(tuple(key[e] for e in tt) for tt in g))
        return groups

    for k in range(1, bound + 1):
        for t in types_by_arity[k]:
            full = tuple(t.universe)
            classes_full[t] = [
                min(g, key=lambda tt: tuple({e: i for i, e in enumerate(t.universe)}[e] for e in tt))
                for g in partition(t, surjective_tuples(t, full))
            ]

    type_of_subset_cache: dict[tuple, tuple[Structure, dict]] = {}

    def subset_type(t: Structure, a: frozenset) -> tuple[Structure, dict]:
        key = (t, a)
        hit = type_of_subset_cache.get(key)
        if hit is not None:
            return hit
        sub = induced_substructure(t, a)
        st = canonical_form(sub)
        order_a = _order_of(sub)
        order_st = _order_of(st)
        mapping = dict(zip(order_a, order_st))
        type_of_subset_cache[key] = (st, mapping)
        return st, mapping

    instructions = []
    for k in range(1, bound + 1):
        for t in types_by_arity[k]:
            pos = {e: i for i, e in enumerate(t.universe)}
            feq = eq_compiled(t)
            universe: list[TaggedElement] = []
            rep_local: dict[TaggedElement, tuple] = {}
            for size in range(1, k + 1):
                for subset in itertools.combinations(t.universe, size):
                    a = frozenset(subset)
                    st, mapping = subset_type(t, a)
                    groups = partition(t, surjective_tuples(t, tuple(subset)))
                    for g in groups:
                        rep = min(g, key=lambda tt: tuple(pos[e] for e in tt))
                        mapped = tuple(mapping[e] for e in rep)
                        j = None
                        st_eq = eq_compiled(st)
                        for idx, strep in enumerate(classes_full[st], start=1):
                            if st_eq(mapped + strep):
                                j = idx
                                break
                        if j is None:
                            raise NotSetRespecting(
                                "class numbering failed: no matching class in the subset type",
                                witness=(t, rep),
                            )
                        te = TaggedElement(a, j)
                        universe.append(te)
                        rep_local[te] = rep
            if not universe:
                continue
            relations: dict[str, list] = {}
            for sym in psi.target_schema:
                f = compile_qf(
                    psi.phi_relations[sym.name], relation_vars(d, sym.arity, False)
                )(t)
                tuples = []
                for combo in itertools.product(universe, repeat=sym.arity):
                    flat = tuple(x for e in combo for x in rep_local[e])
                    if f(flat):
                        tuples.append(tuple(combo))
                relations[sym.name] = tuples
            instructions.append(Instruction(t, Structure(psi.target_schema, universe, relations)))

    return CookbookReduction(psi.source_schema, psi.target_schema, tuple(instructions))


# --- inverse substitution ----------------------------------------------------


def inverse_substitute(psi: QfInterpretation, phi_star: Formula) -> Formula:
    """Pull a target-schema formula back through a plain interpretation.

    Every target variable becomes a block of dimension-many source variables;
    quantifiers relativize to the universe formula, relation atoms become their
    defining formulas, equality becomes the equality formula.
    """
    if not psi.plain:
        raise NotInFragment("inverse substitution needs a plain interpretation")
    d = psi.dimension
    used: set[str] = set()
    blocks: dict[str, tuple[str, ...]] = {}
    counter = [0]

    def block_for(v: str) -> tuple[str, ...]:
        if v in blocks:
            return blocks[v]
        counter[0] += 1
        names = tuple(f"{v}_{counter[0]}_{q}" for q in range(1, d + 1))
        used.update(names)
        blocks[v] = names
        return names

    def instantiate(f: Formula, variables: tuple[str, ...], args: tuple[str, ...]) -> Formula:
        return subst_vars(f, dict(zip(variables, args)))

    def walk(f: Formula) -> Formula:
        if isinstance(f, (Top, Bottom)):
            return f
        if isinstance(f, Rel):
            flat = tuple(x for v in f.args for x in block_for(v))
            return instantiate(
                psi.phi_relations[f.name],
                relation_vars(d, len(f.args), False),
                flat,
            )
        if isinstance(f, Eq):
            flat = block_for(f.left) + block_for(f.right)
            return instantiate(psi.phi_equal, equality_vars(d, False), flat)
        if isinstance(f, Not):
            return neg(walk(f.sub))
        if isinstance(f, And):
            return conj(walk(p) for p in f.parts)
        if isinstance(f, Or):
            return disj(walk(p) for p in f.parts)
        if isinstance(f, Implies):
            return Implies(walk(f.left), walk(f.right))
        if isinstance(f, Iff):
            return Iff(walk(f.left), walk(f.right))
        if isinstance(f, (Exists, Forall)):
            names = block_for(f.var)
            guard = instantiate(psi.phi_universe, universe_vars(d, False), names)
            inner = walk(f.body)
            del blocks[f.var]
            if isinstance(f, Exists):
                body = conj([guard, inner])
                for v in reversed(names):
                    body = Exists(v, body)
                return body
            body = Implies(guard, inner)
            for v in reversed(names):
                body = Forall(v, body)
            return body
        raise TypeError(f"not a formula: {f!r}")

    return walk(phi_star)
