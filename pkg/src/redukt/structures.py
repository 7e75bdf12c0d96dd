"""Finite relational structures: schemas, canonical forms, isomorphism, enumeration.

Element identifiers are opaque hashable values. External documents use strings
(or integers for type representatives, or tagged pairs for gadget universes);
internally any hashable works as long as it has a deterministic sort key, see
:func:`element_key`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional

from .errors import (
    ArityLimitExceeded,
    ExplosionGuard,
    MalformedDocument,
    UnknownElement,
)

MAX_TYPE_ARITY = 4
HARD_TYPE_ARITY = 6
ENUMERATION_CEILING = 2 ** 24


@dataclass(frozen=True, order=True)
class RelationSymbol:
    name: str
    arity: int
    symmetric: bool = False

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"relation {self.name!r} needs arity >= 1, got {self.arity}")
        if self.symmetric and self.arity != 2:
            raise ValueError(f"symmetric flag only makes sense for binary symbols: {self.name!r}")


@dataclass(frozen=True)
class Schema:
    symbols: tuple[RelationSymbol, ...]

    def __post_init__(self):
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate relation names in schema: {names}")
        object.__setattr__(self, "symbols", tuple(sorted(self.symbols, key=lambda s: s.name)))

    def __iter__(self) -> Iterator[RelationSymbol]:
        return iter(self.symbols)

    def __contains__(self, name: str) -> bool:
        return any(s.name == name for s in self.symbols)

    def symbol(self, name: str) -> RelationSymbol:
        for s in self.symbols:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.symbols)


def undirected_graph_schema() -> Schema:
    return Schema((RelationSymbol("E", 2, symmetric=True),))


def directed_graph_schema() -> Schema:
    return Schema((RelationSymbol("E", 2),))


def ordered_graph_schema() -> Schema:
    return Schema((RelationSymbol("E", 2, symmetric=True), RelationSymbol("leq", 2)))


@dataclass(frozen=True)
class TaggedElement:
    """Gadget universe element: a base set of source elements plus a copy index."""

    base: frozenset
    copy: int

    def __post_init__(self):
        if self.copy < 1:
            raise ValueError(f"copy index must be >= 1, got {self.copy}")

    def __repr__(self):
        items = ",".join(repr(x) for x in sorted(self.base, key=element_key))
        return f"({{{items}}},{self.copy})"


def element_key(e):
    """Deterministic sort key over the element kinds the library uses."""
    if isinstance(e, bool):
        return (0, int(e), "")
    if isinstance(e, int):
        return (0, e, "")
    if isinstance(e, str):
        return (1, 0, e)
    if isinstance(e, TaggedElement):
        return (2, (len(e.base), tuple(sorted(element_key(b) for b in e.base)), e.copy), "")
    if isinstance(e, tuple):
        return (3, tuple(element_key(x) for x in e), "")
    return (4, 0, repr(e))


class Structure:
    """An immutable finite relational structure over a schema.

    The universe is an ordered tuple of distinct elements; relations map each
    schema symbol to a frozenset of tuples over the universe. Symmetric binary
    symbols are closed under swapping on construction.
    """

    __slots__ = ("schema", "universe", "relations", "_pos", "_hash")

    def __init__(self, schema: Schema, universe: Iterable, relations: Optional[dict] = None):
        universe = tuple(universe)
        if len(set(universe)) != len(universe):
            raise ValueError(f"universe has repeated elements: {universe}")
        pos = {e: i for i, e in enumerate(universe)}
        rels: dict[str, frozenset] = {}
        relations = relations or {}
        unknown = set(relations) - set(schema.names)
        if unknown:
            raise ValueError(f"relations not in schema: {sorted(unknown)}")
        for sym in schema:
            tuples = set()
            for t in relations.get(sym.name, ()):
                t = tuple(t)
                if len(t) != sym.arity:
                    raise ValueError(f"tuple {t} has wrong arity for {sym.name}/{sym.arity}")
                for x in t:
                    if x not in pos:
                        raise UnknownElement(f"tuple {t} uses element {x!r} outside the universe")
                tuples.add(t)
                if sym.symmetric:
                    tuples.add((t[1], t[0]))
            rels[sym.name] = frozenset(tuples)
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_hash", hash((schema, universe, tuple(sorted((n, r) for n, r in rels.items())))))

    def __setattr__(self, name, value):
        raise AttributeError("Structure is immutable")

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.schema == other.schema
            and self.universe == other.universe
            and self.relations == other.relations
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        rels = {
            n: sorted(r, key=lambda t: tuple(element_key(x) for x in t))
            for n, r in self.relations.items()
            if r
        }
        return f"Structure(|U|={len(self.universe)}, U={list(self.universe)!r}, {rels!r})"

    def __len__(self):
        return len(self.universe)

    def position(self, e) -> int:
        try:
            return self._pos[e]
        except KeyError:
            raise UnknownElement(f"{e!r} is not in the universe") from None

    def has(self, name: str, t: tuple) -> bool:
        return t in self.relations[name]

    def replace(self, **kwargs) -> "Structure":
        args = {
            "schema": self.schema,
            "universe": self.universe,
            "relations": self.relations,
        }
        args.update(kwargs)
        return Structure(args["schema"], args["universe"], args["relations"])

    def rename(self, mapping: dict) -> "Structure":
        """Relabel elements; mapping must be injective on the universe."""
        universe = tuple(mapping[e] for e in self.universe)
        relations = {
            n: [tuple(mapping[x] for x in t) for t in r] for n, r in self.relations.items()
        }
        return Structure(self.schema, universe, relations)


def induced_substructure(s: Structure, elements: Iterable) -> Structure:
    """Restrict s to the given subset of its universe, keeping universe order."""
    wanted = set(elements)
    missing = [e for e in wanted if e not in s._pos]
    if missing:
        raise UnknownElement(f"elements not in universe: {missing!r}")
    universe = tuple(e for e in s.universe if e in wanted)
    keep = wanted.issuperset
    relations = {n: [t for t in r if keep(t)] for n, r in s.relations.items()}
    return Structure(s.schema, universe, relations)


def _relation_encoding(s: Structure, perm: dict) -> tuple:
    """Index-tuple encoding of the relations under the given element -> index map."""
    return tuple(
        tuple(sorted(tuple(perm[x] for x in t) for t in s.relations[sym.name]))
        for sym in s.schema
    )


def canonical_relabeling(s: Structure) -> dict:
    """The element -> {1..n} relabeling achieving the least relation encoding.

    Ties between permutations are broken by the permutation itself (w.r.t. the
    universe order), so the map is deterministic.
    """
    n = len(s.universe)
    best = None
    best_assign = None
    for perm in itertools.permutations(range(1, n + 1)):
        assign = {e: perm[i] for i, e in enumerate(s.universe)}
        enc = _relation_encoding(s, assign)
        key = (enc, perm)
        if best is None or key < best:
            best = key
            best_assign = assign
    return best_assign if best_assign is not None else {}


def canonical_form(s: Structure) -> Structure:
    """Canonical representative of s's isomorphism class, universe {1..n}."""
    assign = canonical_relabeling(s)
    universe = list(range(1, len(s.universe) + 1))
    relations = {
        n: [tuple(assign[x] for x in t) for t in r] for n, r in s.relations.items()
    }
    return Structure(s.schema, universe, relations)


def iso_type(s: Structure, elements: Iterable, max_arity: int = MAX_TYPE_ARITY) -> Structure:
    """Isomorphism type of the substructure induced by the given element set."""
    elements = set(elements)
    if max_arity > HARD_TYPE_ARITY:
        raise ArityLimitExceeded(f"arity cap {max_arity} exceeds hard limit {HARD_TYPE_ARITY}")
    if len(elements) > max_arity:
        raise ArityLimitExceeded(
            f"type over {len(elements)} elements exceeds the configured cap {max_arity}"
        )
    return canonical_form(induced_substructure(s, elements))


def is_type_representative(t: Structure) -> bool:
    """True when t's universe is exactly (1..k) and t is in canonical form."""
    if t.universe != tuple(range(1, len(t.universe) + 1)):
        return False
    return canonical_form(t) == t


@dataclass(frozen=True)
class Embedding:
    """An injective map that is an isomorphism onto the induced image."""

    source: Structure
    target: Structure
    mapping: tuple  # pairs (source element, target element), in source universe order

    @staticmethod
    def build(source: Structure, target: Structure, mapping: dict) -> "Embedding":
        if set(mapping) != set(source.universe):
            raise ValueError("mapping must be defined on exactly the source universe")
        image = list(mapping.values())
        if len(set(image)) != len(image):
            raise ValueError("mapping is not injective")
        for e in image:
            target.position(e)
        if source.schema != target.schema:
            raise ValueError("schemas differ")
        img = set(image)
        for sym in source.schema:
            src_rel = source.relations[sym.name]
            tgt_rel = target.relations[sym.name]
            for t in itertools.product(source.universe, repeat=sym.arity):
                if (t in src_rel) != (tuple(mapping[x] for x in t) in tgt_rel):
                    raise ValueError(
                        f"not an induced isomorphism at {sym.name}{t}"
                    )
            for t in tgt_rel:
                if img.issuperset(t) and tuple(_invert(mapping)[x] for x in t) not in src_rel:
                    raise ValueError(f"extra target tuple {sym.name}{t} over the image")
        return Embedding(source, target, tuple((e, mapping[e]) for e in source.universe))

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def __call__(self, e):
        return dict(self.mapping)[e]


def _invert(mapping: dict) -> dict:
    return {v: k for k, v in mapping.items()}


def _extension_ok(source: Structure, target: Structure, assign: dict, e, v) -> bool:
    """Incremental induced-isomorphism check when mapping e -> v."""
    assign = {**assign, e: v}
    dom = set(assign)
    for sym in source.schema:
        src_rel = source.relations[sym.name]
        tgt_rel = target.relations[sym.name]
        for t in itertools.product(sorted(dom, key=source.position), repeat=sym.arity):
            if e not in t:
                continue
            if ((t in src_rel) != (tuple(assign[x] for x in t) in tgt_rel)):
                return False
    return True


def enumerate_embeddings(t: Structure, s: Structure) -> Iterator[Embedding]:
    """All embeddings of t into s, ordered by the image tuple w.r.t. s's universe order."""
    if t.schema != s.schema:
        return
    n, k = len(s.universe), len(t.universe)
    if k > n:
        return

    order = list(t.universe)

    def extend(assign: dict, used: set) -> Iterator[dict]:
        if len(assign) == k:
            yield dict(assign)
            return
        e = order[len(assign)]
        for v in s.universe:
            if v in used:
                continue
            if _extension_ok(t, s, assign, e, v):
                assign[e] = v
                used.add(v)
                yield from extend(assign, used)
                del assign[e]
                used.remove(v)

    for mapping in extend({}, set()):
        yield Embedding(t, s, tuple((e, mapping[e]) for e in order))


def find_isomorphism(s1: Structure, s2: Structure) -> Optional[Embedding]:
    """Least bijective embedding from s1 onto s2, or None.

    Uses degree-signature pruning so that the desk-scale structures produced by
    reductions (a few dozen elements) compare quickly.
    """
    if s1.schema != s2.schema:
        return None
    if len(s1.universe) != len(s2.universe):
        return None
    for sym in s1.schema:
        if len(s1.relations[sym.name]) != len(s2.relations[sym.name]):
            return None

    def signature(s: Structure, e) -> tuple:
        sig = []
        for sym in s.schema:
            rel = s.relations[sym.name]
            for slot in range(sym.arity):
                sig.append(sum(1 for t in rel if t[slot] == e))
        return tuple(sig)

    sig1 = {e: signature(s1, e) for e in s1.universe}
    sig2 = {e: signature(s2, e) for e in s2.universe}
    from collections import Counter

    if Counter(sig1.values()) != Counter(sig2.values()):
        return None

    order = list(s1.universe)

    def extend(assign: dict, used: set) -> Optional[dict]:
        if len(assign) == len(order):
            return dict(assign)
        e = order[len(assign)]
        for v in s2.universe:
            if v in used or sig1[e] != sig2[v]:
                continue
            if _extension_ok(s1, s2, assign, e, v):
                assign[e] = v
                used.add(v)
                res = extend(assign, used)
                if res is not None:
                    return res
                del assign[e]
                used.remove(v)
        return None

    mapping = extend({}, set())
    if mapping is None:
        return None
    return Embedding(s1, s2, tuple((e, mapping[e]) for e in order))


def isomorphic(s1: Structure, s2: Structure) -> bool:
    return find_isomorphism(s1, s2) is not None


def _candidate_tuples(sym: RelationSymbol, universe: tuple, allow_loops: bool) -> list[tuple]:
    if sym.symmetric:
        pairs = [
            (u, v)
            for i, u in enumerate(universe)
            for v in universe[i + (0 if allow_loops else 1):]
            if allow_loops or u != v
        ]
        return pairs
    out = []
    for t in itertools.product(universe, repeat=sym.arity):
        if not allow_loops and sym.arity == 2 and t[0] == t[1]:
            continue
        out.append(t)
    return out


def _guard_ceiling(schema: Schema, n: int, allow_loops: bool, ceiling: int) -> None:
    universe = tuple(range(1, n + 1))
    total_bits = sum(len(_candidate_tuples(sym, universe, allow_loops)) for sym in schema)
    if 2 ** total_bits > ceiling:
        raise ExplosionGuard(
            f"2^{total_bits} candidate relation encodings exceed the ceiling {ceiling}"
        )


def iso_invariant(s: Structure) -> tuple:
    """Cheap isomorphism-invariant key: relation sizes plus two rounds of
    neighbourhood colour refinement over the binary symbols."""
    colors = {e: () for e in s.universe}
    for sym in s.schema:
        rel = s.relations[sym.name]
        for e in s.universe:
            profile = tuple(sum(1 for t in rel if t[i] == e) for i in range(sym.arity))
            colors[e] = colors[e] + profile
    binary = [sym.name for sym in s.schema if sym.arity == 2]
    for _ in range(2):
        nxt = {}
        for e in s.universe:
            around = []
            for name in binary:
                rel = s.relations[name]
                outs = sorted(colors[v] for (u, v) in rel if u == e)
                ins = sorted(colors[u] for (u, v) in rel if v == e)
                around.append((tuple(outs), tuple(ins)))
            nxt[e] = (colors[e], tuple(around))
        colors = nxt
    counts = tuple(sorted((sym.name, len(s.relations[sym.name])) for sym in s.schema))
    return (len(s.universe), counts, tuple(sorted(map(repr, colors.values()))))


def _extension_tuples(sym: RelationSymbol, n: int, allow_loops: bool) -> list[tuple]:
    """Candidate tuples over {1..n} that mention the new element n."""
    return [
        t
        for t in _candidate_tuples(sym, tuple(range(1, n + 1)), allow_loops)
        if n in t
    ]


@lru_cache(maxsize=256)
def _representatives(schema: Schema, n: int, allow_loops: bool) -> tuple[Structure, ...]:
    """One representative per isomorphism class, built inductively by
    extending the (n-1)-representatives with a new last element."""
    if n == 0:
        return (Structure(schema, (), {}),)
    parents = _representatives(schema, n - 1, allow_loops)
    slots = [(sym, _extension_tuples(sym, n, allow_loops)) for sym in schema]
    universe = tuple(range(1, n + 1))
    buckets: dict[tuple, list[Structure]] = {}
    out: list[Structure] = []
    for parent in parents:
        for masks in itertools.product(*(range(2 ** len(c)) for _, c in slots)):
            relations = {name: list(rel) for name, rel in parent.relations.items()}
            for (sym, cands), mask in zip(slots, masks):
                relations[sym.name].extend(t for i, t in enumerate(cands) if mask >> i & 1)
            s = Structure(schema, universe, relations)
            key = iso_invariant(s)
            bucket = buckets.setdefault(key, [])
            if any(find_isomorphism(s, rep) is not None for rep in bucket):
                continue
            bucket.append(s)
            out.append(s)
    return tuple(out)


def enumerate_structures(
    schema: Schema,
    n: int,
    *,
    canonical_only: bool = False,
    allow_loops: bool = False,
    predicate: Optional[Callable[[Structure], bool]] = None,
    ceiling: int = ENUMERATION_CEILING,
) -> Iterator[Structure]:
    """All structures with universe {1..n}, in a fixed deterministic order.

    With canonical_only, yields the canonical form of one representative per
    isomorphism class (found by inductive extension, so the raw structure
    space is never materialized). Binary loops (u,u) are excluded unless
    allow_loops is set.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    _guard_ceiling(schema, n, allow_loops, ceiling)
    if canonical_only:
        for rep in _representatives(schema, n, allow_loops):
            c = canonical_form(rep)
            if predicate is None or predicate(c):
                yield c
        return
    universe = tuple(range(1, n + 1))
    slots = [(sym, _candidate_tuples(sym, universe, allow_loops)) for sym in schema]
    for masks in itertools.product(*(range(2 ** len(c)) for _, c in slots)):
        relations = {}
        for (sym, cands), mask in zip(slots, masks):
            relations[sym.name] = [t for i, t in enumerate(cands) if mask >> i & 1]
        s = Structure(schema, universe, relations)
        if predicate is not None and not predicate(s):
            continue
        yield s


def structure_to_doc(s: Structure) -> dict:
    """Document form: schema, universe, relations (sorted tuple lists)."""
    return {
        "schema": [
            {"name": sym.name, "arity": sym.arity, "symmetric": sym.symmetric}
            for sym in s.schema
        ],
        "universe": [_element_to_doc(e) for e in s.universe],
        "relations": {
            name: sorted(
                ([_element_to_doc(x) for x in t] for t in rel),
                key=lambda t: [element_key(_element_from_doc(x)) for x in t],
            )
            for name, rel in sorted(s.relations.items())
        },
    }


def structure_from_doc(doc: dict) -> Structure:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"structure document must be an object, got {type(doc).__name__}")
    try:
        schema = Schema(
            tuple(
                RelationSymbol(d["name"], d["arity"], d.get("symmetric", False))
                for d in doc["schema"]
            )
        )
        universe = [_element_from_doc(e) for e in doc["universe"]]
        relations = {
            name: [tuple(_element_from_doc(x) for x in t) for t in rel]
            for name, rel in doc.get("relations", {}).items()
        }
    except MalformedDocument:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad structure document: {exc}") from exc
    try:
        return Structure(schema, universe, relations)
    except (ValueError, UnknownElement) as exc:
        raise MalformedDocument(f"bad structure document: {exc}") from exc


def _element_to_doc(e):
    if isinstance(e, TaggedElement):
        return [sorted((_element_to_doc(b) for b in e.base), key=lambda x: element_key(_element_from_doc(x))), e.copy]
    if isinstance(e, (str, int)):
        return e
    if isinstance(e, tuple):
        return "(" + ",".join(str(_element_to_doc(x)) for x in e) + ")"
    return str(e)


def _element_from_doc(e):
    if isinstance(e, (str, bool)):
        return e
    if isinstance(e, int):
        return e
    if isinstance(e, list):
        if len(e) != 2 or not isinstance(e[1], int):
            raise MalformedDocument(f"tagged element must be [base-list, copy-index], got {e!r}")
        base, copy = e
        if not isinstance(base, list):
            raise MalformedDocument(f"tagged element base must be a list, got {base!r}")
        return TaggedElement(frozenset(_element_from_doc(b) for b in base), copy)
    raise MalformedDocument(f"unsupported universe element {e!r}")
