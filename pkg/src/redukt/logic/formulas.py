"""First-order formula ASTs, text formats, model checking, and prenex forms.

Terms are variable names (strings). Copying interpretations additionally use
copy-index variables, which occur only in IndexIs atoms and are handled by the
interpretation evaluator, never by quantifiers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from ..errors import NotInFragment, SchemaMismatch, UnboundVariable
from ..structures import RelationSymbol, Schema, Structure


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class Bottom(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class IndexIs(Formula):
    """Copy-index variable equals a concrete index (copying interpretations)."""

    var: str
    value: int


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


TOP = Top()
BOTTOM = Bottom()


def conj(parts: Iterable[Formula]) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Bottom):
            return BOTTOM
        if isinstance(p, Top):
            continue
        if isinstance(p, And):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        return TOP
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(parts: Iterable[Formula]) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Top):
            return TOP
        if isinstance(p, Bottom):
            continue
        if isinstance(p, Or):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        return BOTTOM
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def neg(phi: Formula) -> Formula:
    if isinstance(phi, Top):
        return BOTTOM
    if isinstance(phi, Bottom):
        return TOP
    if isinstance(phi, Not):
        return phi.sub
    return Not(phi)


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, (Top, Bottom)):
        return set()
    if isinstance(phi, Rel):
        return set(phi.args)
    if isinstance(phi, Eq):
        return {phi.left, phi.right}
    if isinstance(phi, IndexIs):
        return {phi.var}
    if isinstance(phi, Not):
        return free_vars(phi.sub)
    if isinstance(phi, (And, Or)):
        return set().union(*(free_vars(p) for p in phi.parts)) if phi.parts else set()
    if isinstance(phi, (Implies, Iff)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def subst_vars(phi: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free variable occurrences; bound variables shadow the mapping."""
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(mapping.get(a, a) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(mapping.get(phi.left, phi.left), mapping.get(phi.right, phi.right))
    if isinstance(phi, IndexIs):
        return IndexIs(mapping.get(phi.var, phi.var), phi.value)
    if isinstance(phi, Not):
        return Not(subst_vars(phi.sub, mapping))
    if isinstance(phi, And):
        return And(tuple(subst_vars(p, mapping) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(subst_vars(p, mapping) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(subst_vars(phi.left, mapping), subst_vars(phi.right, mapping))
    if isinstance(phi, Iff):
        return Iff(subst_vars(phi.left, mapping), subst_vars(phi.right, mapping))
    if isinstance(phi, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        cls = type(phi)
        return cls(phi.var, subst_vars(phi.body, inner))
    raise TypeError(f"not a formula: {phi!r}")


def substitute_index(phi: Formula, var: str, value: int) -> Formula:
    """Resolve IndexIs atoms over the given copy-index variable."""
    if isinstance(phi, IndexIs):
        if phi.var == var:
            return TOP if phi.value == value else BOTTOM
        return phi
    if isinstance(phi, (Top, Bottom, Rel, Eq)):
        return phi
    if isinstance(phi, Not):
        return neg(substitute_index(phi.sub, var, value))
    if isinstance(phi, And):
        return conj(substitute_index(p, var, value) for p in phi.parts)
    if isinstance(phi, Or):
        return disj(substitute_index(p, var, value) for p in phi.parts)
    if isinstance(phi, Implies):
        return Implies(substitute_index(phi.left, var, value), substitute_index(phi.right, var, value))
    if isinstance(phi, Iff):
        return Iff(substitute_index(phi.left, var, value), substitute_index(phi.right, var, value))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, substitute_index(phi.body, var, value))
    raise TypeError(f"not a formula: {phi!r}")


def formula_schema(phi: Formula) -> Schema:
    """Minimal schema inferred from the relation atoms (no symmetric flags)."""
    arities: dict[str, int] = {}

    def walk(f: Formula):
        if isinstance(f, Rel):
            seen = arities.get(f.name)
            if seen is not None and seen != len(f.args):
                raise SchemaMismatch(f"{f.name} used with arities {seen} and {len(f.args)}")
            arities[f.name] = len(f.args)
        elif isinstance(f, Not):
            walk(f.sub)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                walk(p)
        elif isinstance(f, (Implies, Iff)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (Forall, Exists)):
            walk(f.body)

    walk(phi)
    return Schema(tuple(RelationSymbol(n, a) for n, a in sorted(arities.items())))


def _check_atoms(phi: Formula, schema: Schema) -> None:
    if isinstance(phi, Rel):
        if phi.name not in schema:
            raise SchemaMismatch(f"relation {phi.name!r} not in schema {schema.names}")
        if schema.symbol(phi.name).arity != len(phi.args):
            raise SchemaMismatch(
                f"{phi.name} expects arity {schema.symbol(phi.name).arity}, got {len(phi.args)}"
            )
    elif isinstance(phi, Not):
        _check_atoms(phi.sub, schema)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            _check_atoms(p, schema)
    elif isinstance(phi, (Implies, Iff)):
        _check_atoms(phi.left, schema)
        _check_atoms(phi.right, schema)
    elif isinstance(phi, (Forall, Exists)):
        _check_atoms(phi.body, schema)


def model_check(phi: Formula, s: Structure, assignment: Optional[dict] = None) -> bool:
    """Standard truth evaluation; on the empty universe every forall holds and
    every exists fails."""
    assignment = dict(assignment or {})
    _check_atoms(phi, s.schema)
    missing = free_vars(phi) - set(assignment)
    if missing:
        raise UnboundVariable(f"unassigned free variables: {sorted(missing)}")

    def ev(f: Formula, env: dict) -> bool:
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Rel):
            return tuple(env[a] for a in f.args) in s.relations[f.name]
        if isinstance(f, Eq):
            return env[f.left] == env[f.right]
        if isinstance(f, IndexIs):
            return env[f.var] == f.value
        if isinstance(f, Not):
            return not ev(f.sub, env)
        if isinstance(f, And):
            return all(ev(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(ev(p, env) for p in f.parts)
        if isinstance(f, Implies):
            return (not ev(f.left, env)) or ev(f.right, env)
        if isinstance(f, Iff):
            return ev(f.left, env) == ev(f.right, env)
        if isinstance(f, Forall):
            return all(ev(f.body, {**env, f.var: v}) for v in s.universe)
        if isinstance(f, Exists):
            return any(ev(f.body, {**env, f.var: v}) for v in s.universe)
        raise TypeError(f"not a formula: {f!r}")

    return ev(phi, assignment)


# --- negation normal form and prenexing ------------------------------------


def nnf(phi: Formula) -> Formula:
    """Negation normal form; implications and biconditionals are expanded."""

    def pos(f: Formula) -> Formula:
        if isinstance(f, (Top, Bottom, Rel, Eq, IndexIs)):
            return f
        if isinstance(f, Not):
            return negf(f.sub)
        if isinstance(f, And):
            return conj(pos(p) for p in f.parts)
        if isinstance(f, Or):
            return disj(pos(p) for p in f.parts)
        if isinstance(f, Implies):
            return disj([negf(f.left), pos(f.right)])
        if isinstance(f, Iff):
            return disj([conj([pos(f.left), pos(f.right)]), conj([negf(f.left), negf(f.right)])])
        if isinstance(f, Forall):
            return Forall(f.var, pos(f.body))
        if isinstance(f, Exists):
            return Exists(f.var, pos(f.body))
        raise TypeError(f"not a formula: {f!r}")

    def negf(f: Formula) -> Formula:
        if isinstance(f, Top):
            return BOTTOM
        if isinstance(f, Bottom):
            return TOP
        if isinstance(f, (Rel, Eq, IndexIs)):
            return Not(f)
        if isinstance(f, Not):
            return pos(f.sub)
        if isinstance(f, And):
            return disj(negf(p) for p in f.parts)
        if isinstance(f, Or):
            return conj(negf(p) for p in f.parts)
        if isinstance(f, Implies):
            return conj([pos(f.left), negf(f.right)])
        if isinstance(f, Iff):
            return disj([conj([pos(f.left), negf(f.right)]), conj([negf(f.left), pos(f.right)])])
        if isinstance(f, Forall):
            return Exists(f.var, negf(f.body))
        if isinstance(f, Exists):
            return Forall(f.var, negf(f.body))
        raise TypeError(f"not a formula: {f!r}")

    return pos(phi)


def prenex(phi: Formula) -> tuple[tuple[tuple[str, str], ...], Formula]:
    """Prefix/matrix pair of an equivalent prenex form of phi.

    The prefix is a tuple of ("forall" | "exists", var) pairs. Quantifiers are
    pulled universal-first whenever independence allows, so a biconditional of
    two purely existential formulas prenexes into the forall-exists fragment.
    Bound variables are renamed apart deterministically (q1, q2, ...).
    """
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"q{counter[0]}"

    def walk(f: Formula) -> tuple[list[tuple[str, str]], Formula]:
        if isinstance(f, (Top, Bottom, Rel, Eq, IndexIs, Not)):
            return [], f
        if isinstance(f, (Forall, Exists)):
            kind = "forall" if isinstance(f, Forall) else "exists"
            prefix, matrix = walk(f.body)
            name = fresh()
            matrix = subst_vars(matrix, {f.var: name})
            prefix = [(k, v if True else v) for (k, v) in prefix]
            # renaming the binder cannot capture: all pulled names are fresh
            return [(kind, name)] + prefix, matrix

        if isinstance(f, (And, Or)):
            parts = [walk(p) for p in f.parts]
            merged: list[tuple[str, str]] = []
            prefixes = [list(p) for p, _ in parts]
            while any(prefixes):
                pick = None
                for pr in prefixes:
                    if pr and pr[0][0] == "forall":
                        pick = pr
                        break
                if pick is None:
                    pick = next(pr for pr in prefixes if pr)
                merged.append(pick.pop(0))
            matrices = [m for _, m in parts]
            matrix = conj(matrices) if isinstance(f, And) else disj(matrices)
            return merged, matrix

        raise TypeError(f"prenex expects nnf input, got: {f!r}")

    normalized = nnf(phi)
    prefix, matrix = walk(normalized)
    return tuple(prefix), matrix


FRAGMENT_QF = "quantifier-free"
FRAGMENT_EXISTS = "exists-star"
FRAGMENT_FORALL_EXISTS = "forall-exists"
FRAGMENT_GENERAL = "general"


def fragment_tag(phi: Formula) -> str:
    prefix, _ = prenex(phi)
    kinds = [k for k, _ in prefix]
    if not kinds:
        return FRAGMENT_QF
    if all(k == "exists" for k in kinds):
        return FRAGMENT_EXISTS
    split = kinds.index("exists") if "exists" in kinds else len(kinds)
    if all(k == "forall" for k in kinds[:split]) and all(k == "exists" for k in kinds[split:]):
        return FRAGMENT_FORALL_EXISTS
    return FRAGMENT_GENERAL


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Top, Bottom, Rel, Eq, IndexIs)):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.sub)
    if isinstance(phi, (And, Or)):
        return all(is_quantifier_free(p) for p in phi.parts)
    if isinstance(phi, (Implies, Iff)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


# --- text formats -----------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_formula(text: str) -> Formula:
    """Parse either the s-expression format or the infix convenience format."""
    stripped = text.strip()
    if stripped.startswith("("):
        try:
            return _parse_sexpr(stripped)
        except ValueError:
            return _parse_infix(stripped)
    if stripped in ("true", "false"):
        return TOP if stripped == "true" else BOTTOM
    return _parse_infix(stripped)


def _parse_sexpr(text: str) -> Formula:
    tokens = _TOKEN.findall(text)
    pos = [0]

    def next_tok() -> str:
        if pos[0] >= len(tokens):
            raise ValueError("unexpected end of input")
        tok = tokens[pos[0]]
        pos[0] += 1
        return tok

    def parse() -> Formula:
        tok = next_tok()
        if tok == "(":
            head = next_tok()
            if head in ("forall", "exists"):
                var = next_tok()
                body = parse()
                _expect_close()
                return (Forall if head == "forall" else Exists)(var, body)
            if head == "not":
                sub = parse()
                _expect_close()
                return Not(sub)
            if head in ("and", "or"):
                parts = []
                while tokens[pos[0]] != ")":
                    parts.append(parse())
                _expect_close()
                return (And if head == "and" else Or)(tuple(parts))
            if head in ("->", "<->"):
                left = parse()
                right = parse()
                _expect_close()
                return (Implies if head == "->" else Iff)(left, right)
            if head == "=":
                left, right = next_tok(), next_tok()
                _expect_close()
                return Eq(left, right)
            if head == "copy":
                var, value = next_tok(), next_tok()
                _expect_close()
                return IndexIs(var, int(value))
            args = []
            while tokens[pos[0]] != ")":
                args.append(next_tok())
            _expect_close()
            return Rel(head, tuple(args))
        if tok == "true":
            return TOP
        if tok == "false":
            return BOTTOM
        raise ValueError(f"unexpected token {tok!r}")

    def _expect_close():
        tok = next_tok()
        if tok != ")":
            raise ValueError(f"expected ')', got {tok!r}")

    out = parse()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing tokens: {tokens[pos[0]:]}")
    return out


def formula_to_text(phi: Formula) -> str:
    """Canonical s-expression rendering; parse_formula inverts it exactly."""
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Rel):
        return "(" + " ".join((phi.name,) + phi.args) + ")"
    if isinstance(phi, Eq):
        return f"(= {phi.left} {phi.right})"
    if isinstance(phi, IndexIs):
        return f"(copy {phi.var} {phi.value})"
    if isinstance(phi, Not):
        return f"(not {formula_to_text(phi.sub)})"
    if isinstance(phi, And):
        return "(and " + " ".join(formula_to_text(p) for p in phi.parts) + ")"
    if isinstance(phi, Or):
        return "(or " + " ".join(formula_to_text(p) for p in phi.parts) + ")"
    if isinstance(phi, Implies):
        return f"(-> {formula_to_text(phi.left)} {formula_to_text(phi.right)})"
    if isinstance(phi, Iff):
        return f"(<-> {formula_to_text(phi.left)} {formula_to_text(phi.right)})"
    if isinstance(phi, Forall):
        return f"(forall {phi.var} {formula_to_text(phi.body)})"
    if isinstance(phi, Exists):
        return f"(exists {phi.var} {formula_to_text(phi.body)})"
    raise TypeError(f"not a formula: {phi!r}")


_INFIX_TOKEN = re.compile(
    r"\s*(<->|->|!=|=|&|\||~|\(|\)|,|\.|forall\b|exists\b|true\b|false\b|[A-Za-z_][A-Za-z0-9_]*)"
)


def _tokenize_infix(text: str) -> list[str]:
    out, i = [], 0
    while i < len(text):
        m = _INFIX_TOKEN.match(text, i)
        if not m:
            if text[i:].strip():
                raise ValueError(f"cannot tokenize at: {text[i:]!r}")
            break
        out.append(m.group(1))
        i = m.end()
    return out


def _parse_infix(text: str) -> Formula:
    tokens = _tokenize_infix(text)
    pos = [0]

    def peek() -> Optional[str]:
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take(expected: Optional[str] = None) -> str:
        tok = peek()
        if tok is None:
            raise ValueError("unexpected end of input")
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        pos[0] += 1
        return tok

    def formula() -> Formula:
        if peek() in ("forall", "exists"):
            kind = take()
            names = [take()]
            while peek() not in (".",):
                names.append(take())
            take(".")
            body = formula()
            for v in reversed(names):
                body = (Forall if kind == "forall" else Exists)(v, body)
            return body
        return iff()

    def iff() -> Formula:
        left = implies()
        while peek() == "<->":
            take()
            left = Iff(left, implies())
        return left

    def implies() -> Formula:
        left = disjunct()
        if peek() == "->":
            take()
            return Implies(left, implies())
        return left

    def disjunct() -> Formula:
        parts = [conjunct()]
        while peek() == "|":
            take()
            parts.append(conjunct())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunct() -> Formula:
        parts = [unary()]
        while peek() == "&":
            take()
            parts.append(unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary() -> Formula:
        if peek() == "~":
            take()
            return Not(unary())
        if peek() == "(":
            take()
            inner = formula()
            take(")")
            return inner
        if peek() in ("forall", "exists"):
            return formula()
        if peek() == "true":
            take()
            return TOP
        if peek() == "false":
            take()
            return BOTTOM
        name = take()
        if peek() == "(":
            take()
            args = [take()]
            while peek() == ",":
                take()
                args.append(take())
            take(")")
            return Rel(name, tuple(args))
        if peek() == "=":
            take()
            return Eq(name, take())
        if peek() == "!=":
            take()
            return Not(Eq(name, take()))
        raise ValueError(f"dangling term {name!r}")

    out = formula()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing tokens: {tokens[pos[0]:]}")
    return out
