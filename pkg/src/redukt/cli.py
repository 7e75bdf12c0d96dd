"""Command-line entry points.

Exit codes: 0 success (validate: valid), 1 I/O failure, 2 malformed input or
well-formedness failure, 3 invalid verdict, 4 unknown verdict.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Optional

from .cookbook import (
    EdgeGadget,
    GlobalGadget,
    NodeGadget,
    apply_reduction,
    from_gadget,
    gadget_spec_from_doc,
    reduction_from_doc,
    reduction_to_doc,
    validate_wellformed,
)
from .errors import (
    BadParameters,
    LiftFailure,
    MalformedDocument,
    NotInFragment,
    NotWellFormed,
    ReduktError,
    SchemaMismatch,
)
from .logic import (
    cookbook_to_qf,
    eval_interpretation,
    interpretation_from_doc,
    interpretation_to_doc,
)
from .problems import ProblemDef, parse_problem_name
from .structures import (
    Structure,
    canonical_form,
    enumerate_structures,
    isomorphic,
    structure_from_doc,
    structure_to_doc,
    undirected_graph_schema,
)
from .validators import (
    validate,
    validate_clique_global,
    validate_hc_node,
    validate_vc_fvs_edge,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_BAD_INPUT = 2
EXIT_INVALID = 3
EXIT_UNKNOWN = 4


def _read_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _IoError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: {exc}") from exc


class _IoError(Exception):
    pass


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n")


def _load_reduction(path: str):
    doc = _read_json(path)
    if "kind" in doc:
        return from_gadget(gadget_spec_from_doc(doc))
    return reduction_from_doc(doc)


def _load_problem(name: str) -> ProblemDef:
    if name.startswith("fo:"):
        from .logic import parse_formula

        path = name[3:]
        try:
            if path == "-":
                text = sys.stdin.read()
            else:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
        except OSError as exc:
            raise _IoError(str(exc)) from exc
        return ProblemDef("fo", sentence=parse_formula(text))
    return parse_problem_name(name)


def cmd_apply(args) -> int:
    rho = _load_reduction(args.reduction)
    s = structure_from_doc(_read_json(args.structure))
    report = validate_wellformed(rho)
    if not report.ok:
        sys.stderr.write(json.dumps(report.to_doc(), indent=2) + "\n")
        return EXIT_BAD_INPUT
    out = apply_reduction(rho, s)
    _emit(structure_to_doc(out))
    return EXIT_OK


def cmd_validate(args) -> int:
    doc = _read_json(args.candidate)
    if "kind" in doc:
        candidate = gadget_spec_from_doc(doc)
    elif "dimension" in doc:
        candidate = interpretation_from_doc(doc)
    else:
        candidate = reduction_from_doc(doc)
    p = _load_problem(args.source)
    p_star = _load_problem(args.target)
    verdict = validate(candidate, p, p_star, args.budget)
    _emit(verdict.to_doc())
    if verdict.status == "valid":
        return EXIT_OK
    if verdict.status == "invalid":
        return EXIT_INVALID
    return EXIT_UNKNOWN


def cmd_translate(args) -> int:
    rho = _load_reduction(args.reduction)
    psi = cookbook_to_qf(rho, stage=args.stage)
    if args.check is not None:
        for n in range(2, args.check + 1):
            for s in enumerate_structures(rho.source_schema, n, canonical_only=True):
                left = eval_interpretation(psi, s)
                right = apply_reduction(rho, s)
                if not isomorphic(left, right):
                    sys.stderr.write(
                        f"translation mismatch on a source with {n} elements\n"
                    )
                    return EXIT_INVALID
    _emit(interpretation_to_doc(psi))
    return EXIT_OK


def _canonical_marked(graph: Structure, marks: dict[str, list]) -> tuple:
    """Canonical key of a graph with distinguished unary marks."""
    from .structures import RelationSymbol, Schema

    symbols = list(graph.schema.symbols) + [
        RelationSymbol(f"mark_{name}", 1) for name in sorted(marks)
    ]
    relations = {n: list(r) for n, r in graph.relations.items()}
    for name, nodes in marks.items():
        relations[f"mark_{name}"] = [(v,) for v in nodes]
    marked = Structure(Schema(tuple(symbols)), graph.universe, relations)
    c = canonical_form(marked)
    return (
        len(c.universe),
        tuple(sorted((n, tuple(sorted(r))) for n, r in c.relations.items())),
    )


def _edge_gadget_rows(max_nodes: int, k: int):
    seen = set()
    for m in range(2, max_nodes + 1):
        nodes = ["c", "d"] + [f"g{i}" for i in range(1, m - 1)]
        pairs = list(itertools.combinations(nodes, 2))
        for mask in range(2 ** len(pairs)):
            edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
            g = Structure(undirected_graph_schema(), nodes, {"E": edges})
            keys = {
                _canonical_marked(g, {"c": ["c"], "d": ["d"]}),
                _canonical_marked(g, {"c": ["d"], "d": ["c"]}),
            }
            key = min(keys)
            if key in seen:
                continue
            seen.add(key)
            gadget_id = f"n{m}:" + ",".join("-".join(e) for e in sorted(edges))
            spec = EdgeGadget(g, "c", "d")
            try:
                verdict = validate_vc_fvs_edge(spec, k)
            except LiftFailure:
                yield gadget_id, "lift-failure", ""
                continue
            yield gadget_id, verdict.status, _cex_size(verdict)


def _cex_size(verdict) -> str:
    if verdict.counterexample is None:
        return ""
    return str(len(verdict.counterexample.universe))


def _node_gadget_rows(max_nodes: int):
    m = max_nodes
    path = Structure(
        undirected_graph_schema(),
        list(range(1, m + 1)),
        {"E": [(i, i + 1) for i in range(1, m)]},
    )
    crossings = list(itertools.product(range(1, m + 1), repeat=2))
    for mask in range(2 ** len(crossings)):
        cross = frozenset(c for i, c in enumerate(crossings) if mask >> i & 1)
        gadget_id = "cross:" + ",".join(f"{i}>{j}" for (i, j) in sorted(cross)) if cross else "cross:none"
        verdict = validate_hc_node(NodeGadget(path, cross))
        yield gadget_id, verdict.status, _cex_size(verdict)


def _global_gadget_rows(max_nodes: int, k: int, l: int):
    seen = set()
    for m in range(0, max_nodes + 1):
        nodes = [f"g{i}" for i in range(1, m + 1)]
        pairs = list(itertools.combinations(nodes, 2))
        for mask in range(2 ** len(pairs)):
            edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
            g = Structure(undirected_graph_schema(), nodes, {"E": edges})
            for r in range(0, m + 1):
                for marked in itertools.combinations(nodes, r):
                    key = _canonical_marked(g, {"a": list(marked)})
                    if key in seen:
                        continue
                    seen.add(key)
                    gid = (
                        f"n{m}:" + ",".join("-".join(e) for e in sorted(edges))
                        + ";A=" + ",".join(marked)
                    )
                    verdict = validate_clique_global(
                        GlobalGadget(g, frozenset(marked)), k, l
                    )
                    yield gid, verdict.status, _cex_size(verdict)


def cmd_enumerate_gadgets(args) -> int:
    src, _, dst = args.pair.partition(",")
    p = _load_problem(src.strip())
    p_star = _load_problem(dst.strip())
    if args.family == "edge":
        if not (p.kind == "vertex-cover" and p_star.kind == "feedback-vertex-set" and p.k == p_star.k):
            raise BadParameters("edge family needs a pair <k>-vc,<k>-fvs")
        rows = _edge_gadget_rows(args.max_nodes, p.k)
    elif args.family == "node":
        if not (p.kind == "hamcycle-d" and p_star.kind == "hamcycle-u"):
            raise BadParameters("node family needs the pair hamcycle-d,hamcycle-u")
        if args.max_nodes > 3:
            raise BadParameters("node family characterization covers <= 3 nodes")
        rows = _node_gadget_rows(args.max_nodes)
    elif args.family == "global":
        if not (p.kind == "clique" and p_star.kind == "clique" and p.k < p_star.k):
            raise BadParameters("global family needs a pair <k>-clique,<l>-clique with k < l")
        rows = _global_gadget_rows(args.max_nodes, p.k, p_star.k)
    else:
        raise BadParameters(f"unknown family {args.family!r}")

    if args.format == "json":
        _emit([
            {"gadget": gid, "verdict": status, "counterexample_size": size or None}
            for gid, status, size in rows
        ])
    else:
        for gid, status, size in rows:
            sys.stdout.write(f"{gid}\t{status}\t{size}\n")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    serve(bind=args.bind, ui_dir=args.ui)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redukt",
        description="Check, apply, and translate cookbook reductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_apply = sub.add_parser("apply", help="apply a reduction to a structure")
    p_apply.add_argument("--reduction", required=True, help="reduction or gadget JSON file, - for stdin")
    p_apply.add_argument("--structure", required=True, help="structure JSON file, - for stdin")
    p_apply.set_defaults(fn=cmd_apply)

    p_val = sub.add_parser("validate", help="decide whether a candidate reduces source to target")
    p_val.add_argument("--candidate", required=True, help="reduction, gadget, or interpretation JSON file")
    p_val.add_argument("--source", required=True, help="problem name, e.g. 2-vc or fo:<file>")
    p_val.add_argument("--target", required=True, help="problem name, e.g. 2-fvs or fo:<file>")
    p_val.add_argument("--budget", type=int, default=None, help="refuter size budget")
    p_val.set_defaults(fn=cmd_validate)

    p_tr = sub.add_parser("translate", help="reduction -> quantifier-free interpretation")
    p_tr.add_argument("--reduction", required=True)
    p_tr.add_argument("--stage", choices=["copying", "plain"], default="plain")
    p_tr.add_argument("--check", type=int, default=None, metavar="N",
                      help="re-verify equivalence on all sources with 2..N elements")
    p_tr.set_defaults(fn=cmd_translate)

    p_en = sub.add_parser("enumerate-gadgets", help="classification table for a gadget family")
    p_en.add_argument("--family", choices=["edge", "node", "global"], required=True)
    p_en.add_argument("--max-nodes", type=int, required=True)
    p_en.add_argument("--pair", required=True, help="source,target problem names")
    p_en.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p_en.set_defaults(fn=cmd_enumerate_gadgets)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    import os

    p_srv.add_argument("--bind", default=os.environ.get("REDUKT_BIND", "127.0.0.1:8000"))
    p_srv.add_argument("--ui", default=None, help="static UI directory to serve at /")
    p_srv.set_defaults(fn=cmd_serve)

    parser.add_argument("--seed", type=int, default=0, help="seed for randomized tooling")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _IoError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_IO
    except NotWellFormed as exc:
        sys.stderr.write(json.dumps(exc.report.to_doc(), indent=2) + "\n")
        return EXIT_BAD_INPUT
    except (
        MalformedDocument,
        SchemaMismatch,
        NotInFragment,
        BadParameters,
        LiftFailure,
        ValueError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    except ReduktError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
