"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import itertools
import time

import pytest

from redukt.cookbook import (
    CookbookReduction,
    EdgeGadget,
    GlobalGadget,
    Instruction,
    NodeGadget,
    apply_reduction,
    classify_gadget,
    from_gadget,
    validate_wellformed,
)
from redukt.errors import LiftFailure, NotACongruence
from redukt.logic import (
    Eq,
    Iff,
    Top,
    complement_interpretation,
    cookbook_to_qf,
    eval_interpretation,
    find_counter_model,
    identity_interpretation,
    inverse_substitute,
    make_interpretation,
    model_check,
    parse_formula,
    qf_to_cookbook,
    small_model_bound,
)
from redukt.logic.translate import ORDER_SYMBOL
from redukt.problems import ProblemDef, decide, verify_witness
from redukt.structures import (
    Structure,
    TaggedElement,
    canonical_form,
    directed_graph_schema,
    enumerate_structures,
    find_isomorphism,
    isomorphic,
    ordered_graph_schema,
    undirected_graph_schema,
)
from redukt.validators import (
    GOLDEN_PATH3_CROSSINGS,
    brute_force_refute,
    decide_exists_star_pair,
    validate_clique_global,
    validate_hc_node,
    validate_vc_fvs_edge,
)

UG = undirected_graph_schema()
DG = directed_graph_schema()
OG = ordered_graph_schema()


def report(number: int, label: str, ok: bool, elapsed: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"criterion {number} [{status}] {label} ({elapsed:.1f}s)")
    assert ok, f"criterion {number} failed: {label}"


def ugraph(nodes, edges):
    return Structure(UG, nodes, {"E": edges})


def dgraph(nodes, edges):
    return Structure(DG, nodes, {"E": edges})


def path_graph(n):
    nodes = [f"p{i}" for i in range(1, n + 1)]
    return ugraph(nodes, [(nodes[i], nodes[i + 1]) for i in range(n - 1)])


FIG_VC_FVS = from_gadget(
    EdgeGadget(ugraph("cdw", [("c", "d"), ("c", "w"), ("d", "w")]), "c", "d")
)
FIG_HC = from_gadget(
    NodeGadget(ugraph([1, 2, 3], [(1, 2), (2, 3)]), frozenset({(3, 1)}))
)
FIG_CLIQUE = from_gadget(GlobalGadget(ugraph(["g"], []), frozenset({"g"})))


def edge_gadget_family(max_nodes: int):
    """All well-formed edge gadgets with at most max_nodes gadget nodes."""
    out = []
    for m in range(2, max_nodes + 1):
        nodes = ["c", "d"] + [f"g{i}" for i in range(1, m - 1)]
        pairs = list(itertools.combinations(nodes, 2))
        seen = set()
        for mask in range(2 ** len(pairs)):
            edges = tuple(p for i, p in enumerate(pairs) if mask >> i & 1)
            if edges in seen:
                continue
            seen.add(edges)
            try:
                spec = EdgeGadget(ugraph(nodes, list(edges)), "c", "d")
                out.append((spec, from_gadget(spec)))
            except LiftFailure:
                continue
    return out


class TestCriterion1:
    def test_figure_fixture_application(self):
        t0 = time.monotonic()
        triangle_out = apply_reduction(FIG_VC_FVS, ugraph("ab", [("a", "b")]))
        ok = isomorphic(triangle_out, ugraph("xyz", [("x", "y"), ("y", "z"), ("x", "z")]))

        path_out = apply_reduction(FIG_HC, dgraph(["v"], []))
        ok = ok and isomorphic(path_out, path_graph(3))

        node_out = apply_reduction(FIG_CLIQUE, ugraph([], []))
        ok = ok and len(node_out.universe) == 1 and not node_out.relations["E"]

        elapsed = time.monotonic() - t0
        report(1, "figure fixtures reproduce the pictures", ok and elapsed < 1.0, elapsed)


class TestCriterion2:
    def test_translation_equivalence(self):
        t0 = time.monotonic()
        grid = [(FIG_CLIQUE, UG), (FIG_HC, DG)]
        grid += [(rho, UG) for _, rho in edge_gadget_family(3)]
        assert any(rho == FIG_VC_FVS for rho, _ in grid)

        mismatches = 0
        for rho, schema in grid:
            for stage in ("plain", "copying"):
                psi = cookbook_to_qf(rho, stage=stage)
                for n in (2, 3, 4):
                    for s in enumerate_structures(schema, n, canonical_only=True):
                        if not isomorphic(
                            eval_interpretation(psi, s), apply_reduction(rho, s)
                        ):
                            mismatches += 1
        elapsed = time.monotonic() - t0
        report(
            2,
            "reduction-to-interpretation equivalence on sources with 2..4 elements",
            mismatches == 0 and elapsed < 120.0,
            elapsed,
        )


def ordered_graph(n, edges):
    nodes = list(range(1, n + 1))
    return Structure(
        OG,
        nodes,
        {"E": edges, ORDER_SYMBOL: [(i, j) for i in nodes for j in nodes if i <= j]},
    )


def all_ordered_graphs(n):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(2 ** len(pairs)):
        yield ordered_graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def interpretation_corpus():
    """Set-respecting quantifier-free interpretations over ordered graphs."""
    def d1(phi_e, target=UG):
        return make_interpretation(
            OG, target, 1, Top(), Eq("x1", "y1"), {"E": parse_formula(phi_e)}
        )

    same_pair = parse_formula(
        "(or (and (= x1 y1) (= x2 y2)) (and (= x1 y2) (= x2 y1)))"
    )
    componentwise = parse_formula("(and (= x1 y1) (= x2 y2))")
    return [
        ("identity", d1("(E a1_1 a2_1)")),
        ("complement", d1("(and (not (E a1_1 a2_1)) (not (= a1_1 a2_1)))")),
        ("complete", d1("(not (= a1_1 a2_1))")),
        ("edgeless", d1("false")),
        ("order-digraph", d1("(and (leq a1_1 a2_1) (not (= a1_1 a2_1)))", directed_graph_schema())),
        ("reverse-order", d1("(and (leq a2_1 a1_1) (not (= a1_1 a2_1)))", directed_graph_schema())),
        ("edge-closure-of-order", d1(
            "(or (E a1_1 a2_1) (and (leq a1_1 a2_1) (not (= a1_1 a2_1))))",
            directed_graph_schema(),
        )),
        ("diagonal", make_interpretation(
            OG, UG, 2, parse_formula("(= x1 x2)"), componentwise,
            {"E": parse_formula("(E a1_1 a2_1)")},
        )),
        ("unordered-pairs", make_interpretation(
            OG, UG, 2, parse_formula("(not (= x1 x2))"), same_pair,
            {"E": parse_formula(
                "(or (E a1_1 a2_1) (E a1_1 a2_2) (E a1_2 a2_1) (E a1_2 a2_2))"
            )},
        )),
        ("increasing-pairs", make_interpretation(
            OG, directed_graph_schema(), 2,
            parse_formula("(and (leq x1 x2) (not (= x1 x2)))"), componentwise,
            {"E": parse_formula("(= a1_2 a2_1)")},
        )),
        ("vertices-with-edge-loops", make_interpretation(
            OG, UG, 1, Top(), Eq("x1", "y1"),
            {"E": parse_formula("(or (E a1_1 a2_1) (= a1_1 a2_1))")},
        )),
    ]


class TestCriterion3:
    def test_interpretation_to_cookbook_equivalence(self):
        t0 = time.monotonic()
        corpus = interpretation_corpus()
        assert len(corpus) >= 10
        mismatches = 0
        for name, psi in corpus:
            rho = qf_to_cookbook(psi)
            for n in range(0, 5):
                for g in all_ordered_graphs(n):
                    if not isomorphic(apply_reduction(rho, g), eval_interpretation(psi, g)):
                        mismatches += 1
        elapsed = time.monotonic() - t0
        report(
            3,
            f"interpretation-to-cookbook equivalence for {len(corpus)} interpretations",
            mismatches == 0,
            elapsed,
        )


def global_gadget_family(max_nodes: int):
    out = []
    for m in range(0, max_nodes + 1):
        nodes = [f"g{i}" for i in range(1, m + 1)]
        pairs = list(itertools.combinations(nodes, 2))
        for mask in range(2 ** len(pairs)):
            edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
            g = ugraph(nodes, edges)
            for r in range(0, m + 1):
                for marked in itertools.combinations(nodes, r):
                    out.append(GlobalGadget(g, frozenset(marked)))
    return out


class TestCriterion4:
    def test_clique_characterization_cross_validation(self):
        t0 = time.monotonic()
        p, p_star = ProblemDef("clique", 3), ProblemDef("clique", 4)
        contradictions = 0
        total = 0
        for spec in global_gadget_family(3):
            total += 1
            verdict = validate_clique_global(spec, 3, 4)
            refuted = brute_force_refute(from_gadget(spec), p, p_star, 4)
            if verdict.status == "valid" and refuted.status != "unknown":
                contradictions += 1
            if verdict.status == "invalid" and refuted.status != "invalid":
                contradictions += 1
        elapsed = time.monotonic() - t0
        report(
            4,
            f"clique characterization agrees with refutation on {total} gadgets",
            contradictions == 0,
            elapsed,
        )


class TestCriterion5:
    def test_vc_fvs_characterization_cross_validation(self):
        t0 = time.monotonic()
        contradictions = 0
        total = 0
        bare_edge_sizes = {}
        for k in (1, 2):
            p = ProblemDef("vertex-cover", k)
            p_star = ProblemDef("feedback-vertex-set", k)
            bound = 3 * k + 1
            for spec, rho in edge_gadget_family(4):
                total += 1
                verdict = validate_vc_fvs_edge(spec, k)
                refuted = brute_force_refute(rho, p, p_star, bound)
                if verdict.status == "valid" and refuted.status != "unknown":
                    contradictions += 1
                if verdict.status == "invalid" and refuted.status != "invalid":
                    contradictions += 1
                if len(spec.graph.universe) == 2 and spec.graph.relations["E"]:
                    bare_edge_sizes[k] = len(verdict.counterexample.universe)
        ok = (
            contradictions == 0
            and bare_edge_sizes[1] == 4
            and bare_edge_sizes[2] == 7
        )
        elapsed = time.monotonic() - t0
        report(
            5,
            f"vertex-cover characterization agrees with refutation ({total} gadget checks)",
            ok,
            elapsed,
        )


class TestCriterion6:
    def test_node_gadget_golden_set(self):
        t0 = time.monotonic()
        path3 = ugraph([1, 2, 3], [(1, 2), (2, 3)])
        crossings = list(itertools.product(range(1, 4), repeat=2))
        valid_set = set()
        refuted_small = 0
        invalid_count = 0
        for mask in range(2 ** 9):
            cross = frozenset(c for i, c in enumerate(crossings) if mask >> i & 1)
            verdict = validate_hc_node(NodeGadget(path3, cross))
            if verdict.status == "valid":
                valid_set.add(cross)
            else:
                invalid_count += 1
                if len(verdict.counterexample.universe) <= 4:
                    refuted_small += 1
        ok = valid_set == set(GOLDEN_PATH3_CROSSINGS) and refuted_small == invalid_count
        elapsed = time.monotonic() - t0
        report(
            6,
            "exactly the six golden node gadgets are valid; all others refuted by <= 4 nodes",
            ok,
            elapsed,
        )


def formula_corpus():
    texts = [
        "(exists x (exists y (E x y)))",
        "(exists x (E x x))",
        "(exists x (= x x))",
        "(exists x (exists y (not (= x y))))",
        "(exists x (exists y (and (not (E x y)) (not (= x y)))))",
        "(exists x (exists y (exists z (and (E x y) (E y z) (E x z)))))",
        "false",
        "true",
    ]
    return [parse_formula(t) for t in texts]


def pair_decider_corpus():
    """Triples (phi, phi_star, psi) with small counter-model bounds."""
    formulas = formula_corpus()
    psis = [
        identity_interpretation(UG),
        complement_interpretation(UG),
        make_interpretation(UG, UG, 1, Top(), Eq("x1", "y1"), {"E": parse_formula("false")}),
        make_interpretation(UG, UG, 1, Top(), Eq("x1", "y1"), {"E": parse_formula("(not (= a1_1 a2_1))")}),
        make_interpretation(UG, UG, 1, Top(), Eq("x1", "y1"), {"E": parse_formula("(or (E a1_1 a2_1) (= a1_1 a2_1))")}),
        make_interpretation(
            UG, UG, 2, parse_formula("(= x1 x2)"),
            parse_formula("(and (= x1 y1) (= x2 y2))"),
            {"E": parse_formula("(E a1_1 a2_1)")},
        ),
    ]
    triples = []
    for psi in psis:
        dim = psi.dimension
        for phi in formulas:
            for phi_star in formulas:
                e_left = _exists_count(phi)
                e_right = dim * _exists_count(phi_star)
                if max(e_left, e_right) > 4:
                    continue
                triples.append((phi, phi_star, psi))
    return triples


def _exists_count(phi):
    from redukt.logic import Exists

    n = 0
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Exists):
            n += 1
        for attr in ("sub", "body", "left", "right"):
            if hasattr(f, attr):
                stack.append(getattr(f, attr))
        if hasattr(f, "parts"):
            stack.extend(f.parts)
    return n


class TestCriterion7:
    def test_exists_star_decider_vs_exhaustive(self):
        t0 = time.monotonic()
        triples = pair_decider_corpus()
        assert len(triples) >= 50
        disagreements = 0
        for phi, phi_star, psi in triples:
            verdict = decide_exists_star_pair(phi, phi_star, psi)
            bic = Iff(phi, inverse_substitute(psi, phi_star))
            bound = small_model_bound(bic)
            broken = None
            for n in range(0, bound + 2):
                for s in enumerate_structures(UG, n, canonical_only=True, allow_loops=True):
                    if model_check(phi, s) != model_check(
                        phi_star, eval_interpretation(psi, s)
                    ):
                        broken = s
                        break
                if broken is not None:
                    break
            if (verdict.status == "valid") != (broken is None):
                disagreements += 1
        elapsed = time.monotonic() - t0
        report(
            7,
            f"existential pair decider agrees with exhaustive checking on {len(triples)} triples",
            disagreements == 0 and elapsed < 300.0,
            elapsed,
        )


class TestCriterion8:
    def test_nine_node_fixture_not_hamiltonian(self):
        t0 = time.monotonic()
        cross = frozenset(
            itertools.product(range(1, 4), repeat=2)
        ) - {(1, 3), (3, 1), (3, 3)}
        gadget = NodeGadget(ugraph([1, 2, 3], [(1, 2), (2, 3)]), frozenset(cross))
        rho = from_gadget(gadget)
        triangle = dgraph("uvw", [("u", "v"), ("v", "w"), ("w", "u")])
        image = apply_reduction(rho, triangle)
        ok = len(image.universe) == 9
        # the source is a positive instance, the image must not be one
        ok = ok and decide(ProblemDef("hamcycle-d"), triangle).member
        ok = ok and not decide(ProblemDef("hamcycle-u"), image).member
        # spot-check the published adjacency: out-nodes see exactly the three
        # middle nodes, middle nodes see everything else
        adj = {}
        for (a, b) in image.relations["E"]:
            adj.setdefault(a, set()).add(b)
        for v in "uvw":
            out_node = TaggedElement(frozenset({v}), 3)
            mid = {TaggedElement(frozenset({w}), 2) for w in "uvw"}
            ok = ok and adj[out_node] == mid
            mid_node = TaggedElement(frozenset({v}), 2)
            ok = ok and adj[mid_node] == set(image.universe) - {mid_node}
        elapsed = time.monotonic() - t0
        report(8, "the nine-node fixture has no Hamiltonian cycle", ok, elapsed)


class TestCriterion9:
    def test_property_suites(self):
        t0 = time.monotonic()
        import random

        rng = random.Random(0)
        ok = True

        # canonical form against isomorphism search, sizes <= 5
        structs = list(enumerate_structures(UG, 4, canonical_only=False))
        sample = rng.sample(structs, 60)
        for s1 in sample[:30]:
            for s2 in sample[30:40]:
                same_canon = canonical_form(s1) == canonical_form(s2)
                ok = ok and same_canon == (find_isomorphism(s1, s2) is not None)

        # application independence of the isomorphism choice: reversing the
        # source universe flips every per-occurrence least isomorphism
        for rho in (FIG_VC_FVS, FIG_CLIQUE):
            for s in enumerate_structures(UG, 3, canonical_only=True):
                rev = Structure(s.schema, tuple(reversed(s.universe)), s.relations)
                ok = ok and isomorphic(apply_reduction(rho, s), apply_reduction(rho, rev))

        # inverse substitution soundness on sampled structures
        psis = [identity_interpretation(UG), complement_interpretation(UG)]
        phis = formula_corpus()
        structs4 = list(enumerate_structures(UG, 4, canonical_only=True, allow_loops=True))
        for psi in psis:
            for phi_star in phis:
                pulled = inverse_substitute(psi, phi_star)
                for s in rng.sample(structs4, 20):
                    ok = ok and model_check(pulled, s) == model_check(
                        phi_star, eval_interpretation(psi, s)
                    )

        # every invalid verdict re-verifies: membership differs and witnesses
        # check out on both sides
        gallery = [
            (validate_vc_fvs_edge(EdgeGadget(ugraph("cd", [("c", "d")]), "c", "d"), 1),
             ProblemDef("vertex-cover", 1), ProblemDef("feedback-vertex-set", 1),
             from_gadget(EdgeGadget(ugraph("cd", [("c", "d")]), "c", "d"))),
            (validate_clique_global(GlobalGadget(ugraph([], []), frozenset()), 3, 4),
             ProblemDef("clique", 3), ProblemDef("clique", 4),
             from_gadget(GlobalGadget(ugraph([], []), frozenset()))),
            (validate_hc_node(NodeGadget(ugraph([1, 2, 3], [(1, 2), (2, 3)]), frozenset({(1, 1), (3, 3)}))),
             ProblemDef("hamcycle-d"), ProblemDef("hamcycle-u"),
             from_gadget(NodeGadget(ugraph([1, 2, 3], [(1, 2), (2, 3)]), frozenset({(1, 1), (3, 3)})))),
        ]
        for verdict, p, p_star, rho in gallery:
            ok = ok and verdict.status == "invalid"
            cex = verdict.counterexample
            image = apply_reduction(rho, cex)
            left, right = decide(p, cex), decide(p_star, image)
            ok = ok and left.member != right.member
            ok = ok and verdict.source.member == left.member
            ok = ok and verdict.target.member == right.member
            for side, struct, prob in ((verdict.source, cex, p), (verdict.target, image, p_star)):
                if side.witness is not None:
                    ok = ok and verify_witness(prob, struct, side.witness)

        elapsed = time.monotonic() - t0
        report(9, "property suites under fixed seed", ok, elapsed)
