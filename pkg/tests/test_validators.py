import pytest

from redukt.cookbook import EdgeGadget, GlobalGadget, NodeGadget, from_gadget
from redukt.errors import BadParameters, NodeGraphTooLarge, NotInFragment
from redukt.logic import (
    complement_interpretation,
    identity_interpretation,
    parse_formula,
)
from redukt.problems import ProblemDef, decide, verify_witness
from redukt.structures import isomorphic
from redukt.validators import (
    GOLDEN_PATH3_CROSSINGS,
    Verdict,
    brute_force_refute,
    decide_exists_star_pair,
    validate,
    validate_clique_global,
    validate_hc_node,
    validate_vc_fvs_edge,
)

from helpers import UG, clique, empty_graph, path, ugraph
from test_cookbook import (
    FIG_CLIQUE,
    FIG_HC,
    FIG_VC_FVS,
    clique_gadget,
    standard_hc_gadget,
    triangle_gadget,
)


def check_invalid_verdict(v: Verdict, p: ProblemDef, p_star: ProblemDef, rho):
    from redukt.cookbook import apply_reduction

    assert v.status == "invalid"
    assert v.source.member != v.target.member
    image = apply_reduction(rho, v.counterexample)
    assert decide(p, v.counterexample).member == v.source.member
    assert decide(p_star, image).member == v.target.member
    for side, struct, prob in ((v.source, v.counterexample, p), (v.target, image, p_star)):
        if side.witness is not None:
            assert verify_witness(prob, struct, side.witness)


class TestCliqueGlobal:
    def test_single_marked_node_valid(self):
        assert validate_clique_global(clique_gadget(), 3, 4).valid

    def test_k2_both_marked_fails_c(self):
        spec = GlobalGadget(clique(2, prefix="g"), frozenset({"g1", "g2"}))
        v = validate_clique_global(spec, 3, 4)
        assert v.status == "invalid"
        assert len(v.counterexample.universe) == 2  # the (k-1)-clique
        check_invalid_verdict(v, ProblemDef("clique", 3), ProblemDef("clique", 4), from_gadget(spec))

    def test_empty_marked_fails_b(self):
        spec = GlobalGadget(empty_graph(0, prefix="g"), frozenset())
        v = validate_clique_global(spec, 3, 4)
        assert v.status == "invalid"
        assert len(v.counterexample.universe) == 3  # the k-clique
        check_invalid_verdict(v, ProblemDef("clique", 3), ProblemDef("clique", 4), from_gadget(spec))

    def test_big_gadget_fails_a(self):
        spec = GlobalGadget(clique(4, prefix="g"), frozenset({"g1"}))
        v = validate_clique_global(spec, 3, 4)
        assert v.status == "invalid"
        assert len(v.counterexample.universe) == 0  # the empty graph
        check_invalid_verdict(v, ProblemDef("clique", 3), ProblemDef("clique", 4), from_gadget(spec))

    def test_parameter_guard(self):
        with pytest.raises(BadParameters):
            validate_clique_global(clique_gadget(), 4, 4)


class TestVcFvsEdge:
    def test_triangle_valid(self):
        assert validate_vc_fvs_edge(triangle_gadget(), 1).valid
        assert validate_vc_fvs_edge(triangle_gadget(), 2).valid

    def test_bare_edge_fails_cycle_condition(self):
        spec = EdgeGadget(ugraph("cd", [("c", "d")]), "c", "d")
        v = validate_vc_fvs_edge(spec, 1)
        assert v.status == "invalid"
        assert len(v.counterexample.universe) == 4  # path with 3k+1 nodes
        check_invalid_verdict(
            v, ProblemDef("vertex-cover", 1), ProblemDef("feedback-vertex-set", 1),
            from_gadget(spec),
        )

    def test_detached_triangle_fails_endpoint_condition(self):
        spec = EdgeGadget(
            ugraph("cdxyz", [("c", "d"), ("x", "y"), ("y", "z"), ("x", "z")]),
            "c",
            "d",
        )
        v = validate_vc_fvs_edge(spec, 1)
        assert v.status == "invalid"
        assert len(v.counterexample.universe) == 3  # path with 2k+1 nodes
        check_invalid_verdict(
            v, ProblemDef("vertex-cover", 1), ProblemDef("feedback-vertex-set", 1),
            from_gadget(spec),
        )


class TestHcNode:
    def test_standard_gadget_valid(self):
        assert validate_hc_node(standard_hc_gadget()).valid

    def test_all_six_golden_valid(self):
        for cross in GOLDEN_PATH3_CROSSINGS:
            assert validate_hc_node(NodeGadget(path(3), cross)).valid

    def test_opposite_corners_invalid(self):
        v = validate_hc_node(NodeGadget(path(3), frozenset({(1, 1), (3, 3)})))
        assert v.status == "invalid"
        assert len(v.counterexample.universe) <= 4

    def test_triangle_node_graph_invalid_on_single_node(self):
        spec = NodeGadget(clique(3), frozenset())
        v = validate_hc_node(spec)
        assert v.status == "invalid"
        assert len(v.counterexample.universe) == 1
        check_invalid_verdict(
            v, ProblemDef("hamcycle-d"), ProblemDef("hamcycle-u"), from_gadget(spec)
        )

    def test_too_large(self):
        with pytest.raises(NodeGraphTooLarge):
            validate_hc_node(NodeGadget(path(4), frozenset({(4, 1)})))


class TestExistsStarPair:
    def test_identity_valid(self):
        phi = parse_formula("(exists x (exists y (E x y)))")
        v = decide_exists_star_pair(phi, phi, identity_interpretation(UG))
        assert v.valid

    def test_complement_invalid(self):
        phi = parse_formula("(exists x (exists y (E x y)))")
        v = decide_exists_star_pair(phi, phi, complement_interpretation(UG))
        assert v.status == "invalid"
        assert v.source.member != v.target.member

    def test_nonempty_universe_valid(self):
        phi = parse_formula("(exists x (= x x))")
        v = decide_exists_star_pair(phi, phi, identity_interpretation(UG))
        assert v.valid

    def test_fragment_guard(self):
        phi = parse_formula("(forall x (exists y (E x y)))")
        with pytest.raises(NotInFragment):
            decide_exists_star_pair(phi, phi, identity_interpretation(UG))


class TestBruteForce:
    def test_identity_hamcycle_unknown(self):
        identity = from_gadget(EdgeGadget(ugraph("cd", [("c", "d")]), "c", "d"))
        v = brute_force_refute(identity, ProblemDef("hamcycle-u"), ProblemDef("hamcycle-u"), 4)
        assert v.status == "unknown" and v.bound == 4

    def test_bare_edge_vc_fvs_minimal_counterexample(self):
        # the identity mapping confuses 1-vertex-cover with 1-feedback-vertex-
        # set first on the triangle: covers need 2 nodes there, one removal
        # already kills the cycle
        identity = from_gadget(EdgeGadget(ugraph("cd", [("c", "d")]), "c", "d"))
        p, p_star = ProblemDef("vertex-cover", 1), ProblemDef("feedback-vertex-set", 1)
        v = brute_force_refute(identity, p, p_star, 4)
        assert v.status == "invalid"
        assert isomorphic(v.counterexample, clique(3))
        check_invalid_verdict(v, p, p_star, identity)

    def test_empty_global_clique_candidate(self):
        rho = from_gadget(GlobalGadget(empty_graph(0), frozenset()))
        p, p_star = ProblemDef("clique", 3), ProblemDef("clique", 4)
        v = brute_force_refute(rho, p, p_star, 3)
        assert v.status == "invalid"
        assert isomorphic(v.counterexample, clique(3))

    def test_never_valid(self):
        identity = from_gadget(EdgeGadget(ugraph("cd", [("c", "d")]), "c", "d"))
        v = brute_force_refute(identity, ProblemDef("clique", 2), ProblemDef("clique", 2), 3)
        assert v.status == "unknown"


class TestDispatch:
    def test_vc_fvs_routed_to_characterization(self):
        v = validate(FIG_VC_FVS, ProblemDef("vertex-cover", 2), ProblemDef("feedback-vertex-set", 2))
        assert v.valid and v.decider == "vc-fvs-edge-characterization"

    def test_hc_routed_to_characterization(self):
        v = validate(FIG_HC, ProblemDef("hamcycle-d"), ProblemDef("hamcycle-u"))
        assert v.valid and v.decider == "hamcycle-node-characterization"

    def test_clique_routed_to_characterization(self):
        v = validate(FIG_CLIQUE, ProblemDef("clique", 3), ProblemDef("clique", 4))
        assert v.valid and v.decider == "clique-global-characterization"

    def test_non_gadget_routed_to_brute_force(self):
        v = validate(FIG_VC_FVS, ProblemDef("clique", 2), ProblemDef("clique", 2), budget=3)
        assert v.decider == "brute-force-refuter"

    def test_fo_pair_with_interpretation(self):
        phi = parse_formula("(exists x (exists y (E x y)))")
        p = ProblemDef("fo", sentence=phi, fo_schema=UG)
        v = validate(identity_interpretation(UG), p, p, None)
        assert v.valid and v.decider == "exists-star-tautology"

    def test_fo_pair_with_cookbook_candidate(self):
        # formula-defined problems range over all structures, so the edge
        # gadget is refuted by a self-loop (its node carries no instruction)
        phi = parse_formula("(exists x (exists y (E x y)))")
        p = ProblemDef("fo", sentence=phi, fo_schema=UG)
        v = validate(FIG_VC_FVS, p, p, None)
        assert v.decider == "exists-star-tautology(translated)"
        assert v.status == "invalid"
        assert v.source.member != v.target.member
        loops = [t for t in v.counterexample.relations["E"] if t[0] == t[1]]
        assert loops

    def test_fo_pair_with_cookbook_candidate_valid_case(self):
        # node-copying candidate: "some node exists" reduces to itself
        from redukt.cookbook import CookbookReduction, Instruction
        from redukt.structures import Structure, TaggedElement

        vertex = Instruction(
            Structure(UG, (1,), {}),
            Structure(UG, [TaggedElement(frozenset({1}), 1)], {}),
        )
        loop_type = Structure(UG, (1,), {"E": [(1, 1)]})
        loop_vertex = Instruction(
            loop_type,
            Structure(UG, [TaggedElement(frozenset({1}), 1)], {}),
        )
        rho = CookbookReduction(UG, UG, (vertex, loop_vertex))
        phi = parse_formula("(exists x (= x x))")
        p = ProblemDef("fo", sentence=phi, fo_schema=UG)
        v = validate(rho, p, p, None)
        assert v.decider == "exists-star-tautology(translated)"
        assert v.valid

    def test_gadget_spec_accepted_directly(self):
        v = validate(triangle_gadget(), ProblemDef("vertex-cover", 1), ProblemDef("feedback-vertex-set", 1))
        assert v.valid


class TestSubGadgetMonotonicity:
    def test_removing_cross_edges_preserves_nonhamiltonicity(self):
        # spot check: if the super gadget's image lacks a Hamiltonian cycle,
        # so does every sub gadget's image
        import itertools

        from redukt.cookbook import apply_reduction
        from redukt.structures import enumerate_structures, directed_graph_schema

        p_star = ProblemDef("hamcycle-u")
        supers = [
            frozenset({(1, 1), (3, 1)}),
            frozenset({(1, 1), (3, 3)}),
            frozenset({(3, 1), (3, 2)}),
            frozenset({(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)}),
        ]
        sources = [
            s
            for n in range(1, 4)
            for s in enumerate_structures(directed_graph_schema(), n, canonical_only=True)
        ]
        for sup in supers:
            rho_sup = from_gadget(NodeGadget(path(3), sup))
            for sub in (frozenset(c) for r in range(len(sup)) for c in itertools.combinations(sup, r)):
                rho_sub = from_gadget(NodeGadget(path(3), sub))
                for g in sources:
                    if not decide(p_star, apply_reduction(rho_sup, g)).member:
                        assert not decide(p_star, apply_reduction(rho_sub, g)).member
