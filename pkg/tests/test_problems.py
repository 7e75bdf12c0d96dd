import itertools

import pytest

from redukt.errors import SchemaMismatch
from redukt.problems import (
    Decision,
    ProblemDef,
    Witness,
    decide,
    parse_problem_name,
    verify_witness,
)
from redukt.structures import enumerate_structures

from helpers import UG, clique, dcycle, dgraph, empty_graph, path, ugraph


class TestClique:
    def test_k3_on_triangle(self):
        d = decide(ProblemDef("clique", 3), clique(3))
        assert d.member and set(d.witness.nodes) == {"k1", "k2", "k3"}

    def test_exact_size_required_by_witness(self):
        assert not verify_witness(ProblemDef("clique", 3), clique(3), Witness("clique", ("k1", "k2")))

    def test_brute_force_agreement(self):
        # oracle: check all k-subsets directly
        for g in enumerate_structures(UG, 4, canonical_only=True):
            for k in range(5):
                expect = any(
                    all((u, v) in g.relations["E"] for u, v in itertools.combinations(sub, 2))
                    for sub in itertools.combinations(g.universe, k)
                )
                assert decide(ProblemDef("clique", k), g).member == expect


class TestVertexCover:
    def test_p4_needs_two(self):
        # brute force over all 1-subsets of the 4 nodes: none covers both outer edges
        assert not decide(ProblemDef("vertex-cover", 1), path(4)).member
        d = decide(ProblemDef("vertex-cover", 2), path(4))
        assert d.member and verify_witness(ProblemDef("vertex-cover", 2), path(4), d.witness)

    def test_witness_bc_on_p4(self):
        assert verify_witness(ProblemDef("vertex-cover", 2), path(4), Witness("vertex-cover", ("p2", "p3")))

    def test_at_most_semantics(self):
        assert decide(ProblemDef("vertex-cover", 3), path(4)).member


class TestFeedbackVertexSet:
    def test_empty_set_on_acyclic(self):
        p = ProblemDef("feedback-vertex-set", 0)
        assert decide(p, path(5)).member
        assert verify_witness(p, path(5), Witness("feedback-vertex-set", ()))

    def test_needs_cycle_breaker(self):
        p = ProblemDef("feedback-vertex-set", 0)
        assert not decide(p, clique(3)).member
        assert decide(ProblemDef("feedback-vertex-set", 1), clique(3)).member

    def test_subset_oracle_small(self):
        # oracle: acyclicity over all subsets, for n <= 5 graphs
        def acyclic(g, removed):
            nodes = [v for v in g.universe if v not in removed]
            edges = {
                tuple(sorted(e, key=g.position))
                for e in g.relations["E"]
                if e[0] not in removed and e[1] not in removed and e[0] != e[1]
            }
            # forest iff m <= n - components; count components by DFS
            seen, comps = set(), 0
            adj = {v: [] for v in nodes}
            for u, v in edges:
                adj[u].append(v)
                adj[v].append(u)
            for v in nodes:
                if v in seen:
                    continue
                comps += 1
                stack = [v]
                while stack:
                    x = stack.pop()
                    if x in seen:
                        continue
                    seen.add(x)
                    stack.extend(adj[x])
            return len(edges) == len(nodes) - comps

        for g in enumerate_structures(UG, 5, canonical_only=True):
            for k in range(3):
                expect = any(
                    acyclic(g, set(sub))
                    for size in range(k + 1)
                    for sub in itertools.combinations(g.universe, size)
                )
                got = decide(ProblemDef("feedback-vertex-set", k), g)
                assert got.member == expect
                if got.member:
                    assert verify_witness(ProblemDef("feedback-vertex-set", k), g, got.witness)


class TestHamCycle:
    def test_triangle(self):
        d = decide(ProblemDef("hamcycle-u"), clique(3))
        assert d.member and verify_witness(ProblemDef("hamcycle-u"), clique(3), d.witness)

    def test_two_nodes_no_cycle(self):
        assert not decide(ProblemDef("hamcycle-u"), clique(2)).member

    def test_one_node_digraph_negative(self):
        assert not decide(ProblemDef("hamcycle-d"), dgraph(["v"], [])).member

    def test_directed_two_cycle(self):
        assert decide(ProblemDef("hamcycle-d"), dcycle(2)).member

    def test_directed_triangle(self):
        d = decide(ProblemDef("hamcycle-d"), dcycle(3))
        assert d.member and verify_witness(ProblemDef("hamcycle-d"), dcycle(3), d.witness)

    def test_one_way_triangle_reversed_is_negative(self):
        g = dgraph("abc", [("a", "b"), ("b", "c")])
        assert not decide(ProblemDef("hamcycle-d"), g).member


class TestDuality:
    def test_clique_equals_is_on_complement(self):
        for g in enumerate_structures(UG, 5, canonical_only=True):
            comp = g.replace(
                relations={
                    "E": [
                        (u, v)
                        for u in g.universe
                        for v in g.universe
                        if u != v and (u, v) not in g.relations["E"]
                    ]
                }
            )
            for k in range(4):
                assert (
                    decide(ProblemDef("clique", k), g).member
                    == decide(ProblemDef("independent-set", k), comp).member
                )


class TestPlumbing:
    def test_schema_mismatch(self):
        with pytest.raises(SchemaMismatch):
            decide(ProblemDef("hamcycle-d"), clique(3))

    def test_every_positive_has_verifying_witness(self):
        kinds = [
            ProblemDef("clique", 2),
            ProblemDef("independent-set", 2),
            ProblemDef("vertex-cover", 1),
            ProblemDef("feedback-vertex-set", 1),
            ProblemDef("hamcycle-u"),
        ]
        for g in enumerate_structures(UG, 4, canonical_only=True):
            for p in kinds:
                d = decide(p, g)
                if d.member:
                    assert verify_witness(p, g, d.witness)

    def test_parse_names(self):
        assert parse_problem_name("3-clique") == ProblemDef("clique", 3)
        assert parse_problem_name("2-vc") == ProblemDef("vertex-cover", 2)
        assert parse_problem_name("1-fvs") == ProblemDef("feedback-vertex-set", 1)
        assert parse_problem_name("4-is") == ProblemDef("independent-set", 4)
        assert parse_problem_name("hamcycle-u") == ProblemDef("hamcycle-u")
        with pytest.raises(ValueError):
            parse_problem_name("sat")

    def test_empty_problem(self):
        assert decide(ProblemDef("empty"), clique(3)) == Decision(False)


class TestFoOracle:
    def test_clique_agrees_with_existential_sentence(self):
        # cross-module oracle: the canonical existential sentence for k-clique
        from redukt.logic import model_check, parse_formula

        sentences = {
            1: "(exists x1 (= x1 x1))",
            2: "(exists x1 (exists x2 (and (not (= x1 x2)) (E x1 x2))))",
            3: (
                "(exists x1 (exists x2 (exists x3 (and"
                " (not (= x1 x2)) (not (= x1 x3)) (not (= x2 x3))"
                " (E x1 x2) (E x1 x3) (E x2 x3)))))"
            ),
        }
        for n in range(6):
            for g in enumerate_structures(UG, n, canonical_only=True):
                for k, text in sentences.items():
                    want = model_check(parse_formula(text), g)
                    assert decide(ProblemDef("clique", k), g).member == want

    def test_independent_set_agrees_with_existential_sentence(self):
        from redukt.logic import model_check, parse_formula

        phi = parse_formula(
            "(exists x1 (exists x2 (and (not (= x1 x2)) (not (E x1 x2)))))"
        )
        for n in range(6):
            for g in enumerate_structures(UG, n, canonical_only=True):
                assert decide(ProblemDef("independent-set", 2), g).member == model_check(phi, g)
