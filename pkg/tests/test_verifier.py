import random

import pytest
from hypothesis import given, settings, strategies as st

from limitlog.core import INF, PseudoInterpretation, satisfies
from limitlog.engine import entails, is_pseudo_model
from limitlog.errors import ContractError
from limitlog.frontend import normalize, parse_fact, parse_program, semi_ground
from limitlog.programs import P_C, P_C_PRIME, shortest_path_program
from limitlog.verifier import (counter_model_search, dag_path_counts, diffusion,
                               graph_oracle, naive_fixpoint_oracle,
                               oracle_closure, oracle_entails)
from limitlog.verifier.generate import ProgramShape, random_fact, random_program

TRIANGLE = [("v0", "v1", 3), ("v1", "v2", 4), ("v0", "v2", 10)]


def test_oracle_examples():
    P = parse_program(P_C_PRIME)
    res = naive_fixpoint_oracle(P, value_cap=10)
    assert res.closure == PseudoInterpretation((), {(P.decl("a"), ()): 6, (P.decl("b"), ()): 5,
                                                    (P.decl("c"), ()): 5})
    assert not res.overflowed_keys and not res.inconclusive
    Q = parse_program(P_C)
    over = naive_fixpoint_oracle(Q, value_cap=10)
    assert over.overflowed_keys == {(Q.decl("a"), ()), (Q.decl("b"), ())}
    assert all(v is INF for v in over.closure.limits.values())
    F = parse_program("pred a(max int).\npred e(obj).\na(3).\ne(x).\n")
    facts = naive_fixpoint_oracle(F)
    assert facts.iterations == 1 and len(facts.closure) == 2


def test_oracle_reports_iteration_cap():
    P = parse_program(P_C)
    assert naive_fixpoint_oracle(P, value_cap=1000, iter_cap=5).inconclusive


def test_cap_doubling_separates_large_from_divergent():
    P = parse_program("pred a(max int).\na(0).\na(M + 1) :- a(M), (M < 20).\n")
    v = oracle_closure(P)
    assert not v.divergent and v.closure.limit_value(P.decl("a")) == 20
    assert oracle_closure(parse_program(P_C)).divergent


def test_oracle_entailment_on_shortest_paths():
    P = parse_program(shortest_path_program(TRIANGLE, "v0"))
    assert oracle_entails(P, parse_fact("sp(v2, 7)", P))
    assert not oracle_entails(P, parse_fact("sp(v2, 6)", P))


def test_counter_model_examples():
    P = parse_program("pred a(max int).\na(3).\n")
    J = counter_model_search(P, parse_fact("a(5)", P), 5)
    assert J == PseudoInterpretation((), {(P.decl("a"), ()): 3})
    for bound in (0, 3, 8):
        assert counter_model_search(P, parse_fact("a(2)", P), bound) is None
    S = parse_program(shortest_path_program(TRIANGLE, "v0"))
    alpha = parse_fact("sp(v2, 6)", S)
    K = counter_model_search(S, alpha, 16)
    assert K is not None and not satisfies(K, alpha)
    assert is_pseudo_model(semi_ground(normalize(S), (alpha,)), K)
    assert not entails(S, alpha)
    assert counter_model_search(S, parse_fact("sp(v2, 8)", S), 8) is None
    with pytest.raises(ValueError):
        counter_model_search(P, parse_fact("a(2)", P), -1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_counter_models_agree_with_the_engine(seed):
    rng = random.Random(seed)
    P = random_program(rng, ProgramShape(max_preds=2, max_rules=4, const=2))
    alpha = random_fact(rng, P, const=4)
    J = counter_model_search(P, alpha, 6)
    if J is not None:
        assert not satisfies(J, alpha)
        assert not entails(P, alpha)


def test_graph_oracle_examples():
    assert graph_oracle("shortest_path", {"edges": TRIANGLE, "source": "v0"})["v2"] == 7
    diamond = {"nodes": ["a", "b", "c", "d"], "edges": [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]}
    counts = graph_oracle("dag-path-count", diamond)
    assert counts[("a", "d")] == 2 and counts[("d", "a")] == 0 and counts[("b", "b")] == 1
    star = {"agents": ["s", "a1"], "follows": [("a1", "s")], "thresholds": {"a1": 1}, "source": "s"}
    assert graph_oracle("diffusion", star) == {"s", "a1"}
    with pytest.raises(ContractError):
        dag_path_counts(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(ValueError):
        graph_oracle("nope", {})


def test_zero_weight_edges_survive_the_sparse_graph():
    got = graph_oracle("shortest_path", {"nodes": ["a", "b", "c"], "edges": [("a", "b", 0), ("b", "c", 0)],
                                         "source": "a"})
    assert got == {"a": 0, "b": 0, "c": 0}


def test_bandwidth_caps_follow_the_node_order():
    nodes = ["a", "b", "c", "d"]
    edges = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]
    capped = dag_path_counts(nodes, edges, {"a": 9, "b": 9, "c": 1, "d": 9})
    # a's successors in order are b then c: min(1, bw(b)) = 1, min(2, bw(c)) = 1,
    # and then min(2, bw(d)) = 2 since the running sum carries on
    assert capped[("a", "d")] == 2
    tight = dag_path_counts(nodes, edges, {"a": 0, "b": 0, "c": 0, "d": 0})
    assert tight[("a", "d")] == 0 and tight[("d", "d")] == 1


def test_diffusion_needs_a_followee():
    assert diffusion(["s", "x"], [], {"x": 1}, "s") == {"s"}
