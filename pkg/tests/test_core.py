import pytest
from hypothesis import given, strategies as st

from limitlog.core import (INF, Fact, Kind, PredicateDecl, PseudoInterpretation,
                           join_fact, preceq, satisfies)

P_MAX = PredicateDecl.make("p", 0, Kind.MAX)
P_MIN = PredicateDecl.make("q", 1, Kind.MIN)
E = PredicateDecl.make("e", 1, Kind.OBJECT)

values = st.one_of(st.integers(-50, 50), st.just(INF))


def test_inf_arithmetic():
    assert INF + 3 == INF and 3 + INF is INF and INF - 7 is INF
    assert 10**40 < INF and not (INF < 5) and INF >= INF
    with pytest.raises(ArithmeticError):
        -INF
    with pytest.raises(ArithmeticError):
        3 - INF
    assert str(INF) == "inf"


def test_interpretation_is_value_based():
    J = PseudoInterpretation([Fact(E, ("a",))], {(P_MAX, ()): 3})
    K = PseudoInterpretation([Fact(E, ("a",))], {(P_MAX, ()): 3})
    assert J == K and hash(J) == hash(K) and len(J) == 2
    assert Fact(P_MAX, (), 3) in J and Fact(P_MAX, (), 2) not in J
    with pytest.raises(ValueError):
        PseudoInterpretation([Fact(P_MAX, (), 1)])


def test_satisfies_follows_limit_direction():
    J = PseudoInterpretation((), {(P_MAX, ()): 5, (P_MIN, ("a",)): 2})
    assert satisfies(J, Fact(P_MAX, (), 4))
    assert not satisfies(J, Fact(P_MAX, (), 6))
    assert satisfies(J, Fact(P_MIN, ("a",), 9))
    assert not satisfies(J, Fact(P_MIN, ("a",), 1))
    assert not satisfies(J, Fact(P_MIN, ("b",), 9))
    top = J.with_limit((P_MAX, ()), INF)
    assert satisfies(top, Fact(P_MAX, (), 10**9))


def test_from_facts_keeps_the_strongest_value():
    J = PseudoInterpretation.from_facts([Fact(P_MAX, (), 1), Fact(P_MAX, (), 4), Fact(P_MIN, ("a",), 3),
                                         Fact(P_MIN, ("a",), -2)])
    assert J.limit_value(P_MAX) == 4 and J.limit_value(P_MIN, ("a",)) == -2


@given(values, values)
def test_preceq_matches_satisfaction(v, w):
    J = PseudoInterpretation((), {(P_MAX, ()): v})
    K = PseudoInterpretation((), {(P_MAX, ()): w})
    assert preceq(J, K) == (v <= w)
    # J below K exactly when K satisfies everything J does
    if v is not INF:
        assert preceq(J, K) == satisfies(K, Fact(P_MAX, (), v))


@given(st.lists(st.tuples(st.sampled_from(["a", "b"]), st.integers(-9, 9)), max_size=6), st.integers(-9, 9))
def test_join_is_least_upper_bound(entries, extra):
    J = PseudoInterpretation.from_facts(Fact(P_MIN, (o,), v) for o, v in entries)
    f = Fact(P_MIN, ("a",), extra)
    K = join_fact(J, f)
    assert preceq(J, K) and satisfies(K, f)
    for o, v in entries:
        assert satisfies(K, Fact(P_MIN, (o,), v))


def test_facts_are_canonically_ordered():
    J = PseudoInterpretation([Fact(E, ("b",)), Fact(E, ("a",))], {(P_MAX, ()): INF})
    assert [str(f) for f in J.facts()] == ["e(a)", "e(b)", "p(inf)"]
