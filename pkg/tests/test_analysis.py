import itertools
import random
import time
from collections import Counter

from hypothesis import given, settings, strategies as st

from limitlog.analysis import (Sign, analyze, check_limit_linear,
                               check_type_consistent, classify_predicates,
                               poly_signs, sign_possibilities)
from limitlog.arith import polynomial
from limitlog.frontend import parse_fact, parse_program
from limitlog.programs import (P_C, P_C_PRIME, PATH_COUNT,
                               PATH_COUNT_BANDWIDTH_TAIL,
                               PATH_COUNT_PLAIN_TAIL, SHORTEST_PATH)


def _sign(v):
    return Sign.POSITIVE if v > 0 else Sign.NEGATIVE if v < 0 else Sign.ZERO


def _brute(k, counts, pool):
    names = list(counts)
    out = set()
    for combo in itertools.product(pool, repeat=len(names)):
        v = k
        for n, c in zip(names, combo):
            v *= c ** counts[n]
        out.add(_sign(v))
    return out


products = st.tuples(
    st.integers(-3, 3),
    st.dictionaries(st.sampled_from("xyz"), st.integers(1, 3), max_size=3),
    st.sets(st.integers(-3, 3), max_size=4),
)


@settings(max_examples=400, deadline=None)
@given(products)
def test_sign_possibilities_matches_enumeration(data):
    k, counts, pool = data
    if sum(counts.values()) > 3:
        return
    assert sign_possibilities((k, Counter(counts)), pool) == _brute(k, counts, sorted(pool))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.sampled_from(["x", "y", "x * y", "x * x"])),
                min_size=1, max_size=3), st.sets(st.integers(-2, 2), min_size=1, max_size=3))
def test_poly_signs_matches_enumeration(monos, pool):
    text = " + ".join(f"({k}) * {m.replace('x', 'X').replace('y', 'Y')}" for k, m in monos)
    rule = parse_program(f"pred e(int).\npred p(max int).\np({text}) :- e(X), e(Y).\n").rules[0]
    term = rule.head.numeric_arg
    want = set()
    for a, b in itertools.product(sorted(pool), repeat=2):
        want.add(_sign(sum(k * {"x": a, "y": b, "x * y": a * b, "x * x": a * a}[m] for k, m in monos)))
    assert poly_signs(polynomial(term), pool) == want


def test_examples():
    assert not check_type_consistent(parse_program(P_C))
    bad = check_type_consistent(parse_program(P_C_PRIME))
    assert [v.bullet for v in bad] == [3]
    assert bad[0].to_diagnostic().code == "type-comparison"
    zero = check_type_consistent(parse_program("pred a(max int).\npred b(max int).\nb(0 * X + 1) :- a(X).\n"))
    assert [v.bullet for v in zero] == [1]
    head = check_type_consistent(parse_program("pred a(max int).\npred b(max int).\nb(-X) :- a(X).\n"))
    assert [v.bullet for v in head] == [2]
    flipped = parse_program("pred a(max int).\npred b(min int).\nb(-X) :- a(X).\n")
    assert not check_type_consistent(flipped)


def test_coefficients_range_over_the_constant_pool():
    text = ("pred e(int).\npred a(max int).\npred b(max int).\n"
            "e(2).\nb(K * X) :- a(X), e(K).\n")
    assert not check_type_consistent(parse_program(text))
    P = parse_program(text + "e(-1).\n")
    assert [v.bullet for v in check_type_consistent(P)] == [2]
    # constants of the query count too
    Q = parse_program(text)
    assert check_type_consistent(Q, (parse_fact("e(-3)", Q),))


def test_example_programs():
    assert not check_type_consistent(parse_program(SHORTEST_PATH))
    assert not check_type_consistent(parse_program(PATH_COUNT + PATH_COUNT_PLAIN_TAIL))
    assert check_type_consistent(parse_program(PATH_COUNT + PATH_COUNT_BANDWIDTH_TAIL))


def test_limit_linearity():
    assert not check_limit_linear(parse_program(P_C))
    P = parse_program("pred a(max int).\npred e(int).\npred b(max int).\n"
                      "b(X * Y) :- a(X), a(Y).\nb(K * X) :- a(X), e(K).\n")
    diags = check_limit_linear(P)
    assert [d.code for d in diags] == ["not-limit-linear"] and diags[0].line == 4


def test_report_and_classification():
    P = parse_program(P_C_PRIME)
    rep = analyze(P)
    assert rep.limit_linear and not rep.type_consistent
    assert [d.code for d in rep.diagnostics] == ["type-comparison"]
    assert classify_predicates(parse_program(SHORTEST_PATH)) == {"edge": "EDB", "sp": "IDB"}


def test_check_is_fast_on_many_constants():
    facts = "".join(f"edge(n{i}, n{i + 1}, {i % 17 - 8}).\n" for i in range(2000))
    P = parse_program(SHORTEST_PATH + facts)
    t = time.perf_counter()
    assert not check_type_consistent(P)
    assert time.perf_counter() - t < 2.0
