"""Acceptance criteria 1-11.

Each test records a one-line verdict; ``conftest.py`` prints them all at the
end of the session.  Run alone with ``pytest tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time

import pytest

from checks import propagation_violations, structural_violations, visible
from limitlog.analysis import check_type_consistent
from limitlog.core import INF, Fact, PseudoInterpretation, preceq, satisfies
from limitlog.engine import (EngineConfig, build_constraint_system, build_vpg,
                             entails, is_pseudo_model, prepare_and_run, run,
                             tp_step)
from limitlog.errors import DivergenceError
from limitlog.frontend import (homogenise, normalize, parse_fact,
                               parse_program, semi_ground)
from limitlog.lia import Constraint, Objective, Outcome, brute_force_box, check_feasible, optimize
from limitlog.programs import (P_C, P_C_PRIME, diffusion_program,
                               path_count_program, shortest_path_program)
from limitlog.verifier import (counter_model_search, graph_oracle,
                               naive_fixpoint_oracle, oracle_closure,
                               oracle_entails)
from limitlog.verifier.generate import (ProgramShape, random_dag,
                                        random_digraph, random_fact,
                                        random_network, random_pair,
                                        random_program, random_system)

pytestmark = pytest.mark.acceptance

VERDICTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str, elapsed: float, limit: float | None):
    in_time = limit is None or elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"criterion {n:>2}: {status}  {detail}  [{elapsed:.2f}s{budget}]"
    VERDICTS[n] = line
    print(line)
    assert ok, line
    assert in_time, line


def _sg(program):
    return semi_ground(normalize(program), prune=True)


# 1 -------------------------------------------------------------------------

def test_criterion_01_rule_application_example():
    t = time.perf_counter()
    P = parse_program("pred a(max int).\npred b(max int).\nb(X + 1) :- a(X), (2 <= X).\n")
    r = P.rules[0]
    a = P.decl("a")
    empty_infeasible = not check_feasible(build_constraint_system(r, PseudoInterpretation())).feasible
    J = PseudoInterpretation((), {(a, ()): 3})
    C = build_constraint_system(r, J)
    witnesses = [x for x in range(-20, 21) if C.holds({"X": x})]
    opt = optimize(C, Objective.of("max", {"X": 1}, 1))
    step = tp_step([r], J)
    expected = PseudoInterpretation((), {(P.decl("b"), ()): 4})
    ok = (empty_infeasible and witnesses == [2, 3] and opt.kind is Outcome.OPTIMAL
          and opt.value == 4 and step == expected)
    record(1, ok, f"C(r,{{}}) infeasible={empty_infeasible}, witnesses={witnesses}, "
                  f"opt={opt.value}, T={step}", time.perf_counter() - t, 1.0)


# 2 -------------------------------------------------------------------------

def test_criterion_02_divergence_example():
    t = time.perf_counter()
    P = parse_program(P_C)
    closure = prepare_and_run(P).result.closure
    a, b = P.decl("a"), P.decl("b")
    want = PseudoInterpretation((), {(a, ()): INF, (b, ()): INF})
    verdict = oracle_closure(P)
    flagged = all((k in r.overflowed_keys) for r in verdict.runs for k in [(a, ()), (b, ())])
    ok = visible(closure) == want and flagged and verdict.divergent == {(a, ()), (b, ())}
    record(2, ok, f"saturate={closure}, oracle overflow at caps "
                  f"{[r.cap for r in verdict.runs]}: {flagged}", time.perf_counter() - t, 1.0)


# 3 -------------------------------------------------------------------------

def test_criterion_03_convergence_example():
    t = time.perf_counter()
    P = parse_program(P_C_PRIME)
    a, b, c = P.decl("a"), P.decl("b"), P.decl("c")
    oracle = naive_fixpoint_oracle(P, value_cap=10)
    want = PseudoInterpretation((), {(a, ()): 6, (b, ()): 5, (c, ()): 5})
    oracle_ok = oracle.closure == want and not oracle.overflowed_keys
    violations = check_type_consistent(P)
    bullet3 = any(v.bullet == 3 for v in violations)
    try:
        engine = run(_sg(P), EngineConfig(enforce_stability_precondition=False)).closure
        engine_desc = str(engine)
        disagrees = engine != want
    except DivergenceError as exc:
        engine_desc = f"DivergenceError({exc})"
        disagrees = True
    ok = oracle_ok and bullet3 and disagrees
    record(3, ok, f"oracle={oracle.closure}, comparison-polarity violation={bullet3}, "
                  f"bypassed engine -> {engine_desc}", time.perf_counter() - t, 1.0)


# 4 -------------------------------------------------------------------------

def test_criterion_04_stability_counterexample_weights():
    t = time.perf_counter()
    P = parse_program(P_C_PRIME)
    a, b, c = P.decl("a"), P.decl("b"), P.decl("c")
    G = _sg(P)
    J = PseudoInterpretation((), {(a, ()): 0, (b, ()): 0, (c, ()): 0})
    J2 = J.with_limit((a, ()), 1)
    mu = build_vpg(G, J).weights.get(((a, ()), (b, ())))
    mu2 = build_vpg(G, J2).weights.get(((a, ()), (b, ())))
    ok = preceq(J, J2) and mu == 0 and mu2 == -1
    record(4, ok, f"mu(A->B) at A=0: {mu}, at A=1: {mu2}", time.perf_counter() - t, 1.0)


# 5 -------------------------------------------------------------------------

STRUCTURAL: list[str] = []


def test_criterion_05_oracle_equivalence():
    t = time.perf_counter()
    rng = random.Random(5)
    n = mismatches = inconclusive = not_model = 0
    first = ""
    while n < 500:
        P = random_program(rng)
        assert not check_type_consistent(P)
        pipe = prepare_and_run(P)
        STRUCTURAL.extend(structural_violations(pipe))
        closure = visible(pipe.result.closure)
        if not is_pseudo_model(pipe.ground, pipe.result.closure):
            not_model += 1
        verdict = oracle_closure(P)
        inconclusive += verdict.inconclusive
        if closure != verdict.closure:
            mismatches += 1
            first = first or f"; first: engine {closure} oracle {verdict.closure}"
        n += 1
    ok = mismatches == 0 and inconclusive == 0 and not_model == 0
    record(5, ok, f"{n} programs, {mismatches} mismatches, {inconclusive} inconclusive{first}",
           time.perf_counter() - t, 60.0)


# 6 -------------------------------------------------------------------------

def test_criterion_06_example_programs():
    t = time.perf_counter()
    rng = random.Random(6)
    bad = []
    for _ in range(100):
        nodes, edges = random_digraph(rng, max_nodes=12)
        pipe = prepare_and_run(parse_program(shortest_path_program(edges, nodes[0])))
        STRUCTURAL.extend(structural_violations(pipe))
        got = {k[1][0]: v for k, v in pipe.result.closure.limits.items() if k[0].name == "sp"}
        want = graph_oracle("shortest_path", {"nodes": nodes, "edges": edges, "source": nodes[0]})
        if got != want:
            bad.append(("sp", nodes, edges))
    for bandwidth in (False, True):
        for _ in range(100):
            nodes, edges = random_dag(rng, max_nodes=8)
            bw = {x: rng.randint(0, 4) for x in nodes} if bandwidth else None
            P = parse_program(path_count_program(nodes, edges, bw))
            # the bandwidth variant is not type-consistent; its graph is acyclic
            cfg = EngineConfig(enforce_stability_precondition=not bandwidth)
            pipe = prepare_and_run(P, cfg)
            STRUCTURAL.extend(structural_violations(pipe))
            got = {k[1]: v for k, v in pipe.result.closure.limits.items() if k[0].name == "np"}
            inst = {"nodes": nodes, "edges": edges}
            if bw is not None:
                inst["bandwidth"] = bw
            if got != graph_oracle("dag_path_count", inst):
                bad.append(("np", bandwidth, nodes, edges, bw))
    for _ in range(100):
        agents, follows, th, src = random_network(rng, max_agents=8)
        pipe = prepare_and_run(parse_program(diffusion_program(agents, follows, th, src)))
        STRUCTURAL.extend(structural_violations(pipe))
        got = {f.objects[0] for f in pipe.result.closure.plain_facts if f.pred.name == "tw"}
        inst = {"agents": agents, "follows": follows, "thresholds": th, "source": src}
        if got != graph_oracle("diffusion", inst):
            bad.append(("tw", agents, follows, th))
    record(6, not bad, f"100 digraphs, 200 DAGs (plain + bandwidth), 100 networks; "
                       f"{len(bad)} mismatches{'; first: ' + str(bad[0]) if bad else ''}",
           time.perf_counter() - t, 120.0)


# 7 -------------------------------------------------------------------------

def test_criterion_07_structural_bounds():
    t = time.perf_counter()
    rng = random.Random(7)
    runs = []
    for _ in range(200):
        runs.append(prepare_and_run(random_program(rng)))
    runs.append(prepare_and_run(parse_program(P_C)))
    bad = list(STRUCTURAL)
    for pipe in runs:
        bad.extend(structural_violations(pipe))
    record(7, not bad, f"{len(runs)} fresh runs plus those of criteria 5 and 6; "
                       f"{len(bad)} violations{'; first: ' + bad[0] if bad else ''}",
           time.perf_counter() - t, None)


# 8 -------------------------------------------------------------------------

def test_criterion_08_monotonicity_and_fixpoint():
    t = time.perf_counter()
    rng = random.Random(8)
    triples = mono_bad = model_bad = prop_bad = closures = 0
    while triples < 1000:
        consistent = rng.random() < 0.7
        P = random_program(rng, ProgramShape(type_consistent=consistent))
        G = semi_ground(normalize(P))
        for _ in range(5):
            J, J2 = random_pair(rng, P)
            assert preceq(J, J2)
            if not preceq(tp_step(G, J), tp_step(G, J2)):
                mono_bad += 1
            triples += 1
        if consistent:
            pipe = prepare_and_run(P)
            closures += 1
            cl = pipe.result.closure
            model_bad += not is_pseudo_model(pipe.ground, cl)
            prop_bad += len(propagation_violations(pipe.ground, cl, 4))
    ok = mono_bad == model_bad == prop_bad == 0
    record(8, ok, f"{triples} triples ({mono_bad} non-monotone), {closures} closures "
                  f"({model_bad} not pseudo-models, {prop_bad} path-propagation violations)",
           time.perf_counter() - t, 60.0)


# 9 -------------------------------------------------------------------------

def _kind_value(res):
    return res.kind, res.value


def _boxed(system, cap):
    rows = [Constraint.of({v: sign}, "<=", cap) for v in system.vars for sign in (1, -1)]
    return system.with_constraints(rows)


def _probe_unbounded(system, obj, base=10, doublings=7) -> bool:
    """Optima inside ``|x| <= base * 2**k`` must keep strictly improving.

    Small boxes are scanned exhaustively and must agree with the exact
    solver run on the boxed system; larger ones use the boxed solver.  The
    last three doublings have to improve strictly.
    """
    vals = []
    for k in range(doublings + 1):
        cap = base * 2 ** k
        exact = optimize(_boxed(system, cap), obj)
        if k <= 2 and _kind_value(exact) != _kind_value(brute_force_box(system, obj, cap)):
            return False
        vals.append(exact.value if exact.feasible else None)
    tail = vals[-4:]
    if any(v is None for v in tail):
        return False
    return all((b > a) if obj.maximize else (b < a) for a, b in zip(tail, tail[1:]))


def test_criterion_09_lia_vs_brute_force():
    t = time.perf_counter()
    rng = random.Random(9)
    mism = []
    for i in range(1000):
        system, obj = random_system(rng, box=10)
        if i % 4 == 0:
            got = check_feasible(system)
            want = brute_force_box(system, None, 10)
            if got.feasible != want.feasible or (got.feasible and not system.holds(got.witness)):
                mism.append((system, None))
            continue
        got = optimize(system, obj)
        want = brute_force_box(system, obj, 10)
        if _kind_value(got) != _kind_value(want):
            mism.append((system, obj, got, want))
    unbounded = probe_bad = 0
    while unbounded < 100:
        system, obj = random_system(rng, box=None, bound=6)
        if optimize(system, obj).kind is not Outcome.UNBOUNDED:
            continue
        unbounded += 1
        if not _probe_unbounded(system, obj):
            probe_bad += 1
    ok = not mism and probe_bad == 0
    record(9, ok, f"1000 boxed systems, {len(mism)} mismatches; {unbounded} unbounded "
                  f"instances, {probe_bad} failed cap-doubling probes", time.perf_counter() - t, 60.0)


# 10 ------------------------------------------------------------------------

def _finite_within(J, bound):
    return all(v is INF or abs(v) <= bound for v in J.limits.values())


def test_criterion_10_counter_model_coherence():
    t = time.perf_counter()
    rng = random.Random(10)
    shape = ProgramShape(max_preds=2, max_rules=4, const=3)
    n = contradictions = found = 0
    while n < 200:
        P = random_program(rng, shape)
        alpha = random_fact(rng, P, const=6)
        pipe = prepare_and_run(P, extra_facts=(alpha,))
        if not _finite_within(visible(pipe.result.closure), 8):
            continue  # counter-models above the bound are out of reach
        yes = pipe.closure_satisfies(alpha)
        J = counter_model_search(P, alpha, 8)
        if J is not None:
            found += 1
            if yes or satisfies(J, alpha):
                contradictions += 1
        elif not yes:
            contradictions += 1
        n += 1
    record(10, contradictions == 0, f"{n} programs, {found} counter-models, "
                                    f"{contradictions} contradictions", time.perf_counter() - t, 120.0)


# 11 ------------------------------------------------------------------------

def test_criterion_11_transformations():
    t = time.perf_counter()
    rng = random.Random(11)
    bad = []
    for i in range(200):
        P = random_program(rng, ProgramShape(type_consistent=i % 3 != 0))
        alpha = random_fact(rng, P)
        base = oracle_entails(P, alpha)
        H, beta = homogenise(P, alpha)
        answers = {
            "normalize": oracle_entails(normalize(P), alpha),
            "homogenise": oracle_entails(H, beta),
            "semi_ground": oracle_entails(semi_ground(P, (alpha,)), alpha),
        }
        for name, got in answers.items():
            if got != base:
                bad.append((name, str(alpha)))
    record(11, not bad, f"200 (program, fact) pairs x 3 transformations; {len(bad)} mismatches"
                        f"{'; first: ' + str(bad[0]) if bad else ''}", time.perf_counter() - t, 60.0)
