"""Random instances for property tests: programs, interpretation pairs,
constraint systems and graphs.  Every generator takes a ``random.Random``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..core import INF, Fact, Kind, PredicateDecl, Program, PseudoInterpretation
from ..frontend.parser import parse_program
from ..lia import Constraint, LinearConstraintSystem, Objective

__all__ = [
    "ProgramShape", "random_program", "random_fact", "random_pair",
    "random_system", "random_digraph", "random_dag", "random_network",
]


@dataclass
class ProgramShape:
    max_preds: int = 3
    max_rules: int = 6
    const: int = 4
    objects: tuple[str, ...] = ("a", "b")
    p_object_arg: float = 0.3
    p_comparison: float = 0.4
    p_double: float = 0.1  # chance of a coefficient of magnitude 2
    type_consistent: bool = True


def _term(const: int, parts: list[tuple[int, str]]) -> str:
    out = str(const) if const or not parts else ""
    for k, v in parts:
        piece = v if abs(k) == 1 else f"{abs(k)} * {v}"
        if not out:
            out = piece if k > 0 else f"-{piece}" if abs(k) == 1 else f"-{abs(k)} * {v}"
        else:
            out += f" + {piece}" if k > 0 else f" - {piece}"
    return out


def random_program(rng: random.Random, shape: ProgramShape | None = None) -> Program:
    """A random limit program over nullary or unary limit predicates.

    With ``shape.type_consistent`` the polarity of every coefficient is
    chosen so that the program passes the type-consistency check.
    """
    sh = shape or ProgramShape()
    n_preds = rng.randint(1, sh.max_preds)
    preds = []
    for i in range(n_preds):
        kind = rng.choice([Kind.MIN, Kind.MAX])
        unary = rng.random() < sh.p_object_arg
        preds.append((f"p{i}", kind, unary))
    lines = []
    for name, kind, unary in preds:
        lines.append(f"pred {name}({'obj, ' if unary else ''}{kind.value} int).")

    def args(unary, obj, num):
        return f"({obj}, {num})" if unary else f"({num})"

    n_rules = rng.randint(1, sh.max_rules)
    n_facts = rng.randint(1, max(1, min(n_preds, n_rules - 1) if n_rules > 1 else 1))
    for _ in range(n_facts):
        name, kind, unary = rng.choice(preds)
        lines.append(f"{name}{args(unary, rng.choice(sh.objects), rng.randint(-sh.const, sh.const))}.")
    for r in range(n_rules - n_facts):
        body = []
        kinds = {}
        obj_var = f"X{r}"
        have_obj = False
        for j in range(rng.randint(1, 2)):
            name, kind, unary = rng.choice(preds)
            v = f"M{r}_{j}"
            kinds[v] = kind
            if unary:
                o = obj_var if rng.random() < 0.6 else rng.choice(sh.objects)
                have_obj |= o == obj_var
            else:
                o = None
            body.append(f"{name}{args(unary, o, v)}")
        hname, hkind, hunary = rng.choice(preds)
        used = [v for v in kinds if rng.random() < 0.8] or [next(iter(kinds))]
        parts = []
        for v in used:
            mag = 2 if rng.random() < sh.p_double else 1
            if sh.type_consistent:
                sign = 1 if kinds[v] is hkind else -1
            else:
                sign = rng.choice([1, -1])
            parts.append((sign * mag, v))
        head_term = _term(rng.randint(-sh.const, sh.const), parts)
        ho = (obj_var if have_obj and rng.random() < 0.7 else rng.choice(sh.objects)) if hunary else None
        comps = []
        if rng.random() < sh.p_comparison:
            v = rng.choice(list(kinds))
            c = rng.randint(-sh.const, sh.const)
            left = rng.random() < 0.5
            if sh.type_consistent:
                # positive on the left needs min, positive on the right needs max
                sign = 1 if (kinds[v] is Kind.MIN) == left else -1
            else:
                sign = rng.choice([1, -1])
            var_side = v if sign > 0 else f"-1 * {v}"
            op = rng.choice(["<", "<="])
            comps.append(f"({var_side} {op} {c})" if left else f"({c} {op} {var_side})")
        lines.append(f"{hname}{args(hunary, ho, head_term)} :- {', '.join(body + comps)}.")
    return parse_program("\n".join(lines) + "\n")


def random_fact(rng: random.Random, program: Program, const: int = 6) -> Fact:
    d = rng.choice([d for d in program.decls if not d.builtin])
    objs = tuple(rng.choice(["a", "b"]) for _ in range(d.n_objects))
    value = rng.randint(-const, const) if d.is_numeric else None
    return Fact(d, objs, value)


def _limit_keys(program: Program, objects=("a", "b")):
    keys = []
    for d in program.decls:
        if d.is_limit and not d.builtin:
            if d.n_objects == 0:
                keys.append((d, ()))
            else:
                keys += [(d, (o,)) for o in objects] if d.n_objects == 1 else []
    return keys


def _raise(kind: Kind, v, rng: random.Random, const: int):
    if v is INF:
        return INF
    if rng.random() < 0.1:
        return INF
    step = rng.randint(0, const)
    return v + step if kind is Kind.MAX else v - step


def random_pair(rng: random.Random, program: Program, const: int = 6):
    """``(J, J2)`` over the program's limit keys with ``J ⊑ J2``."""
    J, J2 = {}, {}
    for key in _limit_keys(program):
        r = rng.random()
        if r < 0.25:
            if rng.random() < 0.5:
                J2[key] = rng.choice([rng.randint(-const, const), INF])
            continue
        v = INF if r > 0.92 else rng.randint(-const, const)
        J[key] = v
        J2[key] = _raise(key[0].kind, v, rng, const)
    return PseudoInterpretation((), J), PseudoInterpretation((), J2)


def random_system(rng: random.Random, n_vars: int | None = None, coeff: int = 5,
                  box: int | None = 10, n_rows: int | None = None, bound: int = 15):
    """A random system and objective; ``box`` adds ``|x_i| <= box`` rows."""
    n = n_vars if n_vars is not None else rng.randint(1, 3)
    names = [f"x{i}" for i in range(n)]
    rows = []
    if box is not None:
        for v in names:
            rows.append(Constraint.of({v: 1}, "<=", box))
            rows.append(Constraint.of({v: -1}, "<=", box))
    for _ in range(n_rows if n_rows is not None else rng.randint(1, 4)):
        coeffs = {v: rng.randint(-coeff, coeff) for v in names}
        rows.append(Constraint.of(coeffs, rng.choice(["<", "<="]), rng.randint(-bound, bound)))
    obj = Objective.of(rng.choice(["min", "max"]), {v: rng.randint(-coeff, coeff) for v in names},
                       rng.randint(-bound, bound))
    return LinearConstraintSystem(tuple(names), tuple(rows)), obj


def random_digraph(rng: random.Random, max_nodes: int = 12, max_weight: int = 9):
    n = rng.randint(1, max_nodes)
    nodes = [f"v{i}" for i in range(n)]
    edges = []
    for u in nodes:
        for v in nodes:
            if u != v and rng.random() < 2.5 / n:
                edges.append((u, v, rng.randint(0, max_weight)))
    return nodes, edges


def random_dag(rng: random.Random, max_nodes: int = 8, p: float = 0.4):
    n = rng.randint(1, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    perm = nodes[:]
    rng.shuffle(perm)  # topological order differs from the declared node order
    edges = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return nodes, edges


def random_network(rng: random.Random, max_agents: int = 8):
    n = rng.randint(1, max_agents)
    agents = [f"g{i}" for i in range(n)]
    follows = [(x, y) for x in agents for y in agents if x != y and rng.random() < 0.35]
    thresholds = {a: rng.randint(1, 3) for a in agents[1:]}
    return agents, follows, thresholds, agents[0]
