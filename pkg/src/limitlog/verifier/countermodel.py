"""Bounded search for a pseudo-model that refutes a fact.

The search runs over the semi-grounding.  Every head of a semi-ground rule
is a slot: limit keys take a value among "absent", the integers of
magnitude at most the bound, or ``inf``; object and ordinary heads are
present or absent.  Slots are filled depth-first, weakest value first, and
a rule is checked as soon as every slot it reads or writes is filled.  A hit
is refutation-sound.  A miss only means that no counter-model exists
within the bound.
"""

from __future__ import annotations

from ..core import INF, Fact, Kind, Program, PseudoInterpretation, _dominates
from ..frontend.transforms import normalize, semi_ground

__all__ = ["counter_model_search"]


class _Partial:
    """Just enough of the pseudo-interpretation interface for rule evaluation."""

    def __init__(self):
        self.plain_facts: set[Fact] = set()
        self.values: dict = {}

    def limit_value(self, pred, objects=()):
        return self.values.get((pred, objects))


def _domain(kind: Kind, bound: int, floor):
    order = range(-bound, bound + 1) if kind is Kind.MAX else range(bound, -bound - 1, -1)
    vals = [None, *order, INF]
    if floor is None:
        return vals
    return [v for v in vals if v is not None and _dominates(kind, v, floor)]


def counter_model_search(program: Program, alpha: Fact, magnitude_bound: int):
    """A pseudo-model of ``program`` with values within the bound that does
    not satisfy ``alpha``, or None if there is none."""
    from ..engine import _compiled, is_pseudo_model

    if magnitude_bound < 0:
        raise ValueError("magnitude_bound must be non-negative")
    ground = semi_ground(normalize(program), (alpha,))
    rules = _compiled(ground)

    slots: list = []  # ("lim", key) or ("fact", Fact)
    index: dict = {}
    floors: dict = {}
    forced: set = set()
    for cr in rules:
        s = ("lim", cr.head_key) if cr.head_key is not None else ("fact", cr.head_fact)
        if s not in index:
            index[s] = len(slots)
            slots.append(s)
        if cr.rule.is_fact:
            if s[0] == "lim":
                v = cr.evaluate(PseudoInterpretation()).value
                old = floors.get(s[1])
                if old is None or _dominates(s[1][0].kind, v, old):
                    floors[s[1]] = v
            else:
                forced.add(s[1])

    # a rule is checked once the last slot it touches is filled; rules that
    # read something no slot can provide never fire
    checks: list[list] = [[] for _ in slots]
    for cr in rules:
        deps = [index[("fact", f)] if ("fact", f) in index else None for f in cr.plain]
        deps += [index.get(("lim", lb.key)) for lb in cr.limits]
        if any(d is None for d in deps):
            continue
        head = ("lim", cr.head_key) if cr.head_key is not None else ("fact", cr.head_fact)
        deps.append(index[head])
        checks[max(deps)].append(cr)

    alpha_slot = None
    if alpha.pred.is_limit and ("lim", alpha.key) in index:
        alpha_slot = index[("lim", alpha.key)]
    elif not alpha.pred.is_limit and ("fact", alpha) in index:
        alpha_slot = index[("fact", alpha)]

    J = _Partial()

    def holds(f: Fact) -> bool:
        if f.pred.is_limit:
            v = J.values.get(f.key)
            return v is not None and _dominates(f.pred.kind, v, f.value)
        return f in J.plain_facts

    def domain(i):
        kind, what = slots[i]
        if kind == "lim":
            return _domain(what[0].kind, magnitude_bound, floors.get(what))
        return [True] if what in forced else [False, True]

    def assign(i, v):
        kind, what = slots[i]
        if kind == "lim":
            if v is None:
                J.values.pop(what, None)
            else:
                J.values[what] = v
        elif v:
            J.plain_facts.add(what)
        else:
            J.plain_facts.discard(what)

    def dfs(i) -> bool:
        if i == len(slots):
            return True
        for v in domain(i):
            assign(i, v)
            if i == alpha_slot and holds(alpha):
                continue
            if all((out := cr.evaluate(J)) is None or holds(out) for cr in checks[i]):
                if dfs(i + 1):
                    return True
        assign(i, None if slots[i][0] == "lim" else False)
        return False

    if not dfs(0):
        return None
    found = PseudoInterpretation(J.plain_facts, J.values)
    assert is_pseudo_model(ground, found)
    return found
