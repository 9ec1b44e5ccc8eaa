"""Naive bottom-up oracle working directly on limit-closed semantics.

Nothing here shares code with the engine's constraint solving or divergence
detection.  Numeric variables are grounded over a finite box, every rule is
evaluated for every grounding with numpy, and heads are joined until nothing
changes.  A limit value that reaches the edge of the box in its improving
direction is flagged as overflowed and treated as ``inf`` from then on.

Running the oracle at several caps tells divergence apart from merely large
values; :func:`oracle_closure` does that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..core import (INF, Fact, Kind, Num, Program,
                    PseudoInterpretation, Sort, Var, rule_vars, satisfies)
from ..frontend.transforms import constants_of

__all__ = ["OracleResult", "OracleVerdict", "naive_fixpoint_oracle", "oracle_closure", "oracle_entails"]


@dataclass
class OracleResult:
    closure: PseudoInterpretation  # overflowed keys carry the value INF
    overflowed_keys: frozenset
    iterations: int
    inconclusive: bool = False
    cap: int = 0


def _eval(t, env):
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    a, b = _eval(t.left, env), _eval(t.right, env)
    if t.op == "+":
        return a + b
    if t.op == "-":
        return a - b
    return a * b


class _Rule:
    def __init__(self, rule):
        self.rule = rule
        vs = rule_vars(rule)
        self.obj_vars = [n for n, v in vs.items() if v.sort is Sort.OBJ]
        self.num_vars = [n for n, v in vs.items() if v.sort is Sort.NUM]


def _objects(atom, sub):
    return tuple(sub[t.name] if isinstance(t, Var) else t.name for t in atom.object_args)


def naive_fixpoint_oracle(program: Program, value_cap: int = 16, iter_cap: int = 10_000,
                          extra_facts: tuple[Fact, ...] = ()) -> OracleResult:
    """Least limit-closed model with numeric variables grounded in the box.

    A variable that is the bare numeric argument of a body atom ranges over
    the values that atom allows (for a limit atom, the box extended to
    reach the stored value); any other numeric variable ranges over
    ``[-value_cap, value_cap]``.
    """
    cap = value_cap
    objs, _ = constants_of(program, tuple(extra_facts))
    rules = [_Rule(r) for r in program.rules]
    plain: set[Fact] = set()
    ordinary: dict = {}  # key -> set of values
    limits: dict = {}
    over: set = set()
    full = np.arange(-cap, cap + 1, dtype=np.int64)
    rounds = 0
    for it in itertools.count(1):
        if it > iter_cap:
            return OracleResult(_closure(plain, limits, over), frozenset(over), rounds, True, cap)
        derived_plain: set[Fact] = set()
        derived_lim: dict = {}
        for cr in rules:
            _fire(cr, objs, plain, ordinary, limits, over, full, cap, derived_plain, derived_lim)
        changed = False
        for f in derived_plain - plain:
            plain.add(f)
            if f.pred.is_numeric:
                ordinary.setdefault(f.key, set()).add(f.value)
            changed = True
        for key, v in derived_lim.items():
            if key in over:
                continue
            kind = key[0].kind
            if (kind is Kind.MAX and v >= cap) or (kind is Kind.MIN and v <= -cap):
                over.add(key)
                limits[key] = v
                changed = True
                continue
            old = limits.get(key)
            if old is None or (v > old if kind is Kind.MAX else v < old):
                limits[key] = v
                changed = True
        if not changed:
            return OracleResult(_closure(plain, limits, over), frozenset(over), rounds, False, cap)
        rounds += 1


def _closure(plain, limits, over) -> PseudoInterpretation:
    return PseudoInterpretation(plain, {k: (INF if k in over else v) for k, v in limits.items()})


def _fire(cr, objs, plain, ordinary, limits, over, full, cap, out_plain, out_lim):
    rule = cr.rule
    for combo in itertools.product(objs, repeat=len(cr.obj_vars)):
        sub = dict(zip(cr.obj_vars, combo))
        cands: dict[str, np.ndarray] = {}
        ok = True
        for a in rule.body:
            if not a.pred.is_numeric:
                if Fact(a.pred, _objects(a, sub)) not in plain:
                    ok = False
                    break
                continue
            s = a.numeric_arg
            if not isinstance(s, Var):
                continue
            key = (a.pred, _objects(a, sub))
            if a.pred.is_limit:
                if key in over:
                    c = full
                elif key not in limits:
                    ok = False
                    break
                else:
                    ell = limits[key]
                    if a.pred.kind is Kind.MAX:
                        c = np.arange(min(-cap, ell), ell + 1, dtype=np.int64)
                    else:
                        c = np.arange(ell, max(cap, ell) + 1, dtype=np.int64)
            else:
                c = np.array(sorted(ordinary.get(key, ())), dtype=np.int64)
            cands[s.name] = c if s.name not in cands else np.intersect1d(cands[s.name], c)
        if not ok:
            continue
        axes = [cands.get(v, full) for v in cr.num_vars]
        if any(len(x) == 0 for x in axes):
            continue
        grids = np.meshgrid(*axes, indexing="ij") if axes else []
        env = {v: g.ravel() for v, g in zip(cr.num_vars, grids)}
        size = grids[0].size if grids else 1
        mask = np.ones(size, dtype=bool)
        for a in rule.body:
            if not a.pred.is_numeric:
                continue
            key = (a.pred, _objects(a, sub))
            val = _eval(a.numeric_arg, env)
            if a.pred.is_limit:
                if key in over:
                    continue
                ell = limits[key] if key in limits else None
                if ell is None:
                    mask[:] = False
                elif a.pred.kind is Kind.MAX:
                    mask &= np.asarray(val <= ell)
                else:
                    mask &= np.asarray(val >= ell)
            else:
                vals = np.array(sorted(ordinary.get(key, ())), dtype=np.int64)
                mask &= np.isin(val, vals)
        for c in rule.comparisons:
            lv, rv = _eval(c.left, env), _eval(c.right, env)
            mask &= np.asarray(lv < rv if c.op == "<" else lv <= rv)
        if not mask.any():
            continue
        head = rule.head
        objs_h = _objects(head, sub)
        if not head.pred.is_numeric:
            out_plain.add(Fact(head.pred, objs_h))
            continue
        hv = np.broadcast_to(np.asarray(_eval(head.numeric_arg, env)), mask.shape)[mask]
        if head.pred.is_limit:
            best = int(hv.max() if head.pred.kind is Kind.MAX else hv.min())
            key = (head.pred, objs_h)
            old = out_lim.get(key)
            if old is None or (best > old if head.pred.kind is Kind.MAX else best < old):
                out_lim[key] = best
        else:
            for v in np.unique(hv):
                out_plain.add(Fact(head.pred, objs_h, int(v)))


@dataclass
class OracleVerdict:
    closure: PseudoInterpretation
    divergent: frozenset
    runs: list = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return any(r.inconclusive for r in self.runs)


def oracle_closure(program: Program, base_cap: int = 8, doublings: int = 3,
                   iter_cap: int = 10_000, extra_facts: tuple[Fact, ...] = ()) -> OracleVerdict:
    """Closure with divergence classified by running at doubling caps.

    A key is divergent when it overflows at the largest cap, or when its
    value strictly improves at every doubling after the first run (it then
    reads a divergent key through a window that grows with the cap).  Other
    keys take their value from the run at the largest cap.
    """
    runs = [naive_fixpoint_oracle(program, base_cap * 2 ** i, iter_cap, extra_facts)
            for i in range(doublings + 1)]
    keys = set()
    for r in runs:
        keys.update(r.closure.limits)
    divergent = set()
    better = {Kind.MAX: lambda a, b: b > a, Kind.MIN: lambda a, b: b < a}
    for key in keys:
        if key in runs[-1].overflowed_keys:
            divergent.add(key)
            continue
        # a value that keeps improving with the cap reads a divergent key
        # through a window; the earliest run may itself have overflowed
        vals = [r.closure.limit_value(*key) for r in runs[1:]]
        if any(v is None or v is INF for v in vals):
            continue
        if len(vals) >= 2 and all(better[key[0].kind](a, b) for a, b in zip(vals, vals[1:])):
            divergent.add(key)
    final = runs[-1].closure
    limits = final.limits
    for key in divergent:
        limits[key] = INF
    return OracleVerdict(PseudoInterpretation(final.plain_facts, limits), frozenset(divergent), runs)


def oracle_entails(program: Program, alpha: Fact, **kw) -> bool:
    verdict = oracle_closure(program, extra_facts=(alpha,), **kw)
    return satisfies(verdict.closure, alpha)
