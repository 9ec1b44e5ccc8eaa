"""Fixpoint evaluation of semi-ground limit-linear programs.

The main entry points are :func:`tp_step` (one application of the immediate
consequence operator), :func:`build_vpg` and :func:`positive_cycle_nodes`
(the divergence test), :func:`saturate` (the fixpoint loop that promotes
values on positive cycles to ``inf``) and :func:`entails`, which runs the
whole pipeline from a source program to a yes/no answer.
"""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .arith import NonLinearError, linear_form
from .core import (INF, Atom, ExtendedInt, Fact, Kind, Program,
                   PseudoInterpretation, Rule, Var, atom_to_fact, preceq,
                   rule_vars, satisfies)
from .errors import ContractError, DivergenceError, SortError
from .lia import (Constraint, LinearConstraintSystem, Objective, Outcome,
                  check_feasible, optimize)

log = logging.getLogger(__name__)

__all__ = [
    "EngineConfig", "HeadOutcome", "ValuePropagationGraph", "SaturationResult",
    "evaluate_rule", "build_constraint_system", "tp_step", "is_pseudo_model",
    "build_vpg", "positive_cycle_nodes", "saturate", "run", "entails",
    "iteration_bound", "prepare_and_run", "PipelineResult",
]

#: a derived head; limit facts carry ``opt(r, J)`` as their value
HeadOutcome = Fact


@dataclass
class EngineConfig:
    max_iterations: int | None = None
    trace: bool = False
    enforce_stability_precondition: bool = True
    trace_stream: IO[str] | None = None

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


def iteration_bound(n_rules: int) -> int:
    """Iteration budget of the fixpoint loop for a semi-ground program."""
    return 8 * max(n_rules, 1) ** 6


# -- per-rule compiled form -------------------------------------------------

class _LimitBody:
    __slots__ = ("key", "kind", "const", "coeffs", "var")

    def __init__(self, atom: Atom):
        self.key = atom_key(atom)
        self.kind = atom.pred.kind
        self.const, self.coeffs = linear_form(atom.numeric_arg)
        s = atom.numeric_arg
        self.var = s.name if isinstance(s, Var) else None


def atom_key(atom: Atom):
    try:
        return (atom.pred, tuple(t.name for t in atom.object_args))
    except AttributeError:
        raise ContractError(f"object arguments of {atom} are not ground") from None


class CompiledRule:
    """A semi-ground rule with its linear data precomputed.

    ``evaluate`` memoises on the body values it reads, which is what makes
    repeated operator applications cheap when few values change.
    """

    def __init__(self, rule: Rule):
        self.rule = rule
        lv = set()
        self.plain: list[Fact] = []
        self.limits: list[_LimitBody] = []
        try:
            for a in rule.body:
                if a.pred.is_limit:
                    lb = _LimitBody(a)
                    self.limits.append(lb)
                    lv.update(lb.coeffs)
                    if isinstance(a.numeric_arg, Var):
                        lv.add(a.numeric_arg.name)
                else:
                    self.plain.append(atom_to_fact(a))
            names = rule_vars(rule)
            if set(names) - lv:
                raise ContractError(f"rule is not semi-ground: {rule}")
            self.vars = tuple(names)
            self.cmp = []
            for c in rule.comparisons:
                lc, lcf = linear_form(c.left)
                rc, rcf = linear_form(c.right)
                coeffs = dict(lcf)
                for v, k in rcf.items():
                    coeffs[v] = coeffs.get(v, 0) - k
                self.cmp.append(Constraint.of(coeffs, c.op, rc - lc))
            head = rule.head
            self.head_pred = head.pred
            if head.pred.is_limit:
                self.head_key = atom_key(head)
                self.head_const, self.head_coeffs = linear_form(head.numeric_arg)
                self.head_fact = None
            else:
                self.head_key = None
                self.head_fact = atom_to_fact(head)
        except NonLinearError as exc:
            raise ContractError(f"rule is not limit-linear: {rule}: {exc}") from None
        except SortError:
            raise ContractError(f"rule is not semi-ground: {rule}") from None
        self._memo: dict = {}

    def signature(self, J: PseudoInterpretation):
        facts = J.plain_facts
        if any(f not in facts for f in self.plain):
            return None
        vals = tuple(J.limit_value(*lb.key) for lb in self.limits)
        if any(v is None for v in vals):
            return None
        return vals

    def system(self, vals) -> LinearConstraintSystem:
        rows = list(self.cmp)
        for lb, v in zip(self.limits, vals):
            if v is INF:
                continue
            if lb.kind is Kind.MAX:  # s <= v
                rows.append(Constraint.of(lb.coeffs, "<=", v - lb.const))
            else:  # v <= s
                rows.append(Constraint.of({x: -k for x, k in lb.coeffs.items()}, "<=", lb.const - v))
        return LinearConstraintSystem(self.vars, rows)

    def evaluate(self, J: PseudoInterpretation) -> HeadOutcome | None:
        sig = self.signature(J)
        if sig is None:
            return None
        if sig in self._memo:
            return self._memo[sig]
        out = self._solve(sig)
        if len(self._memo) > 512:
            self._memo.clear()
        self._memo[sig] = out
        return out

    def _solve(self, vals) -> HeadOutcome | None:
        system = self.system(vals)
        if self.head_key is None:
            return self.head_fact if check_feasible(system).feasible else None
        direction = "max" if self.head_pred.kind is Kind.MAX else "min"
        res = optimize(system, Objective.of(direction, self.head_coeffs, self.head_const))
        if res.kind is Outcome.INFEASIBLE:
            return None
        value = INF if res.kind is Outcome.UNBOUNDED else res.value
        return Fact(self.head_pred, self.head_key[1], value)


def _compiled(program) -> list[CompiledRule]:
    """Compiled rules of ``program``, cached on the (immutable) program."""
    if isinstance(program, Program):
        cache = program.__dict__.get("_compiled_rules")
        if cache is None:
            cache = [CompiledRule(r) for r in program.rules]
            object.__setattr__(program, "_compiled_rules", cache)
        return cache
    return [r if isinstance(r, CompiledRule) else CompiledRule(r) for r in program]


def build_constraint_system(rule: Rule, J: PseudoInterpretation) -> LinearConstraintSystem:
    """``C(r, J)``: the rule's comparisons plus the bounds ``J`` imposes.

    An unsatisfied object or ordinary body atom, or a limit body atom without
    a value in ``J``, contributes the contradiction ``0 < 0``.
    """
    cr = CompiledRule(rule)
    sig = cr.signature(J)
    if sig is None:
        return LinearConstraintSystem(cr.vars, tuple(cr.cmp) + (Constraint((), "<", 0),))
    return cr.system(sig)


def evaluate_rule(rule: Rule | CompiledRule, J: PseudoInterpretation) -> HeadOutcome | None:
    """``hd(r, J)``, or None when ``r`` is not applicable to ``J``."""
    cr = rule if isinstance(rule, CompiledRule) else CompiledRule(rule)
    return cr.evaluate(J)


def tp_step(program, J: PseudoInterpretation) -> PseudoInterpretation:
    """One application of the immediate consequence operator.

    The result is built from the empty interpretation, so it is not
    inflationary: facts of ``J`` no rule rederives are dropped.
    """
    plain: set[Fact] = set()
    limits: dict = {}
    for cr in _compiled(program):
        f = cr.evaluate(J)
        if f is None:
            continue
        if f.pred.is_limit:
            old = limits.get(f.key)
            if old is None or _better(f.pred.kind, f.value, old):
                limits[f.key] = f.value
        else:
            plain.add(f)
    return PseudoInterpretation(plain, limits)


def _better(kind: Kind, new: ExtendedInt, old: ExtendedInt) -> bool:
    if old is INF:
        return False
    if new is INF:
        return True
    return new > old if kind is Kind.MAX else new < old


def is_pseudo_model(program, J: PseudoInterpretation) -> bool:
    return preceq(tp_step(program, J), J)


# -- value propagation graph -----------------------------------------------

@dataclass
class ValuePropagationGraph:
    nodes: list
    weights: dict = field(default_factory=dict)  # (src, dst) -> ExtendedInt

    @property
    def edges(self) -> list:
        return list(self.weights)

    def successors(self, node):
        return [(d, w) for (s, d), w in self.weights.items() if s == node]


def _delta(src_kind: Kind, dst_kind: Kind, opt: ExtendedInt, ell: ExtendedInt) -> ExtendedInt:
    if opt is INF:
        return INF
    if ell is INF:
        return opt
    if src_kind is Kind.MAX:
        return opt - ell if dst_kind is Kind.MAX else -opt - ell
    return -opt + ell if dst_kind is Kind.MIN else opt + ell


def build_vpg(program, J: PseudoInterpretation) -> ValuePropagationGraph:
    """Value propagation graph of ``program`` and ``J``.

    Edges run only between keys that already have a value in ``J``.
    """
    nodes = J.limit_keys()
    present = set(nodes)
    weights: dict = {}
    for cr in _compiled(program):
        if cr.head_key is None or cr.head_key not in present:
            continue
        out = cr.evaluate(J)
        if out is None:
            continue
        for lb in cr.limits:
            if lb.var is None or not cr.head_coeffs.get(lb.var):
                continue
            ell = J.limit_value(*lb.key)
            d = _delta(lb.kind, cr.head_pred.kind, out.value, ell)
            e = (lb.key, cr.head_key)
            old = weights.get(e)
            if old is None or (old is not INF and (d is INF or d > old)):
                weights[e] = d
    return ValuePropagationGraph(nodes, weights)


def positive_cycle_nodes(G: ValuePropagationGraph) -> set:
    """Nodes on a closed walk of positive total weight.

    Inside a strongly connected component every node lies on a closed walk
    through any cycle of the component, so a component is marked as a whole
    when it contains an ``inf`` edge or a cycle whose negated weight is
    negative.
    """
    if not G.weights:
        return set()
    index = {n: i for i, n in enumerate(G.nodes)}
    for s, d in G.weights:
        index.setdefault(s, len(index))
        index.setdefault(d, len(index))
    nodes = list(index)
    n = len(nodes)
    src = [index[s] for s, _ in G.weights]
    dst = [index[d] for _, d in G.weights]
    adj = csr_matrix((np.ones(len(src)), (src, dst)), shape=(n, n))
    _, labels = connected_components(adj, directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        comps.setdefault(int(lab), []).append(i)
    internal: dict[int, list] = {}
    for (s, d), w in G.weights.items():
        i, j = index[s], index[d]
        if labels[i] == labels[j]:
            internal.setdefault(int(labels[i]), []).append((i, j, w))
    out = set()
    for lab, edges in internal.items():
        members = comps[lab]
        if any(w is INF for _, _, w in edges) or _has_positive_cycle(members, edges):
            out.update(nodes[i] for i in members)
    return out


def _has_positive_cycle(members: list[int], edges) -> bool:
    local = {g: k for k, g in enumerate(members)}
    m = len(members)
    biggest = max(abs(w) for _, _, w in edges)
    if m * (biggest + 1) < 2**58:
        w = np.full((m, m), kernels.NO_EDGE, dtype=np.int64)
        for i, j, x in edges:
            a, b = local[i], local[j]
            w[a, b] = min(w[a, b], -x)
        return kernels.has_negative_cycle(w)
    dense: list[list[int | None]] = [[None] * m for _ in range(m)]
    for i, j, x in edges:
        a, b = local[i], local[j]
        if dense[a][b] is None or -x < dense[a][b]:
            dense[a][b] = -x
    return kernels.has_negative_cycle_exact(dense)


# -- the fixpoint loop ------------------------------------------------------

@dataclass
class SaturationResult:
    closure: PseudoInterpretation
    iterations: int
    promoted: list = field(default_factory=list)  # keys set to inf, in order
    rules: int = 0  # size of the complete semi-grounding


def _gate(program: Program) -> None:
    from .analysis import require_stable  # local: analysis imports engine helpers
    require_stable(program)


def run(program, cfg: EngineConfig | None = None) -> SaturationResult:
    """Fixpoint loop of the entailment algorithm for semi-ground programs.

    Raises :class:`DivergenceError` when the iteration budget is exhausted or
    when an interpretation repeats, which only happens on unstable input.
    """
    cfg = cfg or EngineConfig()
    if cfg.enforce_stability_precondition and isinstance(program, Program):
        _gate(program)
    rules = _compiled(program)
    size = getattr(program, "full_size", 0) or len(rules)
    budget = cfg.max_iterations or iteration_bound(size)
    stream = cfg.trace_stream or sys.stderr
    seen: set[PseudoInterpretation] = set()
    promoted_all: list = []
    Jp = PseudoInterpretation()
    it = 0
    while True:
        J = Jp
        G = build_vpg(rules, J)
        promote = sorted(positive_cycle_nodes(G), key=lambda k: (k[0].name, k[1]))
        promote = [k for k in promote if J.limit_value(*k) is not INF]
        if promote:
            limits = J.limits
            for k in promote:
                limits[k] = INF
            J = PseudoInterpretation(J.plain_facts, limits)
            promoted_all.extend(promote)
        Jp = tp_step(rules, J)
        it += 1
        if cfg.trace:
            _trace(stream, it, J, Jp, promote)
        if J == Jp:
            return SaturationResult(J, it, promoted_all, size)
        if it >= budget:
            raise DivergenceError(f"no fixpoint after {it} iterations (budget {budget})", it)
        if Jp in seen:
            raise DivergenceError(
                f"interpretation repeated at iteration {it}; the program is not stable", it)
        seen.add(Jp)


def _trace(stream, it, J, Jp, promote):
    before = {str(f) for f in J.facts()}
    changed = [str(f) for f in Jp.facts() if str(f) not in before]
    rec = {"iteration": it, "changed": changed,
           "promoted": [str(Fact(k[0], k[1], INF)) for k in promote], "facts": len(Jp)}
    stream.write(json.dumps(rec) + "\n")


def saturate(program, cfg: EngineConfig | None = None) -> PseudoInterpretation:
    """The closure of a semi-ground program."""
    return run(program, cfg).closure


def entails(program: Program, alpha: Fact, cfg: EngineConfig | None = None) -> bool:
    """Does ``program`` entail ``alpha``?

    Normalises, checks limit-linearity and (unless disabled) the stability
    gate, semi-grounds with the query's constants, and saturates.
    """
    return prepare_and_run(program, cfg, (alpha,)).closure_satisfies(alpha)


@dataclass
class PipelineResult:
    normalized: Program
    ground: Program
    result: SaturationResult

    def closure_satisfies(self, alpha: Fact) -> bool:
        if alpha.pred not in self.ground.decls:
            return False
        return satisfies(self.result.closure, alpha)


def prepare_and_run(program: Program, cfg: EngineConfig | None = None,
                    extra_facts: Iterable[Fact] = ()) -> PipelineResult:
    from .analysis import require_limit_linear, require_stable
    from .frontend.transforms import normalize, semi_ground
    cfg = cfg or EngineConfig()
    extra = tuple(extra_facts)
    norm = normalize(program)
    require_limit_linear(norm)
    if cfg.enforce_stability_precondition:
        require_stable(norm, extra)
    ground = semi_ground(norm, extra, prune=True)
    inner = EngineConfig(cfg.max_iterations, cfg.trace, False, cfg.trace_stream)
    return PipelineResult(norm, ground, run(ground, inner))
