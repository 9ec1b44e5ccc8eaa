"""Program-to-program transformations.

``validate`` checks the limit-program shape, ``normalize`` establishes the
three standing assumptions (function-free numeric body atoms, one standard
body atom per numeric variable, disjoint rule variables), ``homogenise``
flips min predicates into max ones and ``semi_ground`` instantiates every
variable that is not the numeric argument of a limit body atom.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

from ..core import (Atom, BinOp, Comparison, Const, Fact, Kind, Num,
                    PredicateDecl, Program, Rule, Sort, Term, Var, rule_vars,
                    term_vars)
from ..diagnostics import Diagnostic, at

log = logging.getLogger(__name__)

#: built-in max predicate that holds on every integer once saturated
INT_PRED = PredicateDecl("__I", (Sort.NUM,), Kind.MAX)


# -- validation ------------------------------------------------------------

def validate(program: Program) -> list[Diagnostic]:
    """Every way ``program`` fails to be a limit program (empty if none)."""
    out: list[Diagnostic] = []
    for d in program.decls:
        num_pos = [i for i, s in enumerate(d.sorts) if s is Sort.NUM]
        if d.kind is Kind.OBJECT and num_pos:
            out.append(Diagnostic("decl-shape", f"object predicate {d.name} has a numeric position"))
        elif d.kind is not Kind.OBJECT and num_pos != [d.arity - 1]:
            out.append(Diagnostic(
                "decl-shape",
                f"numeric predicate {d.name} must have exactly one numeric position, the last"))
    for r in program.rules:
        for a in (r.head,) + r.body:
            if not program.has_decl(a.pred.name) or program.decl(a.pred.name) != a.pred:
                out.append(at(r, "undeclared", f"predicate {a.pred.name} is not declared by the program"))
            if len(a.args) != a.pred.arity:
                out.append(at(r, "arity", f"{a.pred.name} expects {a.pred.arity} argument(s)"))
                continue
            for t, s in zip(a.args, a.pred.sorts):
                obj_term = isinstance(t, Const) or (isinstance(t, Var) and t.sort is Sort.OBJ)
                if (s is Sort.OBJ) != obj_term:
                    out.append(at(r, "sort", f"argument {t} of {a.pred.name} has the wrong sort"))
        if r.body or r.comparisons:
            if r.head.pred.kind is Kind.ORDINARY:
                out.append(at(r, "head-kind",
                              f"ordinary numeric predicate {r.head.pred.name} heads a rule with a body"))
        body_vars = {v.name for a in r.body for t in a.args for v in term_vars(t)}
        for name in rule_vars(r):
            if name not in body_vars:
                out.append(at(r, "unsafe", f"variable {name} does not occur in a standard body atom"))
    return out


# -- helpers ---------------------------------------------------------------

def neg(t: Term) -> Term:
    """``-t`` with constant folding and double-negation removal."""
    if isinstance(t, Num):
        return Num(-t.value)
    if isinstance(t, BinOp) and t.op == "*" and isinstance(t.left, Num) and t.left.value == -1:
        return t.right
    return BinOp("*", Num(-1), t)


def substitute(t: Term, sub: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if isinstance(t, BinOp):
        left, right = substitute(t.left, sub), substitute(t.right, sub)
        if left is t.left and right is t.right:
            return t
        return BinOp(t.op, left, right)
    return t


def substitute_atom(a: Atom, sub: dict[str, Term]) -> Atom:
    return Atom(a.pred, tuple(substitute(t, sub) for t in a.args))


def substitute_rule(r: Rule, sub: dict[str, Term]) -> Rule:
    return Rule(
        substitute_atom(r.head, sub),
        tuple(substitute_atom(a, sub) for a in r.body),
        tuple(Comparison(c.op, substitute(c.left, sub), substitute(c.right, sub)) for c in r.comparisons),
        loc=r.loc,
    )


def constants_of(program: Program, extra: tuple[Fact, ...] = ()) -> tuple[list[str], list[int]]:
    """Object and integer constants occurring in ``program`` (and ``extra``),
    each list in first-occurrence order."""
    objs: dict[str, None] = {}
    ints: dict[int, None] = {}

    def walk(t):
        if isinstance(t, Const):
            objs.setdefault(t.name)
        elif isinstance(t, Num):
            ints.setdefault(t.value)
        elif isinstance(t, BinOp):
            walk(t.left)
            walk(t.right)

    for r in program.rules:
        for a in (r.head,) + r.body:
            for t in a.args:
                walk(t)
        for c in r.comparisons:
            walk(c.left)
            walk(c.right)
    for f in extra:
        for o in f.objects:
            objs.setdefault(o)
        if isinstance(f.value, int):
            ints.setdefault(f.value)
    return list(objs), list(ints)


def limit_vars(rule: Rule) -> list[str]:
    """Variables occurring in the numeric argument of a limit body atom."""
    out: dict[str, None] = {}
    for a in rule.body:
        if a.pred.is_limit:
            for v in term_vars(a.numeric_arg):
                out.setdefault(v.name)
    return list(out)


class _Fresh:
    def __init__(self, taken, tag):
        self.taken = set(taken)
        self.tag = tag
        self.n = 0

    def __call__(self, base="M") -> Var:
        while True:
            self.n += 1
            name = f"_{base}{self.tag}_{self.n}"
            if name not in self.taken:
                self.taken.add(name)
                return Var(name, Sort.NUM)


# -- normalisation ---------------------------------------------------------

def _eq(a: Term, b: Term) -> tuple[Comparison, Comparison]:
    return Comparison("<=", a, b), Comparison("<=", b, a)


def _normalize_rule(r: Rule, idx: int) -> tuple[Rule, bool]:
    fresh = _Fresh(rule_vars(r), idx)
    body: list[Atom] = []
    comps = list(r.comparisons)
    rewritten = False
    used_int = False
    int_for: list[Var] = []
    # (a) numeric body arguments become variables
    for a in r.body:
        s = a.numeric_arg
        if isinstance(s, BinOp):
            m = fresh()
            body.append(Atom(a.pred, a.args[:-1] + (m,)))
            comps.extend(_eq(m, s))
            int_for.extend(v for v in term_vars(s) if v not in int_for)
            rewritten = True
        else:
            body.append(a)
    if rewritten:
        # a variable now only in comparisons still needs a standard atom
        bound = {v.name for a in body for t in a.args for v in term_vars(t)}
        for v in int_for:
            if v.name not in bound:
                body.append(Atom(INT_PRED, (v,)))
                bound.add(v.name)
                used_int = True
    # (b) a numeric variable may appear in at most one standard body atom
    seen: set[str] = set()
    out_body: list[Atom] = []
    for a in body:
        s = a.numeric_arg
        if isinstance(s, Var):
            if s.name in seen:
                m2 = fresh()
                out_body.append(Atom(a.pred, a.args[:-1] + (m2,)))
                comps.extend(_eq(s, m2))
                continue
            seen.add(s.name)
        out_body.append(a)
    return Rule(r.head, tuple(out_body), tuple(comps), loc=r.loc), used_int


def _int_rules() -> list[Rule]:
    x = Var("_I", Sort.NUM)
    return [Rule(Atom(INT_PRED, (Num(0),))),
            Rule(Atom(INT_PRED, (BinOp("+", x, Num(1)),)), (Atom(INT_PRED, (x,)),))]


def normalize(program: Program) -> Program:
    """Rewrite ``program`` into the normal form assumed by the engine.

    The result entails the same facts over ``program``'s predicates.  When
    rewriting an arithmetic body argument leaves a variable with no standard
    atom, the built-in max predicate ``__I`` is added together with ``__I(0).`` and ``__I(X + 1) :- __I(X).``;
    its closure value is ``inf``, i.e. it holds on every integer.
    """
    rules: list[Rule] = []
    need_int = False
    has_int = any(r.head.pred == INT_PRED for r in program.rules)
    for i, r in enumerate(program.rules):
        nr, used = _normalize_rule(r, i)
        rules.append(nr)
        need_int |= used
    decls = list(program.decls)
    if need_int and not has_int:
        rules.extend(_int_rules())
        if INT_PRED not in decls:
            decls.append(INT_PRED)
    # (c) pairwise disjoint variables; keep names when already disjoint
    seen: set[str] = set()
    clash = False
    for r in rules:
        names = set(rule_vars(r))
        if names & seen:
            clash = True
            break
        seen |= names
    if clash:
        renamed = []
        for i, r in enumerate(rules):
            sub = {n: Var(f"{n}_{i}", v.sort) for n, v in rule_vars(r).items()}
            renamed.append(substitute_rule(r, sub))
        rules = renamed
    return Program(tuple(decls), tuple(rules))


def is_normal(program: Program) -> bool:
    seen: set[str] = set()
    for r in program.rules:
        names = set(rule_vars(r))
        if names & seen:
            return False
        seen |= names
        counts: dict[str, int] = {}
        for a in r.body:
            s = a.numeric_arg
            if isinstance(s, BinOp):
                return False
            if isinstance(s, Var):
                counts[s.name] = counts.get(s.name, 0) + 1
        if any(c > 1 for c in counts.values()):
            return False
    return True


# -- homogenisation --------------------------------------------------------

def _flip_name(name: str, taken: set[str]) -> str:
    new = name + "'"
    while new in taken:
        new += "'"
    return new


def flipped_decls(program: Program, target: Kind = Kind.MAX) -> dict[str, PredicateDecl]:
    """Map each limit predicate of the opposite kind to its fresh replacement."""
    target = Kind(target)
    source = Kind.MIN if target is Kind.MAX else Kind.MAX
    taken = {d.name for d in program.decls}
    out = {}
    for d in program.decls:
        if d.kind is source:
            name = _flip_name(d.name, taken)
            taken.add(name)
            out[d.name] = PredicateDecl(name, d.sorts, target)
    return out


def homogenise(program: Program, alpha: Fact | None = None,
               target: Kind | str = Kind.MAX) -> tuple[Program, Fact | None]:
    """Replace every limit predicate not of kind ``target`` by a fresh one of
    kind ``target`` with its numeric argument negated.

    Returns the new program and the correspondingly translated query.
    """
    flips = flipped_decls(program, Kind(target))
    if not flips:
        return program, alpha
    rules = []
    for i, r in enumerate(program.rules):
        fresh = _Fresh(rule_vars(r), f"h{i}")
        sub: dict[str, Term] = {}
        owners: set[int] = set()
        for j, a in enumerate(r.body):
            s = a.numeric_arg
            if a.pred.name in flips and isinstance(s, Var) and s.name not in sub:
                m = fresh()
                sub[s.name] = neg(m)
                owners.add(j)
        body = []
        for j, a in enumerate(r.body):
            if j in owners:
                m = neg(sub[a.numeric_arg.name])
                body.append(Atom(flips[a.pred.name], a.args[:-1] + (m,)))
            elif a.pred.name in flips:
                s = substitute(a.numeric_arg, sub)
                body.append(Atom(flips[a.pred.name], tuple(substitute(t, sub) for t in a.args[:-1]) + (neg(s),)))
            else:
                body.append(substitute_atom(a, sub))
        head = substitute_atom(r.head, sub)
        if head.pred.name in flips:
            head = Atom(flips[head.pred.name], head.args[:-1] + (neg(head.numeric_arg),))
        comps = tuple(Comparison(c.op, substitute(c.left, sub), substitute(c.right, sub))
                      for c in r.comparisons)
        rules.append(Rule(head, tuple(body), comps, loc=r.loc))
    decls = tuple(flips.get(d.name, d) for d in program.decls)
    if alpha is not None and alpha.pred.name in flips:
        alpha = Fact(flips[alpha.pred.name], alpha.objects, -alpha.value)
    return Program(decls, tuple(rules)), alpha


# -- semi-grounding --------------------------------------------------------

@dataclass(frozen=True)
class SemiGroundProgram(Program):
    """A program whose rules are all semi-ground.

    ``origin[i]`` is the index of the source rule that rule ``i`` instantiates.
    ``full_size`` is the number of rules of the complete semi-grounding, which
    differs from ``len(rules)`` only when instances were pruned.
    """

    origin: tuple[int, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)
    full_size: int = 0


def is_semi_ground(rule: Rule) -> bool:
    """Every variable is numeric and occurs in a limit body atom."""
    lv = set(limit_vars(rule))
    return all(v.sort is Sort.NUM and n in lv for n, v in rule_vars(rule).items())


def edb_facts(program: Program) -> dict[str, list[Fact]]:
    """Facts of predicates that head no rule with a body, by predicate name."""
    from ..core import atom_to_fact
    derived = {r.head.pred.name for r in program.rules if not r.is_fact}
    out: dict[str, list[Fact]] = {d.name: [] for d in program.decls
                                  if d.name not in derived and not d.is_limit}
    for r in program.rules:
        if r.is_fact and r.head.pred.name in out:
            out[r.head.pred.name].append(atom_to_fact(r.head))
    return out


def _match(atom: Atom, fact: Fact, sub: dict) -> dict | None:
    new = dict(sub)
    vals = [Const(o) for o in fact.objects]
    if fact.value is not None:
        vals.append(Num(fact.value))
    for t, v in zip(atom.args, vals):
        if isinstance(t, Var):
            bound = new.get(t.name)
            if bound is None:
                new[t.name] = v
            elif bound != v:
                return None
        elif t != v:
            return None
    return new


def _edb_bindings(rule: Rule, edb: dict[str, list[Fact]], keep: set[str]):
    """Substitutions satisfying every EDB body atom that can be matched."""
    usable = []
    for a in rule.body:
        if a.pred.name not in edb:
            continue
        if all(isinstance(t, (Const, Num)) or (isinstance(t, Var) and t.name not in keep)
               for t in a.args):
            usable.append(a)
    subs = [{}]
    for a in usable:
        subs = [m for s in subs for f in edb[a.pred.name] if (m := _match(a, f, s)) is not None]
        if not subs:
            break
    return subs


def semi_ground(program: Program, extra_facts: tuple[Fact, ...] = (), prune: bool = False) -> SemiGroundProgram:
    """Instantiate every variable that is not the numeric argument of a limit
    body atom with every sort-compatible constant of the program.

    Constants of ``extra_facts`` (typically the query) join the pool.  With
    ``prune`` set, instances whose body contains a false EDB atom (one over
    a predicate defined by facts alone) are left out; they can never fire.
    """
    objs, ints = constants_of(program, tuple(extra_facts))
    edb = edb_facts(program) if prune else {}
    rules: list[Rule] = []
    origin: list[int] = []
    diags: list[Diagnostic] = []
    full = 0
    for i, r in enumerate(program.rules):
        keep = set(limit_vars(r))
        todo = [v for n, v in rule_vars(r).items() if n not in keep]
        if not todo:
            rules.append(r)
            origin.append(i)
            full += 1
            continue
        pools = {}
        for v in todo:
            pools[v.name] = [Const(o) for o in objs] if v.sort is Sort.OBJ else [Num(k) for k in ints]
        if any(not p for p in pools.values()):
            diags.append(at(r, "empty-instantiation",
                            "rule has a variable with no constant to instantiate it; dropped",
                            severity="warning"))
            log.warning("rule %d has no instances", i)
            continue
        full += math.prod(len(p) for p in pools.values())
        for pre in (_edb_bindings(r, edb, keep) if prune else [{}]):
            rest = [n for n in pools if n not in pre]
            for combo in itertools.product(*(pools[n] for n in rest)):
                sub = dict(pre)
                sub.update(zip(rest, combo))
                rules.append(substitute_rule(r, sub))
                origin.append(i)
    return SemiGroundProgram(program.decls, tuple(rules), origin=tuple(origin),
                             diagnostics=tuple(diags), full_size=full)
