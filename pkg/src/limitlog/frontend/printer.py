"""Render syntax trees back to the ``.lgl`` text format."""

from __future__ import annotations

from ..core import (INF, Atom, BinOp, Comparison, Const, Fact, Kind,
                    PredicateDecl, Program, Rule, Sort, Term)

_PREC = {"+": 1, "-": 1, "*": 2}


def format_term(t: Term, ctx: int = 0, right: bool = False) -> str:
    if isinstance(t, BinOp):
        p = _PREC[t.op]
        s = f"{format_term(t.left, p)} {t.op} {format_term(t.right, p, right=True)}"
        # operators are left-associative, so an equal-precedence right operand
        # keeps its parentheses to preserve the tree shape
        if p < ctx or (right and p == ctx):
            return f"({s})"
        return s
    return str(t)


def format_atom(a: Atom) -> str:
    if not a.args:
        return a.pred.name
    return f"{a.pred.name}({', '.join(format_term(t) for t in a.args)})"


def format_comparison(c: Comparison) -> str:
    return f"({format_term(c.left)} {c.op} {format_term(c.right)})"


def format_rule(r: Rule) -> str:
    head = format_atom(r.head)
    if r.is_fact:
        return head + "."
    body = [format_atom(a) for a in r.body] + [format_comparison(c) for c in r.comparisons]
    return f"{head} :- {', '.join(body)}."


def format_decl(d: PredicateDecl) -> str:
    sorts = []
    for i, s in enumerate(d.sorts):
        if s is Sort.OBJ:
            sorts.append("obj")
        elif d.kind in (Kind.MIN, Kind.MAX) and i == d.arity - 1:
            sorts.append(f"{d.kind.value} int")
        else:
            sorts.append("int")
    if not sorts:
        return f"pred {d.name}."
    return f"pred {d.name}({', '.join(sorts)})."


def format_program(p: Program) -> str:
    lines = [format_decl(d) for d in p.decls]
    if p.decls and p.rules:
        lines.append("")
    lines += [format_rule(r) for r in p.rules]
    return "\n".join(lines) + "\n"


def format_value(v) -> str:
    return "inf" if v is INF else str(v)


def format_fact(f: Fact) -> str:
    args = list(f.objects)
    if f.value is not None:
        args.append(format_value(f.value))
    if not args:
        return f.pred.name
    return f"{f.pred.name}({', '.join(args)})"
