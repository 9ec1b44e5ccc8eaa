"""Polynomial and linear views of numeric terms.

A polynomial maps a monomial (sorted tuple of variable names, repeats for
powers) to its integer coefficient; zero coefficients are never stored.
"""

from __future__ import annotations

from collections import Counter

from .core import BinOp, Const, Num, Term, Var
from .errors import ContractError, SortError

Monomial = tuple[str, ...]
Poly = dict[Monomial, int]


class NonLinearError(ContractError):
    """A term has a product of two variables where a linear term was needed."""


def _add(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2))
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def polynomial(term: Term) -> Poly:
    """Fully expanded form of ``term``."""
    if isinstance(term, Num):
        return {(): term.value} if term.value else {}
    if isinstance(term, Var):
        return {(term.name,): 1}
    if isinstance(term, BinOp):
        left = polynomial(term.left)
        right = polynomial(term.right)
        if term.op == "+":
            return _add(left, right)
        if term.op == "-":
            return _add(left, right, -1)
        return _mul(left, right)
    if isinstance(term, Const):
        raise SortError(f"object constant {term} in a numeric term")
    raise TypeError(f"not a term: {term!r}")


def coefficient_of(poly: Poly, var: str) -> Poly:
    """Coefficient polynomial of ``var`` assuming ``poly`` is degree <= 1 in it."""
    out: Poly = {}
    for m, c in poly.items():
        n = Counter(m)[var]
        if n == 1:
            rest = list(m)
            rest.remove(var)
            out[tuple(rest)] = out.get(tuple(rest), 0) + c
        elif n > 1:
            raise NonLinearError(f"{var} occurs with degree {n}")
    return {m: c for m, c in out.items() if c}


def linear_form(term: Term) -> tuple[int, dict[str, int]]:
    """``(constant, {var: coefficient})`` for a term linear in its variables.

    Zero coefficients are dropped, so ``X - X`` has no variables.
    """
    const = 0
    coeffs: dict[str, int] = {}
    for m, c in polynomial(term).items():
        if not m:
            const = c
        elif len(m) == 1:
            coeffs[m[0]] = c
        else:
            raise NonLinearError(f"product of variables {' * '.join(m)} is not linear")
    return const, coeffs


def format_poly(poly: Poly) -> str:
    if not poly:
        return "0"
    parts = []
    for m, c in sorted(poly.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if not m:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(m))
        else:
            parts.append(f"{c}*" + "*".join(m))
    return " + ".join(parts)
