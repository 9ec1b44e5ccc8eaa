"""Static checks: predicate classification, limit-linearity, type consistency.

Type consistency is decided on the normalised program without semi-grounding
it.  A variable that is not the numeric argument of a limit body atom would
be replaced by an integer constant, so the coefficient of a limit variable is
a polynomial over such variables; what matters is which signs that
polynomial can take over the constant pool.  Single products are handled by
:func:`sign_possibilities` (parity and the signs present in the pool);
sums of several products fall back to enumerating the pool.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field

from .arith import Poly, coefficient_of, format_poly, polynomial
from .core import BinOp, Fact, Kind, Num, Program, Rule, Term, Var, term_vars
from .diagnostics import Diagnostic, at
from .errors import NotLimitLinearError, StabilityGateError
from .frontend.printer import format_term
from .frontend.transforms import constants_of, limit_vars, normalize

__all__ = [
    "Sign", "classify_predicates", "check_limit_linear", "sign_possibilities",
    "check_type_consistent", "TypeViolation", "AnalysisReport", "analyze",
    "require_limit_linear", "require_stable",
]


class Sign(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    ZERO = "0"

    def __str__(self):
        return self.value


def classify_predicates(program: Program) -> dict[str, str]:
    """``EDB``, ``IDB`` or ``builtin`` for every declared predicate."""
    idb = {r.head.pred.name for r in program.rules if not r.is_fact}
    out = {}
    for d in program.decls:
        if d.builtin:
            out[d.name] = "builtin"
        else:
            out[d.name] = "IDB" if d.name in idb else "EDB"
    return out


# -- limit-linearity -------------------------------------------------------

def _numeric_terms(rule: Rule):
    """``(role, term)`` for every numeric term of ``rule``."""
    if rule.head.pred.is_numeric:
        yield "head", rule.head.numeric_arg
    for a in rule.body:
        if a.pred.is_numeric:
            yield "body", a.numeric_arg
    for c in rule.comparisons:
        yield "left", c.left
        yield "right", c.right


def check_limit_linear(program: Program) -> list[Diagnostic]:
    """Violations of limit-linearity (empty when the program is limit-linear)."""
    out = []
    for r in program.rules:
        lv = set(limit_vars(r))
        for _, t in _numeric_terms(r):
            for mono in polynomial(t):
                hits = [v for v in mono if v in lv]
                if len(hits) > 1:
                    out.append(at(r, "not-limit-linear",
                                  f"term {format_term(t)} multiplies limit variables {' * '.join(hits)}"))
                    break
    return out


def require_limit_linear(program: Program) -> None:
    bad = check_limit_linear(program)
    if bad:
        raise NotLimitLinearError(bad[0].message, bad)


# -- sign analysis ---------------------------------------------------------

def _product_parts(t: Term) -> tuple[int, Counter]:
    if isinstance(t, Num):
        return t.value, Counter()
    if isinstance(t, Var):
        return 1, Counter([t.name])
    if isinstance(t, BinOp) and t.op == "*":
        k1, c1 = _product_parts(t.left)
        k2, c2 = _product_parts(t.right)
        return k1 * k2, c1 + c2
    raise ValueError(f"{t} is not a product of integers and variables")


def _sign(k: int) -> Sign:
    return Sign.ZERO if k == 0 else (Sign.POSITIVE if k > 0 else Sign.NEGATIVE)


def _flip(s: Sign) -> Sign:
    return {Sign.POSITIVE: Sign.NEGATIVE, Sign.NEGATIVE: Sign.POSITIVE}.get(s, s)


def sign_possibilities(t: Term | tuple[int, Counter], pool) -> set[Sign]:
    """Signs ``t`` can take when each variable is replaced by a pool constant.

    ``t`` is a product of integers and variables (or its ``(k, counts)``
    decomposition).  An empty pool with variables present gives the empty
    set: no substitution exists.
    """
    k, counts = t if isinstance(t, tuple) else _product_parts(t)
    pool = set(pool)
    if not counts:
        return {_sign(k)}
    if not pool:
        return set()
    out: set[Sign] = set()
    if k == 0 or 0 in pool:
        out.add(Sign.ZERO)
    if k == 0:
        return out
    has_pos = any(c > 0 for c in pool)
    has_neg = any(c < 0 for c in pool)
    if not (has_pos or has_neg):
        return out
    base = _sign(k)
    odd = sum(1 for n in counts.values() if n % 2)
    if odd == 0:
        out.add(base)
    elif has_pos and has_neg:
        out |= {Sign.POSITIVE, Sign.NEGATIVE}
    elif has_pos:
        out.add(base)
    else:
        out.add(_flip(base) if odd % 2 else base)
    return out


def poly_signs(poly: Poly, pool) -> set[Sign]:
    """Achievable signs of a polynomial over non-limit variables."""
    if len(poly) <= 1:
        if not poly:
            return {Sign.ZERO}
        (mono, c), = poly.items()
        return sign_possibilities((c, Counter(mono)), pool)
    names = sorted({v for m in poly for v in m})
    pool = sorted(set(pool))
    if not names:
        return {_sign(sum(poly.values()))}
    out = set()
    for combo in itertools.product(pool, repeat=len(names)):
        env = dict(zip(names, combo))
        total = 0
        for mono, c in poly.items():
            p = c
            for v in mono:
                p *= env[v]
            total += p
        out.add(_sign(total))
        if len(out) == 3:
            break
    return out


# -- type consistency ------------------------------------------------------

@dataclass(frozen=True)
class TypeViolation:
    rule_index: int
    bullet: int  # 1 coefficients, 2 head polarity, 3 comparison polarity
    term: str
    var: str
    signs: tuple[str, ...]
    message: str
    loc: tuple[int, int] | None = field(default=None, compare=False)

    def to_diagnostic(self) -> Diagnostic:
        code = {1: "type-coefficient", 2: "type-head", 3: "type-comparison"}[self.bullet]
        line, col = self.loc if self.loc else (None, None)
        return Diagnostic(code, self.message, line, col)


def _opposite(kind: Kind) -> Kind:
    return Kind.MIN if kind is Kind.MAX else Kind.MAX


def check_type_consistent(program: Program, extra_facts: tuple[Fact, ...] = ()) -> list[TypeViolation]:
    """Type-consistency violations of the normalised program.

    Integer constants of ``extra_facts`` (the query) join the pool, as they
    do for semi-grounding.
    """
    norm = normalize(program)
    _, pool = constants_of(norm, tuple(extra_facts))
    out: list[TypeViolation] = []
    for idx, r in enumerate(norm.rules):
        kinds: dict[str, Kind] = {}
        for a in r.body:
            if a.pred.is_limit and isinstance(a.numeric_arg, Var):
                kinds[a.numeric_arg.name] = a.pred.kind
        checks = []
        if r.head.pred.is_limit:
            checks.append(("head", r.head.numeric_arg))
        for c in r.comparisons:
            checks.append(("left", c.left))
            checks.append(("right", c.right))
        for role, t in checks:
            poly = polynomial(t)
            shown = format_term(t)
            for v in dict.fromkeys(x.name for x in term_vars(t)):
                if v not in kinds:
                    continue
                coeff = coefficient_of(poly, v)
                if not coeff:
                    out.append(TypeViolation(
                        idx, 1, shown, v, ("0",),
                        f"coefficient of {v} in {shown} simplifies to 0", r.loc))
                    continue
                signs = poly_signs(coeff, pool) - {Sign.ZERO}
                for s in sorted(signs, key=lambda x: x.value):
                    need = _required(role, s, r.head.pred.kind)
                    if kinds[v] is not need:
                        where = {"head": "the head", "left": "the left of a comparison",
                                 "right": "the right of a comparison"}[role]
                        out.append(TypeViolation(
                            idx, 2 if role == "head" else 3, shown, v, (str(s),),
                            f"{v} occurs with {'positive' if s is Sign.POSITIVE else 'negative'} "
                            f"coefficient {format_poly(coeff)} on {where} ({shown}) but its limit "
                            f"body atom is {kinds[v].value}, not {need.value}",
                            r.loc))
    return out


def _required(role: str, sign: Sign, head_kind: Kind) -> Kind:
    pos = sign is Sign.POSITIVE
    if role == "head":
        return head_kind if pos else _opposite(head_kind)
    if role == "left":
        return Kind.MIN if pos else Kind.MAX
    return Kind.MAX if pos else Kind.MIN


def require_stable(program: Program, extra_facts: tuple[Fact, ...] = ()) -> None:
    """Raise :class:`StabilityGateError` unless the program is type-consistent."""
    bad = check_type_consistent(program, extra_facts)
    if bad:
        raise StabilityGateError(
            f"program is not type-consistent: {bad[0].message}",
            [v.to_diagnostic() for v in bad])


# -- combined report -------------------------------------------------------

@dataclass
class AnalysisReport:
    edb_idb: dict[str, str]
    linearity: list[Diagnostic]
    type_violations: list[TypeViolation]

    @property
    def limit_linear(self) -> bool:
        return not self.linearity

    @property
    def type_consistent(self) -> bool:
        return self.limit_linear and not self.type_violations

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return self.linearity + [v.to_diagnostic() for v in self.type_violations]


def analyze(program: Program) -> AnalysisReport:
    norm = normalize(program)
    lin = check_limit_linear(norm)
    tv = [] if lin else check_type_consistent(norm)
    return AnalysisReport(classify_predicates(program), lin, tv)
