"""Exact linear integer arithmetic for the small systems rules produce.

A system is a conjunction of ``sum(c_i * x_i) REL bound`` with integer data
and ``REL`` one of ``<`` or ``<=``.  Feasibility and optimisation go through
an exact two-phase simplex over rationals (``gmpy2.mpq`` when available) followed by
branch-and-bound.  Unboundedness is decided on the rational relaxation once
an integer point is known to exist: for rational data a feasible integer
program is unbounded exactly when its relaxation is.

Branch-and-bound alone need not terminate when the relaxation is unbounded
and holds no lattice point, so every variable the relaxation leaves
unbounded is confined to ``|x_i| <= M``, where ``M`` is Papadimitriou's bound on the size of some
integer solution (and of some optimal one, when an optimum exists).  The box
never changes an answer; it only caps the search.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import math
from dataclasses import dataclass, field
try:  # gmpy2's rationals are exact and far faster than the stdlib ones
    from gmpy2 import mpq as Fraction
except ImportError:  # pragma: no cover
    from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .arith import linear_form
from .core import Comparison

__all__ = [
    "Constraint", "LinearConstraintSystem", "Objective", "Outcome",
    "SolveOutcome", "check_feasible", "optimize", "brute_force_box",
    "from_comparisons",
]


@dataclass(frozen=True)
class Constraint:
    """``sum(coeff * var) REL bound``."""

    coeffs: tuple[tuple[str, int], ...]
    rel: str
    bound: int

    def __post_init__(self):
        if self.rel not in ("<", "<="):
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple((v, c) for v, c in self.coeffs if c))

    @classmethod
    def of(cls, coeffs: Mapping[str, int], rel: str, bound: int) -> "Constraint":
        return cls(tuple(coeffs.items()), rel, bound)

    def lhs(self, env: Mapping[str, int]) -> int:
        return sum(c * env[v] for v, c in self.coeffs)

    def holds(self, env: Mapping[str, int]) -> bool:
        s = self.lhs(env)
        return s < self.bound if self.rel == "<" else s <= self.bound

    def as_le(self) -> tuple[dict[str, int], int]:
        """Equivalent non-strict form over the integers, tightened by the gcd."""
        coeffs = dict(self.coeffs)
        bound = self.bound - 1 if self.rel == "<" else self.bound
        g = math.gcd(*coeffs.values()) if coeffs else 0
        if g > 1:
            coeffs = {v: c // g for v, c in coeffs.items()}
            bound = bound // g  # floor division tightens correctly for negatives
        return coeffs, bound

    def __str__(self):
        lhs = " + ".join(f"{c}*{v}" for v, c in self.coeffs) or "0"
        return f"{lhs} {self.rel} {self.bound}"


@dataclass(frozen=True)
class LinearConstraintSystem:
    vars: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        known = set(self.vars)
        for c in self.constraints:
            for v, _ in c.coeffs:
                if v not in known:
                    raise ValueError(f"constraint {c} uses undeclared variable {v}")

    def holds(self, env: Mapping[str, int]) -> bool:
        return all(c.holds(env) for c in self.constraints)

    def with_constraints(self, extra: Iterable[Constraint]) -> "LinearConstraintSystem":
        return LinearConstraintSystem(self.vars, self.constraints + tuple(extra))

    def __str__(self):
        return " & ".join(str(c) for c in self.constraints) or "true"


class Direction(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Objective:
    direction: Direction
    coeffs: tuple[tuple[str, int], ...] = ()
    const: int = 0

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "coeffs", tuple((v, c) for v, c in dict(self.coeffs).items() if c))

    @classmethod
    def of(cls, direction, coeffs: Mapping[str, int], const: int = 0) -> "Objective":
        return cls(Direction(direction), tuple(coeffs.items()), const)

    @property
    def maximize(self) -> bool:
        return self.direction is Direction.MAX

    def value(self, env: Mapping[str, int]) -> int:
        return self.const + sum(c * env[v] for v, c in self.coeffs)


class Outcome(enum.Enum):
    INFEASIBLE = "infeasible"
    FEASIBLE = "feasible"
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SolveOutcome:
    kind: Outcome
    value: int | None = None
    witness: dict[str, int] | None = field(default=None, compare=False)

    @property
    def feasible(self) -> bool:
        return self.kind is not Outcome.INFEASIBLE


INFEASIBLE = SolveOutcome(Outcome.INFEASIBLE)


def from_comparisons(comparisons: Iterable[Comparison], extra_vars: Iterable[str] = ()) -> LinearConstraintSystem:
    """Turn ``left OP right`` comparisons into ``(left - right) OP 0`` rows."""
    names: dict[str, None] = dict.fromkeys(extra_vars)
    rows = []
    for c in comparisons:
        lc, lv = linear_form(c.left)
        rc, rv = linear_form(c.right)
        coeffs = dict(lv)
        for v, k in rv.items():
            coeffs[v] = coeffs.get(v, 0) - k
        for v in list(lv) + list(rv):
            names.setdefault(v)
        rows.append(Constraint.of({v: k for v, k in coeffs.items() if k}, c.op, rc - lc))
    return LinearConstraintSystem(tuple(names), tuple(rows))


# -- exact simplex ----------------------------------------------------------

def _pivot(T: list[list[Fraction]], r: int, c: int, z: list[Fraction] | None = None) -> list | None:
    row = T[r]
    p = row[c]
    if p != 1:
        T[r] = row = [x / p if x else x for x in row]
    nz = [(k, b) for k, b in enumerate(row) if b]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for k, b in nz:
                    other[k] -= f * b
    if z is not None and z[c]:
        f = z[c]
        for k, b in nz:
            z[k] -= f * b
    return z


def _run(T, basis, cost, allowed) -> str:
    """Maximise ``cost`` over tableau ``T`` with Bland's rule."""
    width = len(T[0]) if T else len(cost) + 1
    z = list(cost) + [Fraction(0)] * (width - len(cost))
    for i, bv in enumerate(basis):
        if cost[bv]:
            f = cost[bv]
            for k, b in enumerate(T[i]):
                if b:
                    z[k] -= f * b
    allowed = sorted(allowed)
    while True:
        enter = next((j for j in allowed if z[j] > 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        z = _pivot(T, best[1], enter, z)
        basis[best[1]] = enter


def _lp(rows: list[tuple[list[int], int]], n: int, c: list[int] | None):
    """Maximise ``c @ x`` subject to ``a @ x <= b`` for every ``(a, b)``, ``x`` free.

    Returns ``("infeasible" | "unbounded" | "optimal", x, value)``.
    """
    m = len(rows)
    nx = 2 * n  # x = xp - xn
    real = nx + m
    art = [i for i, (_, b) in enumerate(rows) if b < 0]
    ncols = real + len(art)
    T: list[list[Fraction]] = []
    basis: list[int] = []
    zero = Fraction(0)
    for i, (a, b) in enumerate(rows):
        row = [zero] * (ncols + 1)
        flip = -1 if b < 0 else 1
        for j, v in enumerate(a):
            if v:
                row[j] = Fraction(flip * v)
                row[n + j] = Fraction(-flip * v)
        row[nx + i] = Fraction(flip)
        row[-1] = Fraction(flip * b)
        T.append(row)
        basis.append(nx + i)
    for k, i in enumerate(art):
        T[i][real + k] = Fraction(1)
        basis[i] = real + k
    if art:
        cost1 = [zero] * ncols
        for k in range(len(art)):
            cost1[real + k] = Fraction(-1)
        _run(T, basis, cost1, range(ncols))
        if any(T[i][-1] > 0 for i, bv in enumerate(basis) if bv >= real):
            return "infeasible", None, None
        for i in range(len(T) - 1, -1, -1):
            if basis[i] >= real:
                col = next((j for j in range(real) if T[i][j] != 0), None)
                if col is None:
                    del T[i]
                    del basis[i]
                else:
                    _pivot(T, i, col)
                    basis[i] = col
        T = [row[:real] + row[-1:] for row in T]
    cost = [zero] * real
    if c is not None:
        for j, v in enumerate(c):
            cost[j] = Fraction(v)
            cost[n + j] = Fraction(-v)
    status = _run(T, basis, cost, range(real))
    vals = [zero] * real
    for i, bv in enumerate(basis):
        vals[bv] = T[i][-1]
    x = [vals[j] - vals[n + j] for j in range(n)]
    if status == "unbounded":
        return "unbounded", x, None
    value = sum(Fraction(v) * xi for v, xi in zip(c, x)) if c is not None else zero
    return "optimal", x, value


# -- integer layer ----------------------------------------------------------

class _Prepared:
    """Rows in ``a @ x <= b`` form, or a ground verdict."""

    def __init__(self, system: LinearConstraintSystem):
        self.vars = list(system.vars)
        index = {v: i for i, v in enumerate(self.vars)}
        self.rows: list[tuple[list[int], int]] = []
        self.contradiction = False
        for con in system.constraints:
            coeffs, bound = con.as_le()
            if not coeffs:
                if bound < 0:
                    self.contradiction = True
                continue
            a = [0] * len(self.vars)
            for v, k in coeffs.items():
                a[index[v]] = k
            self.rows.append((a, bound))

    def intervals(self):
        """Per-variable ``[lo, hi]`` when every row has one variable, else None."""
        lo: list[int | None] = [None] * len(self.vars)
        hi: list[int | None] = [None] * len(self.vars)
        for a, b in self.rows:
            nz = [j for j, v in enumerate(a) if v]
            if len(nz) != 1:
                return None
            j = nz[0]
            k = a[j]
            if k > 0:
                h = b // k
                hi[j] = h if hi[j] is None else min(hi[j], h)
            else:
                l = -(b // -k)  # ceil(b / k) for k < 0
                lo[j] = l if lo[j] is None else max(lo[j], l)
        return lo, hi

    def box(self, obj: list[int] | None) -> int:
        n = len(self.vars)
        m = len(self.rows) + (1 if obj else 0)
        a = max([abs(x) for r in self.rows for x in r[0]] + [abs(r[1]) for r in self.rows]
                + [abs(x) for x in (obj or ())] + [1])
        return (n + 1) * ((m + 1) * a) ** (2 * m + 3)


def _witness(vars_, x) -> dict[str, int]:
    return {v: int(xi) for v, xi in zip(vars_, x)}


def _unbounded_vars(prep: _Prepared) -> list[int]:
    """Variables the LP relaxation does not bound in both directions."""
    n = len(prep.vars)
    out = []
    for j in range(n):
        for sign in (1, -1):
            e = [0] * n
            e[j] = sign
            if _lp(prep.rows, n, e)[0] == "unbounded":
                out.append(j)
                break
    return out


def _branch_and_bound(prep: _Prepared, c: list[int] | None, box: int):
    """Best integer point for ``c`` (or any point if ``c`` is None).

    Variables the relaxation leaves unbounded are confined to ``[-box, box]``,
    which keeps the search finite without losing solutions.
    """
    n = len(prep.vars)
    base = list(prep.rows)
    for j in _unbounded_vars(prep):
        e = [0] * n
        e[j] = 1
        base.append((e, box))
        base.append(([-x for x in e], box))
    g = math.gcd(*c) if c else 1
    best_val = None
    best_x = None
    # best-first on the relaxation bound; plain depth-first for feasibility
    heap: list = []
    counter = itertools.count()

    def push(extra):
        status, x, val = _lp(base + extra, n, c)
        if status == "infeasible":
            return
        # ties on the bound go to the deeper node, which finds incumbents early
        key = (-val, -len(extra)) if c is not None else (-next(counter), 0)
        heapq.heappush(heap, (key, next(counter), extra, x, val))

    if c is not None:
        status, _, val = _lp(base, n, c)
        if status == "infeasible":
            return None, None
        # c @ x <= g * floor(val / g) holds for every integer point
        base.append((list(c), g * int(math.floor(val / g))))
    push([])
    while heap:
        _, _, extra, x, val = heapq.heappop(heap)
        # c has integer entries, so c @ x is a multiple of their gcd
        if c is not None and best_val is not None and g * math.floor(val / g) <= best_val:
            continue
        fracs = [j for j, xi in enumerate(x) if xi.denominator != 1]
        if not fracs:
            if c is None:
                return x, None
            best_val, best_x = int(val), x
            continue
        frac = max(fracs, key=lambda j: (min(x[j] - math.floor(x[j]), math.ceil(x[j]) - x[j]), -j))
        fl = int(math.floor(x[frac]))
        push(extra + [([1 if k == frac else 0 for k in range(n)], fl)])
        push(extra + [([-1 if k == frac else 0 for k in range(n)], -(fl + 1))])
    if best_x is None:
        return None, None
    return best_x, best_val


def check_feasible(system: LinearConstraintSystem) -> SolveOutcome:
    """Feasible (with a witness) or infeasible over the integers."""
    prep = _Prepared(system)
    if prep.contradiction:
        return INFEASIBLE
    if not prep.rows:
        return SolveOutcome(Outcome.FEASIBLE, witness={v: 0 for v in prep.vars})
    iv = prep.intervals()
    if iv is not None:
        lo, hi = iv
        w = {}
        for v, l, h in zip(prep.vars, lo, hi):
            if l is not None and h is not None and l > h:
                return INFEASIBLE
            w[v] = l if l is not None else (h if h is not None and h < 0 else 0)
        return SolveOutcome(Outcome.FEASIBLE, witness=w)
    x, _ = _branch_and_bound(prep, None, prep.box(None))
    if x is None:
        return INFEASIBLE
    return SolveOutcome(Outcome.FEASIBLE, witness=_witness(prep.vars, x))


def optimize(system: LinearConstraintSystem, objective: Objective) -> SolveOutcome:
    """Exact integer optimum of ``objective`` over ``system``."""
    for v, _ in objective.coeffs:
        if v not in system.vars:
            raise ValueError(f"objective uses undeclared variable {v}")
    feas = check_feasible(system)
    if not feas.feasible:
        return INFEASIBLE
    prep = _Prepared(system)
    sign = 1 if objective.maximize else -1
    coeffs = dict(objective.coeffs)
    c = [sign * coeffs.get(v, 0) for v in prep.vars]
    if not any(c):
        return SolveOutcome(Outcome.OPTIMAL, objective.const, feas.witness)
    iv = prep.intervals()
    if iv is not None:
        w = {}
        for v, cj, l, h in zip(prep.vars, c, *iv):
            if cj > 0:
                if h is None:
                    return SolveOutcome(Outcome.UNBOUNDED)
                w[v] = h
            elif cj < 0:
                if l is None:
                    return SolveOutcome(Outcome.UNBOUNDED)
                w[v] = l
            else:
                w[v] = feas.witness[v]
        return SolveOutcome(Outcome.OPTIMAL, objective.value(w), w)
    status, _, _ = _lp(prep.rows, len(prep.vars), c)
    if status == "unbounded":
        return SolveOutcome(Outcome.UNBOUNDED)
    x, _ = _branch_and_bound(prep, c, prep.box(c))
    w = _witness(prep.vars, x)
    return SolveOutcome(Outcome.OPTIMAL, objective.value(w), w)


# -- brute-force oracle -----------------------------------------------------

def brute_force_box(system: LinearConstraintSystem, objective: Objective | None, bound: int) -> SolveOutcome:
    """Exhaustive search over ``[-bound, bound]^n``; a test oracle only."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    prep = _Prepared(system)
    if prep.contradiction:
        return INFEASIBLE
    n = len(prep.vars)
    sign = 1
    c = [0] * n
    if objective is not None:
        sign = 1 if objective.maximize else -1
        coeffs = dict(objective.coeffs)
        c = [coeffs.get(v, 0) for v in prep.vars]
    biggest = max([abs(x) for r in prep.rows for x in r[0]] + [abs(x) for x in c] + [1])
    limit = max([abs(r[1]) for r in prep.rows] + [0])
    if (n + 1) * biggest * max(bound, 1) < 2**62 and limit < 2**62:
        a = np.array([r[0] for r in prep.rows], dtype=np.int64).reshape(len(prep.rows), n)
        b = np.array([r[1] for r in prep.rows], dtype=np.int64)
        found, best, x = kernels.box_scan(a, b, np.array(c, dtype=np.int64), bound, sign > 0)
        w = {v: int(xi) for v, xi in zip(prep.vars, x)}
    else:  # exact but slow path for oversized data
        found, best, w = False, 0, {}
        for pt in itertools.product(range(-bound, bound + 1), repeat=n):
            if all(sum(k * p for k, p in zip(a_, pt)) <= b_ for a_, b_ in prep.rows):
                v = sum(k * p for k, p in zip(c, pt))
                if not found or sign * v > sign * best:
                    found, best, w = True, v, dict(zip(prep.vars, pt))
    if not found:
        return INFEASIBLE
    if objective is None:
        return SolveOutcome(Outcome.FEASIBLE, witness=w)
    return SolveOutcome(Outcome.OPTIMAL, objective.value(w), w)
