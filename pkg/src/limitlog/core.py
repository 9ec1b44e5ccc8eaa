"""Syntax trees, ground facts, pseudo-interpretations and their order.

Everything here is an immutable value.  Integers are Python ints throughout
(arbitrary precision); the single symbol :data:`INF` extends them upward and
means "every integer" for both min and max predicates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .errors import SortError

__all__ = [
    "INF", "Infinity", "ExtendedInt", "Sort", "Kind", "PredicateDecl",
    "Const", "Var", "Num", "BinOp", "Term", "Atom", "Comparison", "Rule",
    "Program", "Fact", "PseudoInterpretation", "satisfies", "preceq",
    "join_fact", "term_vars", "eval_term", "is_ground", "rule_vars",
    "atom_to_fact", "check_fact",
]


class Infinity:
    """The value larger than every integer.

    Only the operations the fixpoint machinery needs are defined:
    ``k < INF``, ``INF + k == INF`` and ``INF - k == INF``.  Anything else
    (negation, ``k - INF``) has no meaning here and raises.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self):
        return hash("limitlog.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        if isinstance(other, (int, Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (int, Infinity)):
            return other is self
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (int, Infinity)):
            return other is not self
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (int, Infinity)):
            return True
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        raise ArithmeticError("inf - inf is undefined")

    def __rsub__(self, other):
        raise ArithmeticError("k - inf is undefined")

    def __neg__(self):
        raise ArithmeticError("-inf is not representable")


INF = Infinity()
ExtendedInt = Union[int, Infinity]


class Sort(enum.Enum):
    OBJ = "obj"
    NUM = "int"


class Kind(enum.Enum):
    OBJECT = "object"
    ORDINARY = "ordinary"
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    sorts: tuple[Sort, ...]
    kind: Kind

    @property
    def arity(self) -> int:
        return len(self.sorts)

    @property
    def is_limit(self) -> bool:
        return self.kind in (Kind.MIN, Kind.MAX)

    @property
    def is_numeric(self) -> bool:
        return self.kind is not Kind.OBJECT

    @property
    def n_objects(self) -> int:
        """Number of object positions, under the last-position-numeric shape."""
        return self.arity - 1 if self.is_numeric else self.arity

    @property
    def builtin(self) -> bool:
        return self.name.startswith("__")

    @staticmethod
    def make(name: str, n_objects: int, kind: Kind | str) -> "PredicateDecl":
        """Build a well-shaped declaration: objects first, numeric last."""
        kind = Kind(kind)
        sorts = (Sort.OBJ,) * n_objects
        if kind is not Kind.OBJECT:
            sorts += (Sort.NUM,)
        return PredicateDecl(name, sorts, kind)


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    """Object constant."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort = Sort.NUM

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of "+", "-", "*"
    left: "Term"
    right: "Term"

    def __post_init__(self):
        if self.op not in ("+", "-", "*"):
            raise ValueError(f"unknown arithmetic operator {self.op!r}")


Term = Union[Const, Var, Num, BinOp]


def term_vars(term: Term) -> Iterator[Var]:
    """Variables of ``term`` in left-to-right order (with repeats)."""
    if isinstance(term, Var):
        yield term
    elif isinstance(term, BinOp):
        yield from term_vars(term.left)
        yield from term_vars(term.right)


def is_ground(term: Term) -> bool:
    return next(term_vars(term), None) is None


def eval_term(term: Term, env: Mapping[str, int] | None = None) -> int:
    """Evaluate a numeric term; variables are looked up by name in ``env``."""
    if isinstance(term, Num):
        return term.value
    if isinstance(term, Var):
        if env is None or term.name not in env:
            raise ValueError(f"unbound variable {term.name}")
        return env[term.name]
    if isinstance(term, BinOp):
        a = eval_term(term.left, env)
        b = eval_term(term.right, env)
        if term.op == "+":
            return a + b
        if term.op == "-":
            return a - b
        return a * b
    raise SortError(f"object term {term} used as a number")


# -- atoms and rules -------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    pred: PredicateDecl
    args: tuple[Term, ...] = ()

    @property
    def numeric_arg(self) -> Term | None:
        return self.args[-1] if self.pred.is_numeric and self.args else None

    @property
    def object_args(self) -> tuple[Term, ...]:
        return self.args[:-1] if self.pred.is_numeric else self.args

    def __str__(self):
        from .frontend.printer import format_atom
        return format_atom(self)


@dataclass(frozen=True)
class Comparison:
    op: str  # "<" or "<="
    left: Term
    right: Term

    def __post_init__(self):
        if self.op not in ("<", "<="):
            raise ValueError(f"unknown comparison {self.op!r}")

    def __str__(self):
        from .frontend.printer import format_comparison
        return format_comparison(self)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Atom, ...] = ()
    comparisons: tuple[Comparison, ...] = ()
    loc: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    @property
    def is_fact(self) -> bool:
        return not self.body and not self.comparisons

    def __str__(self):
        from .frontend.printer import format_rule
        return format_rule(self)


def rule_vars(rule: Rule) -> dict[str, Var]:
    """All variables of ``rule`` keyed by name, in first-occurrence order
    (body atoms, then comparisons, then head)."""
    out: dict[str, Var] = {}
    terms = [t for a in rule.body for t in a.args]
    terms += [t for c in rule.comparisons for t in (c.left, c.right)]
    terms += list(rule.head.args)
    for t in terms:
        for v in term_vars(t):
            out.setdefault(v.name, v)
    return out


@dataclass(frozen=True)
class Program:
    decls: tuple[PredicateDecl, ...]
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "decls", tuple(self.decls))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "_by_name", {d.name: d for d in self.decls})

    def decl(self, name: str) -> PredicateDecl:
        try:
            return self._by_name[name]
        except KeyError:
            raise SortError(f"undeclared predicate {name}") from None

    def has_decl(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self):
        return len(self.rules)

    def __str__(self):
        from .frontend.printer import format_program
        return format_program(self)


# -- ground facts ----------------------------------------------------------

@dataclass(frozen=True)
class Fact:
    """A ground standard atom.

    ``objects`` holds the object arguments; ``value`` is the numeric last
    argument for numeric predicates (``INF`` only for limit predicates) and
    ``None`` for object predicates.
    """

    pred: PredicateDecl
    objects: tuple[str, ...] = ()
    value: ExtendedInt | None = None

    @property
    def key(self) -> tuple[PredicateDecl, tuple[str, ...]]:
        return (self.pred, self.objects)

    def sort_key(self):
        v = self.value
        if v is None:
            vk = (0, 0)
        elif v is INF:
            vk = (2, 0)
        else:
            vk = (1, v)
        return (self.pred.name, self.objects, vk)

    def __str__(self):
        from .frontend.printer import format_fact
        return format_fact(self)


def check_fact(fact: Fact) -> Fact:
    """Raise :class:`SortError` unless ``fact`` is well sorted."""
    d = fact.pred
    if len(fact.objects) != d.n_objects or any(s is not Sort.OBJ for s in d.sorts[: d.n_objects]):
        raise SortError(f"{d.name}: expected {d.n_objects} object argument(s), got {len(fact.objects)}")
    if not all(isinstance(o, str) for o in fact.objects):
        raise SortError(f"{d.name}: object arguments must be object constants")
    if d.kind is Kind.OBJECT:
        if fact.value is not None:
            raise SortError(f"{d.name} is an object predicate and takes no number")
    elif fact.value is INF:
        if not d.is_limit:
            raise SortError(f"inf is only allowed for limit predicates, not {d.name}")
    elif not isinstance(fact.value, int) or isinstance(fact.value, bool):
        raise SortError(f"{d.name}: numeric argument must be an integer")
    return fact


def atom_to_fact(atom: Atom) -> Fact:
    """Turn a ground atom into a fact, evaluating its numeric argument."""
    objs = []
    for t in atom.object_args:
        if not isinstance(t, Const):
            raise SortError(f"non-ground object argument {t} in {atom.pred.name}")
        objs.append(t.name)
    value = None
    if atom.pred.is_numeric:
        value = eval_term(atom.numeric_arg)
    return Fact(atom.pred, tuple(objs), value)


# -- pseudo-interpretations ------------------------------------------------

LimitKey = tuple[PredicateDecl, tuple[str, ...]]


def _key_order(key: LimitKey):
    return (key[0].name, key[1])


class PseudoInterpretation:
    """Object facts, ordinary numeric facts, and one value per limit key.

    Instances are immutable; operations return new instances.
    """

    __slots__ = ("_facts", "_limits", "_hash")

    def __init__(self, facts: Iterable[Fact] = (), limits: Mapping[LimitKey, ExtendedInt] | None = None):
        plain = frozenset(facts)
        for f in plain:
            if f.pred.is_limit:
                raise ValueError("limit facts belong in the limits map")
        self._facts = plain
        self._limits = dict(limits or {})
        self._hash = None

    @classmethod
    def from_facts(cls, facts: Iterable[Fact]) -> "PseudoInterpretation":
        """The least pseudo-interpretation satisfying every fact given."""
        plain: set[Fact] = set()
        limits: dict[LimitKey, ExtendedInt] = {}
        for f in facts:
            _join_into(plain, limits, f)
        return cls(plain, limits)

    @property
    def plain_facts(self) -> frozenset[Fact]:
        return self._facts

    @property
    def limits(self) -> Mapping[LimitKey, ExtendedInt]:
        return dict(self._limits)

    def limit_value(self, pred: PredicateDecl, objects: tuple[str, ...] = ()) -> ExtendedInt | None:
        return self._limits.get((pred, objects))

    def limit_keys(self) -> list[LimitKey]:
        return sorted(self._limits, key=_key_order)

    def facts(self) -> list[Fact]:
        """All facts in canonical order, limit facts carrying their value."""
        out = list(self._facts)
        out += [Fact(k[0], k[1], v) for k, v in self._limits.items()]
        out.sort(key=Fact.sort_key)
        return out

    def __contains__(self, fact: Fact) -> bool:
        if fact.pred.is_limit:
            return fact.key in self._limits and self._limits[fact.key] == fact.value
        return fact in self._facts

    def __iter__(self):
        return iter(self.facts())

    def __len__(self):
        return len(self._facts) + len(self._limits)

    def __eq__(self, other):
        if not isinstance(other, PseudoInterpretation):
            return NotImplemented
        return self._facts == other._facts and self._limits == other._limits

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._facts, frozenset(self._limits.items())))
        return self._hash

    def __repr__(self):
        return "{" + ", ".join(str(f) for f in self.facts()) + "}"

    def with_limit(self, key: LimitKey, value: ExtendedInt) -> "PseudoInterpretation":
        """Copy with the value at ``key`` overwritten (not joined)."""
        limits = dict(self._limits)
        limits[key] = value
        return PseudoInterpretation(self._facts, limits)

    def restrict(self, keep) -> "PseudoInterpretation":
        """Copy keeping only facts whose predicate satisfies ``keep``."""
        return PseudoInterpretation(
            (f for f in self._facts if keep(f.pred)),
            {k: v for k, v in self._limits.items() if keep(k[0])},
        )


def _dominates(kind: Kind, strong: ExtendedInt, weak: ExtendedInt) -> bool:
    """True iff a limit value ``strong`` implies every fact ``weak`` implies."""
    if strong is INF:
        return True
    if weak is INF:
        return False
    return strong >= weak if kind is Kind.MAX else strong <= weak


def _join_into(plain: set, limits: dict, fact: Fact) -> None:
    if not fact.pred.is_limit:
        plain.add(fact)
        return
    old = limits.get(fact.key)
    if old is None or _dominates(fact.pred.kind, fact.value, old):
        limits[fact.key] = fact.value


def satisfies(J: PseudoInterpretation, alpha: Fact) -> bool:
    """Does the limit-closed interpretation of ``J`` contain ``alpha``?"""
    check_fact(alpha)
    if not alpha.pred.is_limit:
        return alpha in J.plain_facts
    value = J.limit_value(*alpha.key)
    if value is None:
        return False
    return _dominates(alpha.pred.kind, value, alpha.value)


def preceq(J: PseudoInterpretation, K: PseudoInterpretation) -> bool:
    """``J ⊑ K``: containment of the corresponding limit-closed interpretations."""
    if not J.plain_facts <= K.plain_facts:
        return False
    for key, v in J._limits.items():
        w = K._limits.get(key)
        if w is None or not _dominates(key[0].kind, w, v):
            return False
    return True


def join_fact(J: PseudoInterpretation, fact: Fact) -> PseudoInterpretation:
    """The least pseudo-interpretation above ``J`` that satisfies ``fact``."""
    check_fact(fact)
    plain = set(J.plain_facts)
    limits = dict(J._limits)
    _join_into(plain, limits, fact)
    return PseudoInterpretation(plain, limits)
