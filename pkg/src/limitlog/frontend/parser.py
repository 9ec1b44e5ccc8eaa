"""Recursive-descent parser for the ``.lgl`` program format.

::

    % shortest paths from v0
    pred edge(obj, obj, int).
    pred sp(obj, min int).
    sp(v0, 0).
    sp(Y, M + N) :- sp(X, M), edge(X, Y, N).

Identifiers starting with an uppercase letter or ``_`` are variables in term
positions; lowercase identifiers are object constants.  Predicate names are
recognised by position, so any identifier may name a predicate.  Names
starting with ``__`` are reserved for built-ins.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..core import (INF, Atom, BinOp, Comparison, Const, Fact, Kind, Num,
                    PredicateDecl, Program, Rule, Sort, Var, atom_to_fact,
                    check_fact, eval_term, term_vars)
from ..errors import ParseError, SortError, UnsafeRuleError

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\f]+)|(?P<nl>\n)|(?P<comment>%[^\n]*)"
    r"|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>:-|<=|>=|[-+*<>(),.])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


def _is_var_name(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


_SORT_WORDS = {"obj", "int", "min", "max"}


class _Parser:
    def __init__(self, text: str, decls: dict[str, PredicateDecl] | None = None,
                 allow_inf: bool = False):
        self.toks = tokenize(text)
        self.i = 0
        self.decls: dict[str, PredicateDecl] = dict(decls or {})
        self.allow_inf = allow_inf

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, msg: str, tok: Token | None = None, cls=ParseError):
        tok = tok or self.tok
        raise cls(msg, tok.line, tok.col)

    # -- program level
    def program(self) -> Program:
        rules = []
        while self.tok.kind != "eof":
            if (self.tok.kind == "ident" and self.tok.text == "pred"
                    and self.peek().kind == "ident"):
                self.declaration()
            else:
                rules.append(self.clause())
        return Program(tuple(self.decls.values()), tuple(rules))

    def declaration(self):
        start = self.advance()
        name_tok = self.advance()
        name = name_tok.text
        if name.startswith("__"):
            self.fail(f"predicate names starting with '__' are reserved", name_tok)
        if name in self.decls:
            self.fail(f"predicate {name} declared twice", name_tok)
        sorts: list[Sort] = []
        kinds: list[Kind] = []
        if self.at("("):
            self.advance()
            if not self.at(")"):
                while True:
                    s, k = self.sort_spec()
                    sorts.append(s)
                    kinds.append(k)
                    if self.at(","):
                        self.advance()
                        continue
                    break
            self.expect(")")
        if self.at("."):
            self.advance()
        limit = [k for k in kinds if k in (Kind.MIN, Kind.MAX)]
        if len(limit) > 1:
            self.fail(f"predicate {name} has more than one limit position", start, SortError)
        if limit:
            kind = limit[0]
        elif Sort.NUM in sorts:
            kind = Kind.ORDINARY
        else:
            kind = Kind.OBJECT
        self.decls[name] = PredicateDecl(name, tuple(sorts), kind)

    def sort_spec(self) -> tuple[Sort, Kind | None]:
        t = self.tok
        if t.kind != "ident" or t.text not in _SORT_WORDS:
            self.fail(f"expected a sort (obj, int, min int, max int), found {t.text!r}")
        self.advance()
        if t.text == "obj":
            return Sort.OBJ, None
        if t.text == "int":
            return Sort.NUM, None
        nt = self.tok
        if nt.kind != "ident" or nt.text != "int":
            self.fail(f"expected 'int' after {t.text!r}")
        self.advance()
        return Sort.NUM, Kind(t.text)

    def clause(self) -> Rule:
        start = self.tok
        head = self.raw_atom()
        body, comps = [], []
        if self.at(":-"):
            self.advance()
            while True:
                lit = self.literal()
                (body if lit[0] == "atom" else comps).append(lit)
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(".")
        return self.build_rule(head, body, comps, start)

    def literal(self):
        t, nxt = self.tok, self.peek()
        # an identifier followed by "(", "," or "." starts an atom; terms never
        # contain applications, so this is unambiguous
        if t.kind == "ident" and (nxt.kind == "eof" or (nxt.kind == "op" and nxt.text in ("(", ",", "."))):
            return self.raw_atom()
        return self.comparison()

    def comparison(self):
        start = self.tok
        wrapped = False
        # "(X < Y)" -- a parenthesised comparison, not a parenthesised term
        if self.at("("):
            save = self.i
            self.advance()
            left = self.expr()
            if self.tok.kind == "op" and self.tok.text in ("<", "<=", ">", ">="):
                wrapped = True
            else:
                self.i = save
        if not wrapped:
            left = self.expr()
        if not (self.tok.kind == "op" and self.tok.text in ("<", "<=", ">", ">=")):
            self.fail("expected a comparison operator")
        op = self.advance().text
        right = self.expr()
        if wrapped:
            self.expect(")")
        if op == ">":
            op, left, right = "<", right, left
        elif op == ">=":
            op, left, right = "<=", right, left
        return ("cmp", op, left, right, start)

    def raw_atom(self):
        t = self.tok
        if t.kind != "ident":
            self.fail(f"expected a predicate name, found {t.text or 'end of input'!r}")
        self.advance()
        args = []
        if self.at("("):
            self.advance()
            if not self.at(")"):
                while True:
                    args.append(self.expr())
                    if self.at(","):
                        self.advance()
                        continue
                    break
            self.expect(")")
        return ("atom", t, args)

    # -- expressions: sum := prod (('+'|'-') prod)*; prod := unary ('*' unary)*
    def expr(self):
        left = self.product()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.advance().text
            left = ("bin", op, left, self.product())
        return left

    def product(self):
        left = self.unary()
        while self.at("*"):
            self.advance()
            left = ("bin", "*", left, self.unary())
        return left

    def unary(self):
        if self.at("-"):
            tok = self.advance()
            inner = self.unary()
            if inner[0] == "int":
                return ("int", -inner[1], tok)
            return ("bin", "*", ("int", -1, tok), inner)
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return ("int", int(t.text), t)
        if t.kind == "ident":
            if self.peek().kind == "op" and self.peek().text == "(":
                self.fail(f"predicate {t.text} used inside a term")
            self.advance()
            return ("id", t.text, t)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.fail(f"expected a term, found {t.text or 'end of input'!r}")

    # -- sort resolution
    def decl_for(self, tok: Token) -> PredicateDecl:
        d = self.decls.get(tok.text)
        if d is None:
            self.fail(f"undeclared predicate {tok.text}", tok, SortError)
        return d

    def build_rule(self, head, body, comps, start: Token) -> Rule:
        var_sorts: dict[str, Sort] = {}

        def note(name, sort, tok):
            prev = var_sorts.setdefault(name, sort)
            if prev is not sort:
                self.fail(f"variable {name} used as both object and number", tok, SortError)

        atoms = [head] + body
        # object/numeric positions fix the sort of bare variables
        for _, ptok, args in atoms:
            d = self.decl_for(ptok)
            if len(args) != d.arity:
                self.fail(f"{d.name} expects {d.arity} argument(s), got {len(args)}", ptok, SortError)
            for raw, s in zip(args, d.sorts):
                if raw[0] == "id" and _is_var_name(raw[1]):
                    note(raw[1], s, raw[2])
        for _, _, l, r, _ in comps:
            for raw in (l, r):
                for name, tok in self.raw_idents(raw):
                    if _is_var_name(name):
                        note(name, Sort.NUM, tok)

        def conv(raw, sort: Sort):
            kind = raw[0]
            if sort is Sort.OBJ:
                if kind == "id" and not _is_var_name(raw[1]):
                    return Const(raw[1])
                if kind == "id":
                    return Var(raw[1], Sort.OBJ)
                tok = raw[2] if kind != "bin" else self.first_tok(raw)
                self.fail("numeric term in an object position", tok, SortError)
            if kind == "int":
                return Num(raw[1])
            if kind == "id":
                if not _is_var_name(raw[1]):
                    self.fail(f"object constant {raw[1]} in a numeric position", raw[2], SortError)
                note(raw[1], Sort.NUM, raw[2])
                return Var(raw[1], Sort.NUM)
            return BinOp(raw[1], conv(raw[2], sort), conv(raw[3], sort))

        def conv_atom(raw):
            _, ptok, args = raw
            d = self.decl_for(ptok)
            return Atom(d, tuple(conv(a, s) for a, s in zip(args, d.sorts)))

        h = conv_atom(head)
        b = tuple(conv_atom(a) for a in body)
        c = tuple(Comparison(op, conv(l, Sort.NUM), conv(r, Sort.NUM)) for _, op, l, r, _ in comps)
        rule = Rule(h, b, c, loc=(start.line, start.col))

        # safety: every variable occurs in a standard body atom
        body_vars = {v.name for a in b for t in a.args for v in term_vars(t)}
        all_vars = set(var_sorts)
        unsafe = sorted(all_vars - body_vars)
        if unsafe:
            what = "fact" if not b else "rule"
            raise UnsafeRuleError(f"unsafe variable {unsafe[0]} in {what} for {h.pred.name}",
                                  start.line, start.col)
        if not b and not c and h.pred.is_numeric:
            # ground fact: fold its numeric argument
            value = eval_term(h.numeric_arg)
            rule = Rule(Atom(h.pred, h.args[:-1] + (Num(value),)), (), (), loc=rule.loc)
        return rule

    def raw_idents(self, raw):
        if raw[0] == "id":
            yield raw[1], raw[2]
        elif raw[0] == "bin":
            yield from self.raw_idents(raw[2])
            yield from self.raw_idents(raw[3])

    def first_tok(self, raw):
        while raw[0] == "bin":
            raw = raw[2]
        return raw[2]


def parse_program(text: str, validate: bool = True) -> Program:
    """Parse ``.lgl`` text into a :class:`Program`.

    With ``validate`` (the default) the result is also checked against the
    limit-program shape and a :class:`ValidationError` lists every problem.
    """
    prog = _Parser(text).program()
    if validate:
        from .transforms import validate as _validate
        from ..errors import ValidationError
        errors = [d for d in _validate(prog) if d.severity == "error"]
        if errors:
            raise ValidationError(errors)
    return prog


def parse_fact(text: str, program: Program | dict[str, PredicateDecl], allow_inf: bool = False) -> Fact:
    """Parse one ground fact such as ``sp(v2, 8)`` against ``program``'s
    declarations.  A trailing ``.`` is optional.  ``inf`` is accepted as a
    limit value only when ``allow_inf`` is set (for reading closures back)."""
    decls = program if isinstance(program, dict) else {d.name: d for d in program.decls}
    p = _Parser(text, decls, allow_inf=allow_inf)
    raw = p.raw_atom()
    if p.at("."):
        p.advance()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after fact")
    _, ptok, args = raw
    for a in args:
        for name, tok in p.raw_idents(a):
            if _is_var_name(name):
                p.fail(f"facts must be ground, found variable {name}", tok, SortError)
    d = p.decl_for(ptok)
    if len(args) != d.arity:
        p.fail(f"{d.name} expects {d.arity} argument(s), got {len(args)}", ptok, SortError)
    rule = p.build_rule(raw, [], [], ptok) if not _has_inf(args) else None
    if rule is not None:
        fact = atom_to_fact(rule.head)
    else:
        if not allow_inf:
            p.fail("inf is not allowed here", ptok, SortError)
        if not d.is_limit:
            p.fail("inf is only allowed for limit predicates", ptok, SortError)
        objs = []
        for a, s in zip(args[:-1], d.sorts[:-1]):
            if a[0] != "id" or _is_var_name(a[1]) or s is not Sort.OBJ:
                p.fail("bad object argument", ptok, SortError)
            objs.append(a[1])
        fact = Fact(d, tuple(objs), INF)
    return check_fact(fact)


def _has_inf(args) -> bool:
    return bool(args) and args[-1][0] == "id" and args[-1][1] == "inf"
