"""Syntax of logic programs with defaults: literals, rules, text format.

The text format accepted here:

    head :- body.            % definite rule
    @{label} head :- body.   % defeasible rule, label is a term
    fact.                    % rule with empty body
    neg a(b).                % strong negation (not-free literal)
    p(?X) :- q(?X), not r(?X), ?X != c, ?Y is ?X + 1.
    % comment

Variables are written ``?Name``; everything else bare is a constant, so
capitalised names like ``John`` are constants.  ``#1``, ``#2`` ... are
ordinary constants reserved for generated witnesses.  Double negations
``not not L`` and ``neg neg L`` are normalised away while parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterator, Optional, Union

from ..terms import Const, Struct, Term, Var, is_ground, substitute, term_vars


class LpdaParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return "%s(%s)" % (self.pred, ", ".join(str(a) for a in self.args))


@dataclass(frozen=True)
class Lit:
    """A not-free literal: an atom or its strong negation."""

    atom: Atom
    neg: bool = False

    def __str__(self) -> str:
        return ("neg " + str(self.atom)) if self.neg else str(self.atom)

    def complement(self) -> "Lit":
        return Lit(self.atom, not self.neg)

    def as_term(self) -> Term:
        """Reify the literal as a term, for use inside opposes/2."""
        inner: Term = Struct(self.atom.pred, self.atom.args) if self.atom.args else Const(self.atom.pred)
        return Struct("neg", (inner,)) if self.neg else inner


@dataclass(frozen=True)
class BodyAtom:
    lit: Lit
    naf: bool = False  # negation as failure wrapper

    def __str__(self) -> str:
        return ("not " + str(self.lit)) if self.naf else str(self.lit)


# arithmetic expression: Term | (op, lhs, rhs)
Expr = Union[Term, tuple]

COMPARISONS = ("!=", ">=", "=<", "<", ">", "=")


@dataclass(frozen=True)
class Builtin:
    """Comparison (``?X != ?Y``) or arithmetic binding (``?X is E``)."""

    op: str  # one of COMPARISONS or "is"
    lhs: Expr
    rhs: Expr

    def __str__(self) -> str:
        return "%s %s %s" % (format_expr(self.lhs), self.op, format_expr(self.rhs))


BodyElem = Union[BodyAtom, Builtin]


@dataclass
class Rule:
    head: Lit
    body: list[BodyElem] = field(default_factory=list)
    label: Optional[Term] = None
    defeasible: bool = False

    def __str__(self) -> str:
        prefix = "@{%s} " % self.label if self.defeasible else ""
        if not self.body:
            return "%s%s." % (prefix, self.head)
        return "%s%s :- %s." % (prefix, self.head, ", ".join(str(b) for b in self.body))


@dataclass
class Program:
    rules: list[Rule] = field(default_factory=list)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules) + ("\n" if self.rules else "")

    def extend(self, other: "Program") -> None:
        self.rules.extend(other.rules)


def format_expr(e: Expr) -> str:
    if isinstance(e, tuple):
        op, a, b = e
        return "%s %s %s" % (format_expr(a), op, format_expr(b))
    return str(e)


def expr_vars(e: Expr) -> Iterator[str]:
    if isinstance(e, tuple):
        yield from expr_vars(e[1])
        yield from expr_vars(e[2])
    else:
        yield from term_vars(e)


def eval_expr(e: Expr, binding: dict[str, Term]):
    """Evaluate an arithmetic expression under a ground binding.

    Returns an int/Decimal, or a non-numeric constant value when the
    expression is a plain term (so ``=``/``!=`` compare symbols too).
    """
    if isinstance(e, tuple):
        op, a, b = e
        x = eval_expr(a, binding)
        y = eval_expr(b, binding)
        if not isinstance(x, (int, Decimal)) or not isinstance(y, (int, Decimal)):
            raise ValueError("arithmetic on non-numeric value: %s %s %s" % (x, op, y))
        if op == "+":
            return x + y
        if op == "-":
            return x - y
        if op == "*":
            return x * y
        if op == "/":
            if isinstance(x, int) and isinstance(y, int) and x % y == 0:
                return x // y
            return Decimal(x) / Decimal(y)
        raise ValueError("unknown operator %r" % op)
    t = substitute(e, binding)
    if isinstance(t, Var):
        raise ValueError("unbound variable ?%s in arithmetic" % t.name)
    if isinstance(t, Const):
        return t.value
    return t  # structured terms compare by identity under =/!=


def eval_builtin(b: Builtin, binding: dict[str, Term]) -> Optional[dict[str, Term]]:
    """Evaluate a builtin under a binding; returns extended binding or None.

    ``is`` binds its left-hand variable when unbound, otherwise checks.
    """
    if b.op == "is":
        val = eval_expr(b.rhs, binding)
        res: Term = Const(val) if not isinstance(val, (Var, Const, Struct)) else val
        if isinstance(b.lhs, Var) and b.lhs.name not in binding:
            out = dict(binding)
            out[b.lhs.name] = res
            return out
        lhs = eval_expr(b.lhs, binding)
        return binding if lhs == val else None
    x = eval_expr(b.lhs, binding)
    y = eval_expr(b.rhs, binding)
    if b.op == "=":
        ok = x == y
    elif b.op == "!=":
        ok = x != y
    else:
        if not isinstance(x, (int, Decimal)) or not isinstance(y, (int, Decimal)):
            raise ValueError("ordered comparison on non-numeric values: %s %s %s" % (x, b.op, y))
        ok = {"<": x < y, ">": x > y, ">=": x >= y, "=<": x <= y}[b.op]
    return binding if ok else None


# ---------------------------------------------------------------------------
# tokenizer / parser


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<decimal>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<skolem>\#\d+)
  | (?P<var>\?[A-Za-z_]\w*)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<atlabel>@\{[^}]*\}|@[A-Za-z_]\w*)
  | (?P<op>:-|!=|>=|=<|[()\,.=<>+\-*/])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise LpdaParseError("unexpected character %r" % text[pos], line)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, tok, line))
        line += tok.count("\n")
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            raise LpdaParseError("unexpected end of input")
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise LpdaParseError("expected %r, found %r" % (text, t.text), t.line)
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    # --- grammar ---

    def program(self) -> Program:
        rules = []
        while self.peek() is not None:
            rules.append(self.rule())
        return Program(rules)

    def rule(self) -> Rule:
        label = None
        defeasible = False
        t = self.peek()
        if t is not None and t.kind == "atlabel":
            self.next()
            raw = t.text[2:-1] if t.text.startswith("@{") else t.text[1:]
            label = _label_term(raw.strip())
            defeasible = True
        head = self.literal()
        if head.startswith_not:
            raise LpdaParseError("rule head must be a not-free literal", t.line if t else None)
        body: list[BodyElem] = []
        if self.at(":-"):
            self.next()
            body.append(self.body_elem())
            while self.at(","):
                self.next()
                body.append(self.body_elem())
        self.expect(".")
        return Rule(head.lit, body, label, defeasible)

    def body_elem(self) -> BodyElem:
        save = self.i
        # try a builtin first: expr OP expr / ?X is expr
        try:
            lhs = self.expr()
            t = self.peek()
            if t is not None and (t.text in COMPARISONS or t.text == "is"):
                op = self.next().text
                rhs = self.expr()
                return Builtin(op, lhs, rhs)
        except LpdaParseError:
            pass
        self.i = save
        pl = self.literal()
        if pl.startswith_not:
            return BodyAtom(pl.lit, naf=True)
        return BodyAtom(pl.lit, naf=False)

    def literal(self) -> "_ParsedLit":
        nots = 0
        negs = 0
        while True:
            t = self.peek()
            if t is not None and t.kind == "name" and t.text == "not":
                self.next()
                nots += 1
            elif t is not None and t.kind == "name" and t.text == "neg":
                self.next()
                negs += 1
            else:
                break
        atom = self.atom()
        return _ParsedLit(Lit(atom, neg=bool(negs % 2)), startswith_not=bool(nots % 2))

    def atom(self) -> Atom:
        t = self.next()
        if t.kind != "name":
            raise LpdaParseError("expected predicate name, found %r" % t.text, t.line)
        args: tuple[Term, ...] = ()
        if self.at("("):
            self.next()
            lst = [self.term()]
            while self.at(","):
                self.next()
                lst.append(self.term())
            self.expect(")")
            args = tuple(lst)
        return Atom(t.text, args)

    def term(self) -> Term:
        t = self.next()
        if t.kind == "var":
            return Var(t.text[1:])
        if t.kind == "decimal":
            return Const(Decimal(t.text))
        if t.kind == "int":
            return Const(int(t.text))
        if t.kind == "skolem":
            return Const(t.text)
        if t.kind == "name":
            if self.at("("):
                self.next()
                lst = [self.term()]
                while self.at(","):
                    self.next()
                    lst.append(self.term())
                self.expect(")")
                return Struct(t.text, tuple(lst))
            return Const(t.text)
        raise LpdaParseError("expected term, found %r" % t.text, t.line)

    def expr(self) -> Expr:
        left = self.expr_atom()
        while self.at("+") or self.at("-") or self.at("*") or self.at("/"):
            op = self.next().text
            right = self.expr_atom()
            left = (op, left, right)
        return left

    def expr_atom(self) -> Expr:
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        t = self.peek()
        if t is None:
            raise LpdaParseError("unexpected end of input in expression")
        if t.kind in ("var", "decimal", "int", "skolem"):
            return self.term()
        if t.kind == "name":
            # a bare name is fine as a comparison operand; a functor-applied
            # name is handled by term()
            return self.term()
        raise LpdaParseError("expected expression, found %r" % t.text, t.line)


@dataclass
class _ParsedLit:
    lit: Lit
    startswith_not: bool


def _label_term(raw: str) -> Term:
    if re.fullmatch(r"\d+", raw):
        return Const(int(raw))
    return Const(raw)


def parse_program(text: str) -> Program:
    return _Parser(_tokenize(text)).program()


def parse_literal(text: str) -> BodyAtom:
    p = _Parser(_tokenize(text))
    pl = p.literal()
    if p.peek() is not None:
        raise LpdaParseError("trailing input after literal: %r" % p.peek().text)
    return BodyAtom(pl.lit, naf=pl.startswith_not)


def parse_goal(text: str) -> list[BodyAtom]:
    """Parse a comma-separated conjunction of literals (no final dot needed)."""
    p = _Parser(_tokenize(text))
    goal = []
    pl = p.literal()
    goal.append(BodyAtom(pl.lit, naf=pl.startswith_not))
    while p.at(","):
        p.next()
        pl = p.literal()
        goal.append(BodyAtom(pl.lit, naf=pl.startswith_not))
    if p.at("."):
        p.next()
    if p.peek() is not None:
        raise LpdaParseError("trailing input after goal: %r" % p.peek().text)
    return goal


def rule_vars(rule: Rule) -> set[str]:
    out: set[str] = set()
    out.update(lit_vars(rule.head))
    for b in rule.body:
        if isinstance(b, BodyAtom):
            out.update(lit_vars(b.lit))
        else:
            out.update(expr_vars(b.lhs))
            out.update(expr_vars(b.rhs))
    return out


def lit_vars(lit: Lit) -> set[str]:
    out: set[str] = set()
    for a in lit.atom.args:
        out.update(term_vars(a))
    return out


def substitute_lit(lit: Lit, binding: dict[str, Term]) -> Lit:
    return Lit(Atom(lit.atom.pred, tuple(substitute(a, binding) for a in lit.atom.args)), lit.neg)


def lit_is_ground(lit: Lit) -> bool:
    return all(is_ground(a) for a in lit.atom.args)
