"""Desk-scale answer-set solver for an AnsProlog subset.

Supported syntax (one statement per ``.``):

    fact(a).                     % facts, with ranges: position(1..6).
    h(X) :- b(X), not c(X).      % normal rules, strong negation -p(X)
    :- b(X), c(X).               % integrity constraints
    1 { a(X,Y) : d(Y) } 1 :- b(X).   % choice rules with bounds
    #hide.  #show answer/2.      % projection directives
    % comments

Variables are capitalised, constants lower-case or numeric.  Builtin
comparisons (=, !=, <, >, >=, =<) may use integer arithmetic (+ - *).

Stable models are found by branching over choice-rule selections first,
then over atoms left undefined by well-founded propagation; every
candidate is verified from scratch against the reduct definition
(M = least model of reduct(program, M)), so search and verification stay
independent of each other.
"""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Iterator, Optional, Sequence, Union

from .terms import Const, Struct, Term, Var, match, substitute, term_vars


class AspParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            where = "line %d" % line if col is None else "line %d, column %d" % (line, col)
            message = "%s: %s" % (where, message)
        super().__init__(message)


class AspError(ValueError):
    pass


class UnsupportedFeatureError(AspError):
    pass


@dataclass(frozen=True)
class AspLit:
    """An atom or its strong negation."""

    pred: str
    args: tuple[Term, ...] = ()
    neg: bool = False

    def __str__(self) -> str:
        body = self.pred if not self.args else "%s(%s)" % (self.pred, ", ".join(str(a) for a in self.args))
        return ("-" + body) if self.neg else body

    def complement(self) -> "AspLit":
        return AspLit(self.pred, self.args, not self.neg)


Expr = Union[Term, tuple]


@dataclass(frozen=True)
class Comparison:
    op: str
    lhs: Expr
    rhs: Expr

    def __str__(self) -> str:
        return "%s %s %s" % (_fmt_expr(self.lhs), self.op, _fmt_expr(self.rhs))


BodyElem = Union[tuple, Comparison]  # (AspLit, naf: bool) or Comparison


@dataclass(frozen=True)
class Choice:
    lower: int
    upper: Optional[int]  # None = unbounded
    template: AspLit
    condition: Optional[AspLit]

    def __str__(self) -> str:
        inner = str(self.template) if self.condition is None else "%s : %s" % (self.template, self.condition)
        hi = "" if self.upper is None else " %d" % self.upper
        return "%d { %s }%s" % (self.lower, inner, hi)


@dataclass
class AspRule:
    heads: tuple[AspLit, ...]  # empty = constraint; >1 = disjunction (parse only)
    body: tuple[BodyElem, ...] = ()
    choice: Optional[Choice] = None

    @property
    def kind(self) -> str:
        if self.choice is not None:
            return "choice"
        if not self.heads:
            return "constraint"
        if not self.body:
            return "fact"
        return "normal"

    def __str__(self) -> str:
        head = str(self.choice) if self.choice is not None else " | ".join(str(h) for h in self.heads)
        parts = []
        for e in self.body:
            if isinstance(e, Comparison):
                parts.append(str(e))
            else:
                lit, naf = e
                parts.append("not " + str(lit) if naf else str(lit))
        if not parts:
            return head + "."
        return "%s :- %s." % (head, ", ".join(parts))


@dataclass
class AspProgram:
    rules: list[AspRule] = field(default_factory=list)
    show: list[tuple[str, int]] = field(default_factory=list)
    hide_all: bool = False


@dataclass(frozen=True)
class AnswerSet:
    atoms: frozenset[AspLit]

    def project(self, show: Sequence[tuple[str, int]], hide_all: bool = False) -> frozenset[AspLit]:
        if not show:
            return frozenset() if hide_all else self.atoms
        keep = set(show)
        return frozenset(a for a in self.atoms if (a.pred, len(a.args)) in keep)

    def __contains__(self, lit: AspLit) -> bool:
        return lit in self.atoms

    def __iter__(self):
        return iter(self.atoms)


def _fmt_expr(e: Expr) -> str:
    if isinstance(e, tuple):
        return "%s %s %s" % (_fmt_expr(e[1]), e[0], _fmt_expr(e[2]))
    return str(e)


# ---------------------------------------------------------------------------
# parsing

_ASP_TOKENS = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<decimal>\d+\.\d+(?!\.))
  | (?P<range>\d+\.\.\d+)
  | (?P<int>\d+)
  | (?P<directive>\#[a-z]+)
  | (?P<name>[a-z]\w*)
  | (?P<var>[A-Z_]\w*)
  | (?P<op>:-|!=|>=|=<|\.\.|[(){}:;,.|=<>+\-*/])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, linestart, pos = 1, 0, 0
    while pos < len(text):
        m = _ASP_TOKENS.match(text, pos)
        if not m:
            raise AspParseError("unexpected character %r" % text[pos], line, pos - linestart + 1)
        if m.lastgroup not in ("ws", "comment"):
            toks.append(_Tok(m.lastgroup, m.group(), line, pos - linestart + 1))
        nl = m.group().count("\n")
        if nl:
            line += nl
            linestart = pos + m.group().rindex("\n") + 1
        pos = m.end()
    return toks


class _AspParser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else None
            raise AspParseError("unexpected end of input", last.line if last else None)
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise AspParseError("expected %r, found %r" % (text, t.text), t.line, t.col)
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def program(self) -> AspProgram:
        prog = AspProgram()
        while self.peek() is not None:
            t = self.peek()
            if t.kind == "directive":
                self.directive(prog)
            else:
                prog.rules.append(self.rule())
        return prog

    def directive(self, prog: AspProgram) -> None:
        t = self.next()
        if t.text == "#hide":
            prog.hide_all = True
            self.expect(".")
        elif t.text == "#show":
            name = self.next()
            if name.kind != "name":
                raise AspParseError("expected predicate name after #show", name.line, name.col)
            self.expect("/")
            ar = self.next()
            if ar.kind != "int":
                raise AspParseError("expected arity after /", ar.line, ar.col)
            prog.show.append((name.text, int(ar.text)))
            self.expect(".")
        else:
            raise AspParseError("unknown directive %r" % t.text, t.line, t.col)

    def rule(self) -> AspRule:
        t = self.peek()
        choice = None
        heads: tuple[AspLit, ...] = ()
        if t.text == ":-":
            pass  # constraint
        elif t.kind == "int" or t.text == "{":
            choice = self.choice()
        else:
            hs = [self.literal()]
            while self.at("|") or self.at(";"):
                self.next()
                hs.append(self.literal())
            heads = tuple(hs)
        body: list[BodyElem] = []
        if self.at(":-"):
            self.next()
            body.append(self.body_elem())
            while self.at(","):
                self.next()
                body.append(self.body_elem())
        self.expect(".")
        return AspRule(heads, tuple(body), choice)

    def choice(self) -> Choice:
        lower = 0
        if self.peek().kind == "int":
            lower = int(self.next().text)
        self.expect("{")
        template = self.literal()
        condition = None
        if self.at(":"):
            self.next()
            condition = self.literal()
        self.expect("}")
        upper = None
        t = self.peek()
        if t is not None and t.kind == "int":
            upper = int(self.next().text)
        if upper is not None and lower > upper:
            raise AspParseError("choice bounds out of order: %d > %d" % (lower, upper), t.line)
        return Choice(lower, upper, template, condition)

    def body_elem(self) -> BodyElem:
        t = self.peek()
        if t is None:
            raise AspParseError("unexpected end of input in rule body")
        if t.kind == "name" and t.text == "not":
            self.next()
            return (self.literal(), True)
        save = self.i
        # comparison?
        try:
            lhs = self.expr()
            t = self.peek()
            if t is not None and t.text in ("=", "!=", "<", ">", ">=", "=<"):
                op = self.next().text
                rhs = self.expr()
                return Comparison(op, lhs, rhs)
        except AspParseError:
            pass
        self.i = save
        return (self.literal(), False)

    def literal(self) -> AspLit:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        t = self.next()
        if t.kind != "name":
            raise AspParseError("expected predicate name, found %r" % t.text, t.line, t.col)
        args: tuple[Term, ...] = ()
        if self.at("("):
            self.next()
            lst = [self.term()]
            while self.at(","):
                self.next()
                lst.append(self.term())
            self.expect(")")
            args = tuple(lst)
        return AspLit(t.text, args, neg)

    def term(self) -> Term:
        t = self.next()
        if t.kind == "var":
            return Var(t.text)
        if t.kind == "int":
            return Const(int(t.text))
        if t.kind == "decimal":
            return Const(Decimal(t.text))
        if t.kind == "range":
            lo, hi = t.text.split("..")
            return Struct("..", (Const(int(lo)), Const(int(hi))))
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
        raise AspParseError("expected term, found %r" % t.text, t.line, t.col)

    def expr(self) -> Expr:
        left = self.expr_atom()
        while self.at("+") or self.at("-") or self.at("*"):
            op = self.next().text
            left = (op, left, self.expr_atom())
        return left

    def expr_atom(self) -> Expr:
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        t = self.peek()
        if t is None:
            raise AspParseError("unexpected end of input in expression")
        if t.kind in ("var", "int", "decimal", "name"):
            return self.term()
        raise AspParseError("expected expression, found %r" % t.text, t.line, t.col)


def parse_asp(text: str) -> AspProgram:
    """Parse program text; ranges in fact arguments are expanded here."""
    prog = _AspParser(_tokenize(text)).program()
    out = AspProgram(show=prog.show, hide_all=prog.hide_all)
    for r in prog.rules:
        if r.kind == "fact" and len(r.heads) == 1:
            out.rules.extend(AspRule((h,)) for h in _expand_ranges(r.heads[0]))
        else:
            out.rules.append(r)
    return out


def _expand_ranges(lit: AspLit) -> list[AspLit]:
    axes: list[list[Term]] = []
    for a in lit.args:
        if isinstance(a, Struct) and a.functor == "..":
            lo, hi = a.args
            axes.append([Const(v) for v in range(lo.value, hi.value + 1)])
        else:
            axes.append([a])
    return [AspLit(lit.pred, combo, lit.neg) for combo in itertools.product(*axes)]


# ---------------------------------------------------------------------------
# grounding

def _lit_vars(lit: AspLit) -> set[str]:
    out: set[str] = set()
    for a in lit.args:
        out.update(term_vars(a))
    return out


def _expr_vars(e: Expr) -> set[str]:
    if isinstance(e, tuple):
        return _expr_vars(e[1]) | _expr_vars(e[2])
    return set(term_vars(e))


def _eval_expr(e: Expr, binding: dict[str, Term]):
    if isinstance(e, tuple):
        op, a, b = e
        x, y = _eval_expr(a, binding), _eval_expr(b, binding)
        if not isinstance(x, (int, Decimal)) or not isinstance(y, (int, Decimal)):
            raise AspError("arithmetic on non-numeric value: %s %s %s" % (x, op, y))
        return {"+": x + y, "-": x - y, "*": x * y}[op]
    t = substitute(e, binding)
    if isinstance(t, Var):
        raise AspError("unbound variable %s in comparison" % t.name)
    if isinstance(t, Const):
        return t.value
    return t


def _eval_comparison(c: Comparison, binding: dict[str, Term]) -> bool:
    x = _eval_expr(c.lhs, binding)
    y = _eval_expr(c.rhs, binding)
    if c.op == "=":
        return x == y
    if c.op == "!=":
        return x != y
    if not isinstance(x, (int, Decimal)) or not isinstance(y, (int, Decimal)):
        raise AspError("ordered comparison on non-numeric values: %s %s %s" % (x, c.op, y))
    return {"<": x < y, ">": x > y, ">=": x >= y, "=<": x <= y}[c.op]


def _subst_lit(lit: AspLit, binding: dict[str, Term]) -> AspLit:
    return AspLit(lit.pred, tuple(substitute(a, binding) for a in lit.args), lit.neg)


@dataclass(frozen=True)
class GroundNormal:
    head: Optional[AspLit]  # None for constraints
    pos: tuple[AspLit, ...]
    naf: tuple[AspLit, ...]


@dataclass(frozen=True)
class GroundChoice:
    lower: int
    upper: Optional[int]
    candidates: tuple[AspLit, ...]
    pos: tuple[AspLit, ...]
    naf: tuple[AspLit, ...]


@dataclass
class GroundAsp:
    normals: list[GroundNormal]
    choices: list[GroundChoice]

    def atoms(self) -> set[AspLit]:
        out: set[AspLit] = set()
        for r in self.normals:
            if r.head is not None:
                out.add(r.head)
            out.update(r.pos)
            out.update(r.naf)
        for c in self.choices:
            out.update(c.candidates)
            out.update(c.pos)
            out.update(c.naf)
        return out


class _Pool:
    def __init__(self) -> None:
        self.by_key: dict[tuple[str, bool], list[tuple[Term, ...]]] = defaultdict(list)
        self.seen: set[AspLit] = set()

    def add(self, lit: AspLit) -> bool:
        if lit in self.seen:
            return False
        self.seen.add(lit)
        self.by_key[(lit.pred, lit.neg)].append(lit.args)
        return True

    def match(self, lit: AspLit, binding: dict[str, Term]) -> Iterator[dict[str, Term]]:
        for args in self.by_key.get((lit.pred, lit.neg), []):
            b: Optional[dict[str, Term]] = binding
            for p, g in zip(lit.args, args):
                b = match(p, g, b)
                if b is None:
                    break
            if b is not None and len(args) == len(lit.args):
                yield b


def _plan(rule: AspRule) -> list:
    """Order body elements so variables are bound before use."""
    bound: set[str] = set()
    pending = list(rule.body)
    order = []
    while pending:
        step = None
        for e in pending:
            if isinstance(e, Comparison) and _expr_vars(e.lhs) | _expr_vars(e.rhs) <= bound:
                step = e
                break
            if isinstance(e, tuple) and e[1] and _lit_vars(e[0]) <= bound:
                step = e
                break
        if step is None:
            for e in pending:
                if isinstance(e, tuple) and not e[1]:
                    step = e
                    bound |= _lit_vars(e[0])
                    break
        if step is None:
            missing = set()
            for e in pending:
                if isinstance(e, Comparison):
                    missing |= (_expr_vars(e.lhs) | _expr_vars(e.rhs)) - bound
                else:
                    missing |= _lit_vars(e[0]) - bound
            raise AspError(
                "unsafe rule %s: variable(s) %s not bound by a positive body atom"
                % (rule, ", ".join(sorted(missing)))
            )
        order.append(step)
        pending.remove(step)
    return order


def _rule_instances(rule: AspRule, order: list, pool: _Pool) -> Iterator[dict[str, Term]]:
    def walk(i: int, b: dict[str, Term]) -> Iterator[dict[str, Term]]:
        if i == len(order):
            yield b
            return
        e = order[i]
        if isinstance(e, Comparison):
            if _eval_comparison(e, b):
                yield from walk(i + 1, b)
            return
        lit, naf = e
        if naf:
            yield from walk(i + 1, b)
            return
        for nb in pool.match(lit, b):
            yield from walk(i + 1, nb)

    yield from walk(0, {})


def ground_asp(prog: AspProgram) -> GroundAsp:
    """Instantiate rules over the possibly-derivable atoms."""
    plans = []
    for r in prog.rules:
        if r.choice is None and len(r.heads) > 1:
            raise UnsupportedFeatureError(
                "disjunctive heads are parsed but not solved: %s" % r
            )
        plans.append((r, _plan(r)))

    pool = _Pool()
    changed = True
    while changed:
        changed = False
        for r, order in plans:
            for b in _rule_instances(r, order, pool):
                if r.choice is not None:
                    ch = r.choice
                    head_vars = _lit_vars(ch.template) - set(b)
                    cond_vars = _lit_vars(ch.condition) if ch.condition else set()
                    if not head_vars <= (cond_vars | set(b)):
                        raise AspError("choice template variables not bound: %s" % r)
                    if ch.condition is None:
                        if pool.add(_subst_lit(ch.template, b)):
                            changed = True
                    else:
                        for cb in pool.match(ch.condition, b):
                            if pool.add(_subst_lit(ch.template, cb)):
                                changed = True
                elif r.heads:
                    if pool.add(_subst_lit(r.heads[0], b)):
                        changed = True

    normals: list[GroundNormal] = []
    choices: list[GroundChoice] = []
    seen_n: set[GroundNormal] = set()
    seen_c: set[GroundChoice] = set()
    for r, order in plans:
        for b in _rule_instances(r, order, pool):
            pos = tuple(_subst_lit(e[0], b) for e in r.body if isinstance(e, tuple) and not e[1])
            naf = tuple(_subst_lit(e[0], b) for e in r.body if isinstance(e, tuple) and e[1])
            if r.choice is not None:
                ch = r.choice
                if ch.condition is None:
                    cands = (_subst_lit(ch.template, b),)
                else:
                    cands = tuple(_subst_lit(ch.template, cb) for cb in pool.match(ch.condition, b))
                gc = GroundChoice(ch.lower, ch.upper, cands, pos, naf)
                if gc not in seen_c:
                    seen_c.add(gc)
                    choices.append(gc)
            else:
                head = _subst_lit(r.heads[0], b) if r.heads else None
                gn = GroundNormal(head, pos, naf)
                if gn not in seen_n:
                    seen_n.add(gn)
                    normals.append(gn)
    return GroundAsp(normals, choices)


# ---------------------------------------------------------------------------
# reduct and verification (the independent checking path)


def reduct(ground: GroundAsp, m: Iterable[AspLit]) -> list[GroundNormal]:
    """Gelfond-Lifschitz reduct of the normal part with respect to M.

    Rules with a ``not l`` where l is in M are dropped; surviving rules
    lose their remaining not-literals.  Choice rules contribute support
    rules for their selected candidates (handled by the caller).
    """
    mset = set(m)
    out = []
    for r in ground.normals:
        if any(l in mset for l in r.naf):
            continue
        out.append(GroundNormal(r.head, r.pos, ()))
    return out


def _least_model_pos(rules: Sequence[GroundNormal]) -> set[AspLit]:
    watchers: dict[AspLit, list[int]] = defaultdict(list)
    remaining: list[int] = []
    heads: list[Optional[AspLit]] = []
    agenda: list[AspLit] = []
    derived: set[AspLit] = set()
    for r in rules:
        if r.head is None:
            continue
        pos = set(r.pos)
        idx = len(heads)
        heads.append(r.head)
        remaining.append(len(pos))
        if not pos:
            agenda.append(r.head)
        for l in pos:
            watchers[l].append(idx)
    while agenda:
        h = agenda.pop()
        if h in derived:
            continue
        derived.add(h)
        for idx in watchers.get(h, ()):
            remaining[idx] -= 1
            if remaining[idx] == 0:
                agenda.append(heads[idx])
    return derived


def is_stable_model(ground: GroundAsp, m: frozenset[AspLit]) -> bool:
    """Check M = LM(reduct) plus constraint, bound, and consistency conditions."""
    for a in m:
        if a.complement() in m:
            return False
    for r in ground.normals:
        if r.head is None:
            if all(l in m for l in r.pos) and not any(l in m for l in r.naf):
                return False
    support = reduct(ground, m)
    for c in ground.choices:
        if any(l in m for l in c.naf):
            continue
        body_holds = all(l in m for l in c.pos)
        selected = [a for a in c.candidates if a in m]
        if body_holds:
            if len(selected) < c.lower:
                return False
            if c.upper is not None and len(selected) > c.upper:
                return False
            for a in selected:
                support.append(GroundNormal(a, c.pos, ()))
    return _least_model_pos(support) == set(m)


# ---------------------------------------------------------------------------
# search


def stable_models(prog: AspProgram, limit: Optional[int] = None) -> list[AnswerSet]:
    """Enumerate answer sets in a deterministic order."""
    g = ground_asp(prog)
    return stable_models_ground(g, limit)


def stable_models_ground(g: GroundAsp, limit: Optional[int] = None) -> list[AnswerSet]:
    results: list[AnswerSet] = []
    seen: set[frozenset[AspLit]] = set()

    # atoms derivable without any choice/naf support never change
    facts = _least_model_pos([r for r in g.normals if r.head is not None and not r.naf])

    choice_active: list[GroundChoice] = []
    free_atoms: set[AspLit] = set()
    for c in g.choices:
        if all(l in facts for l in c.pos) and not c.naf:
            choice_active.append(c)
        else:
            # body truth depends on the guess; treat candidates as free
            free_atoms.update(c.candidates)

    pos_rules = [r for r in g.normals if r.head is not None]
    pure_pos_constraints = [r for r in g.normals if r.head is None and not r.naf]

    naf_free_rules = [r for r in pos_rules if not r.naf]

    def derive(chosen_true: set[AspLit]) -> set[AspLit]:
        # monotone consequences of the current partial assignment; rules
        # with naf are skipped, so this is a sound under-approximation
        # usable for eager constraint pruning
        derived = set(chosen_true)
        changed = True
        while changed:
            changed = False
            for r in naf_free_rules:
                if r.head not in derived and all(l in derived for l in r.pos):
                    derived.add(r.head)
                    changed = True
        return derived

    def violates(derived: set[AspLit]) -> bool:
        for r in pure_pos_constraints:
            if all(l in derived for l in r.pos):
                return True
        return False

    def bound_check(assign: dict[AspLit, bool]) -> bool:
        for c in choice_active:
            t = sum(1 for a in c.candidates if assign.get(a) is True)
            u = sum(1 for a in c.candidates if a not in assign)
            if c.upper is not None and t > c.upper:
                return False
            if t + u < c.lower:
                return False
        return True

    def finish(assign: dict[AspLit, bool]) -> Iterator[frozenset[AspLit]]:
        chosen_true = {a for a, v in assign.items() if v}
        chosen_false = {a for a, v in assign.items() if not v}
        # solve the remaining normal program with chosen atoms fixed
        normals = []
        for r in g.normals:
            if r.head is None:
                normals.append(r)
                continue
            if r.head in chosen_false:
                continue
            if any(l in chosen_false for l in r.pos):
                continue
            pos = tuple(l for l in r.pos if l not in chosen_true)
            normals.append(GroundNormal(r.head, pos, r.naf))
        for a in sorted(chosen_true, key=str):
            normals.append(GroundNormal(a, (), ()))

        univ: set[AspLit] = set()
        for r in normals:
            if r.head is not None:
                univ.add(r.head)
            univ.update(r.pos)
            univ.update(r.naf)
        univ -= chosen_false

        def lm(block: set[AspLit]) -> set[AspLit]:
            out = set()
            changed = True
            while changed:
                changed = False
                for r in normals:
                    if r.head is None or r.head in out:
                        continue
                    if any(l in block for l in r.naf):
                        continue
                    if all(l in out for l in r.pos):
                        out.add(r.head)
                        changed = True
            return out

        true: set[AspLit] = set()
        possible = lm(true)
        while True:
            nxt = lm(possible)
            nxt_possible = lm(nxt)
            if nxt == true:
                possible = nxt_possible
                break
            true, possible = nxt, nxt_possible
        undef = sorted(possible - true, key=str)
        if not undef:
            yield frozenset(true)
            return
        # branch over undefined atoms, smallest candidate sets first
        for k in range(0, len(undef) + 1):
            for extra in itertools.combinations(undef, k):
                yield frozenset(true | set(extra))

    def emit(candidate: frozenset[AspLit]) -> bool:
        """Returns True when the limit is reached."""
        if candidate in seen:
            return False
        if is_stable_model(g, candidate):
            seen.add(candidate)
            results.append(AnswerSet(candidate))
            if limit is not None and len(results) >= limit:
                return True
        return False

    def assign_choices(i: int, assign: dict[AspLit, bool]) -> bool:
        if limit is not None and len(results) >= limit:
            return True
        if i == len(choice_active):
            for cand in finish(assign):
                if emit(cand):
                    return True
            return False
        c = choice_active[i]
        decided_true = [a for a in c.candidates if assign.get(a) is True]
        undecided = [a for a in c.candidates if a not in assign]
        lo = max(c.lower - len(decided_true), 0)
        hi = len(undecided) if c.upper is None else min(len(undecided), c.upper - len(decided_true))
        if hi < 0 or lo > len(undecided):
            return False
        for k in range(lo, hi + 1):
            for pick in itertools.combinations(undecided, k):
                nxt = dict(assign)
                for a in undecided:
                    nxt[a] = a in pick
                if not bound_check(nxt):
                    continue
                derived = derive({a for a, v in nxt.items() if v})
                if violates(derived):
                    continue
                if assign_choices(i + 1, nxt):
                    return True
        return False

    base_assign: dict[AspLit, bool] = {}
    # free atoms (from choices with non-fact bodies) are guessed up front
    free_sorted = sorted(free_atoms, key=str)

    def assign_free(j: int, assign: dict[AspLit, bool]) -> bool:
        if j == len(free_sorted):
            return assign_choices(0, assign)
        for v in (True, False):
            nxt = dict(assign)
            nxt[free_sorted[j]] = v
            if assign_free(j + 1, nxt):
                return True
        return False

    assign_free(0, base_assign)
    return results


# ---------------------------------------------------------------------------
# queries


def asp_query(prog: AspProgram, goal: Sequence[AspLit]) -> str:
    """Answer yes / no / unknown / no-models for a ground conjunction."""
    models = stable_models(prog)
    if not models:
        return "no-models"
    if all(all(l in m for l in goal) for m in models):
        return "yes"
    for l in goal:
        if all(l.complement() in m for m in models):
            return "no"
    return "unknown"


def parse_asp_literal(text: str) -> AspLit:
    p = _AspParser(_tokenize(text))
    lit = p.literal()
    if p.at("."):
        p.next()
    if p.peek() is not None:
        raise AspParseError("trailing input after literal: %r" % p.peek().text)
    return lit


def parse_asp_goal(text: str) -> list[AspLit]:
    p = _AspParser(_tokenize(text))
    goal = [p.literal()]
    while p.at(","):
        p.next()
        goal.append(p.literal())
    if p.at("."):
        p.next()
    if p.peek() is not None:
        raise AspParseError("trailing input after goal: %r" % p.peek().text)
    return goal


def format_answer_set(m: AnswerSet, show: Sequence[tuple[str, int]] = (), hide_all: bool = False) -> str:
    atoms = m.project(show, hide_all)
    return " ".join(sorted(str(a) for a in atoms))
