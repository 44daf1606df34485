"""Defeasible-rule engine: grounding, argumentation theory, well-founded model.

A program with labelled defeasible rules is compiled to a plain normal
program in three steps:

1.  ground every rule over the program's constants (builtins evaluated,
    ``is`` bindings computed exactly on decimals);
2.  rewrite each ground defeasible rule ``@r L :- Body`` into
    ``L :- Body, not $defeated(handle(r, L))`` plus a candidacy rule
    ``$candidate(handle(r, L)) :- Body``;
3.  add a concrete argumentation theory deciding ``$defeated``:

        $defeated(H)  :- $refuted(H) | $rebutted(H) | $disqualified(H)
        $refuted(H1)  :- opposes(L1, L2), $candidate(H2),
                         overrides(R2, R1), not $defeated(H2)
        $refuted(H1)  :- opposes(L1, L2), BodyOfStrictRuleFor(L2)
        $rebutted(H1) :- opposes(L1, L2), $candidate(H1), $candidate(H2),
                         not overrides(R1, R2), not overrides(R2, R1),
                         not $defeated(H2)
        $disqualified(handle(R, L)) :- cancel(R)
        $disqualified(handle(R, L)) :- cancel(handle(R, L))

    with opposes closed symmetrically and opposes(A, neg A) built in for
    every atom heading a ground defeasible rule.  The second $refuted rule
    makes strictly derived conclusions defeat any defeasible opposer; a
    defeated rule never refutes or rebuts anything else.

The well-founded model of the result is computed by the alternating
fixpoint: the true set grows and the possible set shrinks until both are
stable.  Strong-negation clashes (A and neg A both true) set an
inconsistency flag instead of raising.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from ..terms import Struct, Term, Var, match
from .syntax import (
    Atom,
    BodyAtom,
    Builtin,
    Lit,
    Program,
    Rule,
    eval_builtin,
    expr_vars,
    lit_vars,
    substitute_lit,
)


class UnsafeRuleError(ValueError):
    def __init__(self, rule: Rule, variables: Sequence[str]):
        self.rule = rule
        self.variables = list(variables)
        super().__init__(
            "unsafe rule %r: variable(s) %s not bound by a positive body literal"
            % (str(rule), ", ".join("?" + v for v in sorted(self.variables)))
        )


class GroundingError(ValueError):
    pass


@dataclass(frozen=True)
class GroundRule:
    head: Lit
    body: tuple[tuple[Lit, bool], ...]  # (literal, negation-as-failure)
    label: Optional[Term] = None
    defeasible: bool = False

    def __str__(self) -> str:
        prefix = "@{%s} " % self.label if self.defeasible else ""
        if not self.body:
            return "%s%s." % (prefix, self.head)
        parts = [("not " + str(l)) if naf else str(l) for l, naf in self.body]
        return "%s%s :- %s." % (prefix, self.head, ", ".join(parts))


@dataclass
class GroundProgram:
    rules: list[GroundRule]
    # (label, ground head) -> handle term
    handles: dict[tuple[Term, Lit], Term] = field(default_factory=dict)

    @property
    def definite(self) -> list[GroundRule]:
        return [r for r in self.rules if not r.defeasible]

    @property
    def defeasible(self) -> list[GroundRule]:
        return [r for r in self.rules if r.defeasible]


def _handle_term(label: Term, head: Lit) -> Term:
    return Struct("handle", (label, head.as_term()))


# ---------------------------------------------------------------------------
# grounding


class _AtomStore:
    """Ground atoms seen so far, indexed by (pred, strong-neg flag)."""

    def __init__(self) -> None:
        self.by_key: dict[tuple[str, bool], list[tuple[Term, ...]]] = defaultdict(list)
        self.seen: set[Lit] = set()

    def add(self, lit: Lit) -> bool:
        if lit in self.seen:
            return False
        self.seen.add(lit)
        self.by_key[(lit.atom.pred, lit.neg)].append(lit.atom.args)
        return True

    def candidates(self, lit: Lit) -> list[tuple[Term, ...]]:
        return self.by_key.get((lit.atom.pred, lit.neg), [])


def _plan_body(rule: Rule, prebound: set[str]) -> list:
    """Order body elements so every variable is bound before it is used."""
    bound = set(prebound)
    pending = list(rule.body)
    order = []
    while pending:
        step = None
        for e in pending:
            if isinstance(e, Builtin):
                if e.op == "is" and isinstance(e.lhs, Var) and e.lhs.name not in bound:
                    if set(expr_vars(e.rhs)) <= bound:
                        step = e
                        bound.add(e.lhs.name)
                        break
                elif set(expr_vars(e.lhs)) | set(expr_vars(e.rhs)) <= bound:
                    step = e
                    break
            elif e.naf:
                if lit_vars(e.lit) <= bound:
                    step = e
                    break
        if step is None:
            for e in pending:
                if isinstance(e, BodyAtom) and not e.naf:
                    step = e
                    bound |= lit_vars(e.lit)
                    break
        if step is None:
            unbound = set()
            for e in pending:
                if isinstance(e, BodyAtom):
                    unbound |= lit_vars(e.lit) - bound
                else:
                    unbound |= (set(expr_vars(e.lhs)) | set(expr_vars(e.rhs))) - bound
            raise UnsafeRuleError(rule, sorted(unbound))
        order.append(step)
        pending.remove(step)
    head_unbound = lit_vars(rule.head) - bound
    if head_unbound:
        raise UnsafeRuleError(rule, sorted(head_unbound))
    return order


def _instances(rule: Rule, order: list, store: _AtomStore, binding: dict[str, Term]) -> Iterator[dict[str, Term]]:
    def walk(i: int, b: dict[str, Term]) -> Iterator[dict[str, Term]]:
        if i == len(order):
            yield b
            return
        e = order[i]
        if isinstance(e, Builtin):
            nb = eval_builtin(e, b)
            if nb is not None:
                yield from walk(i + 1, nb)
            return
        if e.naf:
            yield from walk(i + 1, b)
            return
        pat = e.lit
        for args in store.candidates(pat):
            nb: Optional[dict[str, Term]] = b
            for p, g in zip(pat.atom.args, args):
                nb = match(p, g, nb)
                if nb is None:
                    break
            if nb is not None:
                yield from walk(i + 1, nb)

    yield from walk(0, dict(binding))


def _ground_instance(rule: Rule, binding: dict[str, Term], label: Optional[Term] = None) -> GroundRule:
    body = []
    for e in rule.body:
        if isinstance(e, BodyAtom):
            body.append((substitute_lit(e.lit, binding), e.naf))
    return GroundRule(substitute_lit(rule.head, binding), tuple(body), label if label is not None else rule.label, rule.defeasible)


def ground(program: Program) -> GroundProgram:
    """Ground a program over its own constants.

    Rules whose head is ``opposes/2`` or ``cancel(handle(...))`` may leave
    head variables unbound by their body; those are instantiated by
    matching the head templates against the ground heads of the other
    rules (the only literals an opposition or cancellation can concern).
    """
    plain: list[Rule] = []
    schema: list[Rule] = []  # opposes / handle-cancel rules, grounded second
    for r in program.rules:
        if r.head.atom.pred == "opposes" and len(r.head.atom.args) == 2 and lit_vars(r.head):
            schema.append(r)
        elif (
            r.head.atom.pred == "cancel"
            and len(r.head.atom.args) == 1
            and isinstance(r.head.atom.args[0], Struct)
            and r.head.atom.args[0].functor == "handle"
            and lit_vars(r.head)
        ):
            schema.append(r)
        else:
            plain.append(r)

    store = _AtomStore()
    plans = []
    for r in plain:
        plans.append((r, _plan_body(r, set())))

    # possible-atom fixpoint: what could ever be derived, ignoring naf
    changed = True
    while changed:
        changed = False
        for r, order in plans:
            for b in _instances(r, order, store, {}):
                if store.add(substitute_lit(r.head, b)):
                    changed = True

    ground_rules: list[GroundRule] = []
    seen: set[tuple] = set()

    def emit(gr: GroundRule) -> None:
        key = (gr.label, gr.defeasible, gr.head, gr.body)
        if key not in seen:
            seen.add(key)
            ground_rules.append(gr)

    for r, order in plans:
        for b in _instances(r, order, store, {}):
            emit(_ground_instance(r, b))

    # heads a schema rule may talk about: every ground rule head
    pool = []
    pool_seen = set()
    for gr in ground_rules:
        if gr.head not in pool_seen:
            pool_seen.add(gr.head)
            pool.append(gr.head)

    for r in schema:
        if r.head.atom.pred == "opposes":
            t1, t2 = r.head.atom.args
            for l1, l2 in itertools.product(pool, pool):
                if l1 == l2:
                    continue
                b = match(t1, l1.as_term(), {})
                if b is None:
                    continue
                b = match(t2, l2.as_term(), b)
                if b is None:
                    continue
                order = _plan_body(r, set(b))
                for full in _instances(r, order, store, b):
                    emit(_ground_instance(r, full))
                    store.add(substitute_lit(r.head, full))
        else:  # cancel(handle(label, headpat)) :- body
            harg = r.head.atom.args[0]
            for gr in ground_rules:
                if not gr.defeasible:
                    continue
                b = match(harg, _handle_term(gr.label, gr.head), {})
                if b is None:
                    continue
                order = _plan_body(r, set(b))
                for full in _instances(r, order, store, b):
                    emit(_ground_instance(r, full))
                    store.add(substitute_lit(r.head, full))

    gp = GroundProgram(ground_rules)
    for gr in ground_rules:
        if gr.defeasible:
            if gr.label is None:
                raise GroundingError("defeasible rule without a label: %s" % gr)
            key = (gr.label, gr.head)
            if key not in gp.handles:
                gp.handles[key] = _handle_term(gr.label, gr.head)
    return gp


# ---------------------------------------------------------------------------
# defeasible reduction and the argumentation theory


def _aux(pred: str, *args: Term) -> Lit:
    return Lit(Atom(pred, tuple(args)))


def reduce_defeasible(gp: GroundProgram) -> list[GroundRule]:
    """Compile defeasible rules to normal rules guarded by $defeated."""
    out: list[GroundRule] = []
    for gr in gp.rules:
        if not gr.defeasible:
            out.append(gr)
            continue
        h = gp.handles[(gr.label, gr.head)]
        guarded = gr.body + (( _aux("$defeated", h), True),)
        out.append(GroundRule(gr.head, guarded, gr.label, False))
        out.append(GroundRule(_aux("$candidate", h), gr.body, gr.label, False))
    return out


def default_argumentation_theory(gp: GroundProgram) -> list[GroundRule]:
    """The shipped argumentation theory, instantiated for one program."""
    at: list[GroundRule] = []
    handles = [(label, head, h) for (label, head), h in gp.handles.items()]

    # opposes(A, neg A) is built in for every defeasible head
    builtin_opposes: set[tuple[Term, Term]] = set()
    for _, head, _ in handles:
        a, na = Lit(head.atom, False), Lit(head.atom, True)
        builtin_opposes.add((a.as_term(), na.as_term()))
        builtin_opposes.add((na.as_term(), a.as_term()))
    for t1, t2 in sorted(builtin_opposes, key=str):
        at.append(GroundRule(Lit(Atom("opposes", (t1, t2))), ()))

    # symmetric closure of user opposes rules, and the set of literal pairs
    # an opposes atom could ever relate
    possible: set[tuple[Term, Term]] = set(builtin_opposes)
    for gr in gp.rules:
        if gr.head.atom.pred == "opposes" and len(gr.head.atom.args) == 2 and not gr.defeasible:
            t1, t2 = gr.head.atom.args
            possible.add((t1, t2))
            possible.add((t2, t1))
            at.append(GroundRule(Lit(Atom("opposes", (t2, t1))), gr.body))

    def opposed(l1: Lit, l2: Lit) -> bool:
        return (l1.as_term(), l2.as_term()) in possible

    for label, head, h in handles:
        at.append(GroundRule(_aux("$defeated", h), ((_aux("$refuted", h), False),)))
        at.append(GroundRule(_aux("$defeated", h), ((_aux("$rebutted", h), False),)))
        at.append(GroundRule(_aux("$defeated", h), ((_aux("$disqualified", h), False),)))
        at.append(GroundRule(_aux("$disqualified", h), ((Lit(Atom("cancel", (label,))), False),)))
        at.append(GroundRule(_aux("$disqualified", h), ((Lit(Atom("cancel", (h,))), False),)))

    for (r1, l1, h1), (r2, l2, h2) in itertools.permutations(handles, 2):
        if not opposed(l1, l2):
            continue
        opp = Lit(Atom("opposes", (l1.as_term(), l2.as_term())))
        at.append(
            GroundRule(
                _aux("$refuted", h1),
                (
                    (opp, False),
                    (_aux("$candidate", h2), False),
                    (Lit(Atom("overrides", (r2, r1))), False),
                    (_aux("$defeated", h2), True),
                ),
            )
        )
        at.append(
            GroundRule(
                _aux("$rebutted", h1),
                (
                    (opp, False),
                    (_aux("$candidate", h1), False),
                    (_aux("$candidate", h2), False),
                    (Lit(Atom("overrides", (r1, r2))), True),
                    (Lit(Atom("overrides", (r2, r1))), True),
                    (_aux("$defeated", h2), True),
                ),
            )
        )

    # strictly derived opposers defeat defeasible rules outright
    for r1, l1, h1 in handles:
        for gr in gp.rules:
            if gr.defeasible or not opposed(l1, gr.head):
                continue
            opp = Lit(Atom("opposes", (l1.as_term(), gr.head.as_term())))
            at.append(GroundRule(_aux("$refuted", h1), ((opp, False),) + gr.body))
    return at


# ---------------------------------------------------------------------------
# well-founded model


@dataclass
class Interpretation:
    true: frozenset[Lit]
    false: frozenset[Lit]
    undefined: frozenset[Lit]
    inconsistent: bool
    trace: list[tuple[int, int]] = field(default_factory=list)  # (|T|, |P|) per pass

    def value(self, lit: Lit) -> str:
        if lit in self.true:
            return "true"
        if lit in self.undefined:
            return "undefined"
        return "false"


def _least_model(rules: Sequence[GroundRule], blocked_if_in: frozenset[Lit] | set[Lit]) -> set[Lit]:
    """Least model with each ``not L`` read as "L not in the given set"."""
    heads: list[Lit] = []
    watchers: dict[Lit, list[int]] = defaultdict(list)
    remaining: list[int] = []
    agenda: deque[Lit] = deque()
    derived: set[Lit] = set()
    for gr in rules:
        if any(naf and l in blocked_if_in for l, naf in gr.body):
            continue
        pos = {l for l, naf in gr.body if not naf}
        idx = len(heads)
        heads.append(gr.head)
        remaining.append(len(pos))
        if not pos:
            agenda.append(gr.head)
        for l in pos:
            watchers[l].append(idx)
    while agenda:
        h = agenda.popleft()
        if h in derived:
            continue
        derived.add(h)
        for idx in watchers.get(h, ()):
            remaining[idx] -= 1
            if remaining[idx] == 0:
                agenda.append(heads[idx])
    return derived


def wfm(rules: Sequence[GroundRule]) -> Interpretation:
    """Well-founded model by the alternating fixpoint.

    The true set is non-decreasing and the possible set non-increasing
    across passes; both are recorded in the trace for the monotonicity
    property tests.
    """
    universe: set[Lit] = set()
    for gr in rules:
        universe.add(gr.head)
        for l, _ in gr.body:
            universe.add(l)
    true: set[Lit] = set()
    trace: list[tuple[int, int]] = []
    possible = _least_model(rules, true)
    while True:
        trace.append((len(true), len(possible)))
        nxt_true = _least_model(rules, possible)
        nxt_possible = _least_model(rules, nxt_true)
        if nxt_true == true:
            possible = nxt_possible
            break
        true, possible = nxt_true, nxt_possible
    undefined = possible - true
    false = universe - possible
    inconsistent = any(l.neg and l.complement() in true for l in true)
    return Interpretation(frozenset(true), frozenset(false), frozenset(undefined), inconsistent, trace)


# ---------------------------------------------------------------------------
# queries


@dataclass
class QueryResult:
    status: str  # yes | no | unknown
    bindings: list[dict[str, Term]]
    has_undefined: bool
    inconsistent: bool

    def binding_strings(self) -> list[dict[str, str]]:
        return [{k: str(v) for k, v in b.items()} for b in self.bindings]


class Engine:
    """Grounds a program once and answers three-valued queries."""

    def __init__(self, program: Program):
        self.program = program
        self.ground_program = ground(program)
        reduced = reduce_defeasible(self.ground_program)
        theory = default_argumentation_theory(self.ground_program)
        self.normal_rules = reduced + theory
        self.interpretation = wfm(self.normal_rules)

    def query(self, goal: Sequence[BodyAtom]) -> QueryResult:
        interp = self.interpretation
        results: list[dict[str, Term]] = []
        seen: set[tuple] = set()
        has_undef = False

        conjs = list(goal)
        # bind variables through positive conjuncts first
        conjs.sort(key=lambda c: c.naf)

        def lit_value(lit: Lit) -> str:
            return interp.value(lit)

        def conj_value(lit: Lit, naf: bool) -> str:
            v = lit_value(lit)
            if not naf:
                return v
            return {"true": "false", "false": "true", "undefined": "undefined"}[v]

        def walk(i: int, binding: dict[str, Term], worst: str) -> None:
            nonlocal has_undef
            if worst == "false":
                return
            if i == len(conjs):
                if worst == "true":
                    key = tuple(sorted((k, str(v)) for k, v in binding.items()))
                    if key not in seen:
                        seen.add(key)
                        results.append(binding)
                elif worst == "undefined":
                    has_undef = True
                return
            c = conjs[i]
            free = lit_vars(c.lit) - set(binding)
            if not free:
                glit = substitute_lit(c.lit, binding)
                v = conj_value(glit, c.naf)
                walk(i + 1, binding, _meet(worst, v))
                return
            if c.naf:
                raise GroundingError("unbound variable in negative query literal: %s" % c)
            # enumerate instances that are at least possibly true
            for cand in interp.true | interp.undefined:
                if cand.atom.pred != c.lit.atom.pred or cand.neg != c.lit.neg:
                    continue
                if len(cand.atom.args) != len(c.lit.atom.args):
                    continue
                b: Optional[dict[str, Term]] = binding
                for p, g in zip(c.lit.atom.args, cand.atom.args):
                    b = match(p, g, b)
                    if b is None:
                        break
                if b is None:
                    continue
                v = conj_value(cand, False)
                walk(i + 1, b, _meet(worst, v))

        walk(0, {}, "true")
        results.sort(key=lambda b: tuple(str(b[k]) for k in sorted(b)))
        if results:
            status = "yes"
        elif has_undef:
            status = "unknown"
        else:
            status = "no"
        return QueryResult(status, results, has_undef, interp.inconsistent)

    def supporting_labels(self, lit: Lit) -> list[Term]:
        """Labels of rules that actually derive a literal true in the model."""
        interp = self.interpretation
        out = []
        for gr in self.ground_program.rules:
            if gr.head != lit or gr.label is None:
                continue
            if all(
                (interp.value(l) == "true") != naf if interp.value(l) != "undefined" else False
                for l, naf in gr.body
            ):
                if gr.defeasible:
                    h = self.ground_program.handles[(gr.label, gr.head)]
                    if interp.value(Lit(Atom("$defeated", (h,)))) == "true":
                        continue
                out.append(gr.label)
        return out

    def model_dump(self, include_internal: bool = False) -> str:
        """Three sections T/F/U, one literal per line, sorted."""

        def keep(l: Lit) -> bool:
            return include_internal or not l.atom.pred.startswith("$")

        lines = []
        for name, s in (("T", self.interpretation.true), ("F", self.interpretation.false), ("U", self.interpretation.undefined)):
            lines.append(name + ":")
            for l in sorted((x for x in s if keep(x)), key=str):
                lines.append("  " + str(l))
        return "\n".join(lines) + "\n"


def _meet(a: str, b: str) -> str:
    order = {"false": 0, "undefined": 1, "true": 2}
    return a if order[a] <= order[b] else b
