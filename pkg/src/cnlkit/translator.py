"""Translate annotated sentence records into a defeasible logic program.

Facts come from atomic sentences; implications and defaults become rules,
definite when marked strict and labelled defeasible otherwise.  The
defeat machinery is emitted alongside: ``overrides`` facts for exception
annotations (plus an opposition rule between the two rule heads),
conditional ``opposes`` rules for at-most-one conflict constraints, and
``cancel`` rules for cancellation conditionals.  Scalar implicatures
expand quantifier and predicate scales into witness facts and labelled
defeasible negative conclusions; or-sentences become the inclusive or
exclusive two-rule encodings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .builder import SentenceRecord
from .drs import DRS, Complex, Referent, Simple
from .lpda.syntax import Atom, BodyAtom, Builtin, Lit, Program, Rule
from .terms import Const, Struct, Term, Var


class TranslationError(ValueError):
    pass


class OverridesCycleError(TranslationError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("overrides relation is cyclic: %s" % " -> ".join(cycle))


@dataclass
class ScaleTable:
    scales: list[list[str]] = field(default_factory=list)

    def __post_init__(self):
        seen: set[str] = set()
        for s in self.scales:
            if len(s) < 2:
                raise TranslationError("a scale needs at least two symbols: %r" % (s,))
            for sym in s:
                if sym in seen:
                    raise TranslationError("symbol %r appears in more than one scale" % sym)
                seen.add(sym)

    def find(self, symbol: str) -> Optional[tuple[list[str], int]]:
        for s in self.scales:
            if symbol in s:
                return s, s.index(symbol)
        return None


def load_scales(text: str) -> ScaleTable:
    scales = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"scale\s*\(([^()]*)\)\s*\.", line)
        if not m:
            raise TranslationError("line %d: expected scale(a, b, ...)." % lineno)
        scales.append([s.strip() for s in m.group(1).split(",") if s.strip()])
    return ScaleTable(scales)


class SkolemGen:
    """Fresh #1, #2, ... witness constants, never reused in a document."""

    def __init__(self) -> None:
        self.counter = 0

    def fresh(self) -> Const:
        self.counter += 1
        return Const("#%d" % self.counter)


@dataclass
class Translation:
    program: Program
    # str(label) -> provenance: ("sentence", id) or ("implicature", id)
    label_map: dict[str, tuple[str, str]] = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return str(self.program)


class _VarNamer:
    """Rule variables named after their introducing noun: ?Customer."""

    def __init__(self) -> None:
        self.by_ref: dict[str, Var] = {}
        self.used: set[str] = set()

    def var_for(self, ref: Referent) -> Var:
        if ref.label in self.by_ref:
            return self.by_ref[ref.label]
        base = (ref.noun or "x").replace("-", "_")
        name = base[:1].upper() + base[1:]
        cand, k = name, 1
        while cand in self.used:
            k += 1
            cand = "%s%d" % (name, k)
        self.used.add(cand)
        v = Var(cand)
        self.by_ref[ref.label] = v
        return v


class Translator:
    def __init__(self, scales: Optional[ScaleTable] = None, role_nouns: frozenset[str] = frozenset()):
        self.scales = scales or ScaleTable([])
        self.role_nouns = role_nouns
        self.skolems = SkolemGen()
        self._rule_n = 0
        self._imp_n = 0
        self._scale_rules_done: set[str] = set()

    # -- label generators ------------------------------------------------------

    def _next_rule_label(self) -> Const:
        self._rule_n += 1
        return Const("r%d" % self._rule_n)

    def _next_imp_label(self) -> Const:
        self._imp_n += 1
        return Const("imp%d" % self._imp_n)

    # -- entry point -------------------------------------------------------------

    def translate(self, records: Sequence[SentenceRecord], root: DRS) -> Translation:
        out = Translation(Program())
        rule_by_sentence: dict[str, Rule] = {}
        deferred_conflicts: list[SentenceRecord] = []
        deferred_cancels: list[SentenceRecord] = []

        for rec in records:
            if rec.mode == "conflict_constraint":
                deferred_conflicts.append(rec)
                continue
            if rec.cancel_targets:
                deferred_cancels.append(rec)
                continue
            if "disjunction" in rec.meta:
                d = rec.meta["disjunction"]
                rules = encode_disjunction(d["kind"], d["subject"].constant, d["verb"], d["alternatives"])
                out.program.rules.extend(rules)
                continue
            if rec.meta.get("quant") == "some":
                self.scalar_expand(rec, out)
                continue
            if "rule" in rec.meta:
                rule = self._translate_rule(rec, out)
                if rule is not None:
                    rule_by_sentence[rec.id] = rule
                continue
            self._translate_fact(rec, out)

        for rec in records:
            if rec.exception is None:
                continue
            own = rule_by_sentence.get(rec.id)
            if own is None or not own.defeasible:
                raise TranslationError(
                    "[%s] exception annotations require a defeasible rule sentence" % rec.id
                )
            for target_id in rec.exception[1]:
                target = rule_by_sentence.get(target_id)
                if target is None:
                    raise TranslationError(
                        "[%s] exception target %r is not a rule sentence" % (rec.id, target_id)
                    )
                out.program.rules.append(
                    Rule(Lit(Atom("overrides", (own.label, target.label))), [])
                )
                out.program.rules.append(_opposition_rule(own, target))

        for rec in deferred_cancels:
            self._translate_cancel(rec, rule_by_sentence, out)

        for rec in deferred_conflicts:
            self._translate_conflict(rec, out)

        overrides_closure(out.program)
        return out

    # -- facts ---------------------------------------------------------------------

    def _translate_fact(self, rec: SentenceRecord, out: Translation) -> None:
        env = _FactEnv()
        lits, builtins = _conditions_to_literals(rec.conditions, env, rec.id, self.role_nouns)
        if builtins:
            raise TranslationError("[%s] arithmetic in a ground fact sentence" % rec.id)
        # a predicative adjective on a scale triggers the predicate-scale
        # implicature machinery instead of a bare fact
        scaled = [l for l in lits if self.scales.find(l.atom.pred)]
        if scaled and len(lits) == 1 and not lits[0].neg and len(lits[0].atom.args) == 1:
            self._scalar_predicate(lits[0], rec, out)
            return
        for l in lits:
            out.program.rules.append(Rule(l, []))

    # -- rules ------------------------------------------------------------------------

    def _translate_rule(self, rec: SentenceRecord, out: Translation) -> Optional[Rule]:
        cond: Complex = rec.meta["rule"]
        ant, cons = cond.subs
        namer = _VarNamer()
        env = _RuleEnv(namer)
        body_lits, body_builtins = _conditions_to_literals(list(ant.conditions), env, rec.id, self.role_nouns)
        head_lits, head_builtins = _conditions_to_literals(list(cons.conditions), env, rec.id, self.role_nouns)
        if len(head_lits) != 1:
            raise TranslationError(
                "[%s] rule consequent must yield a single literal, got %d" % (rec.id, len(head_lits))
            )
        head = head_lits[0]
        body: list = [BodyAtom(l) for l in body_lits]
        body.extend(body_builtins)
        body.extend(head_builtins)
        if rec.mode == "strict":
            rule = Rule(head, body, None, defeasible=False)
        else:
            label = self._next_rule_label()
            rule = Rule(head, body, label, defeasible=True)
            out.label_map[str(label)] = ("sentence", rec.id)
        out.program.rules.append(rule)
        return rule

    # -- cancellation conditionals --------------------------------------------------------

    def _translate_cancel(self, rec: SentenceRecord, rule_by_sentence: dict[str, Rule], out: Translation) -> None:
        ant: DRS = rec.meta["cancel_antecedent"]
        subj: Referent = rec.meta["cancel_subject"]
        namer = _VarNamer()
        env = _RuleEnv(namer)
        body_lits, builtins = _conditions_to_literals(list(ant.conditions), env, rec.id, self.role_nouns)
        body: list = [BodyAtom(l) for l in body_lits]
        body.extend(builtins)
        subj_term = env.term_for(subj)
        for target_id in rec.cancel_targets:
            target = rule_by_sentence.get(target_id)
            if target is None or not target.defeasible:
                raise TranslationError(
                    "[%s] cancel target %r is not a defeasible rule sentence" % (rec.id, target_id)
                )
            if isinstance(subj_term, Var) and target.head.atom.args:
                # link the cancellation to rule instances whose first
                # argument is the cancelled subject
                head_args: list[Term] = [subj_term]
                for i in range(1, len(target.head.atom.args)):
                    head_args.append(Var("Any%d" % i))
                head_pat = Lit(Atom(target.head.atom.pred, tuple(head_args)), target.head.neg)
                cancel_arg: Term = Struct("handle", (target.label, head_pat.as_term()))
            else:
                cancel_arg = target.label
            out.program.rules.append(Rule(Lit(Atom("cancel", (cancel_arg,))), list(body)))

    # -- conflict constraints ----------------------------------------------------------------

    def _translate_conflict(self, rec: SentenceRecord, out: Translation) -> None:
        meta = rec.meta.get("atmost")
        if meta is None:
            raise TranslationError("[%s] unsupported conflict constraint form" % rec.id)
        pred = meta["counted_noun"]
        candidates = [
            r for r in out.program.rules
            if r.head.atom.pred == pred and not r.head.neg and r.head.atom.args
        ]
        if not candidates:
            raise TranslationError(
                "[%s] conflict constraint over %r, but no rule concludes it" % (rec.id, pred)
            )
        arity = len(candidates[0].head.atom.args)
        if any(len(r.head.atom.args) != arity for r in candidates):
            raise TranslationError("[%s] rules for %r disagree on arity" % (rec.id, pred))
        shared = [Var("V%d" % i) for i in range(1, arity)]
        a1, a2 = Var("Amount1"), Var("Amount2")
        l1 = Lit(Atom(pred, tuple(shared) + (a1,)))
        l2 = Lit(Atom(pred, tuple(shared) + (a2,)))
        body: list = [BodyAtom(l) for l in _common_support(candidates, shared)]
        body.append(Builtin("!=", a1, a2))
        out.program.rules.append(Rule(Lit(Atom("opposes", (l1.as_term(), l2.as_term()))), body))

    # -- scalar implicatures ---------------------------------------------------------------------

    def scalar_expand(self, rec: SentenceRecord, out: Translation) -> None:
        """Quantifier scale: witnesses plus a defeasible negative witness."""
        found = self.scales.find("some")
        if found is None:
            raise TranslationError("[%s] quantifier 'some' is not on any scale" % rec.id)
        scale, idx = found
        if idx == len(scale) - 1:
            out.notices.append("[%s] scale maximum, no implicature" % rec.id)
            return
        subj_noun, verb, extra_args = _existential_shape(rec)
        w1 = self.skolems.fresh()
        w2 = self.skolems.fresh()
        out.program.rules.append(Rule(Lit(Atom(subj_noun, (w1,))), []))
        out.program.rules.append(Rule(Lit(Atom(verb, (w1,) + extra_args)), []))
        out.program.rules.append(Rule(Lit(Atom(subj_noun, (w2,))), []))
        label = self._next_imp_label()
        out.program.rules.append(Rule(Lit(Atom(verb, (w2,) + extra_args), neg=True), [], label, defeasible=True))
        out.label_map[str(label)] = ("implicature", rec.id)

    def _scalar_predicate(self, fact: Lit, rec: SentenceRecord, out: Translation) -> None:
        """Predicate scale: downward entailments plus one negative implicature."""
        scale, idx = self.scales.find(fact.atom.pred)
        key = ">".join(scale)
        if key not in self._scale_rules_done:
            self._scale_rules_done.add(key)
            x = Var("X")
            for weaker, stronger in zip(scale, scale[1:]):
                out.program.rules.append(
                    Rule(Lit(Atom(weaker, (x,))), [BodyAtom(Lit(Atom(stronger, (x,))))])
                )
        out.program.rules.append(Rule(fact, []))
        if idx == len(scale) - 1:
            out.notices.append("[%s] scale maximum, no implicature" % rec.id)
            return
        stronger_next = scale[idx + 1]
        label = self._next_imp_label()
        out.program.rules.append(
            Rule(Lit(Atom(stronger_next, fact.atom.args), neg=True), [], label, defeasible=True)
        )
        out.label_map[str(label)] = ("implicature", rec.id)


# ---------------------------------------------------------------------------
# disjunction encodings


def encode_disjunction(kind: str, subject, verb: str, alternatives: Sequence) -> list[Rule]:
    """Inclusive or exclusive binary disjunction over one verb."""
    if len(alternatives) != 2:
        raise TranslationError(
            "unsupported construction: disjunction over %d alternatives (only 2 supported)"
            % len(alternatives)
        )
    s = subject if isinstance(subject, Term) else Const(subject)
    a, b = (x if isinstance(x, Term) else Const(x) for x in alternatives)
    va = Lit(Atom(verb, (s, a)))
    vb = Lit(Atom(verb, (s, b)))
    if kind == "inclusive":
        return [
            Rule(vb, [BodyAtom(Lit(va.atom, neg=True))]),
            Rule(va, [BodyAtom(Lit(vb.atom, neg=True))]),
        ]
    if kind == "exclusive":
        return [
            Rule(Lit(vb.atom, neg=True), [BodyAtom(va)]),
            Rule(Lit(va.atom, neg=True), [BodyAtom(vb)]),
        ]
    raise TranslationError("unknown disjunction kind %r" % kind)


# ---------------------------------------------------------------------------
# overrides closure


def overrides_closure(program: Program) -> Program:
    """Close overrides facts transitively; cycles are rejected."""
    facts = {}
    for r in program.rules:
        if r.head.atom.pred == "overrides" and not r.body and len(r.head.atom.args) == 2:
            a, b = r.head.atom.args
            facts[(a, b)] = True
    edges: dict[Term, set[Term]] = {}
    for a, b in facts:
        edges.setdefault(a, set()).add(b)
    changed = True
    while changed:
        changed = False
        for a in list(edges):
            for b in list(edges[a]):
                for c in edges.get(b, ()):
                    if c not in edges[a]:
                        edges[a].add(c)
                        changed = True
    for a, targets in edges.items():
        if a in targets:
            members = sorted({str(a)} | {str(x) for x in targets if a in edges.get(x, set())})
            raise OverridesCycleError(members)
        for b in targets:
            if (a, b) not in facts:
                program.rules.append(Rule(Lit(Atom("overrides", (a, b))), []))
                facts[(a, b)] = True
    return program


# ---------------------------------------------------------------------------
# condition -> literal lowering


class _FactEnv:
    """Referents denote constants in fact sentences."""

    def term_for(self, ref: Referent) -> Term:
        if ref.kind == "named":
            return Const(ref.constant)
        if ref.noun is not None:
            return Const(ref.noun)
        raise TranslationError("referent %s has no denotation" % ref.label)

    introducing_is_literal = False


class _RuleEnv:
    """Referents denote variables in rule scope."""

    def __init__(self, namer: _VarNamer):
        self.namer = namer

    def term_for(self, ref: Referent) -> Term:
        if ref.kind == "named":
            return Const(ref.constant)
        return self.namer.var_for(ref)

    introducing_is_literal = True


def _conditions_to_literals(conditions, env, sid: str, role_nouns: frozenset[str] = frozenset()) -> tuple[list[Lit], list[Builtin]]:
    """Lower DRS conditions to literals under a fact or rule environment."""
    lits: list[Lit] = []
    builtins: list[Builtin] = []
    events: dict[str, dict] = {}

    simples = []
    for c in conditions:
        if isinstance(c, Simple):
            simples.append(c)
        elif c.op == "neg":
            inner_lits, inner_b = _conditions_to_literals(list(c.subs[0].conditions), env, sid, role_nouns)
            if len(inner_lits) != 1 or inner_b:
                raise TranslationError("[%s] negation must wrap a single literal" % sid)
            lits.append(inner_lits[0].complement())
        else:
            raise TranslationError("[%s] nested %r condition not translatable" % (sid, c.op))

    # first pass: group verb events with their modifiers
    for c in simples:
        if c.pred == "predicate":
            ev, verb, *args = c.args
            events[ev.label] = {"verb": verb, "args": list(args), "pps": [], "measure": None}
    for c in simples:
        if c.pred == "modifier_pp":
            ev, prep, ref = c.args
            if ev.label in events:
                events[ev.label]["pps"].append((prep, ref))

    measures: dict[str, tuple] = {}
    for c in simples:
        if c.pred == "object":
            ref, noun, kind, unit, op, count = c.args
            if unit != "na":
                measures[ref.label] = (noun, unit, count)

    for c in simples:
        if c.pred == "object":
            ref, noun, kind, unit, op, count = c.args
            if kind == "named":
                continue
            if ref.label in measures:
                continue  # folded into the measuring verb
            if str(noun) in role_nouns:
                continue  # role nouns bind variables, they denote no class
            introducing = (ref.sid, ref.tok) == c.index
            if introducing and not env.introducing_is_literal:
                continue
            lits.append(Lit(Atom(str(noun), (env.term_for(ref),))))
        elif c.pred == "property":
            ref, adj, degree = c.args
            lits.append(Lit(Atom(str(adj), (env.term_for(ref),))))
        elif c.pred == "predicate":
            ev, verb, *args = c.args
            info = events[ev.label]
            terms = [env.term_for(a) for a in info["args"]]
            measure = None
            for a in info["args"]:
                if a.label in measures:
                    measure = measures[a.label]
            pp_terms = [env.term_for(ref) for _, ref in info["pps"]]
            if measure is not None:
                # light-verb pattern: "gets a discount of N dollars for X"
                noun, unit, count = measure
                if len(info["args"]) != 2 or not pp_terms:
                    raise TranslationError("[%s] measured object needs a subject and a for-phrase" % sid)
                amount: Term
                if env.introducing_is_literal:
                    amount = Var("Amount")
                    builtins.append(Builtin("is", amount, Const(count)))
                else:
                    amount = Const(count)
                lits.append(Lit(Atom(str(noun), (terms[0], pp_terms[0], amount))))
            else:
                lits.append(Lit(Atom(str(verb), tuple(terms) + tuple(pp_terms))))
        elif c.pred in ("modifier_pp", "modifier_adv"):
            continue
        else:
            raise TranslationError("[%s] condition %s has no translation" % (sid, c.pred))
    return lits, builtins


def _existential_shape(rec: SentenceRecord) -> tuple[str, str, tuple[Term, ...]]:
    """Subject noun, verb, and trailing ground arguments of a plain
    existential clause (used by the quantifier implicature)."""
    subj_noun = None
    verb = None
    extra: tuple[Term, ...] = ()
    env = _FactEnv()
    for c in rec.conditions:
        if isinstance(c, Simple) and c.pred == "object":
            ref = c.args[0]
            if subj_noun is None and c.args[2] != "named":
                subj_noun = str(c.args[1])
        if isinstance(c, Simple) and c.pred == "predicate":
            ev, v, *args = c.args
            verb = str(v)
            extra = tuple(env.term_for(a) for a in args[1:])
    if subj_noun is None or verb is None:
        raise TranslationError("[%s] cannot read an existential clause off this sentence" % rec.id)
    return subj_noun, verb, extra


def _is_bound_vars(rule: Rule) -> set[str]:
    out = set()
    for e in rule.body:
        if isinstance(e, Builtin) and e.op == "is" and isinstance(e.lhs, Var):
            out.add(e.lhs.name)
    return out


def _opposition_rule(rule_a: Rule, rule_b: Rule) -> Rule:
    """opposes(headA, headB) :- bodyA, bodyB with shared positions unified.

    Head schemas are unified position by position where both sides carry
    plain variables; positions computed by an ``is`` builtin stay apart
    (they are the values the two conclusions disagree on).
    """
    from .lpda.syntax import substitute_lit

    computed_a = {v + "A" for v in _is_bound_vars(rule_a)}
    computed_b = {v + "B" for v in _is_bound_vars(rule_b)}
    rename_a = _freshen(rule_a, "A")
    rename_b = _freshen(rule_b, "B")
    ha, hb = rename_a.head, rename_b.head
    binding: dict[str, Term] = {}
    if ha.atom.pred == hb.atom.pred and len(ha.atom.args) == len(hb.atom.args):
        for x, y in zip(ha.atom.args, hb.atom.args):
            if (
                isinstance(x, Var)
                and isinstance(y, Var)
                and x != y
                and x.name not in computed_a
                and y.name not in computed_b
            ):
                binding[y.name] = x
    hb = substitute_lit(hb, binding)
    body: list = []
    for e in rename_a.body:
        if e not in body:
            body.append(e)
    for e in rename_b.body:
        if isinstance(e, BodyAtom):
            e = BodyAtom(substitute_lit(e.lit, binding), e.naf)
        else:
            e = _subst_builtin(e, binding)
        if e not in body:
            body.append(e)
    return Rule(Lit(Atom("opposes", (ha.as_term(), hb.as_term()))), body)


def _freshen(rule: Rule, suffix: str) -> Rule:
    from .lpda.syntax import rule_vars, substitute_lit

    mapping = {v: Var(v + suffix) for v in rule_vars(rule)}
    body = []
    for e in rule.body:
        if isinstance(e, BodyAtom):
            body.append(BodyAtom(substitute_lit(e.lit, mapping), e.naf))
        else:
            body.append(_subst_builtin(e, mapping))
    return Rule(substitute_lit(rule.head, mapping), body, rule.label, rule.defeasible)


def _subst_builtin(b: Builtin, mapping: dict[str, Term]) -> Builtin:
    from .terms import substitute

    def walk(e):
        if isinstance(e, tuple):
            return (e[0], walk(e[1]), walk(e[2]))
        return substitute(e, mapping)

    return Builtin(b.op, walk(b.lhs), walk(b.rhs))


def _common_support(rules: Sequence[Rule], shared: list[Var]) -> list[Lit]:
    """Positive body literals shared by every rule, over the shared head
    variables (canonicalised by head position)."""
    per_rule: list[set[Lit]] = []
    for r in rules:
        mapping: dict[str, Term] = {}
        ok = True
        for i, arg in enumerate(r.head.atom.args[: len(shared)]):
            if isinstance(arg, Var):
                mapping[arg.name] = shared[i]
            else:
                ok = False
        if not ok:
            per_rule.append(set())
            continue
        shared_names = {v.name for v in shared}
        from .lpda.syntax import lit_vars, substitute_lit

        lits = set()
        for e in r.body:
            if isinstance(e, BodyAtom) and not e.naf:
                l = substitute_lit(e.lit, mapping)
                if lit_vars(l) <= shared_names:
                    lits.add(l)
        per_rule.append(lits)
    if not per_rule:
        return []
    common = set.intersection(*per_rule)
    return sorted(common, key=str)
