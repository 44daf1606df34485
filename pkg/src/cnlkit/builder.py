"""Build one document-wide DRS from CNL sentences.

Document structure: paragraphs are separated by blank lines; sentences
end with ``.``/``?``/``!``.  A sentence may carry a ``[label]`` prefix
and a leading annotation group:

    (strict) | (except) | (exception to id1, id2) | (conflict constraint)

Cancellation conditionals follow the fixed template
``If P, then cancel id1, id2.`` and are peeled apart before parsing.

Interpretation rules realized here: prepositional phrases modify the
verb (structurally, via the grammar); relative clauses modify the noun
they follow; pronouns resolve to the nearest antecedent agreeing in
gender and number; definite descriptions resolve to the nearest referent
of the same noun or synonym class; ordinal descriptions count noun
occurrences from the start of the paragraph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .chart import Tree, extract_trees, lookahead, parse
from .drs import (
    DRS,
    Complex,
    LabelGenerator,
    Referent,
    Simple,
    UnsupportedConstructionError,
)
from .grammar import Grammar
from .lexicon import Lexicon, ORDINALS, PRONOUNS

DEFAULT_ADVERBS = frozenset({"generally", "normally", "typically"})


class SentenceError(ValueError):
    def __init__(self, message: str, sentence_id: Optional[str] = None, suggestions=None):
        self.sentence_id = sentence_id
        self.suggestions = suggestions or []
        if sentence_id:
            message = "[%s] %s" % (sentence_id, message)
        super().__init__(message)


class UnresolvedReferenceError(SentenceError):
    pass


class AnnotationError(SentenceError):
    pass


@dataclass
class SentenceRecord:
    id: str
    ordinal: int
    paragraph: int
    text: str
    source: str = ""  # annotation included, label stripped
    mode: str = "defeasible"  # defeasible | strict | conflict_constraint
    exception: Optional[tuple] = None  # ("except_prev"|"exception_to", tuple of ids)
    cancel_targets: tuple[str, ...] = ()
    tree: Optional[Tree] = None
    conditions: list = field(default_factory=list)  # root conditions contributed
    meta: dict = field(default_factory=dict)


_TOKEN_RE = re.compile(
    r"""
    (?P<num>\d+\.\d+|\d+)(?![.\w])
  | (?P<label>\w+\.\w+(\.\w+)*)
  | (?P<word>[A-Za-z][A-Za-z0-9]*(-[A-Za-z0-9]+)*)
  | (?P<punct>[.,?!()\[\]])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SentenceError("cannot tokenize at %r" % text[pos:pos + 12])
        out.append(m.group())
        pos = m.end()
    return out


def split_sentences(tokens: list[str]) -> list[list[str]]:
    out: list[list[str]] = []
    cur: list[str] = []
    for t in tokens:
        if t in (".", "?", "!"):
            if cur:
                out.append(cur)
                cur = []
        else:
            cur.append(t)
    if cur:
        out.append(cur)
    return out


_ANNOTATIONS = ("strict", "except", "exception to", "conflict constraint")


def peel_annotation(tokens: list[str]) -> tuple[Optional[str], list[str], list[str]]:
    """Strip a leading ``[label]`` and ``( ... )`` group.

    Returns (label, annotation words, remaining tokens).
    """
    label = None
    if len(tokens) >= 3 and tokens[0] == "[" and "]" in tokens:
        close = tokens.index("]")
        label = " ".join(tokens[1:close])
        tokens = tokens[close + 1:]
    ann: list[str] = []
    if tokens and tokens[0] == "(" and ")" in tokens:
        close = tokens.index(")")
        ann = tokens[1:close]
        tokens = tokens[close + 1:]
    return label, ann, tokens


def _shape(tree: Tree) -> tuple[str, ...]:
    return tuple(c.label for c in tree.children)


class DocumentBuilder:
    """Grows the single root DRS sentence by sentence."""

    def __init__(self, grammar: Grammar, lexicon: Lexicon):
        self.grammar = grammar
        self.lexicon = lexicon
        self.root = DRS()
        self.labels = LabelGenerator()
        self.records: list[SentenceRecord] = []
        self.history: list[tuple[Referent, DRS]] = []  # introduction order
        self.resolutions: list[tuple[str, str, Referent]] = []
        self._ids: set[str] = set()
        self._paragraph = 1
        self._sentence_in_paragraph = 0

    # -- document loading -----------------------------------------------------

    def load_document(self, text: str) -> list[SentenceRecord]:
        paragraphs = [p for p in re.split(r"\n\s*\n", text) if p.strip()]
        for para in paragraphs:
            self.start_paragraph()
            for sent in split_sentences(tokenize(para)):
                self.add_sentence_tokens(sent)
        return self.records

    def start_paragraph(self) -> None:
        if self._sentence_in_paragraph:
            self._paragraph += 1
            self._sentence_in_paragraph = 0

    def add_sentence(self, text: str, label: Optional[str] = None) -> SentenceRecord:
        toks = tokenize(text)
        sents = split_sentences(toks)
        if len(sents) != 1:
            raise SentenceError("expected exactly one sentence, got %d" % len(sents))
        return self.add_sentence_tokens(sents[0], label=label)

    def add_sentence_tokens(self, tokens: list[str], label: Optional[str] = None) -> SentenceRecord:
        peeled_label, ann, rest = peel_annotation(tokens)
        label = label or peeled_label
        ordinal = len(self.records) + 1
        snapshot = self._snapshot()
        self._sentence_in_paragraph += 1
        sid = label or "p%d.s%d" % (self._paragraph, self._sentence_in_paragraph)
        if sid in self._ids:
            raise SentenceError("duplicate sentence id %r" % sid)
        record = SentenceRecord(sid, ordinal, self._paragraph, " ".join(rest))
        record.source = ("( %s ) " % " ".join(ann) if ann else "") + " ".join(rest)
        try:
            self._apply_annotation(record, ann)
            cancel = self._match_cancel(rest)
            if cancel is not None:
                antecedent_tokens, targets = cancel
                for t in targets:
                    if t not in self._ids:
                        raise AnnotationError("cancel target %r does not name an earlier sentence" % t, sid)
                record.cancel_targets = tuple(targets)
                tree = self._parse(antecedent_tokens, sid)
                record.tree = tree
                ant = self.root.subordinate()
                clause = tree.children[0]  # S
                info = self._build_clause(clause, ant, ordinal, rule_scope=True)
                record.meta["cancel_antecedent"] = ant
                record.meta["cancel_subject"] = info["subject"]
            else:
                tree = self._parse(rest, sid)
                record.tree = tree
                before = len(self.root.conditions)
                self._build_top(tree.children[0], record, ordinal)
                record.conditions = self.root.conditions[before:]
            self.root.check_scope()
        except Exception:
            # a rejected sentence must leave no trace in the discourse
            self._restore(snapshot)
            raise
        self.records.append(record)
        self._ids.add(sid)
        return record

    def _snapshot(self) -> tuple:
        return (
            len(self.root.universe),
            len(self.root.conditions),
            len(self.history),
            len(self.resolutions),
            self.labels.n,
            self._sentence_in_paragraph,
        )

    def _restore(self, snap: tuple) -> None:
        n_univ, n_cond, n_hist, n_res, n_labels, sent_in_para = snap
        del self.root.universe[n_univ:]
        del self.root.conditions[n_cond:]
        del self.history[n_hist:]
        del self.resolutions[n_res:]
        self.labels.n = n_labels
        self._sentence_in_paragraph = sent_in_para

    # -- annotation handling ---------------------------------------------------

    def _apply_annotation(self, record: SentenceRecord, ann: list[str]) -> None:
        if not ann:
            return
        text = " ".join(ann).lower()
        if text == "strict":
            record.mode = "strict"
        elif text == "conflict constraint":
            record.mode = "conflict_constraint"
        elif text == "except":
            # binds to the nearest preceding sentence that carries no
            # annotation of its own
            target = None
            for prev in reversed(self.records):
                if prev.mode == "defeasible" and prev.exception is None and not prev.cancel_targets:
                    target = prev
                    break
            if target is None:
                raise AnnotationError("(except) needs a preceding unannotated sentence", record.id)
            record.exception = ("except_prev", (target.id,))
        elif text.startswith("exception to"):
            raw = " ".join(ann[2:])
            targets = tuple(t.strip() for t in raw.replace(",", " ").split() if t.strip())
            if not targets:
                raise AnnotationError("exception to: no target ids", record.id)
            for t in targets:
                if t not in self._ids:
                    raise AnnotationError("exception target %r does not name an earlier sentence" % t, record.id)
            record.exception = ("exception_to", targets)
        else:
            raise AnnotationError("unknown annotation %r" % text, record.id)

    def _match_cancel(self, tokens: list[str]) -> Optional[tuple[list[str], list[str]]]:
        low = [t.lower() for t in tokens]
        if not low or low[0] != "if" or "cancel" not in low:
            return None
        ci = low.index("cancel")
        then_part = low[:ci]
        if then_part and then_part[-1] == "then":
            antecedent = tokens[1:ci - 1]
        elif then_part and then_part[-1] == ",":
            antecedent = tokens[1:ci - 1]
        else:
            return None
        while antecedent and antecedent[-1] == ",":
            antecedent = antecedent[:-1]
        targets = [t for t in tokens[ci + 1:] if t != ","]
        if not targets:
            return None
        return antecedent, targets

    # -- parsing ---------------------------------------------------------------

    def _parse(self, tokens: list[str], sid: str) -> Tree:
        chart = parse(self.grammar, self.lexicon, tokens)
        spanning = [t for t in extract_trees(chart) if t.children and t.children[0].label == "S"]
        if not spanning:
            hint, categories = self._failure_hints(tokens)
            raise SentenceError(
                "sentence does not parse: %r%s" % (" ".join(tokens), hint), sid,
                suggestions=categories,
            )
        return spanning[0]

    def _failure_hints(self, tokens: list[str]) -> tuple[str, list[str]]:
        for k in range(len(tokens), -1, -1):
            try:
                chart = parse(self.grammar, self.lexicon, tokens[:k])
            except Exception:
                continue
            la = lookahead(chart)
            if la.categories:
                cats = la.category_names()
                return "; parse breaks after token %d, expected one of: %s" % (k, ", ".join(cats)), cats
        return "", []

    # -- DRS construction --------------------------------------------------------

    def _build_top(self, s: Tree, record: SentenceRecord, sid: int) -> None:
        shape = _shape(s)
        if shape == ("adv", ",", "S"):
            advsym = s.children[0].entry.symbol
            if advsym not in DEFAULT_ADVERBS:
                raise UnsupportedConstructionError(
                    "sentence-initial adverb %r (only the default markers go there)" % s.children[0].word,
                    (s.start, s.end),
                )
            record.meta["default"] = True
            self._build_rule(s.children[2], record, sid, op="default")
            return
        if shape in (("if", "S", "then", "S"), ("if", "S", ",", "S")):
            self._build_conditional(s.children[1], s.children[3], record, sid)
            return
        if shape == ("NP", "SVP"):
            np, svp = s.children
            if record.mode == "conflict_constraint":
                # constraint sentences assert nothing; build into a detached
                # box so no referent leaks into the discourse
                scratch = DRS()
                self._build_clause_into(np, svp, scratch, sid, record, rule_scope=True)
                return
            quant = self._np_quantifier(np)
            if quant in ("every", "all", "bare_plural"):
                if quant == "all":
                    record.meta["quant"] = "all"
                self._build_rule_from_clause(np, svp, record, sid, op="impl")
                return
            if quant == "some":
                record.meta["quant"] = "some"
            self._build_clause_into(np, svp, self.root, sid, record, rule_scope=False)
            return
        raise UnsupportedConstructionError("sentence form %r" % (shape,), (s.start, s.end))

    def _build_rule(self, s: Tree, record: SentenceRecord, sid: int, op: str) -> None:
        if _shape(s) != ("NP", "SVP"):
            raise UnsupportedConstructionError("default over non-clausal sentence", (s.start, s.end))
        self._build_rule_from_clause(s.children[0], s.children[1], record, sid, op)

    def _build_conditional(self, ant_s: Tree, cons_s: Tree, record: SentenceRecord, sid: int) -> None:
        op = "default" if record.meta.get("default") else "impl"
        ant = self.root.subordinate()
        cons = ant.subordinate()
        ant_info = self._build_sentence_into(ant_s, ant, sid, record, rule_scope=True)
        self._build_sentence_into(cons_s, cons, sid, record, rule_scope=True)
        cond = Complex(op, (ant, cons))
        self.root.add(cond)
        record.meta["rule"] = cond
        record.meta["rule_subject"] = ant_info.get("subject")

    def _build_rule_from_clause(self, np: Tree, svp: Tree, record: SentenceRecord, sid: int, op: str) -> None:
        """Quantified subject: the subject lives in the antecedent box."""
        ant = self.root.subordinate()
        cons = ant.subordinate()
        subj = self._intro_np(np, ant, sid, rule_scope=True)
        self._build_svp(svp, subj, cons, sid, record, rule_scope=True)
        cond = Complex(op, (ant, cons))
        self.root.add(cond)
        record.meta["rule"] = cond
        record.meta["rule_subject"] = subj

    def _build_sentence_into(self, s: Tree, target: DRS, sid: int, record: SentenceRecord, rule_scope: bool) -> dict:
        if _shape(s) != ("NP", "SVP"):
            raise UnsupportedConstructionError("nested sentence form %r" % (_shape(s),), (s.start, s.end))
        return self._build_clause_into(s.children[0], s.children[1], target, sid, record, rule_scope)

    def _build_clause_into(self, np: Tree, svp: Tree, target: DRS, sid: int, record: SentenceRecord, rule_scope: bool) -> dict:
        subj = self._intro_np(np, target, sid, rule_scope=rule_scope)
        self._build_svp(svp, subj, target, sid, record, rule_scope)
        return {"subject": subj}

    def _build_clause(self, s: Tree, target: DRS, sid: int, rule_scope: bool) -> dict:
        rec = SentenceRecord("tmp", 0, self._paragraph, "")
        return self._build_sentence_into(s, target, sid, rec, rule_scope)

    # -- noun phrases -----------------------------------------------------------

    def _np_quantifier(self, np: Tree) -> Optional[str]:
        shape = _shape(np)
        if shape and shape[0] == "det":
            sym = np.children[0].entry.symbol
            if sym in ("every", "all", "some"):
                return sym if sym != "every" else "every"
        if shape == ("noun",):
            return "bare_plural"
        return None

    def _fresh(self, **kw) -> Referent:
        ref = Referent(label=self.labels.fresh(), paragraph=self._paragraph, **kw)
        return ref

    def _declare(self, ref: Referent, box: DRS) -> Referent:
        box.declare(ref)
        self.history.append((ref, box))
        return ref

    def _intro_np(self, np: Tree, box: DRS, sid: int, rule_scope: bool) -> Referent:
        """Introduce or resolve the referent for a noun phrase."""
        shape = _shape(np)
        if shape == ("pnoun",):
            leaf = np.children[0]
            if leaf.word.lower() in PRONOUNS:
                ref = self.resolve_pronoun(leaf, box)
                self.resolutions.append(("pronoun", leaf.word, ref))
                return ref
            return self._intro_pnoun(leaf, box, sid)
        if shape in (("det", "noun"), ("det", "adj", "noun"), ("det", "noun", "RC")):
            det = np.children[0].entry.symbol
            noun_leaf = np.children[1] if shape[1] == "noun" else np.children[2]
            if det == "the":
                ref = self.resolve_definite(noun_leaf, box)
                self.resolutions.append(("definite", noun_leaf.word, ref))
            elif det in ("all", "some"):
                ref = self._intro_common(noun_leaf, box, sid, op="geq", count=2)
            else:
                ref = self._intro_common(noun_leaf, box, sid, op="eq", count=1)
            if shape == ("det", "adj", "noun"):
                adj = np.children[1]
                box.add(Simple("property", (ref, adj.entry.symbol, adj.entry.feature("degree") or "pos"),
                               (sid, adj.start + 1)))
            if shape == ("det", "noun", "RC"):
                self._build_rc(np.children[2], ref, box, sid)
            return ref
        if shape == ("det", "num", "noun"):
            det = np.children[0].entry.symbol
            num_leaf, noun_leaf = np.children[1], np.children[2]
            if det == "the" and num_leaf.word.lower() in ORDINALS:
                ref = self.resolve_ordinal(noun_leaf, ORDINALS[num_leaf.word.lower()], box)
                self.resolutions.append(("ordinal", "%s %s" % (num_leaf.word, noun_leaf.word), ref))
                return ref
            return self._intro_common(noun_leaf, box, sid, op="eq", count=num_leaf.entry.symbol)
        if shape == ("num", "noun"):
            num_leaf, noun_leaf = np.children
            return self._intro_common(noun_leaf, box, sid, op="eq", count=num_leaf.entry.symbol)
        if shape == ("noun",):
            return self._intro_common(np.children[0], box, sid, op="geq", count=2)
        if shape == ("det", "noun", "of", "num", "noun"):
            noun_leaf, num_leaf, unit_leaf = np.children[1], np.children[3], np.children[4]
            return self._intro_common(noun_leaf, box, sid, op="eq", count=num_leaf.entry.symbol,
                                      unit=unit_leaf.entry.symbol)
        raise UnsupportedConstructionError("noun phrase %r" % (shape,), (np.start, np.end))

    def _intro_pnoun(self, leaf: Tree, box: DRS, sid: int) -> Referent:
        constant = leaf.entry.symbol
        for ref, refbox in reversed(self.history):
            if ref.kind == "named" and ref.constant == constant and refbox in box.outer:
                return ref
        ref = self._fresh(sid=sid, tok=leaf.start + 1, sort="object", kind="named",
                          noun=str(constant).lower(), constant=constant,
                          gender=leaf.entry.feature("gender"), number=leaf.entry.feature("number") or "sg")
        self._declare(ref, box)
        box.add(Simple("object", (ref, constant, "named", "na", "eq", 1), (sid, leaf.start + 1)))
        return ref

    def _intro_common(self, leaf: Tree, box: DRS, sid: int, op: str, count, unit: str = "na") -> Referent:
        ref = self._fresh(sid=sid, tok=leaf.start + 1, sort="object", kind="common",
                          noun=leaf.entry.symbol,
                          gender=leaf.entry.feature("gender"), number=leaf.entry.feature("number"))
        self._declare(ref, box)
        box.add(Simple("object", (ref, leaf.entry.symbol, "countable", unit, op, count), (sid, leaf.start + 1)))
        return ref

    def _intro_event(self, box: DRS, sid: int, tok: int) -> Referent:
        ref = self._fresh(sid=sid, tok=tok, sort="event", kind="event")
        self._declare(ref, box)
        return ref

    def _build_rc(self, rc: Tree, head: Referent, box: DRS, sid: int) -> None:
        # RC -> that VP: the relative clause predicates over the head noun
        vp = rc.children[1]
        rec = SentenceRecord("tmp", 0, self._paragraph, "")
        self._build_vp(vp, head, box, sid, rec, rule_scope=False)

    # -- reference resolution ----------------------------------------------------

    def _accessible(self, box: DRS):
        for ref, refbox in reversed(self.history):
            if refbox in box.outer:
                yield ref

    def resolve_pronoun(self, leaf: Tree, box: DRS) -> Referent:
        gender = leaf.entry.feature("gender")
        number = leaf.entry.feature("number") or "sg"
        for ref in self._accessible(box):
            if ref.sort != "object":
                continue
            if ref.gender == gender and (ref.number or "sg") == number:
                return ref
        raise UnresolvedReferenceError("pronoun %r has no antecedent agreeing in gender and number" % leaf.word)

    def resolve_definite(self, noun_leaf: Tree, box: DRS) -> Referent:
        sym = noun_leaf.entry.symbol
        for ref in self._accessible(box):
            if ref.sort != "object" or ref.noun is None:
                continue
            if ref.noun == sym or self.lexicon.same_concept(ref.noun, sym):
                return ref
        raise UnresolvedReferenceError("definite description 'the %s' has no antecedent" % noun_leaf.word)

    def resolve_ordinal(self, noun_leaf: Tree, k: int, box: DRS) -> Referent:
        sym = noun_leaf.entry.symbol
        occurrences = [
            ref
            for ref, refbox in self.history
            if ref.paragraph == self._paragraph
            and refbox in box.outer
            and ref.sort == "object"
            and ref.noun is not None
            and (ref.noun == sym or self.lexicon.same_concept(ref.noun, sym))
        ]
        if len(occurrences) < k:
            raise UnresolvedReferenceError(
                "ordinal 'the %s %s': only %d occurrence(s) in this paragraph"
                % (_ordinal_word(k), noun_leaf.word, len(occurrences))
            )
        return occurrences[k - 1]

    # -- verb phrases -------------------------------------------------------------

    def _build_svp(self, svp: Tree, subj: Referent, box: DRS, sid: int, record: SentenceRecord, rule_scope: bool) -> None:
        shape = _shape(svp)
        if shape == ("VP",):
            self._build_vp(svp.children[0], subj, box, sid, record, rule_scope)
        elif shape == ("VP", "and", "SVP"):
            self._build_vp(svp.children[0], subj, box, sid, record, rule_scope)
            self._build_svp(svp.children[2], subj, box, sid, record, rule_scope)
        else:
            raise UnsupportedConstructionError("verb phrase sequence %r" % (shape,), (svp.start, svp.end))

    def _build_vp(self, vp: Tree, subj: Referent, box: DRS, sid: int, record: SentenceRecord, rule_scope: bool) -> None:
        shape = _shape(vp)
        if shape in (("is", "PRED"), ("are", "PRED")):
            self._build_predicative(vp.children[1], subj, box, sid)
            return
        if shape in (("do", "not", "verb"), ("does", "not", "verb")):
            inner = box.subordinate()
            verb = vp.children[2]
            ev = self._intro_event(inner, sid, verb.start + 1)
            inner.add(Simple("predicate", (ev, verb.entry.symbol, subj), (sid, verb.start + 1)))
            box.add(Complex("neg", (inner,)))
            return
        if shape == ("verb", "prep", "NPOR"):
            self._build_disjunction(vp, subj, box, sid, record, exclusive=False)
            return
        if shape == ("verb", "either", "prep", "NP", "or", "prep", "NP"):
            self._build_disjunction(vp, subj, box, sid, record, exclusive=True)
            return
        if shape == ("verb", "at", "most", "num", "noun", "PP"):
            self._build_atmost(vp, subj, record, sid)
            return
        if not shape or shape[0] not in ("verb", "was"):
            raise UnsupportedConstructionError("verb phrase %r" % (shape,), (vp.start, vp.end))

        verb = vp.children[0] if shape[0] == "verb" else vp.children[1]
        args = [subj]
        pps: list[Tree] = []
        adv: Optional[Tree] = None
        for child in vp.children[1:] if shape[0] == "verb" else vp.children[2:]:
            if child.label == "NP":
                args.append(self._intro_np(child, box, sid, rule_scope))
            elif child.label == "PP":
                pps.append(child)
            elif child.label == "adv":
                adv = child
        ev = self._intro_event(box, sid, verb.start + 1)
        box.add(Simple("predicate", (ev, verb.entry.symbol, *args), (sid, verb.start + 1)))
        if adv is not None:
            box.add(Simple("modifier_adv", (ev, adv.entry.symbol, adv.entry.feature("degree") or "pos"),
                           (sid, adv.start + 1)))
        for pp in pps:
            prep = pp.children[0]
            npref = self._intro_np(pp.children[1], box, sid, rule_scope)
            box.add(Simple("modifier_pp", (ev, prep.entry.symbol, npref), (sid, prep.start + 1)))

    def _build_predicative(self, pred: Tree, subj: Referent, box: DRS, sid: int) -> None:
        inner = pred.children[0]
        if inner.label == "adj":
            box.add(Simple("property", (subj, inner.entry.symbol, inner.entry.feature("degree") or "pos"),
                           (sid, inner.start + 1)))
            return
        # predicative noun phrase: classify the subject referent
        shape = _shape(inner)
        if shape in (("det", "noun"), ("det", "adj", "noun")):
            noun_leaf = inner.children[-1]
            box.add(Simple("object", (subj, noun_leaf.entry.symbol, "countable", "na", "eq", 1),
                           (sid, noun_leaf.start + 1)))
            if subj.noun is None:
                subj.noun = noun_leaf.entry.symbol
            if shape == ("det", "adj", "noun"):
                adj = inner.children[1]
                box.add(Simple("property", (subj, adj.entry.symbol, adj.entry.feature("degree") or "pos"),
                               (sid, adj.start + 1)))
            return
        raise UnsupportedConstructionError("predicative complement %r" % (shape,), (pred.start, pred.end))

    def _build_disjunction(self, vp: Tree, subj: Referent, box: DRS, sid: int, record: SentenceRecord, exclusive: bool) -> None:
        verb = vp.children[0]
        if exclusive:
            np1, np2 = vp.children[3], vp.children[6]
            prep = vp.children[2]
            alt_leaves = [np1.children[0], np2.children[0]]
        else:
            npor = vp.children[2]
            prep = vp.children[1]
            alt_leaves = [npor.children[0], npor.children[2]]
        branches = []
        alts = []
        for leaf in alt_leaves:
            sub = box.subordinate()
            ref = self._intro_pnoun(leaf, sub, sid)
            ev = self._intro_event(sub, sid, verb.start + 1)
            sub.add(Simple("predicate", (ev, verb.entry.symbol, subj), (sid, verb.start + 1)))
            sub.add(Simple("modifier_pp", (ev, prep.entry.symbol, ref), (sid, prep.start + 1)))
            branches.append(sub)
            alts.append(leaf.entry.symbol)
        box.add(Complex("disj", tuple(branches)))
        record.meta["disjunction"] = {
            "kind": "exclusive" if exclusive else "inclusive",
            "subject": subj,
            "verb": verb.entry.symbol,
            "alternatives": alts,
        }

    def _build_atmost(self, vp: Tree, subj: Referent, record: SentenceRecord, sid: int) -> None:
        verb, num_leaf, noun_leaf, pp = vp.children[0], vp.children[3], vp.children[4], vp.children[5]
        if record.mode != "conflict_constraint":
            raise AnnotationError("'at most' sentences must carry (conflict constraint)", record.id)
        if num_leaf.entry.symbol != 1:
            raise UnsupportedConstructionError("at most %s: only 'at most one' is supported" % num_leaf.word)
        record.meta["atmost"] = {
            "subject": subj,
            "verb": verb.entry.symbol,
            "counted_noun": noun_leaf.entry.symbol,
            "per_prep": pp.children[0].entry.symbol,
            "per_noun": pp.children[1].children[-1].entry.symbol,
        }

    # -- queries -------------------------------------------------------------------

    def parse_query(self, text: str) -> dict:
        """Parse an amount question; returns goal ingredients."""
        toks = split_sentences(tokenize(text))
        if len(toks) != 1:
            raise SentenceError("expected one question")
        chart = parse(self.grammar, self.lexicon, toks[0])
        trees = [t for t in extract_trees(chart) if t.children and t.children[0].label == "Q"]
        if not trees:
            raise SentenceError("question does not parse: %r" % text)
        q = trees[0].children[0]
        # Q -> how much noun does pnoun verb for verb det noun
        noun_leaf, pn_leaf = q.children[2], q.children[4]
        obj_leaf = q.children[9]
        return {
            "relation": noun_leaf.entry.symbol,
            "subject": pn_leaf.entry.symbol,
            "object": obj_leaf.entry.symbol,
        }


def _ordinal_word(k: int) -> str:
    for w, v in ORDINALS.items():
        if v == k:
            return w
    return "%dth" % k
