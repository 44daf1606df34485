"""Shared pipeline state for the CLI, REPL, and HTTP service.

A session owns the loaded lexicon/grammar/scales, the document composed
so far, and the artifacts derived from it (program text, engine, model).
Derived artifacts are invalidated whenever the document changes; there is
a single translation code path, so every front end renders byte-identical
program text for the same document.
"""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass
from typing import Optional

from .builder import DocumentBuilder, SentenceRecord
from .chart import lookahead as chart_lookahead, parse as chart_parse
from .grammar import Grammar, compile_grammar
from .lexicon import Lexicon, load_lexicon
from .lpda import Engine, parse_goal, parse_program
from .lpda.syntax import Atom, BodyAtom, Lit, substitute_lit
from .terms import Const, Var
from .translator import ScaleTable, Translation, Translator, load_scales


def _data_text(name: str) -> str:
    return (importlib.resources.files("cnlkit") / "data" / name).read_text(encoding="utf-8")


def default_lexicon() -> Lexicon:
    return load_lexicon(_data_text("core.lex"))


def default_grammar() -> Grammar:
    return compile_grammar(_data_text("core.cnl"))


def default_scales() -> ScaleTable:
    return load_scales(_data_text("core.scales"))


@dataclass
class Answer:
    status: str
    bindings: list[dict[str, str]]
    provenance: list[dict[str, str]]
    inconsistent: bool
    rendered: str


class Session:
    def __init__(
        self,
        lexicon: Optional[Lexicon] = None,
        grammar: Optional[Grammar] = None,
        scales: Optional[ScaleTable] = None,
    ):
        self.lexicon = lexicon or default_lexicon()
        self.grammar = grammar or default_grammar()
        self.scales = scales or default_scales()
        self.builder = DocumentBuilder(self.grammar, self.lexicon)
        self._translation: Optional[Translation] = None
        self._engine: Optional[Engine] = None
        self._seen_sentences = 0

    # -- document -----------------------------------------------------------

    def load_document(self, text: str) -> list[SentenceRecord]:
        records = self.builder.load_document(text)
        self._invalidate()
        return records

    def add_sentence(self, text: str, label: Optional[str] = None) -> SentenceRecord:
        rec = self.builder.add_sentence(text, label=label)
        self._invalidate()
        return rec

    def _invalidate(self) -> None:
        self._translation = None
        self._engine = None

    @property
    def records(self) -> list[SentenceRecord]:
        return self.builder.records

    # -- derived artifacts -----------------------------------------------------

    def translation(self) -> Translation:
        if self._translation is None:
            tr = Translator(self.scales, self.lexicon.role_symbols())
            self._translation = tr.translate(self.builder.records, self.builder.root)
        return self._translation

    def engine(self) -> Engine:
        if self._engine is None:
            self._engine = Engine(parse_program(self.translation().text))
        return self._engine

    def program_text(self) -> str:
        return self.translation().text

    def drs_text(self) -> str:
        return self.builder.root.pretty()

    def save_document(self, path: str) -> None:
        """Persist the composed document as one JSON file."""
        payload = {
            "sentences": [{"label": r.id, "source": r.source} for r in self.records]
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)

    def load_saved_document(self, path: str) -> list[SentenceRecord]:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        for item in payload.get("sentences", []):
            self.add_sentence(item["source"] + " .", label=item.get("label"))
        return self.records

    # -- parsing services ---------------------------------------------------------

    def parse_tokens(self, tokens: list[str]):
        return chart_parse(self.grammar, self.lexicon, tokens)

    def lookahead_for(self, tokens: list[str]):
        return chart_lookahead(self.parse_tokens(tokens))

    # -- queries --------------------------------------------------------------------

    def ask(self, text: str) -> Answer:
        if not self.records:
            raise ValueError("no knowledge base loaded")
        text = text.strip()
        dollars = False
        if _looks_like_cnl_question(text):
            q = self.builder.parse_query(text)
            goal = [BodyAtom(Lit(_atom(q["relation"], (Const(q["subject"]), Const(q["object"]), None))))]
            dollars = True
        else:
            goal = parse_goal(text)
        engine = self.engine()
        result = engine.query(goal)
        bindings = result.binding_strings()
        provenance = self._provenance(goal, result)
        rendered = _render_answer(result.status, bindings, dollars)
        return Answer(result.status, bindings, provenance, result.inconsistent, rendered)

    def _provenance(self, goal, result) -> list[dict[str, str]]:
        engine = self.engine()
        labels = self.translation().label_map
        out = []
        for binding in result.bindings:
            for conj in goal:
                if conj.naf:
                    continue
                glit = substitute_lit(conj.lit, binding)
                for label in engine.supporting_labels(glit):
                    key = str(label)
                    src = labels.get(key)
                    entry = {"rule": key}
                    if src is not None:
                        entry["kind"] = src[0]
                        entry["sentence"] = src[1]
                    if entry not in out:
                        out.append(entry)
        return out


def _atom(pred: str, args) -> Atom:
    terms = tuple(a if a is not None else Var("A") for a in args)
    return Atom(pred, terms)


def _looks_like_cnl_question(text: str) -> bool:
    return text.lower().startswith("how much ")


def _render_answer(status: str, bindings: list[dict[str, str]], dollars: bool) -> str:
    if status == "yes" and bindings:
        parts = []
        for b in bindings:
            if len(b) == 1:
                v = next(iter(b.values()))
                parts.append("$" + v if dollars else v)
            else:
                parts.append(", ".join("%s = %s" % kv for kv in sorted(b.items())))
        return "; ".join(parts)
    if status == "yes":
        return "yes"
    return status
