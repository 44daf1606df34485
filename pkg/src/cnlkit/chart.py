"""Agenda-driven top-down chart parser with incremental edits.

The parser seeds the chart with active edges for the start symbol at
vertex 0 and with one inactive lexical edge per token and lexicon entry,
then works a LIFO agenda: popped active edges predict productions for
the category after their dot and combine with adjacent inactive edges
(the fundamental rule); literal terminals are scanned straight off the
token stream.  A redundancy check keeps the chart free of duplicate
edges; re-derivations of an existing edge only add an alternative
derivation, which is how ambiguity survives deduplication.

Edits (insert / delete / replace) keep every edge that lies entirely to
the left of the edited position plus the lexical edges of unchanged
tokens (shifted as needed), discard the rest, and re-run the agenda to
closure; the result is structurally equal to a fresh parse of the edited
token list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .grammar import Grammar, Production, Symbol
from .lexicon import LexEntry, Lexicon


class ParseFailure(ValueError):
    pass


class UnknownWordError(ParseFailure):
    def __init__(self, word: str, position: int):
        self.word = word
        self.position = position
        super().__init__("unknown word %r at position %d" % (word, position))


class EditError(ValueError):
    pass


@dataclass(frozen=True)
class EditOp:
    kind: str  # insert | delete | replace
    position: int
    word: Optional[str] = None


class Edge:
    """One dotted-rule or lexical edge.

    Identity (for the redundancy check) is (start, end, rule, dot,
    bindings); deps and alternative derivations are bookkeeping and do
    not distinguish edges.
    """

    __slots__ = ("id", "start", "end", "prod", "dot", "bindings", "entry", "word",
                 "deps", "token_deps", "alts")

    def __init__(self, start, end, prod, dot, bindings, entry=None, word=None,
                 deps=frozenset(), token_deps=frozenset()):
        self.id = -1
        self.start = start
        self.end = end
        self.prod: Optional[Production] = prod
        self.dot = dot
        self.bindings: tuple = bindings
        self.entry: Optional[LexEntry] = entry
        self.word = word
        self.deps: set[int] = set(deps)
        self.token_deps: frozenset[int] = frozenset(token_deps)
        self.alts: list[tuple] = []

    @property
    def lhs(self) -> str:
        return self.entry.pos if self.prod is None else self.prod.lhs

    @property
    def active(self) -> bool:
        return self.prod is not None and self.dot < len(self.prod.rhs)

    def signature(self) -> tuple:
        if self.prod is None:
            return ("lex", self.start, self.end, self.entry)
        return ("rule", self.start, self.end, self.prod.index, self.dot, self.bindings)

    def exposed_features(self) -> dict[str, str]:
        if self.entry is not None:
            return self.entry.feature_map()
        out = {}
        for (slot, feat), cls in self.prod.class_of:
            if slot == 0 and self.bindings[cls] is not None:
                out[feat] = self.bindings[cls]
        return out

    def dump(self) -> str:
        if self.prod is None:
            body = "%s %s •" % (self.entry.pos, self.word)
        else:
            names = [s.name for s in self.prod.rhs]
            names.insert(self.dot, "•")
            body = "%s -> %s" % (self.prod.lhs, " ".join(names))
        deps = ",".join(str(d) for d in sorted(self.deps))
        return "%d %d %d %s [%s]" % (self.id, self.start, self.end, body, deps)


class Chart:
    def __init__(self, grammar: Grammar, lexicon: Lexicon, tokens: Sequence[str]):
        self.grammar = grammar
        self.lexicon = lexicon
        self.tokens: list[str] = list(tokens)
        self.edges: dict[int, Edge] = {}
        self._sig: dict[tuple, int] = {}
        self._actives_at: dict[tuple[int, str], list[int]] = {}
        self._inactives_at: dict[tuple[int, str], list[int]] = {}
        self.agenda: list[int] = []
        self._next_id = 1

    @property
    def n_vertices(self) -> int:
        return len(self.tokens) + 1

    # -- edge bookkeeping ---------------------------------------------------

    def add(self, edge: Edge, alt: Optional[tuple] = None) -> Optional[Edge]:
        """Insert an edge unless an identical one exists (redundancy check).

        A re-derivation of an existing edge only contributes a derivation
        alternative; deps stay those of the first derivation, so they only
        ever point at earlier edges.
        """
        sig = edge.signature()
        old_id = self._sig.get(sig)
        if old_id is not None:
            old = self.edges[old_id]
            if alt is not None and alt not in old.alts:
                old.alts.append(alt)
            return None
        edge.id = self._next_id
        self._next_id += 1
        if alt is not None:
            edge.alts.append(alt)
        self.edges[edge.id] = edge
        self._sig[sig] = edge.id
        self._index(edge)
        self.agenda.append(edge.id)
        return edge

    def _index(self, edge: Edge) -> None:
        if edge.active:
            sym = edge.prod.rhs[edge.dot]
            self._actives_at.setdefault((edge.end, sym.name), []).append(edge.id)
        else:
            self._inactives_at.setdefault((edge.start, edge.lhs), []).append(edge.id)

    # -- parsing ------------------------------------------------------------

    def _preload_token(self, i: int) -> None:
        word = self.tokens[i].lower()
        entries = self.lexicon.lookup(word)
        if not entries and word not in self.grammar.terminals:
            raise UnknownWordError(self.tokens[i], i)
        for entry in entries:
            self.add(Edge(i, i + 1, None, 0, (), entry=entry, word=self.tokens[i],
                          token_deps={i}))

    def seed(self) -> None:
        for i in range(len(self.tokens)):
            self._preload_token(i)
        for prod in self.grammar.productions_for(self.grammar.start):
            self.add(Edge(0, 0, prod, 0, prod.fixed))

    def run(self) -> None:
        """Work the agenda to closure (LIFO: last pushed, first popped)."""
        while self.agenda:
            eid = self.agenda.pop()
            edge = self.edges[eid]
            if edge.active:
                sym = edge.prod.rhs[edge.dot]
                if sym.kind == "cat":
                    expected = self._expected_features(edge)
                    for prod in self.grammar.productions_for(sym.name):
                        if self._prediction_conflicts(prod, expected):
                            continue
                        self.add(Edge(edge.end, edge.end, prod, 0, prod.fixed, deps={edge.id}))
                if sym.kind in ("cat", "lex"):
                    for iid in list(self._inactives_at.get((edge.end, sym.name), ())):
                        self._combine(edge, self.edges[iid])
                elif sym.kind == "term":
                    self._scan(edge, sym)
            else:
                for aid in list(self._actives_at.get((edge.start, edge.lhs), ())):
                    self._combine(self.edges[aid], edge)

    def _expected_features(self, active: Edge) -> dict[str, str]:
        """Bound feature values the active edge demands of its next symbol."""
        out = {}
        for (slot, feat), cls in active.prod.class_of:
            if slot == active.dot + 1 and active.bindings[cls] is not None:
                out[feat] = active.bindings[cls]
        return out

    @staticmethod
    def _prediction_conflicts(prod: Production, expected: dict[str, str]) -> bool:
        # a production whose lhs fixes a feature to a different value can
        # never combine back into the predictor, so skip it
        for feat, val in expected.items():
            cls = prod.class_for(0, feat)
            if cls is not None and prod.fixed[cls] not in (None, val):
                return True
        return False

    def _scan(self, active: Edge, sym: Symbol) -> None:
        pos = active.end
        if pos < len(self.tokens) and self.tokens[pos].lower() == sym.name:
            self.add(
                Edge(active.start, pos + 1, active.prod, active.dot + 1, active.bindings,
                     deps={active.id}, token_deps=active.token_deps | {pos}),
                alt=("step", active.id, ("tok", pos, self.tokens[pos])),
            )

    def _combine(self, active: Edge, inactive: Edge) -> None:
        """The fundamental rule, with flat feature unification."""
        prod = active.prod
        slot = active.dot + 1
        bindings = list(active.bindings)
        for feat, val in inactive.exposed_features().items():
            cls = prod.class_for(slot, feat)
            if cls is None:
                continue
            bound = bindings[cls]
            if bound is None:
                bindings[cls] = val
            elif bound != val:
                return
        self.add(
            Edge(active.start, inactive.end, prod, active.dot + 1, tuple(bindings),
                 deps={active.id, inactive.id},
                 token_deps=active.token_deps | inactive.token_deps),
            alt=("step", active.id, ("edge", inactive.id)),
        )

    # -- inspection ----------------------------------------------------------

    def spanning_edges(self) -> list[Edge]:
        out = []
        for e in sorted(self.edges.values(), key=lambda e: e.id):
            if not e.active and e.prod is not None and e.start == 0 and e.end == len(self.tokens) and e.lhs == self.grammar.start:
                out.append(e)
        return out

    def edge_signatures(self) -> frozenset:
        """Structural identity of the chart, ignoring edge ids."""

        def key(e: Edge):
            if e.prod is None:
                return ("lex", e.start, e.end, e.entry)
            return ("rule", e.start, e.end, e.prod.lhs, tuple(s.name for s in e.prod.rhs), e.dot, e.bindings)

        return frozenset(key(e) for e in self.edges.values())

    def dump(self) -> str:
        return "\n".join(e.dump() for e in sorted(self.edges.values(), key=lambda e: e.id)) + "\n"


def parse(grammar: Grammar, lexicon: Lexicon, tokens: Sequence[str]) -> Chart:
    chart = Chart(grammar, lexicon, tokens)
    chart.seed()
    chart.run()
    return chart


def _copy_edge(e: Edge) -> Edge:
    copy = Edge(e.start, e.end, e.prod, e.dot, e.bindings, e.entry, e.word,
                deps=set(e.deps), token_deps=e.token_deps)
    copy.id = e.id
    copy.alts = list(e.alts)
    return copy


# ---------------------------------------------------------------------------
# incremental edits


def apply_edit(chart: Chart, op: EditOp, grammar: Grammar, lexicon: Lexicon) -> Chart:
    """Apply one edit and reparse incrementally.

    Every edge transitively touching the edited region (anything ending to
    its right) is discarded; edges entirely to the left and the lexical
    edges of unchanged tokens survive, then the agenda runs to closure.
    """
    n = len(chart.tokens)
    if op.kind == "insert":
        if not 0 <= op.position <= n:
            raise EditError("insert position %d out of bounds (0..%d)" % (op.position, n))
        if op.word is None:
            raise EditError("insert needs a word")
        new_tokens = chart.tokens[:op.position] + [op.word] + chart.tokens[op.position:]
        shift, removed_token = 1, None
    elif op.kind == "delete":
        if not 0 <= op.position < n:
            raise EditError("delete position %d out of bounds (0..%d)" % (op.position, n - 1))
        new_tokens = chart.tokens[:op.position] + chart.tokens[op.position + 1:]
        shift, removed_token = -1, op.position
    elif op.kind == "replace":
        if not 0 <= op.position < n:
            raise EditError("replace position %d out of bounds (0..%d)" % (op.position, n - 1))
        if op.word is None:
            raise EditError("replace needs a word")
        new_tokens = chart.tokens[:op.position] + [op.word] + chart.tokens[op.position + 1:]
        shift, removed_token = 0, op.position
    else:
        raise EditError("unknown edit kind %r" % op.kind)

    if op.kind in ("insert", "replace"):
        # validate before touching anything so a rejected edit leaves the
        # caller's chart intact
        if not lexicon.knows(op.word) and op.word.lower() not in grammar.terminals:
            lexicon.lookup(op.word)  # raises for illegal words
            raise UnknownWordError(op.word, op.position)

    cut = op.position
    fresh = Chart(grammar, lexicon, new_tokens)
    fresh._next_id = chart._next_id

    survivors: list[Edge] = []
    for e in sorted(chart.edges.values(), key=lambda e: e.id):
        if e.prod is None:
            tok = next(iter(e.token_deps))
            if tok == removed_token:
                continue
            copy = _copy_edge(e)
            if tok >= cut and shift:
                copy.start += shift
                copy.end += shift
                copy.token_deps = frozenset({tok + shift})
            survivors.append(copy)
        elif e.end <= cut:
            survivors.append(_copy_edge(e))

    kept_ids = {e.id for e in survivors}
    for e in survivors:
        e.deps &= kept_ids
        e.alts = [a for a in e.alts if a[1] in kept_ids and (a[2][0] == "tok" or a[2][1] in kept_ids)]
        fresh.edges[e.id] = e
        fresh._sig[e.signature()] = e.id
        fresh._index(e)
        fresh.agenda.append(e.id)

    if op.kind in ("insert", "replace"):
        fresh._preload_token(op.position)
    for prod in grammar.productions_for(grammar.start):
        fresh.add(Edge(0, 0, prod, 0, prod.fixed))
    fresh.run()
    return fresh


# ---------------------------------------------------------------------------
# lookahead


@dataclass
class Lookahead:
    categories: list[tuple[str, tuple[str, ...]]]
    sentence_complete: bool

    def category_names(self) -> list[str]:
        return [c for c, _ in self.categories]

    def words(self) -> list[str]:
        out: list[str] = []
        for _, ws in self.categories:
            for w in ws:
                if w not in out:
                    out.append(w)
        return out


def lookahead(chart: Chart, k: int = 5) -> Lookahead:
    """Lexical categories (with sample words) that may extend the input."""
    grammar, lexicon = chart.grammar, chart.lexicon
    last = len(chart.tokens)
    found: dict[str, list[str]] = {}
    order: list[str] = []

    def offer(cat: str, words: Iterable[str]) -> None:
        if cat not in found:
            found[cat] = []
            order.append(cat)
        for w in words:
            if w not in found[cat] and len(found[cat]) < k:
                found[cat].append(w)

    def expand(sym: Symbol, feats: dict[str, str], seen: frozenset) -> None:
        if sym.kind == "lex":
            offer(sym.name, lexicon.words_for(sym.name, feats, limit=k))
            return
        if sym.kind == "term":
            offer(sym.name, [sym.name])
            return
        key = (sym.name, tuple(sorted(feats.items())))
        if key in seen:
            return
        seen = seen | {key}
        for prod in grammar.productions_for(sym.name):
            if not prod.rhs:
                continue
            conflict = False
            for feat, val in feats.items():
                c0 = prod.class_for(0, feat)
                if c0 is not None and prod.fixed[c0] not in (None, val):
                    conflict = True
                    break
            if conflict:
                continue
            first = prod.rhs[0]
            if first.kind == "term" and len(prod.rhs) == 1:
                offer(sym.name, [first.name])
                continue
            inner: dict[str, str] = {}
            for feat, val in feats.items():
                c0 = prod.class_for(0, feat)
                c1 = prod.class_for(1, feat)
                if c0 is not None and c0 == c1:
                    inner[feat] = val
            for (slot, feat), cls in prod.class_of:
                if slot == 1 and prod.fixed[cls] is not None:
                    inner[feat] = prod.fixed[cls]
            expand(first, inner, seen)

    for e in sorted(chart.edges.values(), key=lambda e: e.id):
        if not e.active or e.end != last:
            continue
        if e.start == e.end and e.dot == 0 and e.deps:
            # a same-vertex prediction: whatever predicted it is also at
            # this vertex, and expanding that edge carries the feature
            # constraints the prediction has lost
            continue
        sym = e.prod.rhs[e.dot]
        if sym.kind == "term" and e.dot == 0 and len(e.prod.rhs) == 1:
            # a seeded single-terminal production suggests its category
            offer(e.prod.lhs, [sym.name])
            continue
        feats = {}
        for (slot, feat), cls in e.prod.class_of:
            if slot == e.dot + 1 and e.bindings[cls] is not None:
                feats[feat] = e.bindings[cls]
        expand(sym, feats, frozenset())

    complete = bool(chart.spanning_edges())
    return Lookahead([(c, tuple(found[c])) for c in order], complete)


# ---------------------------------------------------------------------------
# parse trees


@dataclass(frozen=True)
class Tree:
    label: str
    children: tuple = ()
    word: Optional[str] = None
    entry: Optional[LexEntry] = None
    start: int = 0
    end: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.word is not None

    def __str__(self) -> str:
        if self.is_leaf:
            # lexicon-backed leaves show their category, scanned terminals
            # are bare words
            return "%s(%s)" % (self.label, self.word) if self.entry is not None else self.word
        return "%s(%s)" % (self.label, ", ".join(str(c) for c in self.children))


def extract_trees(chart: Chart) -> list[Tree]:
    """One tree per derivation of each spanning start-symbol edge."""
    memo: dict[int, list[tuple]] = {}

    def child_sequences(eid: int) -> list[tuple]:
        if eid in memo:
            return memo[eid]
        e = chart.edges[eid]
        if e.dot == 0:
            memo[eid] = [()]
            return memo[eid]
        out = []
        for alt in e.alts:
            _, parent, child = alt
            for seq in child_sequences(parent):
                out.append(seq + (child,))
        memo[eid] = out
        return out

    def build(eid: int) -> list[Tree]:
        e = chart.edges[eid]
        if e.prod is None:
            return [Tree(e.entry.pos, (), e.word, e.entry, e.start, e.end)]
        trees = []
        for seq in child_sequences(eid):
            options = []
            for child in seq:
                if child[0] == "tok":
                    options.append([Tree(child[2].lower(), (), child[2], None, child[1], child[1] + 1)])
                else:
                    options.append(build(child[1]))
            for combo in _product(options):
                trees.append(Tree(e.lhs, tuple(combo), None, None, e.start, e.end))
        return trees

    out: list[Tree] = []
    for e in chart.spanning_edges():
        out.extend(build(e.id))
    return out


def _product(options: list[list[Tree]]) -> Iterable[tuple]:
    if not options:
        yield ()
        return
    for head in options[0]:
        for rest in _product(options[1:]):
            yield (head,) + rest
