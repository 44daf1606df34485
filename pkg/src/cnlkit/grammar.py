"""Context-free grammar with flat feature constraints.

Grammar files hold one production per line:

    S -> NP VP { NP.number = VP.number }
    NP -> det {adj} noun { det.number = noun.number, NP.number = noun.number }
    N -> tom
    % comment

An element wrapped in braces inside the right-hand side is optional and
expands into alternative productions.  The trailing brace group (any
group containing ``=``) lists feature equations between the production's
symbols (the left-hand side may appear) or against constant values.

A right-hand-side symbol is a category when it appears as some lhs or is
one of the lexical part-of-speech tags; capitalised symbols must be
defined as categories.  Everything else is a literal terminal matched
against the token stream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .lexicon import POS_TAGS

FEATURES = ("number", "gender", "degree")
_FEATURE_VALUES = {"sg", "pl", "m", "f", "n", "pos", "comp", "sup"}


class GrammarError(ValueError):
    pass


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str  # "cat" (has productions), "lex" (lexical POS), "term" (literal)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Production:
    index: int
    lhs: str
    rhs: tuple[Symbol, ...]
    # feature plumbing: nodes are (slot, feature), slot 0 = lhs, slot k =
    # k-th rhs element; class_of maps nodes to equivalence-class ids and
    # fixed holds per-class constant values
    n_classes: int = 0
    class_of: tuple[tuple[tuple[int, str], int], ...] = ()
    fixed: tuple[Optional[str], ...] = ()

    def class_for(self, slot: int, feature: str) -> Optional[int]:
        for node, cls in self.class_of:
            if node == (slot, feature):
                return cls
        return None

    def __str__(self) -> str:
        return "%s -> %s" % (self.lhs, " ".join(s.name for s in self.rhs))


@dataclass
class Grammar:
    productions: list[Production]
    start: str
    by_lhs: dict[str, list[Production]] = field(default_factory=dict)
    categories: frozenset[str] = frozenset()
    terminals: frozenset[str] = frozenset()

    def productions_for(self, cat: str) -> list[Production]:
        return self.by_lhs.get(cat, [])


_CONSTRAINT_RE = re.compile(r"\s*([A-Za-z_]\w*)\.(\w+)\s*=\s*(?:([A-Za-z_]\w*)\.(\w+)|(\w+))\s*")


def compile_grammar(source: str) -> Grammar:
    """Compile grammar text; see the module docstring for the format."""
    raw_rules: list[tuple[int, str, list, list[str]]] = []  # (lineno, lhs, rhs tokens, constraints)
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise GrammarError("line %d: expected 'LHS -> RHS'" % lineno)
        lhs, _, rest = line.partition("->")
        lhs = lhs.strip()
        if not lhs or not re.fullmatch(r"[A-Za-z_]\w*", lhs):
            raise GrammarError("line %d: bad left-hand side %r" % (lineno, lhs))
        constraints: list[str] = []
        rhs_tokens: list = []
        pos = 0
        rest = rest.strip()
        while pos < len(rest):
            if rest[pos].isspace():
                pos += 1
                continue
            if rest[pos] == "{":
                end = rest.find("}", pos)
                if end < 0:
                    raise GrammarError("line %d: unclosed brace group" % lineno)
                group = rest[pos + 1:end].strip()
                if "=" in group:
                    constraints.extend(c.strip() for c in group.split(",") if c.strip())
                else:
                    for sym in group.split():
                        rhs_tokens.append(("opt", sym))
                pos = end + 1
                continue
            m = re.match(r"[A-Za-z_]\w*|[^\s{]+", rest[pos:])
            rhs_tokens.append(("req", m.group()))
            pos += m.end()
        raw_rules.append((lineno, lhs, rhs_tokens, constraints))

    if not raw_rules:
        raise GrammarError("empty grammar: no start symbol")

    lhs_names = {lhs for _, lhs, _, _ in raw_rules}

    def classify(name: str) -> Symbol:
        if name in lhs_names:
            return Symbol(name, "cat")
        if name in POS_TAGS:
            return Symbol(name, "lex")
        if name[0].isupper():
            raise GrammarError("undefined category %r (capitalised symbols must have productions)" % name)
        return Symbol(name, "term")

    productions: list[Production] = []
    for lineno, lhs, rhs_tokens, constraints in raw_rules:
        optional_idx = [i for i, (k, _) in enumerate(rhs_tokens) if k == "opt"]
        for mask in range(1 << len(optional_idx)):
            chosen = []
            for i, (kind, name) in enumerate(rhs_tokens):
                if kind == "req" or (mask >> optional_idx.index(i)) & 1:
                    chosen.append(name)
            rhs = tuple(classify(n) for n in chosen)
            optional_names = {name for kind, name in rhs_tokens if kind == "opt"}
            productions.append(_build_production(len(productions), lhs, rhs, constraints, lineno, optional_names))

    grammar = Grammar(
        productions,
        start=raw_rules[0][1],
        categories=frozenset(lhs_names),
        terminals=frozenset(s.name for p in productions for s in p.rhs if s.kind == "term"),
    )
    for p in productions:
        grammar.by_lhs.setdefault(p.lhs, []).append(p)

    _check_unit_cycles(grammar)
    _check_left_recursion(grammar)
    return grammar


def _build_production(
    index: int,
    lhs: str,
    rhs: tuple[Symbol, ...],
    constraints: list[str],
    lineno: int,
    optional_names: set[str] = frozenset(),
) -> Production:
    # slots: 0 = lhs, 1..n = rhs; resolve NAME.feat references; None when
    # the name belongs to an optional element omitted from this expansion
    def resolve(name: str, feat: str) -> Optional[tuple[int, str]]:
        if feat not in FEATURES:
            raise GrammarError("line %d: unknown feature %r" % (lineno, feat))
        matches = [i + 1 for i, s in enumerate(rhs) if s.name == name]
        if name == "lhs" and not matches:
            return (0, feat)
        if name == lhs and not matches:
            return (0, feat)
        if len(matches) == 1:
            return (matches[0], feat)
        if not matches:
            if name in optional_names:
                return None
            raise GrammarError("line %d: constraint names unknown symbol %r" % (lineno, name))
        raise GrammarError("line %d: constraint reference %r is ambiguous" % (lineno, name))

    parent: dict[tuple[int, str], tuple[int, str]] = {}
    value: dict[tuple[int, str], str] = {}

    def find(n):
        parent.setdefault(n, n)
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            if ra in value:
                _set_value(rb, value.pop(ra))

    def _set_value(root, v):
        if root in value and value[root] != v:
            raise GrammarError("line %d: conflicting constant values for a feature class" % lineno)
        value[root] = v

    for c in constraints:
        m = _CONSTRAINT_RE.fullmatch(c)
        if not m:
            raise GrammarError("line %d: bad constraint %r" % (lineno, c))
        left = resolve(m.group(1), m.group(2))
        if left is None:
            continue
        if m.group(3) is not None:
            right = resolve(m.group(3), m.group(4))
            if right is None:
                continue
            union(left, right)
        else:
            const = m.group(5)
            if const not in _FEATURE_VALUES:
                raise GrammarError("line %d: unknown feature value %r" % (lineno, const))
            _set_value(find(left), const)

    roots: dict[tuple[int, str], int] = {}
    class_of = []
    for node in parent:
        r = find(node)
        if r not in roots:
            roots[r] = len(roots)
        class_of.append((node, roots[r]))
    fixed: list[Optional[str]] = [None] * len(roots)
    for r, cls in roots.items():
        if r in value:
            fixed[cls] = value[r]
    return Production(index, lhs, rhs, len(roots), tuple(class_of), tuple(fixed))


def _check_unit_cycles(grammar: Grammar) -> None:
    edges: dict[str, set[str]] = {}
    for p in grammar.productions:
        if len(p.rhs) == 1 and p.rhs[0].kind == "cat":
            edges.setdefault(p.lhs, set()).add(p.rhs[0].name)
    _reject_cycle(edges, "cyclic unit-production chain")


def _check_left_recursion(grammar: Grammar) -> None:
    edges: dict[str, set[str]] = {}
    for p in grammar.productions:
        if p.rhs and p.rhs[0].kind == "cat":
            edges.setdefault(p.lhs, set()).add(p.rhs[0].name)
    _reject_cycle(edges, "left recursion (top-down parsing would not terminate)")


def _reject_cycle(edges: dict[str, set[str]], what: str) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in edges}

    def visit(n: str, path: list[str]) -> None:
        color[n] = GRAY
        for m in edges.get(n, ()):
            if m not in color:
                continue
            if color[m] == GRAY:
                cycle = path[path.index(m):] + [m] if m in path else [n, m]
                raise GrammarError("%s: %s" % (what, " -> ".join(cycle)))
            if color[m] == WHITE:
                visit(m, path + [m])
        color[n] = BLACK

    for n in list(color):
        if color[n] == WHITE:
            visit(n, [n])


def load_grammar_file(path: str) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return compile_grammar(fh.read())
