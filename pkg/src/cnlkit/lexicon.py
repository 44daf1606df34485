"""CNL vocabulary: entries, synonym classes, and the illegal-word list.

Lexicon files are plain predicate-style text, one declaration per line:

    noun(fog, fog).
    noun(birds, bird, pl).
    pnoun(john, John, m).
    adv(fast, fast).  adv_comp(faster, fast).  adv_sup(fastest, fast).
    syn(fog, mist).
    illegal(could).
    % comment

The first argument is the surface word, the second the logical symbol
used in semantic structures.  Remaining arguments are feature values
drawn from sg/pl (number), m/f/n (gender), pos/comp/sup (degree); any
other extra argument is noted and ignored with a warning.  A lexicon is
immutable once loaded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Optional

POS_TAGS = ("noun", "pnoun", "verb", "adj", "adv", "adv_comp", "adv_sup", "prep", "det", "num")

_FEATURE_DOMAIN = {
    "sg": ("number", "sg"),
    "pl": ("number", "pl"),
    "m": ("gender", "m"),
    "f": ("gender", "f"),
    "n": ("gender", "n"),
    "pos": ("degree", "pos"),
    "comp": ("degree", "comp"),
    "sup": ("degree", "sup"),
}

# pronouns ride along as pnoun entries; the DRS builder treats these
# surfaces as anaphoric rather than name-denoting
PRONOUNS = frozenset({"it", "he", "she"})

# surfaces of ordinal numerals, used for ordinal reference
ORDINALS = {"first": 1, "second": 2, "third": 3, "fourth": 4, "fifth": 5,
            "sixth": 6, "seventh": 7, "eighth": 8, "ninth": 9, "tenth": 10}

_NUMBER_RE = re.compile(r"\d+(\.\d+)?")


class LexiconError(ValueError):
    pass


class IllegalWordError(LexiconError):
    def __init__(self, word: str):
        self.word = word
        super().__init__("illegal word: %r is banned from the controlled language" % word)


@dataclass(frozen=True)
class LexEntry:
    surface: str
    pos: str
    symbol: object  # str, int, or Decimal
    features: tuple[tuple[str, str], ...] = ()
    # role nouns (customer, product, ...) bind variables but denote no
    # knowledge-base class; the translator drops their class literals
    role: bool = False

    def feature(self, name: str) -> Optional[str]:
        for k, v in self.features:
            if k == name:
                return v
        return None

    def feature_map(self) -> dict[str, str]:
        return dict(self.features)

    def __str__(self) -> str:
        feats = "".join(", %s" % v for _, v in self.features)
        return "%s(%s, %s%s)." % (self.pos, self.surface, self.symbol, feats)


class Lexicon:
    """Immutable word store with synonym classes and an illegal list."""

    def __init__(self, entries: list[LexEntry], syn_pairs: list[tuple[str, str]], illegal: set[str], warnings: list[str]):
        self._by_surface: dict[str, list[LexEntry]] = {}
        for e in entries:
            self._by_surface.setdefault(e.surface, []).append(e)
        self.entries = tuple(entries)
        self.illegal = frozenset(illegal)
        self.warnings = tuple(warnings)
        self.syn_pairs = tuple(syn_pairs)
        self._parent: dict[str, str] = {}
        for a, b in syn_pairs:
            self._union(a, b)

    # union-find over logical symbols
    def _find(self, x: str) -> str:
        p = self._parent.get(x, x)
        if p == x:
            return x
        root = self._find(p)
        self._parent[x] = root
        return root

    def _union(self, a: str, b: str) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[ra] = rb

    def synclass(self, symbol: str) -> str:
        return self._find(symbol)

    def lookup(self, surface: str) -> list[LexEntry]:
        word = surface.lower()
        if word in self.illegal:
            raise IllegalWordError(word)
        if _NUMBER_RE.fullmatch(word):
            value = Decimal(word) if "." in word else int(word)
            return [LexEntry(word, "num", value)]
        return list(self._by_surface.get(word, []))

    def knows(self, surface: str) -> bool:
        word = surface.lower()
        return word in self._by_surface or bool(_NUMBER_RE.fullmatch(word))

    def same_concept(self, a: str, b: str) -> bool:
        return a == b or self._find(a) == self._find(b)

    def words_for(self, pos: str, features: Optional[dict[str, str]] = None, limit: Optional[int] = None) -> list[str]:
        out = []
        for e in sorted(self.entries, key=lambda e: e.surface):
            if e.pos != pos:
                continue
            if features and any(e.feature(k) not in (None, v) for k, v in features.items()):
                continue
            if e.surface not in out:
                out.append(e.surface)
            if limit is not None and len(out) >= limit:
                break
        return out

    def role_symbols(self) -> frozenset[str]:
        return frozenset(str(e.symbol) for e in self.entries if e.role)

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            feats = "".join(", %s" % v for _, v in e.features)
            flag = ", role" if e.role else ""
            lines.append("%s(%s, %s%s%s)." % (e.pos, e.surface, e.symbol, feats, flag))
        lines += ["syn(%s, %s)." % p for p in self.syn_pairs]
        lines += ["illegal(%s)." % w for w in sorted(self.illegal)]
        return "\n".join(lines) + "\n"


_LINE_RE = re.compile(r"(?P<pred>[a-z_]\w*)\s*\((?P<args>[^()]*)\)\s*\.")


def load_lexicon(text: str) -> Lexicon:
    """Parse lexicon text; malformed lines raise with their line number."""
    entries: list[LexEntry] = []
    seen: set[LexEntry] = set()
    syn_pairs: list[tuple[str, str]] = []
    illegal: set[str] = set()
    warnings: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        pos = 0
        while pos < len(line):
            m = _LINE_RE.match(line, pos)
            if not m:
                raise LexiconError("line %d: malformed lexicon entry %r" % (lineno, line[pos:]))
            pred = m.group("pred")
            args = [a.strip() for a in m.group("args").split(",")]
            if pred == "syn":
                if len(args) != 2 or not all(args):
                    raise LexiconError("line %d: syn/2 expects two symbols" % lineno)
                syn_pairs.append((args[0], args[1]))
            elif pred == "illegal":
                if len(args) != 1 or not args[0]:
                    raise LexiconError("line %d: illegal/1 expects one word" % lineno)
                illegal.add(args[0].lower())
            elif pred in POS_TAGS:
                if len(args) < 2 or not args[0] or not args[1]:
                    raise LexiconError("line %d: %s needs surface and logical symbol" % (lineno, pred))
                surface = args[0].lower()
                symbol: object = args[1]
                if pred == "num" and _NUMBER_RE.fullmatch(args[1]):
                    symbol = Decimal(args[1]) if "." in args[1] else int(args[1])
                feats: dict[str, str] = {}
                role = False
                for extra in args[2:]:
                    if extra == "role" and pred == "noun":
                        role = True
                        continue
                    if "=" in extra:
                        k, _, v = extra.partition("=")
                        k, v = k.strip(), v.strip()
                        if k in ("number", "gender", "degree"):
                            feats[k] = v
                            continue
                    dom = _FEATURE_DOMAIN.get(extra)
                    if dom is None:
                        warnings.append("line %d: ignoring unknown argument %r on %s(%s, ...)" % (lineno, extra, pred, surface))
                        continue
                    feats[dom[0]] = dom[1]
                if pred == "noun":
                    feats.setdefault("number", "sg")
                    feats.setdefault("gender", "n")
                elif pred == "pnoun":
                    feats.setdefault("number", "sg")
                elif pred in ("adj", "adv"):
                    feats.setdefault("degree", "pos")
                elif pred == "adv_comp":
                    feats.setdefault("degree", "comp")
                elif pred == "adv_sup":
                    feats.setdefault("degree", "sup")
                entry = LexEntry(surface, pred, symbol, tuple(sorted(feats.items())), role)
                if entry in seen:
                    warnings.append("line %d: duplicate entry %s" % (lineno, entry))
                else:
                    seen.add(entry)
                    entries.append(entry)
            else:
                raise LexiconError("line %d: unknown predicate %r" % (lineno, pred))
            pos = m.end()
            while pos < len(line) and line[pos].isspace():
                pos += 1

    for e in entries:
        if e.surface in illegal:
            raise LexiconError("entry %r is also declared illegal" % e.surface)
    # comparative/superlative forms should share their symbol with a
    # positive-degree entry
    positive_symbols = {e.symbol for e in entries if e.pos in ("adv", "adj")}
    for e in entries:
        if e.pos in ("adv_comp", "adv_sup") and e.symbol not in positive_symbols:
            warnings.append("no positive-degree entry for %s(%s, %s)" % (e.pos, e.surface, e.symbol))
    return Lexicon(entries, syn_pairs, illegal, warnings)


def load_lexicon_file(path: str) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh.read())
