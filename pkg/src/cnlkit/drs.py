"""Discourse representation structures.

A DRS is a universe of referents plus conditions; conditions are either
simple (a fixed repertoire of eight predicates, each carrying the
sentence/token index of the word that introduced it) or complex
(negation, disjunction, implication, or the default operator over
sub-DRSs).  A multi-sentence document always grows one root DRS.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

SIMPLE_PREDICATES = (
    "object",
    "property",
    "relation",
    "predicate",
    "modifier_adv",
    "modifier_pp",
    "has_part",
    "query",
)

COMPLEX_OPS = ("neg", "disj", "impl", "default")


class DrsError(ValueError):
    pass


class ScopeError(DrsError):
    pass


class UnsupportedConstructionError(DrsError):
    def __init__(self, what: str, span: Optional[tuple[int, int]] = None):
        self.what = what
        self.span = span
        msg = "unsupported construction: %s" % what
        if span:
            msg += " (tokens %d-%d)" % span
        super().__init__(msg)


@dataclass
class Referent:
    label: str
    sid: int                     # sentence ordinal introducing it (1-based)
    tok: int                     # token ordinal of the introducing word (1-based)
    sort: str                    # object | event
    kind: str                    # named | common | event
    noun: Optional[str] = None   # logical symbol of the introducing noun
    constant: Optional[object] = None  # for named referents
    gender: Optional[str] = None
    number: Optional[str] = None
    paragraph: int = 1

    def __repr__(self) -> str:
        return "Referent(%s)" % self.label


@dataclass
class Simple:
    pred: str
    args: tuple
    index: tuple[int, int]

    def __post_init__(self):
        if self.pred not in SIMPLE_PREDICATES:
            raise DrsError("condition predicate %r is not one of the eight" % self.pred)

    def __str__(self) -> str:
        rendered = ", ".join(_fmt_arg(a) for a in self.args)
        return "%s(%s) %d/%d" % (self.pred, rendered, self.index[0], self.index[1])


@dataclass
class Complex:
    op: str
    subs: tuple["DRS", ...]

    def __post_init__(self):
        if self.op not in COMPLEX_OPS:
            raise DrsError("unknown complex operator %r" % self.op)
        if self.op == "default" and len(self.subs) != 2:
            raise DrsError("the default operator connects exactly two DRSs")
        if self.op == "impl" and len(self.subs) != 2:
            raise DrsError("implication connects exactly two DRSs")
        if self.op == "neg" and len(self.subs) != 1:
            raise DrsError("negation wraps exactly one DRS")


Condition = Union[Simple, Complex]


def _fmt_arg(a) -> str:
    if isinstance(a, Referent):
        return a.label
    return str(a)


class DRS:
    """A box: universe plus conditions, with visibility of its ancestors."""

    def __init__(self, outer: Optional[list["DRS"]] = None):
        self.universe: list[Referent] = []
        self.conditions: list[Condition] = []
        # DRSs whose referents are visible from here, innermost first;
        # includes self
        self.outer: list[DRS] = [self] + list(outer or [])

    def declare(self, ref: Referent) -> Referent:
        self.universe.append(ref)
        return ref

    def add(self, cond: Condition) -> Condition:
        self.conditions.append(cond)
        return cond

    def accessible(self) -> list[Referent]:
        out = []
        for box in self.outer:
            out.extend(box.universe)
        return out

    def subordinate(self, extra_visible: Iterable["DRS"] = ()) -> "DRS":
        """A child box that can see this box (and optionally others)."""
        return DRS(outer=list(extra_visible) + self.outer)

    # -- validation ----------------------------------------------------------

    def check_scope(self) -> None:
        """Every referent used in a condition must be declared here or in
        an ancestor box."""
        self._check_scope(set())

    def _check_scope(self, visible: set[str]) -> None:
        visible = visible | {r.label for r in self.universe}
        for c in self.conditions:
            if isinstance(c, Simple):
                for a in c.args:
                    if isinstance(a, Referent) and a.label not in visible:
                        raise ScopeError(
                            "referent %s used in %s but not declared in scope" % (a.label, c)
                        )
            elif c.op in ("impl", "default"):
                # the consequent may use the antecedent's referents
                c.subs[0]._check_scope(visible)
                c.subs[1]._check_scope(visible | {r.label for r in c.subs[0].universe})
            else:
                for sub in c.subs:
                    sub._check_scope(visible)

    # -- rendering -----------------------------------------------------------

    def pretty(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [pad + "[" + ", ".join(r.label for r in self.universe) + "]"]
        for c in self.conditions:
            if isinstance(c, Simple):
                lines.append(pad + str(c))
            elif c.op == "neg":
                lines.append(pad + "neg")
                lines.append(c.subs[0].pretty(indent + 1))
            else:
                sep = {"impl": "=>", "default": "~~>", "disj": "or"}[c.op]
                lines.append(c.subs[0].pretty(indent + 1))
                for sub in c.subs[1:]:
                    lines.append(pad + sep)
                    lines.append(sub.pretty(indent + 1))
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.pretty()

    def walk_simple(self):
        for c in self.conditions:
            if isinstance(c, Simple):
                yield self, c
            else:
                for sub in c.subs:
                    yield from sub.walk_simple()

    def condition_count(self) -> int:
        return len(self.conditions)


class LabelGenerator:
    """Referent labels A, B, ..., Z, A1, B1, ... per root DRS."""

    def __init__(self) -> None:
        self.n = 0

    def fresh(self) -> str:
        letter = chr(ord("A") + self.n % 26)
        round_ = self.n // 26
        self.n += 1
        return letter if round_ == 0 else "%s%d" % (letter, round_)
