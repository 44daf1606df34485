"""First-order terms shared by the logic engines.

Terms are immutable and hashable so they can live in sets and serve as
dictionary keys during grounding.  Numeric constants are `int` or
`decimal.Decimal` (never float); `Decimal` keeps the written scale, so
an amount parsed as ``2.50`` prints back as ``2.50``.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Iterator, Mapping, Optional, Union

Value = Union[str, int, Decimal]


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


@dataclass(frozen=True)
class Const:
    value: Value

    def __str__(self) -> str:
        return format_value(self.value)


@dataclass(frozen=True)
class Struct:
    functor: str
    args: tuple["Term", ...]

    def __str__(self) -> str:
        return "%s(%s)" % (self.functor, ", ".join(str(a) for a in self.args))


Term = Union[Var, Const, Struct]


def format_value(v: Value) -> str:
    if isinstance(v, Decimal):
        return str(v)
    return str(v)


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    if isinstance(t, Struct):
        return all(is_ground(a) for a in t.args)
    return True


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, Struct):
        for a in t.args:
            yield from term_vars(a)


def substitute(t: Term, binding: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return binding.get(t.name, t)
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(substitute(a, binding) for a in t.args))
    return t


def match(pattern: Term, ground: Term, binding: dict[str, Term]) -> Optional[dict[str, Term]]:
    """One-way unification of a pattern against a ground term.

    Returns the extended binding, or None when the pattern cannot match.
    The input binding is not mutated.
    """
    if isinstance(pattern, Var):
        bound = binding.get(pattern.name)
        if bound is None:
            out = dict(binding)
            out[pattern.name] = ground
            return out
        return binding if bound == ground else None
    if isinstance(pattern, Const):
        return binding if isinstance(ground, Const) and pattern.value == ground.value else None
    if isinstance(pattern, Struct):
        if not isinstance(ground, Struct) or pattern.functor != ground.functor:
            return None
        if len(pattern.args) != len(ground.args):
            return None
        for p, g in zip(pattern.args, ground.args):
            nxt = match(p, g, binding)
            if nxt is None:
                return None
            binding = nxt
        return binding
    raise TypeError(pattern)
