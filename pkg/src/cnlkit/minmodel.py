"""Ground circumscription: models minimal in designated predicates.

A theory is a set of ground clauses (disjunctions of signed atoms) over a
finite atom universe, with a minimized predicate set P and a varied set Z;
everything else is fixed.  A model M is P-minimal when no model M' agrees
with M on the fixed atoms and has a strictly smaller P-extension (Z may
change freely).  Entailment quantifies over the P-minimal models.

Second-order quantification is realized by plain enumeration of the 2^n
assignments, so the universe is capped at 24 atoms.

Theory file format, one clause per line:

    bird(eagle).
    -bird(eagle) | ab(eagle) | fly(eagle).
    #minimize ab.
    #vary fly.
    #atom p.            % declare an atom not mentioned in any clause
    % comment
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Sequence

MAX_ATOMS = 24


class TheoryError(ValueError):
    pass


@dataclass(frozen=True)
class SignedAtom:
    atom: str
    positive: bool = True

    def __str__(self) -> str:
        return self.atom if self.positive else "-" + self.atom


@dataclass
class GroundTheory:
    clauses: list[tuple[SignedAtom, ...]] = field(default_factory=list)
    minimized: set[str] = field(default_factory=set)  # predicate names
    varied: set[str] = field(default_factory=set)
    extra_atoms: list[str] = field(default_factory=list)

    def atoms(self) -> list[str]:
        seen: dict[str, None] = {}
        for c in self.clauses:
            for s in c:
                seen.setdefault(s.atom, None)
        for a in self.extra_atoms:
            seen.setdefault(a, None)
        return sorted(seen)

    def validate(self) -> None:
        if self.minimized & self.varied:
            raise TheoryError(
                "predicates both minimized and varied: %s" % ", ".join(sorted(self.minimized & self.varied))
            )
        n = len(self.atoms())
        if n > MAX_ATOMS:
            raise TheoryError("atom universe too large: %d atoms (limit %d)" % (n, MAX_ATOMS))


_ATOM_RE = re.compile(r"[a-z]\w*(\([^()]*\))?")


def _pred_of(atom: str) -> str:
    return atom.split("(", 1)[0]


def parse_theory(text: str) -> GroundTheory:
    th = GroundTheory()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if not line.endswith("."):
            raise TheoryError("line %d: missing final '.'" % lineno)
        line = line[:-1].strip()
        if line.startswith("#minimize"):
            th.minimized.update(p.strip() for p in line[len("#minimize"):].split(",") if p.strip())
            continue
        if line.startswith("#vary"):
            th.varied.update(p.strip() for p in line[len("#vary"):].split(",") if p.strip())
            continue
        if line.startswith("#atom"):
            th.extra_atoms.extend(p.strip() for p in line[len("#atom"):].split(",") if p.strip())
            continue
        clause = []
        for part in line.split("|"):
            part = part.strip()
            positive = True
            if part.startswith("-"):
                positive = False
                part = part[1:].strip()
            if not _ATOM_RE.fullmatch(part):
                raise TheoryError("line %d: bad atom %r" % (lineno, part))
            clause.append(SignedAtom(part, positive))
        th.clauses.append(tuple(clause))
    th.validate()
    return th


def _satisfies(model: frozenset[str], clause: tuple[SignedAtom, ...]) -> bool:
    return any((s.atom in model) == s.positive for s in clause)


def all_models(theory: GroundTheory) -> list[frozenset[str]]:
    """Every classical model, in subset-enumeration order over sorted atoms."""
    theory.validate()
    atoms = theory.atoms()
    out = []
    for bits in itertools.product((False, True), repeat=len(atoms)):
        model = frozenset(a for a, b in zip(atoms, bits) if b)
        if all(_satisfies(model, c) for c in theory.clauses):
            out.append(model)
    return out


def minimal_models(theory: GroundTheory) -> list[frozenset[str]]:
    """Models minimal in the extension of the minimized predicates.

    Two models are compared only when they agree on the fixed atoms
    (neither minimized nor varied); the varied part is free.
    """
    models = all_models(theory)
    minimized, varied = theory.minimized, theory.varied

    def split(m: frozenset[str]):
        p = frozenset(a for a in m if _pred_of(a) in minimized)
        fixed = frozenset(a for a in m if _pred_of(a) not in minimized and _pred_of(a) not in varied)
        return p, fixed

    by_fixed: dict[frozenset[str], list[frozenset[str]]] = {}
    for m in models:
        p, fixed = split(m)
        by_fixed.setdefault(fixed, []).append(p)

    out = []
    for m in models:
        p, fixed = split(m)
        if not any(q < p for q in by_fixed[fixed]):
            out.append(m)
    return out


# formula: atom | -f | f & f | f 'or' f | (f)


def parse_formula(text: str):
    toks = re.findall(r"-|&|\||\(|\)|[a-z]\w*(?:\([^()]*\))?", text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(t=None):
        nonlocal pos
        if pos >= len(toks) or (t is not None and toks[pos] != t):
            raise TheoryError("bad formula %r" % text)
        pos += 1
        return toks[pos - 1]

    def disj():
        left = conj()
        while peek() == "|":
            take()
            left = ("or", left, conj())
        return left

    def conj():
        left = unary()
        while peek() == "&":
            take()
            left = ("and", left, unary())
        return left

    def unary():
        if peek() == "-":
            take()
            return ("not", unary())
        if peek() == "(":
            take()
            f = disj()
            take(")")
            return f
        t = take()
        if t in ("&", "|", ")"):
            raise TheoryError("bad formula %r" % text)
        return ("atom", t)

    f = disj()
    if pos != len(toks):
        raise TheoryError("trailing input in formula %r" % text)
    return f


def eval_formula(f, model: frozenset[str]) -> bool:
    op = f[0]
    if op == "atom":
        return f[1] in model
    if op == "not":
        return not eval_formula(f[1], model)
    if op == "and":
        return eval_formula(f[1], model) and eval_formula(f[2], model)
    if op == "or":
        return eval_formula(f[1], model) or eval_formula(f[2], model)
    raise TheoryError("bad formula node %r" % (f,))


def circ_entails(theory: GroundTheory, formula) -> bool:
    """True when the formula holds in every minimal model."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    return all(eval_formula(formula, m) for m in minimal_models(theory))
