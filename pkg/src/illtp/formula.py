"""Linear and intuitionistic formula languages shared by every other module."""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

ATOM_NAME = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


# ---------------------------------------------------------------------------
# Linear logic formulas


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_NAME.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class One:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "⊤"


@dataclass(frozen=True)
class Bot:
    def __str__(self) -> str:
        return "⊥"


@dataclass(frozen=True)
class Tensor:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Par:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class With:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Plus:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Limp:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Bang:
    body: Formula

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Quest:
    body: Formula

    def __str__(self) -> str:
        return pretty(self)


Formula = Union[Atom, One, Zero, Top, Bot, Tensor, Par, With, Plus, Limp, Bang, Quest]
BINARY = (Tensor, Par, With, Plus, Limp)
UNARY = (Bang, Quest)
CONSTANTS = (One, Zero, Top, Bot)

ONE, ZERO, TOP, BOT = One(), Zero(), Top(), Bot()


class Polarity(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


_POSITIVE = (Atom, Tensor, One, Plus, Zero, Bang)


def polarity(f: Formula) -> Polarity:
    """Classify by outermost connective; atoms carry a fixed positive bias."""
    return Polarity.POSITIVE if isinstance(f, _POSITIVE) else Polarity.NEGATIVE


def is_positive(f: Formula) -> bool:
    return isinstance(f, _POSITIVE)


def is_negative(f: Formula) -> bool:
    return not isinstance(f, _POSITIVE)


def negate(f: Formula) -> Formula:
    """Intuitionistic linear negation ``f ⊸ ⊥``."""
    return Limp(f, BOT)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, UNARY):
        yield from subformulas(f.body)


def atoms(f) -> Counter:
    """Multiset of atom occurrences (works for both formula languages)."""
    return Counter(g.name for g in _walk(f) if isinstance(g, Atom))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def is_ill_admissible(f: Formula) -> bool:
    return not any(isinstance(g, (Par, Quest)) for g in subformulas(f))


def bang_free(f: Formula) -> bool:
    return not any(isinstance(g, (Bang, Quest)) for g in subformulas(f))


# Unicode rendering. Precedence mirrors the file syntax: ! ? bind tightest,
# then ⊗, &, ⊕, ⅋, and ⊸ loosest (right-associative).
_PREC = {Tensor: 5, With: 4, Plus: 3, Par: 2, Limp: 1}
_SYMBOL = {Tensor: "⊗", With: "&", Plus: "⊕", Par: "⅋", Limp: "⊸"}


def pretty(f: Formula, _ctx: int = 0) -> str:
    if isinstance(f, (Atom,) + CONSTANTS):
        return str(f)
    if isinstance(f, UNARY):
        mark = "!" if isinstance(f, Bang) else "?"
        return mark + pretty(f.body, 6)
    prec = _PREC[type(f)]
    if isinstance(f, Limp):
        text = f"{pretty(f.left, prec + 1)} ⊸ {pretty(f.right, prec)}"
    else:
        text = f"{pretty(f.left, prec)} {_SYMBOL[type(f)]} {pretty(f.right, prec + 1)}"
    return f"({text})" if prec < _ctx else text


# ---------------------------------------------------------------------------
# Intuitionistic formulas (source language of the translations)


@dataclass(frozen=True)
class Verum:
    def __str__(self) -> str:
        return "t"


@dataclass(frozen=True)
class Falsum:
    def __str__(self) -> str:
        return "f"


@dataclass(frozen=True)
class And:
    left: ILFormula
    right: ILFormula

    def __str__(self) -> str:
        return il_pretty(self)


@dataclass(frozen=True)
class Or:
    left: ILFormula
    right: ILFormula

    def __str__(self) -> str:
        return il_pretty(self)


@dataclass(frozen=True)
class Imp:
    left: ILFormula
    right: ILFormula

    def __str__(self) -> str:
        return il_pretty(self)


@dataclass(frozen=True)
class Not:
    body: ILFormula

    def __str__(self) -> str:
        return il_pretty(self)


@dataclass(frozen=True)
class Equiv:
    left: ILFormula
    right: ILFormula

    def __str__(self) -> str:
        return il_pretty(self)


ILFormula = Union[Atom, Verum, Falsum, And, Or, Imp, Not, Equiv]
IL_BINARY = (And, Or, Imp, Equiv)
VERUM, FALSUM = Verum(), Falsum()

_IL_PREC = {And: 4, Or: 3, Imp: 2, Equiv: 1}
_IL_SYMBOL = {And: "∧", Or: "∨", Imp: "→", Equiv: "∼"}


def il_pretty(f: ILFormula, _ctx: int = 0) -> str:
    if isinstance(f, (Atom, Verum, Falsum)):
        return str(f)
    if isinstance(f, Not):
        return "¬" + il_pretty(f.body, 5)
    prec = _IL_PREC[type(f)]
    if isinstance(f, Imp):
        text = f"{il_pretty(f.left, prec + 1)} → {il_pretty(f.right, prec)}"
    else:
        text = f"{il_pretty(f.left, prec + 1)} {_IL_SYMBOL[type(f)]} {il_pretty(f.right, prec + 1)}"
    return f"({text})" if prec < _ctx else text


def expand_defined(f: ILFormula) -> ILFormula:
    """Eliminate ¬ (as A → f) and ∼ (as (A → B) ∧ (B → A))."""
    match f:
        case Not(body):
            return Imp(expand_defined(body), FALSUM)
        case Equiv(a, b):
            a, b = expand_defined(a), expand_defined(b)
            return And(Imp(a, b), Imp(b, a))
        case And(a, b) | Or(a, b) | Imp(a, b):
            return type(f)(expand_defined(a), expand_defined(b))
        case _:
            return f


def is_rudimentary(f: ILFormula) -> bool:
    return not any(isinstance(g, Or) for g in _walk(f))


def _walk(f) -> Iterator:
    yield f
    for child in _children(f):
        yield from _walk(child)


def _children(f) -> tuple:
    if isinstance(f, BINARY + IL_BINARY):
        return (f.left, f.right)
    if isinstance(f, UNARY + (Not,)):
        return (f.body,)
    return ()


# ---------------------------------------------------------------------------
# Sequents


def sort_key(f) -> str:
    return repr(f)


def multiset(formulas: Iterable) -> tuple:
    """Canonical (sorted) tuple representation of a multiset of formulas."""
    return tuple(sorted(formulas, key=sort_key))


@dataclass(frozen=True, eq=False)
class Sequent:
    """``Γ ⊢ Δ`` with Γ a multiset and at most one succedent formula.

    Antecedent order is kept for printing but ignored by equality.
    """

    antecedent: tuple[Formula, ...]
    succedent: Formula | None

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(self.antecedent))

    def _canon(self):
        return (multiset(self.antecedent), self.succedent)

    def __eq__(self, other):
        if not isinstance(other, Sequent):
            return NotImplemented
        return self._canon() == other._canon()

    def __hash__(self):
        return hash(self._canon())

    def formulas(self) -> list[Formula]:
        out = list(self.antecedent)
        if self.succedent is not None:
            out.append(self.succedent)
        return out

    def __str__(self) -> str:
        left = ", ".join(pretty(f) for f in self.antecedent)
        right = "" if self.succedent is None else pretty(self.succedent)
        return f"{left} ⊢ {right}".strip()


@dataclass(frozen=True, eq=False)
class ILSequent:
    antecedent: tuple[ILFormula, ...]
    succedent: ILFormula

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(self.antecedent))

    def _canon(self):
        return (multiset(self.antecedent), self.succedent)

    def __eq__(self, other):
        if not isinstance(other, ILSequent):
            return NotImplemented
        return self._canon() == other._canon()

    def __hash__(self):
        return hash(self._canon())

    def __str__(self) -> str:
        left = ", ".join(il_pretty(f) for f in self.antecedent)
        return f"{left} ⊢ {il_pretty(self.succedent)}".strip()
