"""Translations of intuitionistic formulas and sequents into linear logic."""

from __future__ import annotations

import enum

from .formula import (
    BOT,
    ONE,
    TOP,
    ZERO,
    And,
    Atom,
    Bang,
    Falsum,
    Formula,
    ILFormula,
    ILSequent,
    Imp,
    Limp,
    Or,
    Par,
    Plus,
    Sequent,
    Tensor,
    Verum,
    With,
    expand_defined,
)


class TranslationKind(enum.Enum):
    MULT = "mult"
    CALL_BY_NAME = "cbn"
    CALL_BY_VALUE = "cbv"
    ZERO_ONE = "01"


def trans_mult(f: ILFormula) -> Formula:
    match f:
        case Atom():
            return f
        case Verum():
            return ONE
        case Falsum():
            return BOT
        case Imp(a, b):
            return Limp(trans_mult(a), trans_mult(b))
        case And(a, b):
            return Tensor(trans_mult(a), trans_mult(b))
        case Or(a, b):
            return Par(trans_mult(a), trans_mult(b))
    raise TypeError(f"expand defined connectives before translating: {f!r}")


def trans_cbn(f: ILFormula) -> Formula:
    match f:
        case Atom():
            return f
        case Verum():
            return TOP
        case Falsum():
            return ZERO
        case Imp(a, b):
            return Limp(Bang(trans_cbn(a)), trans_cbn(b))
        case And(a, b):
            return With(trans_cbn(a), trans_cbn(b))
        case Or(a, b):
            return Plus(Bang(trans_cbn(a)), Bang(trans_cbn(b)))
    raise TypeError(f"expand defined connectives before translating: {f!r}")


def trans_cbv(f: ILFormula) -> Formula:
    match f:
        case Atom():
            return Bang(f)
        case Verum():
            return ONE
        case Falsum():
            return ZERO
        case Imp(a, b):
            return Bang(Limp(trans_cbv(a), trans_cbv(b)))
        case And(a, b):
            return Tensor(trans_cbv(a), trans_cbv(b))
        case Or(a, b):
            return Plus(trans_cbv(a), trans_cbv(b))
    raise TypeError(f"expand defined connectives before translating: {f!r}")


def trans_01(f: ILFormula, pos: int) -> Formula:
    """Polarity-indexed translation: ``pos`` 0 on the left of ⊢, 1 on the right."""
    if pos not in (0, 1):
        raise ValueError("pos must be 0 or 1")
    match f:
        case Atom():
            return f
        case Verum():
            return TOP if pos == 0 else ONE
        case Falsum():
            return ZERO
        case Imp(a, b) if pos == 0:
            return Limp(Bang(trans_01(a, 1)), Bang(trans_01(b, 0)))
        case Imp(a, b):
            return Bang(Limp(Bang(trans_01(a, 0)), trans_01(b, 1)))
        case And(a, b) if pos == 0:
            return With(Bang(trans_01(a, 0)), Bang(trans_01(b, 0)))
        case And(a, b):
            return Bang(With(trans_01(a, 1), trans_01(b, 1)))
        case Or(a, b):
            return Plus(Bang(trans_01(a, pos)), Bang(trans_01(b, pos)))
    raise TypeError(f"expand defined connectives before translating: {f!r}")


def translate(f: ILFormula, kind: TranslationKind) -> Formula:
    """Formula-level image; for 0/1 this is the right-hand (positive) side."""
    f = expand_defined(f)
    match kind:
        case TranslationKind.MULT:
            return trans_mult(f)
        case TranslationKind.CALL_BY_NAME:
            return trans_cbn(f)
        case TranslationKind.CALL_BY_VALUE:
            return trans_cbv(f)
        case TranslationKind.ZERO_ONE:
            return trans_01(f, 1)


def trans_sequent(s: ILSequent, kind: TranslationKind) -> Sequent:
    left = [expand_defined(g) for g in s.antecedent]
    right = expand_defined(s.succedent)
    match kind:
        case TranslationKind.MULT:
            return Sequent(tuple(trans_mult(g) for g in left), trans_mult(right))
        case TranslationKind.CALL_BY_NAME:
            return Sequent(tuple(Bang(trans_cbn(g)) for g in left), trans_cbn(right))
        case TranslationKind.CALL_BY_VALUE:
            return Sequent(tuple(trans_cbv(g) for g in left), trans_cbv(right))
        case TranslationKind.ZERO_ONE:
            return Sequent(tuple(Bang(trans_01(g, 0)) for g in left), trans_01(right, 1))
    raise ValueError(kind)
