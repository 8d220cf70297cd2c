"""Kleene's rudimentary-fragment theorems and the library generated from them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .formula import ILSequent, Sequent
from .problem import Problem, ProblemStatus, make_problem, parse_formula, parse_il_formula
from .translate import TranslationKind, trans_sequent

# (hypotheses, conclusion) in ILTP syntax; ~ is ¬ and <=> is ∼.
_THEOREMS: list[tuple[list[str], str]] = [
    ([], "a => a"),
    (["a => b", "b => c"], "a => c"),
    (["a => (b => c)"], "b => (a => c)"),
    (["a => (b => c)"], "(a & b) => c"),
    (["(a & b) => c"], "a => (b => c)"),
    (["a => b"], "(b => c) => (a => c)"),
    (["a => b"], "(c => a) => (c => b)"),
    (["a => b"], "(a & c) => (b & c)"),
    (["a => b"], "(c & a) => (c & b)"),
    (["~a"], "a => b"),  # 10
    (["a"], "~a => b"),
    (["b"], "a => b"),
    (["a => b"], "~b => ~a"),
    (["a => ~b"], "~~b => ~a"),
    (["a => b", "b => a"], "a <=> b"),
    (["a <=> b"], "a => b"),
    (["a <=> b"], "b => a"),
    (["a <=> b", "a"], "b"),
    (["a <=> b", "b"], "a"),
    ([], "a <=> a"),  # 20
    (["a <=> b"], "b <=> a"),
    (["a <=> b", "b <=> c"], "a <=> c"),
    (["a => (b => c)", "~~a", "~~b"], "~~c"),
    (["~~(a => b)"], "~~a => ~~b"),
    (["~~(a => b)", "~~(b => c)"], "~~(a => c)"),
    ([], "~~(a & b) <=> (~~a & ~~b)"),
    ([], "~~(a <=> b) <=> (~~(a => b) & ~~(b => a))"),
    (["a <=> b"], "(a => c) <=> (b => c)"),
    (["a <=> b"], "(c => a) <=> (c => b)"),
    (["a <=> b"], "(a & c) <=> (b & c)"),  # 30
    (["a <=> b"], "(c & a) <=> (c & b)"),
    (["a <=> b"], "~a <=> ~b"),
    ([], "((a & b) & c) <=> (a & (b & c))"),
    ([], "(a & b) <=> (b & a)"),
    ([], "(a & a) <=> a"),
    (["a"], "(a => b) <=> b"),
    (["b"], "(a => b) <=> b"),
    (["~a"], "(a => b) <=> ~a"),
    (["~b"], "(a => b) <=> ~a"),
    (["b"], "(a & b) <=> a"),  # 40
    (["~b"], "(a & b) <=> b"),
    ([], "a => ~~a"),
    ([], "~~~a <=> ~a"),
    ([], "~(a & ~a)"),
    ([], "~(a <=> ~a)"),
    ([], "~~(~~a => a)"),
    ([], "(a & (b & ~b)) <=> (b & ~b)"),
    ([], "(a => b) => ~(a & ~b)"),
    ([], "(a => ~b) <=> ~(a & b)"),
    ([], "~(a & b) <=> (~~a => ~b)"),  # 50
    (["~~b => b"], "(~~a => b) <=> (a => b)"),
    (["~~b => b"], "(a => b) <=> ~(a & ~b)"),
    ([], "(~~a => b) => ~(a & ~b)"),
    ([], "(a & b) => ~(a => ~b)"),
    ([], "(a & ~b) => ~(a => b)"),
    ([], "(~~a & b) => ~(a => ~b)"),
    ([], "(~~a & ~b) <=> ~(a => b)"),
    ([], "~(a => b) <=> ~~(a & ~b)"),
    ([], "~~(a => b) <=> ~(a & ~b)"),
    ([], "~(a & ~b) <=> (a => ~~b)"),  # 60
    ([], "(a => ~~b) <=> (~~a => ~~b)"),
]


def _neg(x: str) -> str:
    return f"(({x}) -o bot)"


def _negneg(x: str) -> str:
    return _neg(_neg(x))


def _iff(x: str, y: str) -> str:
    return f"((({x}) -o ({y})) * (({y}) -o ({x})))"


# Hand-written provable replacements for the sequents whose multiplicative
# image is not provable; several of them split into two sequents.
_ALTERNATIVES: dict[int, list[tuple[list[str], str]]] = {
    10: [(["a -o 0"], "a -o b")],
    11: [(["a"], "(a -o 0) -o b")],
    12: [(["b"], "!a -o b")],
    16: [(["(a -o b) * !(b -o a)"], "a -o b")],
    17: [(["!(a -o b) * (b -o a)"], "b -o a")],
    18: [([_iff("a", "b"), "a"], "b * (b -o a)")],
    19: [([_iff("a", "b"), "b"], "a * (a -o b)")],
    26: [
        ([], f"{_negneg('a & b')} -o ({_negneg('a')} & {_negneg('b')})"),
        ([], f"({_negneg('a')} * {_negneg('b')}) -o {_negneg('a * b')}"),
    ],
    27: [
        ([], f"{_negneg('!(a -o b) * !(b -o a)')} -o ({_negneg('a -o b')} & {_negneg('b -o a')})"),
        ([], f"({_negneg('a -o b')} * {_negneg('b -o a')}) -o {_negneg(_iff('a', 'b'))}"),
    ],
    35: [([], _iff("!a * !a", "!a"))],
    36: [(["a"], "((a -o b) -o b) * (b -o (!a -o b))")],
    37: [(["b"], "(!(a -o b) -o b) * (b -o (!a -o b))")],
    38: [([_neg("a")], f"(!(a -o b) -o {_neg('a')}) * ((a -o 0) -o (a -o b))")],
    39: [(["b -o 0"], _iff("a -o b", "a -o 0"))],
    40: [(["b"], "((a * !b) -o a) * (a -o (a * b))")],
    41: [(["b -o 0"], "((!a * b) -o b) * (b -o (a * b))")],
    45: [([], _neg(f"!(a -o {_neg('a')}) * ({_neg('!a')} -o !a)"))],
    46: [([], _neg("!" + _neg(f"!({_neg('a')} -o 0) -o a")))],
    47: [([], _iff("a * (b * (b -o 0))", "b * (b -o 0)"))],
    57: [
        ([], f"({_negneg('a')} * {_neg('b')}) -o {_neg('a -o b')}"),
        ([], f"{_neg('!a -o b')} -o ({_neg('a -o 0')} & {_neg('b')})"),
    ],
    58: [
        ([], f"!{_neg('!a -o b')} -o {_neg('(a * ' + _neg('b') + ') -o 0')}"),
        ([], f"{_negneg('a * ' + _neg('b'))} -o {_neg('a -o b')}"),
    ],
    59: [
        ([], f"{_negneg('a -o b')} -o {_neg('a * ' + _neg('b'))}"),
        ([], f"((a * {_neg('b')}) -o 0) -o {_neg('!' + _neg('!a -o b'))}"),
    ],
}


@dataclass(frozen=True)
class KleeneEntry:
    index: int
    sequent: ILSequent
    mult_status: ProblemStatus
    alternatives: tuple[Sequent, ...] = ()


@lru_cache(maxsize=None)
def kleene_corpus() -> tuple[KleeneEntry, ...]:
    entries = []
    for index, (hyps, goal) in enumerate(_THEOREMS, start=1):
        seq = ILSequent(tuple(parse_il_formula(h) for h in hyps), parse_il_formula(goal))
        alts = tuple(
            Sequent(tuple(parse_formula(h) for h in ahyps), parse_formula(agoal))
            for ahyps, agoal in _ALTERNATIVES.get(index, [])
        )
        status = ProblemStatus.NON_THEOREM if alts else ProblemStatus.THEOREM
        entries.append(KleeneEntry(index, seq, status, alts))
    return tuple(entries)


def problem_name(index: int, kind: TranslationKind) -> str:
    return f"KLE-{index}-{kind.value}"


def alternative_name(index: int, part: int, parts: int) -> str:
    suffix = "ab"[part] if parts > 1 else ""
    return f"KLE-{index}-alt{suffix}"


def generate_library(corpus=None, kinds=tuple(TranslationKind), alternatives: bool = True) -> list[Problem]:
    corpus = kleene_corpus() if corpus is None else corpus
    problems = []
    for entry in corpus:
        for kind in kinds:
            status = entry.mult_status if kind is TranslationKind.MULT else ProblemStatus.THEOREM
            problems.append(make_problem(
                problem_name(entry.index, kind),
                trans_sequent(entry.sequent, kind),
                status,
                {"Category": "KLE", "Translation": kind.value, "Source": str(entry.sequent)},
            ))
        if alternatives:
            for part, seq in enumerate(entry.alternatives):
                problems.append(make_problem(
                    alternative_name(entry.index, part, len(entry.alternatives)),
                    seq,
                    ProblemStatus.THEOREM,
                    {"Category": "KLE", "Translation": "alt", "Source": str(entry.sequent)},
                ))
    return problems
