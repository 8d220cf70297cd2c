"""ILLTP problem files: a TPTP-like ``fof`` syntax over linear connectives.

Grammar::

    file    := clause*
    clause  := "fof(" name "," role "," formula ")."
    role    := "axiom" | "conjecture"

Connective tokens are ``*  &  +  |  -o  !  ?`` with constants ``1 0 top bot``.
Binding from tight to loose: ``! ?``, ``*``, ``&``, ``+``, ``|``, ``-o``.
Binary connectives associate to the left except ``-o`` (right).
Comments run from ``%`` to the end of the line.

The same module reads intuitionistic problems written in ILTP syntax
(``~ & | => <= <=> <~> $true $false``) so that they can be translated.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .formula import (
    ATOM_NAME,
    BOT,
    FALSUM,
    ONE,
    TOP,
    VERUM,
    ZERO,
    And,
    Atom,
    Bang,
    Bot,
    Equiv,
    Formula,
    ILFormula,
    ILSequent,
    Imp,
    Limp,
    Not,
    One,
    Or,
    Par,
    Plus,
    Quest,
    Sequent,
    Tensor,
    Top,
    With,
    Zero,
)


class ProblemSyntaxError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class DuplicateConjecture(ProblemSyntaxError):
    pass


class ProblemStatus(enum.Enum):
    THEOREM = "Theorem"
    NON_THEOREM = "Non-Theorem"
    UNKNOWN = "Unknown"


_STATUS_LINE = re.compile(r"\s*Status\s*:\s*(\S+)")
_NAME_LINE = re.compile(r"\s*Problem\s*:\s*(\S+)")


@dataclass(frozen=True)
class Problem:
    name: str
    axioms: tuple[tuple[str, Formula], ...]
    conjecture: tuple[str, Formula]
    header_comments: tuple[str, ...] = field(default=())

    @property
    def status(self) -> ProblemStatus:
        for line in self.header_comments:
            m = _STATUS_LINE.match(line)
            if m:
                try:
                    return ProblemStatus(m.group(1))
                except ValueError:
                    return ProblemStatus.UNKNOWN
        return ProblemStatus.UNKNOWN

    def header(self, key: str) -> str | None:
        pattern = re.compile(rf"\s*{re.escape(key)}\s*:\s*(.*?)\s*$")
        for line in self.header_comments:
            m = pattern.match(line)
            if m:
                return m.group(1)
        return None

    def with_status(self, status: ProblemStatus) -> Problem:
        lines = [l for l in self.header_comments if not _STATUS_LINE.match(l)]
        return replace(self, header_comments=tuple(lines) + (f" Status : {status.value}",))

    def to_sequent(self) -> Sequent:
        return Sequent(tuple(f for _, f in self.axioms), self.conjecture[1])

    def same_content(self, other: Problem) -> bool:
        """Equality modulo comments."""
        return (self.axioms, self.conjecture) == (other.axioms, other.conjecture)


def make_problem(name: str, sequent: Sequent, status=ProblemStatus.UNKNOWN,
                 extra_headers: dict[str, str] | None = None) -> Problem:
    headers = [f" Problem : {name}"]
    for key, value in (extra_headers or {}).items():
        headers.append(f" {key} : {value}")
    headers.append(f" Status : {status.value}")
    axioms = tuple((f"h{i}", f) for i, f in enumerate(sequent.antecedent, start=1))
    if sequent.succedent is None:
        raise ValueError("problem files need a conjecture")
    return Problem(name, axioms, ("goal", sequent.succedent), tuple(headers))


# ---------------------------------------------------------------------------
# Lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<op><~>|<=>|=>|<=|-o|\$true|\$false|[*&+|!?~(),.])
  | (?P<name>[A-Za-z0-9_]+|'[^'\n]*')
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str) -> tuple[list[_Tok], list[str]]:
    tokens, comments = [], []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ProblemSyntaxError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "comment":
            comments.append(m.group()[1:])
        elif kind != "ws":
            tokens.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Tok("eof", "", line, pos - line_start + 1))
    return tokens, comments


class _Parser:
    def __init__(self, tokens: list[_Tok]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Tok:
        return self.tokens[self.i]

    def next(self) -> _Tok:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        found = tok.text or "end of input"
        raise ProblemSyntaxError(tok.line, tok.col, f"{message} (found {found!r})")

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.text != text:
            self.fail(f"expected {text!r}")
        return self.next()

    def clauses(self, formula):
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text != "fof":
                self.fail("expected 'fof'")
            self.next()
            self.expect("(")
            label = self.next()
            if label.kind != "name":
                self.fail("expected clause name", label)
            self.expect(",")
            role = self.next()
            f = None
            if role.kind == "name":
                self.expect(",")
                f = formula()
                self.expect(")")
                self.expect(".")
            yield tok, label.text, role, f

    # -- linear formulas: precedence climbing over the table above

    _LL_LEVELS = [("-o", Limp), ("|", Par), ("+", Plus), ("&", With), ("*", Tensor)]
    _LL_CONST = {"1": ONE, "0": ZERO, "top": TOP, "bot": BOT}

    def ll_formula(self, level: int = 0) -> Formula:
        if level == len(self._LL_LEVELS):
            return self.ll_unary()
        op, ctor = self._LL_LEVELS[level]
        left = self.ll_formula(level + 1)
        if ctor is Limp:
            if self.peek().text == op:
                self.next()
                return Limp(left, self.ll_formula(level))
            return left
        while self.peek().text == op:
            self.next()
            left = ctor(left, self.ll_formula(level + 1))
        return left

    def ll_unary(self) -> Formula:
        tok = self.next()
        if tok.text == "!":
            return Bang(self.ll_unary())
        if tok.text == "?":
            return Quest(self.ll_unary())
        if tok.text == "(":
            f = self.ll_formula()
            self.expect(")")
            return f
        if tok.kind == "name":
            if tok.text in self._LL_CONST:
                return self._LL_CONST[tok.text]
            if ATOM_NAME.match(tok.text):
                return Atom(tok.text)
        self.fail("expected a formula", tok)

    # -- intuitionistic formulas (ILTP syntax)

    def il_formula(self) -> ILFormula:
        left = self.il_disj()
        tok = self.peek()
        if tok.text == "=>":
            self.next()
            return Imp(left, self.il_formula())
        if tok.text == "<=":
            self.next()
            return Imp(self.il_formula(), left)
        if tok.text == "<=>":
            self.next()
            return Equiv(left, self.il_formula())
        if tok.text == "<~>":
            self.next()
            return Not(Equiv(left, self.il_formula()))
        return left

    def il_disj(self) -> ILFormula:
        left = self.il_conj()
        while self.peek().text == "|":
            self.next()
            left = Or(left, self.il_conj())
        return left

    def il_conj(self) -> ILFormula:
        left = self.il_unary()
        while self.peek().text == "&":
            self.next()
            left = And(left, self.il_unary())
        return left

    def il_unary(self) -> ILFormula:
        tok = self.next()
        if tok.text == "~":
            return Not(self.il_unary())
        if tok.text == "(":
            f = self.il_formula()
            self.expect(")")
            return f
        if tok.text == "$true":
            return VERUM
        if tok.text == "$false":
            return FALSUM
        if tok.kind == "name" and ATOM_NAME.match(tok.text):
            return Atom(tok.text)
        self.fail("expected a formula", tok)


def _name_from(comments: list[str], default: str) -> str:
    for line in comments:
        m = _NAME_LINE.match(line)
        if m:
            return m.group(1)
    return default


def parse_problem(text: str, name: str = "") -> Problem:
    tokens, comments = _lex(text)
    p = _Parser(tokens)
    axioms, conjecture = [], None
    for tok, label, role, f in p.clauses(p.ll_formula):
        if role.text == "axiom":
            axioms.append((label, f))
        elif role.text == "conjecture":
            if conjecture is not None:
                raise DuplicateConjecture(tok.line, tok.col, "more than one conjecture")
            conjecture = (label, f)
        else:
            raise ProblemSyntaxError(role.line, role.col, f"unknown role {role.text!r}")
    if conjecture is None:
        last = tokens[-1]
        raise ProblemSyntaxError(last.line, last.col, "no conjecture")
    return Problem(_name_from(comments, name), tuple(axioms), conjecture, tuple(comments))


def parse_formula(text: str) -> Formula:
    tokens, _ = _lex(text)
    p = _Parser(tokens)
    f = p.ll_formula()
    if p.peek().kind != "eof":
        p.fail("trailing input")
    return f


def parse_il_formula(text: str) -> ILFormula:
    tokens, _ = _lex(text)
    p = _Parser(tokens)
    f = p.il_formula()
    if p.peek().kind != "eof":
        p.fail("trailing input")
    return f


def parse_il_problem(text: str) -> tuple[str, ILSequent, list[str]]:
    """Read an ILTP-style intuitionistic problem.

    ``hypothesis`` is accepted as a synonym of ``axiom``.  A file without a
    conjecture is read as ``Γ ⊢ f``.
    """
    tokens, comments = _lex(text)
    p = _Parser(tokens)
    hyps, goal = [], None
    for tok, label, role, f in p.clauses(p.il_formula):
        if role.text in ("axiom", "hypothesis"):
            hyps.append(f)
        elif role.text == "conjecture":
            if goal is not None:
                raise DuplicateConjecture(tok.line, tok.col, "more than one conjecture")
            goal = f
        else:
            raise ProblemSyntaxError(role.line, role.col, f"unknown role {role.text!r}")
    return _name_from(comments, ""), ILSequent(tuple(hyps), goal if goal is not None else FALSUM), comments


# ---------------------------------------------------------------------------
# Serializer

_LL_PREC = {Tensor: 5, With: 4, Plus: 3, Par: 2, Limp: 1}
_LL_TOKEN = {Tensor: "*", With: "&", Plus: "+", Par: "|", Limp: "-o"}
_LL_CONST_TEXT = {One: "1", Zero: "0", Top: "top", Bot: "bot"}


def format_formula(f: Formula, _ctx: int = 0) -> str:
    if isinstance(f, Atom):
        return f.name
    if type(f) in _LL_CONST_TEXT:
        return _LL_CONST_TEXT[type(f)]
    if isinstance(f, (Bang, Quest)):
        mark = "!" if isinstance(f, Bang) else "?"
        return f"{mark} {format_formula(f.body, 6)}"
    prec = _LL_PREC[type(f)]
    if isinstance(f, Limp):
        text = f"{format_formula(f.left, prec + 1)} -o {format_formula(f.right, prec)}"
    else:
        text = f"{format_formula(f.left, prec)} {_LL_TOKEN[type(f)]} {format_formula(f.right, prec + 1)}"
    return f"({text})" if prec < _ctx else text


def _clause_body(f: Formula) -> str:
    text = format_formula(f)
    return f"({text})" if type(f) in _LL_PREC else text


def serialize_problem(p: Problem) -> str:
    lines = [f"%{c}" for c in p.header_comments]
    for label, f in p.axioms:
        lines.append(f"fof({label}, axiom, {_clause_body(f)}).")
    label, f = p.conjecture
    lines.append(f"fof({label}, conjecture, {_clause_body(f)}).")
    return "\n".join(lines) + "\n"


_IL_PREC = {Imp: 1, Equiv: 1, Or: 2, And: 3}
_IL_TOKEN = {Imp: "=>", Equiv: "<=>", Or: "|", And: "&"}


def format_il_formula(f: ILFormula, _ctx: int = 0) -> str:
    match f:
        case Atom(name):
            return name
        case _ if f == VERUM:
            return "$true"
        case _ if f == FALSUM:
            return "$false"
        case Not(body):
            return f"~ {format_il_formula(body, 4)}"
    prec = _IL_PREC[type(f)]
    if isinstance(f, Imp):
        text = f"{format_il_formula(f.left, 2)} => {format_il_formula(f.right, 1)}"
    elif isinstance(f, Equiv):
        text = f"{format_il_formula(f.left, 2)} <=> {format_il_formula(f.right, 2)}"
    else:
        text = f"{format_il_formula(f.left, prec)} {_IL_TOKEN[type(f)]} {format_il_formula(f.right, prec + 1)}"
    return f"({text})" if prec < _ctx else text


def load_problem(path: str | Path) -> Problem:
    path = Path(path)
    return parse_problem(path.read_text(encoding="utf-8"), name=path.stem)


def write_problem(p: Problem, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / f"{p.name}.p"
    target.write_text(serialize_problem(p), encoding="utf-8")
    return target
