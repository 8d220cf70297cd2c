"""Decision procedure for propositional intuitionistic logic.

Backward search in a contraction-free (G4ip style) calculus.  Every rule
strictly shrinks the sequent under the usual multiset ordering, so search
terminates without loop checking and a failed search is a real refutation.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .formula import (
    FALSUM,
    VERUM,
    And,
    Atom,
    Falsum,
    ILFormula,
    ILSequent,
    Imp,
    Or,
    Verum,
    expand_defined,
    il_pretty,
    sort_key,
)


class ResourceExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ILProofTree:
    rule: str
    antecedent: frozenset
    succedent: ILFormula
    premises: tuple[ILProofTree, ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def __str__(self) -> str:
        left = ", ".join(il_pretty(f) for f in sorted(self.antecedent, key=sort_key))
        return f"{left} ⊢ {il_pretty(self.succedent)}".strip()


@dataclass(frozen=True)
class ILProofResult:
    provable: bool
    proof: ILProofTree | None = None
    nodes: int = field(default=0, compare=False)

    @property
    def verdict(self) -> str:
        return "Provable" if self.provable else "NotProvable"


def _ordered(gamma: frozenset) -> list:
    return sorted(gamma, key=sort_key)


class _Search:
    def __init__(self, max_nodes: int | None):
        self.max_nodes = max_nodes
        self.nodes = 0
        self.memo: dict[tuple[frozenset, ILFormula], ILProofTree | None] = {}

    def prove(self, gamma: frozenset, goal: ILFormula) -> ILProofTree | None:
        key = (gamma, goal)
        if key in self.memo:
            return self.memo[key]
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise ResourceExceeded(f"node budget {self.max_nodes} exhausted")
        result = self._prove(gamma, goal)
        self.memo[key] = result
        return result

    def _node(self, rule, gamma, goal, *premises):
        if any(p is None for p in premises):
            return None
        return ILProofTree(rule, gamma, goal, tuple(premises))

    def _prove(self, gamma: frozenset, goal: ILFormula) -> ILProofTree | None:
        # axioms
        if goal in gamma:
            return ILProofTree("Ax", gamma, goal)
        if FALSUM in gamma:
            return ILProofTree("⊥L", gamma, goal)
        if isinstance(goal, Verum):
            return ILProofTree("⊤R", gamma, goal)

        # invertible left rules
        for f in _ordered(gamma):
            rest = gamma - {f}
            match f:
                case Verum():
                    return self._node("⊤L", gamma, goal, self.prove(rest, goal))
                case And(a, b):
                    return self._node("∧L", gamma, goal, self.prove(rest | {a, b}, goal))
                case Or(a, b):
                    p1 = self.prove(rest | {a}, goal)
                    if p1 is None:
                        return None
                    return self._node("∨L", gamma, goal, p1, self.prove(rest | {b}, goal))
                case Imp(Atom() as p, b) if p in gamma:
                    return self._node("→L0", gamma, goal, self.prove(rest | {b}, goal))
                case Imp(And(c, d), b):
                    return self._node("→L∧", gamma, goal, self.prove(rest | {Imp(c, Imp(d, b))}, goal))
                case Imp(Or(c, d), b):
                    return self._node("→L∨", gamma, goal, self.prove(rest | {Imp(c, b), Imp(d, b)}, goal))
                case Imp(Verum(), b):
                    return self._node("→L⊤", gamma, goal, self.prove(rest | {b}, goal))
                case Imp(Falsum(), _):
                    return self._node("→L⊥", gamma, goal, self.prove(rest, goal))

        # invertible right rules
        match goal:
            case Imp(a, b):
                return self._node("→R", gamma, goal, self.prove(gamma | {a}, b))
            case And(a, b):
                p1 = self.prove(gamma, a)
                if p1 is None:
                    return None
                return self._node("∧R", gamma, goal, p1, self.prove(gamma, b))
            case Or(a, b):
                for rule, side in (("∨R1", a), ("∨R2", b)):
                    p = self.prove(gamma, side)
                    if p is not None:
                        return ILProofTree(rule, gamma, goal, (p,))

        # the only remaining choice point: (C→D)→B on the left
        for f in _ordered(gamma):
            if isinstance(f, Imp) and isinstance(f.left, Imp):
                c, d, b = f.left.left, f.left.right, f.right
                rest = gamma - {f}
                p1 = self.prove(rest | {Imp(d, b)}, Imp(c, d))
                if p1 is None:
                    continue
                p2 = self.prove(rest | {b}, goal)
                if p2 is not None:
                    return ILProofTree("→L→", gamma, goal, (p1, p2))
        return None


def prove_il(s: ILSequent, max_nodes: int | None = None) -> ILProofResult:
    """Decide ``s``; raises ResourceExceeded only if ``max_nodes`` is set and hit."""
    gamma = frozenset(expand_defined(f) for f in s.antecedent)
    goal = expand_defined(s.succedent)
    search = _Search(max_nodes)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        proof = search.prove(gamma, goal)
    finally:
        sys.setrecursionlimit(old)
    return ILProofResult(proof is not None, proof, search.nodes)


# ---------------------------------------------------------------------------
# checker


def _expect(tree: ILProofTree, n: int) -> bool:
    return len(tree.premises) == n


def _premise_is(p: ILProofTree, gamma, goal) -> bool:
    return p.antecedent == gamma and p.succedent == goal


def _check_node(t: ILProofTree) -> bool:
    g, c, ps = t.antecedent, t.succedent, t.premises
    match t.rule:
        case "Ax":
            return _expect(t, 0) and c in g
        case "⊥L":
            return _expect(t, 0) and FALSUM in g
        case "⊤R":
            return _expect(t, 0) and c == VERUM
        case "→R":
            return _expect(t, 1) and isinstance(c, Imp) and _premise_is(ps[0], g | {c.left}, c.right)
        case "∧R":
            return (_expect(t, 2) and isinstance(c, And)
                    and _premise_is(ps[0], g, c.left) and _premise_is(ps[1], g, c.right))
        case "∨R1" | "∨R2":
            side = "left" if t.rule == "∨R1" else "right"
            return _expect(t, 1) and isinstance(c, Or) and _premise_is(ps[0], g, getattr(c, side))
    # left rules: find a principal formula that justifies the premises
    for f in g:
        rest = g - {f}
        if _left_instance(t.rule, f, rest, g, c, ps):
            return True
    return False


def _left_instance(rule, f, rest, g, c, ps) -> bool:
    match rule, f:
        case "⊤L", Verum():
            return len(ps) == 1 and _premise_is(ps[0], rest, c)
        case "∧L", And(a, b):
            return len(ps) == 1 and _premise_is(ps[0], rest | {a, b}, c)
        case "∨L", Or(a, b):
            return len(ps) == 2 and _premise_is(ps[0], rest | {a}, c) and _premise_is(ps[1], rest | {b}, c)
        case "→L0", Imp(Atom() as p, b) if p in g:
            return len(ps) == 1 and _premise_is(ps[0], rest | {b}, c)
        case "→L∧", Imp(And(x, y), b):
            return len(ps) == 1 and _premise_is(ps[0], rest | {Imp(x, Imp(y, b))}, c)
        case "→L∨", Imp(Or(x, y), b):
            return len(ps) == 1 and _premise_is(ps[0], rest | {Imp(x, b), Imp(y, b)}, c)
        case "→L⊤", Imp(Verum(), b):
            return len(ps) == 1 and _premise_is(ps[0], rest | {b}, c)
        case "→L⊥", Imp(Falsum(), _):
            return len(ps) == 1 and _premise_is(ps[0], rest, c)
        case "→L→", Imp(Imp(x, y), b):
            return (len(ps) == 2 and _premise_is(ps[0], rest | {Imp(y, b)}, Imp(x, y))
                    and _premise_is(ps[1], rest | {b}, c))
    return False


def check_il_proof(tree: ILProofTree, s: ILSequent | None = None) -> bool:
    """Validate every node of ``tree`` (and, if given, that it concludes ``s``)."""
    if s is not None:
        gamma = frozenset(expand_defined(f) for f in s.antecedent)
        if not _premise_is(tree, gamma, expand_defined(s.succedent)):
            return False
    stack = [tree]
    while stack:
        t = stack.pop()
        if not _check_node(t):
            return False
        stack.extend(t.premises)
    return True
