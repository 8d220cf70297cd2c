"""Focused proof search for intuitionistic linear logic (the ILLF calculus).

The search works on interned formula ids and on *resources* (unique ids for
each linear hypothesis).  Context splitting at ⊗R and ⊸L is done by
input/output threading: a sub-search receives every available resource and
reports what it left over, together with a *slack* flag meaning "any of the
leftovers could also have been consumed" (set by ⊤R and 0L).  Proof trees are
first built as skeletons recording input/output sets; exact linear contexts
are assigned afterwards, top-down.
"""

from __future__ import annotations

import enum
import sys
import threading
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .formula import (
    Atom,
    Bang,
    Bot,
    Formula,
    Limp,
    One,
    Par,
    Plus,
    Quest,
    Sequent,
    Tensor,
    Top,
    With,
    Zero,
    is_negative,
    is_positive,
    multiset,
    sort_key,
)


class NonAdmissibleFormula(ValueError):
    """Raised for input containing ⅋ or ?, which ILL does not have."""


class Rule(enum.Enum):
    TENSOR_L = "⊗L"
    LIMP_R = "⊸R"
    ONE_L = "1L"
    BOT_R = "⊥R"
    TOP_R = "⊤R"
    ZERO_L = "0L"
    BANG_L = "!L"
    WITH_R = "&R"
    PLUS_L = "⊕L"
    TENSOR_R = "⊗R"
    LIMP_L = "⊸L"
    PLUS_R1 = "⊕R1"
    PLUS_R2 = "⊕R2"
    WITH_L1 = "&L1"
    WITH_L2 = "&L2"
    ONE_R = "1R"
    BOT_L = "⊥L"
    BANG_R = "!R"
    INIT = "IR"
    DECIDE_L1 = "DL1"
    DECIDE_L2 = "DL2"
    DECIDE_R = "DR"
    RELEASE_L = "RL"
    RELEASE_R = "RR"
    # derived rule: replace Θ by its saturation (see saturate_classical)
    SATURATE = "SAT"


ARITY = {Rule.TOP_R: 0, Rule.ZERO_L: 0, Rule.ONE_R: 0, Rule.BOT_L: 0, Rule.INIT: 0,
         Rule.WITH_R: 2, Rule.PLUS_L: 2, Rule.TENSOR_R: 2, Rule.LIMP_L: 2}

NEGATIVE_RULES = frozenset({Rule.TENSOR_L, Rule.LIMP_R, Rule.ONE_L, Rule.BOT_R, Rule.TOP_R,
                            Rule.ZERO_L, Rule.BANG_L, Rule.WITH_R, Rule.PLUS_L})


def arity(rule: Rule) -> int:
    return ARITY.get(rule, 1)


# ---------------------------------------------------------------------------
# public data types


@dataclass(frozen=True)
class NegPhase:
    delta: Formula | None


@dataclass(frozen=True)
class RightFocus:
    focus: Formula


@dataclass(frozen=True)
class LeftFocus:
    focus: Formula
    delta: Formula | None


Goal = NegPhase | RightFocus | LeftFocus


@dataclass(frozen=True)
class FocusedState:
    theta: frozenset
    gamma: tuple
    goal: Goal

    def __post_init__(self):
        object.__setattr__(self, "theta", frozenset(self.theta))
        object.__setattr__(self, "gamma", multiset(self.gamma))

    def __str__(self) -> str:
        th = ", ".join(str(f) for f in sorted(self.theta, key=sort_key))
        ga = ", ".join(str(f) for f in self.gamma)
        match self.goal:
            case NegPhase(d):
                arrow = f"⟶ {'' if d is None else d}"
            case RightFocus(f):
                arrow = f"⇓ {f}"
            case LeftFocus(f, d):
                arrow = f"—{f}→ {'' if d is None else d}"
        return f"{th} : {ga} {arrow}".strip()


@dataclass(frozen=True)
class ProofTree:
    rule: Rule
    conclusion: FocusedState
    premises: tuple[ProofTree, ...] = ()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def nodes(self) -> Iterator[ProofTree]:
        stack = [self]
        while stack:
            t = stack.pop()
            yield t
            stack.extend(reversed(t.premises))


class Verdict(enum.Enum):
    PROVABLE = "Provable"
    NOT_PROVABLE = "NotProvable"
    UNKNOWN = "Unknown"


class UnknownReason(enum.Enum):
    TIMEOUT = "Timeout"
    BOUND_HIT = "BoundHit"


@dataclass(frozen=True)
class ProveResult:
    verdict: Verdict
    elapsed_ms: float
    proof: ProofTree | None = None
    reason: UnknownReason | None = None
    nodes: int = field(default=0, compare=False)

    @property
    def provable(self) -> bool:
        return self.verdict is Verdict.PROVABLE

    def __str__(self) -> str:
        tag = self.verdict.value
        if self.reason is not None:
            tag += f"({self.reason.value})"
        return f"{tag} in {self.elapsed_ms:.1f} ms"


@dataclass(frozen=True)
class SearchLimits:
    """Resource limits for one ``prove`` call.

    ``decide_bound`` caps how often a single classical formula may be
    focused on along one branch.  With ``iterative`` set, bounds 1, 2, ...
    up to ``decide_bound`` are tried in turn.  ``max_nodes`` is a
    deterministic work budget; running out of it is reported like a timeout.
    """

    timeout_ms: float = 300_000
    max_depth: int = 256
    decide_bound: int = 4
    max_nodes: int | None = None
    saturate: bool = True
    iterative: bool = True
    cancel: Callable[[], bool] | None = None

    def __post_init__(self):
        if self.timeout_ms <= 0 or self.max_depth <= 0 or self.decide_bound <= 0:
            raise ValueError("limits must be positive")
        if self.max_nodes is not None and self.max_nodes <= 0:
            raise ValueError("limits must be positive")


# ---------------------------------------------------------------------------
# formula interning

T_ATOM, T_ONE, T_ZERO, T_TOP, T_BOT, T_TENSOR, T_WITH, T_PLUS, T_LIMP, T_BANG = range(10)
_POS_TAGS = {T_ATOM, T_ONE, T_ZERO, T_TENSOR, T_PLUS, T_BANG}
_CONST_TAG = {One: T_ONE, Zero: T_ZERO, Top: T_TOP, Bot: T_BOT}
_BIN_TAG = {Tensor: T_TENSOR, With: T_WITH, Plus: T_PLUS, Limp: T_LIMP}


def check_admissible(f: Formula) -> None:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Par, Quest)):
            raise NonAdmissibleFormula(f"⅋ and ? are not ILL connectives: {f}")
        if isinstance(g, (Tensor, With, Plus, Limp)):
            stack += [g.left, g.right]
        elif isinstance(g, Bang):
            stack.append(g.body)


class _Table:
    def __init__(self):
        self.ids: dict[tuple, int] = {}
        self.nodes: list[tuple] = []
        self.formulas: list[Formula] = []
        self.positive: list[bool] = []

    def intern(self, f: Formula) -> int:
        if isinstance(f, Atom):
            key = (T_ATOM, f.name, None)
        elif type(f) in _CONST_TAG:
            key = (_CONST_TAG[type(f)], None, None)
        elif type(f) in _BIN_TAG:
            key = (_BIN_TAG[type(f)], self.intern(f.left), self.intern(f.right))
        elif isinstance(f, Bang):
            key = (T_BANG, self.intern(f.body), None)
        else:
            raise NonAdmissibleFormula(f"not an ILL formula: {f!r}")
        fid = self.ids.get(key)
        if fid is None:
            fid = len(self.nodes)
            self.ids[key] = fid
            self.nodes.append(key)
            self.formulas.append(f)
            self.positive.append(key[0] in _POS_TAGS)
        return fid

    def lookup(self, key: tuple) -> int | None:
        return self.ids.get(key)


def _saturate_ids(table: _Table, theta: frozenset) -> frozenset:
    current = set(theta)
    split = set()  # & members already replaced; never add them back
    changed = True
    while changed:
        changed = False
        for fid in sorted(current):
            tag, a, b = table.nodes[fid]
            if tag == T_WITH and table.positive[a] and table.positive[b]:
                current.discard(fid)
                split.add(fid)
                current |= {a, b}
                changed = True
            elif tag == T_LIMP and b not in current and b not in split:
                atag, x, _ = table.nodes[a]
                if (atag == T_ATOM and a in current) or (
                        atag == T_BANG and table.nodes[x][0] == T_ATOM and x in current):
                    current.add(b)
                    changed = True
    return frozenset(current)


def saturate_classical(theta: frozenset) -> frozenset:
    """Close a classical context under two sound rewrites.

    A member P1 & P2 with both components positive is replaced by P1 and P2
    (since !(F & G) and !F ⊗ !G are equivalent).  B is added whenever A ⊸ B
    (or !A ⊸ B) is a member together with the atom A.
    """
    table = _Table()
    ids = frozenset(table.intern(f) for f in theta)
    return frozenset(table.formulas[i] for i in _saturate_ids(table, ids))


# ---------------------------------------------------------------------------
# search engine

_NEG, _RF, _LF = 0, 1, 2


class _Timeout(Exception):
    pass


class _Skel:
    """Proof node recorded during search, before exact contexts are known."""

    __slots__ = ("rule", "theta", "kind", "a", "b", "inp", "out", "slack", "prem", "princ", "new")

    def __init__(self, rule, theta, kind, a, b, inp, out, slack, prem=(), princ=None, new=()):
        self.rule = rule
        self.theta = theta
        self.kind = kind
        self.a = a
        self.b = b
        self.inp = inp
        self.out = out
        self.slack = slack
        self.prem = prem
        self.princ = princ
        self.new = new


_EMPTY = frozenset()

# skeleton marker: the premise was found for an isomorphic context; ``new``
# maps the resources of this node back to those of the premise
_RENAME = object()


class _Entry:
    """Outcomes of one decide node, shared by every isomorphic context.

    Resources with the same formula and the same must-flag behave alike
    inside the subproof, so outcomes are stored as leftover counts per such
    group and filled in lazily from a single underlying generator.
    """

    __slots__ = ("gen", "groups", "items", "seen", "done", "running", "prunes")

    def __init__(self, gen, groups):
        self.gen = gen
        self.groups = groups
        self.items: list = []
        self.seen: set = set()
        self.done = False
        self.running = False
        self.prunes = 0


class _Engine:
    def __init__(self, table: _Table, limits: SearchLimits, bound: int, deadline: float,
                 node_budget: int | None):
        self.t = table
        self.limits = limits
        self.bound = bound
        self.deadline = deadline
        self.node_budget = node_budget
        self.rfid: list[int] = []
        # resources created together share a class; same formula and same
        # class means interchangeable everywhere in the search
        self.rclass: list[int] = []
        self.nodes = 0
        self.bound_events = 0
        self.prune_events = 0
        self.memo: dict[tuple, _Entry] = {}

    def new_rid(self, fid: int, cls: int | None = None) -> int:
        r = len(self.rfid)
        self.rfid.append(fid)
        self.rclass.append(r if cls is None else cls)
        return r

    def tick(self):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _Timeout
        if self.limits.cancel is not None and self.limits.cancel():
            raise _Timeout
        if self.nodes & 63 == 0 and time.monotonic() > self.deadline:
            raise _Timeout

    # -- negative phase -----------------------------------------------------

    def neg(self, theta, avail, pending, delta, must, path, depth):
        t = self.t
        if pending:
            r, rest = pending[0], pending[1:]
            fid = self.rfid[r]
            tag, a, b = t.nodes[fid]
            if tag == T_ATOM or not t.positive[fid]:
                yield from self.neg(theta, avail, rest, delta, must, path, depth)
            elif tag == T_TENSOR:
                r1 = self.new_rid(a)
                r2 = self.new_rid(b, r1)
                inner = (avail - {r}) | {r1, r2}
                seen = set()
                for out, slack, p in self.neg(theta, inner, (r1, r2) + rest, delta, must | {r1, r2}, path, depth):
                    out = _scope(out, slack, (r1, r2))
                    if out is None or (out, slack) in seen:
                        continue
                    seen.add((out, slack))
                    yield out, slack, _Skel(Rule.TENSOR_L, theta, _NEG, delta, None, avail, out, slack,
                                            (p,), r, (r1, r2))
            elif tag == T_ONE:
                for out, slack, p in self.neg(theta, avail - {r}, rest, delta, must, path, depth):
                    yield out, slack, _Skel(Rule.ONE_L, theta, _NEG, delta, None, avail, out, slack, (p,), r)
            elif tag == T_ZERO:
                yield avail, True, _Skel(Rule.ZERO_L, theta, _NEG, delta, None, avail, avail, True, (), r)
            elif tag == T_BANG:
                theta2 = theta if any(x == a for x, _ in theta) else theta + ((a, 0),)
                for out, slack, p in self.neg(theta2, avail - {r}, rest, delta, must, path, depth):
                    yield out, slack, _Skel(Rule.BANG_L, theta, _NEG, delta, None, avail, out, slack, (p,), r)
            elif tag == T_PLUS:
                base = avail - {r}

                def branch(sub_fid):
                    def run(inp):
                        rn = self.new_rid(sub_fid)
                        for out, slack, p in self.neg(theta, inp | {rn}, (rn,) + rest, delta, must | {rn}, path, depth):
                            out = _scope(out, slack, (rn,))
                            if out is not None:
                                yield out, slack, p
                    return run

                for out, slack, p1, p2 in _additive(base, branch(a), branch(b), must):
                    yield out, slack, _Skel(Rule.PLUS_L, theta, _NEG, delta, None, avail, out, slack,
                                            (p1, p2), r, (p1.inp - base, p2.inp - base))
            return

        if delta is not None and not t.positive[delta]:
            tag, a, b = t.nodes[delta]
            if tag == T_TOP:
                yield avail, True, _Skel(Rule.TOP_R, theta, _NEG, delta, None, avail, avail, True)
            elif tag == T_BOT:
                for out, slack, p in self.neg(theta, avail, (), None, must, path, depth):
                    yield out, slack, _Skel(Rule.BOT_R, theta, _NEG, delta, None, avail, out, slack, (p,))
            elif tag == T_LIMP:
                r = self.new_rid(a)
                seen = set()
                for out, slack, p in self.neg(theta, avail | {r}, (r,), b, must | {r}, path, depth):
                    out = _scope(out, slack, (r,))
                    if out is None or (out, slack) in seen:
                        continue
                    seen.add((out, slack))
                    yield out, slack, _Skel(Rule.LIMP_R, theta, _NEG, delta, None, avail, out, slack,
                                            (p,), None, (r,))
            elif tag == T_WITH:
                def branch(goal):
                    return lambda inp: self.neg(theta, inp, (), goal, must, path, depth)

                for out, slack, p1, p2 in _additive(avail, branch(a), branch(b), must):
                    yield out, slack, _Skel(Rule.WITH_R, theta, _NEG, delta, None, avail, out, slack, (p1, p2))
            return

        yield from self.decide_node(theta, avail, delta, must, path, depth)

    # -- decide -------------------------------------------------------------

    def decide_node(self, theta, avail, delta, must, path, depth):
        self.tick()
        t = self.t
        if self.limits.saturate:
            ids = frozenset(x for x, _ in theta)
            sat = _saturate_ids(t, ids)
            if sat != ids:
                counts = dict(theta)
                theta2 = tuple((x, c) for x, c in theta if x in sat)
                theta2 += tuple((x, counts.get(x, 0)) for x in sorted(sat - ids))
                for out, slack, p in self.decide_node(theta2, avail, delta, must, path, depth):
                    yield out, slack, _Skel(Rule.SATURATE, theta, _NEG, delta, None, avail, out, slack, (p,))
                return
        if depth >= self.limits.max_depth:
            self.prune_events += 1
            return
        rfid = self.rfid
        must = must & avail
        # A repeated state is redundant only when all of its resources must be
        # consumed: otherwise the repeat may consume less than its ancestor.
        lkey = None
        if len(must) == len(avail):
            lkey = (frozenset(x for x, _ in theta), tuple(sorted(rfid[r] for r in avail)), delta)
            if lkey in path:
                self.prune_events += 1
                return
        groups: dict[tuple, list] = {}
        for r in sorted(avail):
            groups.setdefault((rfid[r], r in must), []).append(r)
        gkeys = tuple(sorted(groups))
        key = (tuple(sorted(theta)), tuple((g, len(groups[g])) for g in gkeys), delta)
        entry = self.memo.get(key)
        if entry is None:
            sub_path = path if lkey is None else path | {lkey}
            entry = _Entry(self._decide(theta, avail, delta, must, sub_path, depth + 1), groups)
            self.memo[key] = entry
        yield from self._replay(key, entry, gkeys, avail, groups)

    def _decide(self, theta, avail, delta, must, path, depth):
        for rule, prem_theta, princ, sub in self._choices(theta, avail, delta, must, path, depth):
            for out, slack, p in sub:
                yield out, slack, _Skel(rule, theta, _NEG, delta, None, avail, out, slack, (p,), princ)

    def _replay(self, key, entry: _Entry, gkeys, avail, groups):
        i = 0
        while True:
            if i < len(entry.items):
                counts, slack, out, skel = entry.items[i]
                i += 1
                yield from self._expand(entry, gkeys, avail, groups, counts, slack, out, skel)
                continue
            if entry.done:
                break
            if entry.running:
                # only reachable through a context whose path differs; give up
                self.prune_events += 1
                break
            entry.running = True
            p0 = self.prune_events
            try:
                item = next(entry.gen, None)
            finally:
                entry.running = False
                entry.prunes += self.prune_events - p0
            if item is None:
                entry.done = True
                entry.gen = None
                if entry.prunes and self.memo.get(key) is entry:
                    # the result depended on the branch it was computed on
                    del self.memo[key]
                break
            out, slack, skel = item
            counts = tuple(sum(1 for r in entry.groups[g] if r in out) for g in gkeys)
            if (counts, slack) not in entry.seen:
                entry.seen.add((counts, slack))
                entry.items.append((counts, slack, out, skel))
        if entry.prunes:
            self.prune_events += 1

    def _expand(self, entry: _Entry, gkeys, avail, groups, counts, slack, out, skel):
        """The stored outcome in this context.  Leftovers are taken from the
        outermost classes; leaving an older resource is never worse than
        leaving a younger copy of the same formula."""
        back: dict[int, int] = {}
        new_out = []
        for g, k in zip(gkeys, counts):
            src = entry.groups[g]
            src_left = [r for r in src if r in out]
            src_used = [r for r in src if r not in out]
            mine = sorted(groups[g], key=self._age)
            new_out += mine[:k]
            back.update(zip(mine[:k], src_left))
            back.update(zip(mine[k:], src_used))
        new_out = frozenset(new_out)
        if all(a == b for a, b in back.items()):
            yield new_out, slack, skel
        else:
            yield new_out, slack, _Skel(_RENAME, skel.theta, _NEG, skel.a, None, avail, new_out, slack,
                                        (skel,), None, back)

    def _age(self, r: int) -> tuple:
        return self.rclass[r], r

    def _choices(self, theta, avail, delta, must, path, depth):
        t = self.t
        # among copies of a formula, use the youngest
        best: dict[int, int] = {}
        for r in sorted(avail, key=self._age):
            fid = self.rfid[r]
            if not t.positive[fid]:
                best[fid] = r
        for fid, r in best.items():
            yield Rule.DECIDE_L2, theta, r, self.lfocus(theta, avail - {r}, fid, delta, must, path, depth)
        if delta is not None and t.positive[delta]:
            yield Rule.DECIDE_R, theta, None, self.rfocus(theta, avail, delta, must, path, depth)
        for i, (fid, count) in enumerate(theta):
            if t.nodes[fid][0] == T_ATOM:
                continue
            if count >= self.bound:
                self.bound_events += 1
                continue
            theta2 = theta[:i] + ((fid, count + 1),) + theta[i + 1:]
            yield Rule.DECIDE_L1, theta2, fid, self.lfocus(theta2, avail, fid, delta, must, path, depth)

    # -- positive phase -----------------------------------------------------

    def rfocus(self, theta, avail, f, must, path, depth):
        t = self.t
        tag, a, b = t.nodes[f]
        if tag == T_ATOM:
            if any(x == f for x, _ in theta) and not (avail & must):
                yield avail, False, _Skel(Rule.INIT, theta, _RF, f, None, avail, avail, False)
            mine = [r for r in avail if self.rfid[r] == f]
            if mine:
                out = avail - {max(mine, key=self._age)}
                if not (out & must):
                    yield out, False, _Skel(Rule.INIT, theta, _RF, f, None, avail, out, False)
        elif tag == T_ONE:
            if not (avail & must):
                yield avail, False, _Skel(Rule.ONE_R, theta, _RF, f, None, avail, avail, False)
        elif tag == T_TENSOR:
            seen = set()
            for o1, s1, p1 in self.rfocus(theta, avail, a, _EMPTY, path, depth):
                # slack in the first premise can absorb what the second leaves
                for o2, s2, p2 in self.rfocus(theta, o1, b, _EMPTY if s1 else must, path, depth):
                    key = (o2, s1 or s2)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield o2, key[1], _Skel(Rule.TENSOR_R, theta, _RF, f, None, avail, o2, key[1], (p1, p2))
        elif tag == T_PLUS:
            seen = set()
            for rule, sub in ((Rule.PLUS_R1, a), (Rule.PLUS_R2, b)):
                for out, slack, p in self.rfocus(theta, avail, sub, must, path, depth):
                    if (out, slack) in seen:
                        continue
                    seen.add((out, slack))
                    yield out, slack, _Skel(rule, theta, _RF, f, None, avail, out, slack, (p,))
        elif tag == T_BANG:
            if avail & must:
                return
            for _, _, p in self.neg(theta, _EMPTY, (), a, _EMPTY, path, depth):
                yield avail, False, _Skel(Rule.BANG_R, theta, _RF, f, None, avail, avail, False, (p,))
                break
        elif tag == T_ZERO:
            return
        else:
            for out, slack, p in self.neg(theta, avail, (), f, must, path, depth):
                yield out, slack, _Skel(Rule.RELEASE_R, theta, _RF, f, None, avail, out, slack, (p,))

    def lfocus(self, theta, avail, f, delta, must, path, depth):
        t = self.t
        tag, a, b = t.nodes[f]
        if tag == T_BOT:
            if delta is None and not (avail & must):
                yield avail, False, _Skel(Rule.BOT_L, theta, _LF, f, delta, avail, avail, False)
        elif tag == T_LIMP:
            seen = set()
            for o1, s1, p1 in self.rfocus(theta, avail, a, _EMPTY, path, depth):
                for o2, s2, p2 in self.lfocus(theta, o1, b, delta, _EMPTY if s1 else must, path, depth):
                    key = (o2, s1 or s2)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield o2, key[1], _Skel(Rule.LIMP_L, theta, _LF, f, delta, avail, o2, key[1], (p1, p2))
        elif tag == T_WITH:
            seen = set()
            for rule, sub in ((Rule.WITH_L1, a), (Rule.WITH_L2, b)):
                for out, slack, p in self.lfocus(theta, avail, sub, delta, must, path, depth):
                    if (out, slack) in seen:
                        continue
                    seen.add((out, slack))
                    yield out, slack, _Skel(rule, theta, _LF, f, delta, avail, out, slack, (p,))
        elif tag == T_TOP:
            return
        else:
            r = self.new_rid(f)
            seen = set()
            for out, slack, p in self.neg(theta, avail | {r}, (r,), delta, must | {r}, path, depth):
                out = _scope(out, slack, (r,))
                if out is None or (out, slack) in seen:
                    continue
                seen.add((out, slack))
                yield out, slack, _Skel(Rule.RELEASE_L, theta, _LF, f, delta, avail, out, slack, (p,), None, (r,))


def _scope(out: frozenset, slack: bool, local: tuple) -> frozenset | None:
    """Locally introduced resources must be used inside their subproof."""
    if not any(r in out for r in local):
        return out
    if slack:
        return out - set(local)
    return None


def _additive(base, first, second, must):
    """Combine two premises that must consume the same resources (&R, ⊕L)."""
    seen = set()
    for o1, s1, p1 in first(base):
        if not s1:
            if o1 & must:
                continue
            used = base - o1
            for o2, s2, p2 in second(used):
                if o2 and not s2:
                    continue
                if (o1, False) not in seen:
                    seen.add((o1, False))
                    yield o1, False, p1, p2
                break
        else:
            for o2, s2, p2 in second(base):
                if s2:
                    key = (o1 & o2, True)
                elif o2 <= o1:
                    key = (o2, False)
                else:
                    continue
                if key in seen:
                    continue
                seen.add(key)
                yield key[0], key[1], p1, p2


# ---------------------------------------------------------------------------
# exact contexts


def _build(engine: _Engine, skel: _Skel, exact: frozenset) -> ProofTree:
    while skel.rule is _RENAME:
        exact = frozenset(skel.new[r] for r in exact)
        skel = skel.prem[0]
    t = engine.t
    fm = t.formulas
    theta = frozenset(fm[x] for x, _ in skel.theta)
    gamma = tuple(fm[engine.rfid[r]] for r in exact)
    if skel.kind == _NEG:
        goal = NegPhase(None if skel.a is None else fm[skel.a])
    elif skel.kind == _RF:
        goal = RightFocus(fm[skel.a])
    else:
        goal = LeftFocus(fm[skel.a], None if skel.b is None else fm[skel.b])
    rule = skel.rule
    prem = skel.prem
    if rule in (Rule.TENSOR_R, Rule.LIMP_L):
        p1, p2 = prem
        c1 = p1.inp - p1.out
        c2 = p2.inp - p2.out
        extra = exact - c1 - c2
        if p1.slack:
            e1, e2 = c1 | extra, c2
        else:
            e1, e2 = c1, c2 | extra
        subs = (_build(engine, p1, e1), _build(engine, p2, e2))
    elif rule in (Rule.WITH_R,):
        subs = tuple(_build(engine, p, exact) for p in prem)
    elif rule is Rule.PLUS_L:
        base = exact - {skel.princ}
        subs = tuple(_build(engine, p, base | new) for p, new in zip(prem, skel.new))
    elif rule in (Rule.TENSOR_L,):
        subs = (_build(engine, prem[0], (exact - {skel.princ}) | set(skel.new)),)
    elif rule in (Rule.ONE_L, Rule.BANG_L, Rule.DECIDE_L2):
        subs = (_build(engine, prem[0], exact - {skel.princ}),)
    elif rule in (Rule.LIMP_R, Rule.RELEASE_L):
        subs = (_build(engine, prem[0], exact | set(skel.new)),)
    elif rule is Rule.BANG_R:
        subs = (_build(engine, prem[0], _EMPTY),)
    else:
        subs = tuple(_build(engine, p, exact) for p in prem)
    return ProofTree(rule, FocusedState(theta, gamma, goal), subs)


def _with_big_stack(fn, *args):
    """Run ``fn`` in a thread with a large C stack; deep searches recurse a lot."""
    box: dict = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 200_000))
        try:
            box["value"] = fn(*args)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    try:
        th = threading.Thread(target=target)
        th.start()
    finally:
        threading.stack_size(old_size)
    th.join()
    if "error" in box:
        raise box["error"]
    return box["value"]


# ---------------------------------------------------------------------------
# entry points


def _search(start_fn, limits: SearchLimits) -> ProveResult:
    """Iterative deepening over the decide bound around ``start_fn(engine)``."""
    t0 = time.monotonic()
    deadline = t0 + limits.timeout_ms / 1000.0
    table = _Table()
    setup = start_fn(table)
    bounds = range(1, limits.decide_bound + 1) if limits.iterative else (limits.decide_bound,)
    used = 0
    for bound in bounds:
        budget = None if limits.max_nodes is None else limits.max_nodes - used
        engine = _Engine(table, limits, bound, deadline, budget)
        try:
            found = setup(engine)
        except _Timeout:
            elapsed = (time.monotonic() - t0) * 1000
            return ProveResult(Verdict.UNKNOWN, elapsed, None, UnknownReason.TIMEOUT, used + engine.nodes)
        used += engine.nodes
        if found is not None:
            skel, exact = found
            proof = _build(engine, skel, exact)
            elapsed = (time.monotonic() - t0) * 1000
            return ProveResult(Verdict.PROVABLE, elapsed, proof, None, used)
        if engine.bound_events == 0:
            elapsed = (time.monotonic() - t0) * 1000
            if engine.prune_events == 0:
                return ProveResult(Verdict.NOT_PROVABLE, elapsed, None, None, used)
            # a larger bound would repeat the same search
            return ProveResult(Verdict.UNKNOWN, elapsed, None, UnknownReason.BOUND_HIT, used)
    elapsed = (time.monotonic() - t0) * 1000
    return ProveResult(Verdict.UNKNOWN, elapsed, None, UnknownReason.BOUND_HIT, used)


def _first_closed(gen):
    for out, slack, skel in gen:
        if out and not slack:
            continue
        return skel
    return None


def prove_state(st: FocusedState, limits: SearchLimits | None = None) -> ProveResult:
    """Search for a proof of an arbitrary focused sequent (exact contexts)."""
    limits = limits or SearchLimits()
    for f in list(st.theta) + list(st.gamma) + _goal_formulas(st.goal):
        check_admissible(f)

    def start(table):
        theta_ids = tuple((table.intern(f), 0) for f in sorted(st.theta, key=sort_key))
        gamma_ids = [table.intern(f) for f in st.gamma]
        goal = st.goal

        def run(engine: _Engine):
            rids = tuple(engine.new_rid(x, -1) for x in gamma_ids)
            avail = frozenset(rids)
            path = frozenset()
            if isinstance(goal, NegPhase):
                d = None if goal.delta is None else table.intern(goal.delta)
                gen = engine.neg(theta_ids, avail, rids, d, avail, path, 0)
            elif isinstance(goal, RightFocus):
                gen = engine.rfocus(theta_ids, avail, table.intern(goal.focus), avail, path, 0)
            else:
                d = None if goal.delta is None else table.intern(goal.delta)
                gen = engine.lfocus(theta_ids, avail, table.intern(goal.focus), d, avail, path, 0)
            skel = _first_closed(gen)
            return None if skel is None else (skel, avail)

        return run

    return _with_big_stack(_search, start, limits)


def _goal_formulas(goal: Goal) -> list:
    match goal:
        case NegPhase(d):
            return [] if d is None else [d]
        case RightFocus(f):
            return [f]
        case LeftFocus(f, d):
            return [f] if d is None else [f, d]
    return []


def initial_state(s: Sequent) -> FocusedState:
    return FocusedState(frozenset(), s.antecedent, NegPhase(s.succedent))


def prove(s: Sequent, limits: SearchLimits | None = None) -> ProveResult:
    """Decide (within ``limits``) whether ``s`` is provable in ILL."""
    return prove_state(initial_state(s), limits)


def positive_phase(st: FocusedState, limits: SearchLimits | None = None) -> ProveResult:
    if isinstance(st.goal, NegPhase):
        raise ValueError("positive_phase needs a focused state")
    return prove_state(st, limits)


# ---------------------------------------------------------------------------
# single-step views of the calculus (exact contexts, no search)


def negative_phase(st: FocusedState) -> list[FocusedState]:
    """Apply the invertible rules exhaustively; closed branches vanish."""
    if not isinstance(st.goal, NegPhase):
        raise ValueError("negative_phase needs a NegPhase state")
    out: list[FocusedState] = []
    work = [(st.theta, list(st.gamma), st.goal.delta)]
    while work:
        theta, gamma, delta = work.pop()
        idx = next((i for i, f in enumerate(gamma) if is_positive(f) and not isinstance(f, Atom)), None)
        if idx is not None:
            f = gamma[idx]
            rest = gamma[:idx] + gamma[idx + 1:]
            match f:
                case Tensor(a, b):
                    work.append((theta, rest + [a, b], delta))
                case One():
                    work.append((theta, rest, delta))
                case Zero():
                    pass
                case Bang(a):
                    work.append((theta | {a}, rest, delta))
                case Plus(a, b):
                    work.append((theta, rest + [b], delta))
                    work.append((theta, rest + [a], delta))
            continue
        match delta:
            case Top():
                continue
            case Bot():
                work.append((theta, gamma, None))
            case Limp(a, b):
                work.append((theta, gamma + [a], b))
            case With(a, b):
                work.append((theta, gamma, b))
                work.append((theta, gamma, a))
            case _:
                out.append(FocusedState(theta, gamma, NegPhase(delta)))
    return out


def is_normal(st: FocusedState) -> bool:
    if not isinstance(st.goal, NegPhase):
        return False
    d = st.goal.delta
    return (all(isinstance(f, Atom) or is_negative(f) for f in st.gamma)
            and (d is None or is_positive(d)))


def decide(st: FocusedState, counts: dict | None = None,
           bound: int | None = None) -> list[tuple[Rule, FocusedState]]:
    """Every legal decide step from a normal state, in tie-break order.

    ``counts`` maps classical formulas to how often they were already
    focused on along the current branch; with ``bound`` set, formulas that
    reached it are skipped.
    """
    if not is_normal(st):
        raise ValueError("decide needs a normal state")
    counts = counts or {}
    delta = st.goal.delta
    res: list[tuple[Rule, FocusedState]] = []
    seen = set()
    for i, f in enumerate(st.gamma):
        if is_negative(f) and f not in seen:
            seen.add(f)
            rest = st.gamma[:i] + st.gamma[i + 1:]
            res.append((Rule.DECIDE_L2, FocusedState(st.theta, rest, LeftFocus(f, delta))))
    if delta is not None and is_positive(delta):
        res.append((Rule.DECIDE_R, FocusedState(st.theta, st.gamma, RightFocus(delta))))
    for f in sorted(st.theta, key=sort_key):
        if isinstance(f, Atom):
            continue
        if bound is not None and counts.get(f, 0) >= bound:
            continue
        res.append((Rule.DECIDE_L1, FocusedState(st.theta, st.gamma, LeftFocus(f, delta))))
    return res


# ---------------------------------------------------------------------------
# independent proof checker


def _ms(xs) -> Counter:
    return Counter(xs)


def _same_side(c: FocusedState, p: FocusedState) -> bool:
    return c.theta == p.theta


def _check_node(n: ProofTree) -> bool:
    c = n.conclusion
    ps = [p.conclusion for p in n.premises]
    if len(ps) != arity(n.rule):
        return False
    if n.rule not in (Rule.BANG_L, Rule.SATURATE) and any(not _same_side(c, p) for p in ps):
        return False
    g = _ms(c.gamma)
    goal = c.goal
    r = n.rule

    if r in NEGATIVE_RULES or r in (Rule.DECIDE_L1, Rule.DECIDE_L2, Rule.DECIDE_R, Rule.SATURATE):
        if not isinstance(goal, NegPhase):
            return False
        delta = goal.delta

        def minus(f):
            if g[f] == 0:
                return None
            return g - Counter([f])

        if r is Rule.TOP_R:
            return isinstance(delta, Top)
        if r is Rule.ZERO_L:
            return g[Zero()] > 0
        if r is Rule.BOT_R:
            return isinstance(delta, Bot) and _ms(ps[0].gamma) == g and ps[0].goal == NegPhase(None)
        if r is Rule.LIMP_R:
            return (isinstance(delta, Limp) and ps[0].goal == NegPhase(delta.right)
                    and _ms(ps[0].gamma) == g + Counter([delta.left]))
        if r is Rule.WITH_R:
            return (isinstance(delta, With) and ps[0].goal == NegPhase(delta.left)
                    and ps[1].goal == NegPhase(delta.right)
                    and _ms(ps[0].gamma) == g and _ms(ps[1].gamma) == g)
        if r is Rule.SATURATE:
            return (ps[0].theta == saturate_classical(c.theta) and ps[0].goal == goal
                    and _ms(ps[0].gamma) == g)
        if r is Rule.DECIDE_R:
            return (delta is not None and is_positive(delta) and ps[0].goal == RightFocus(delta)
                    and _ms(ps[0].gamma) == g)
        if r is Rule.DECIDE_L1:
            pg = ps[0].goal
            return (isinstance(pg, LeftFocus) and pg.delta == delta and pg.focus in c.theta
                    and not isinstance(pg.focus, Atom) and _ms(ps[0].gamma) == g)
        if r is Rule.DECIDE_L2:
            pg = ps[0].goal
            if not (isinstance(pg, LeftFocus) and pg.delta == delta and is_negative(pg.focus)):
                return False
            rest = minus(pg.focus)
            return rest is not None and _ms(ps[0].gamma) == rest
        # left rules of the negative phase: find the principal formula
        for f in list(g):
            rest = g - Counter([f])
            pgs = [_ms(p.gamma) for p in ps]
            ok_goal = all(p.goal == goal for p in ps)
            match r, f:
                case Rule.TENSOR_L, Tensor(a, b):
                    if ok_goal and pgs[0] == rest + Counter([a, b]):
                        return True
                case Rule.ONE_L, One():
                    if ok_goal and pgs[0] == rest:
                        return True
                case Rule.BANG_L, Bang(a):
                    if ok_goal and pgs[0] == rest and ps[0].theta == c.theta | {a}:
                        return True
                case Rule.PLUS_L, Plus(a, b):
                    if ok_goal and pgs[0] == rest + Counter([a]) and pgs[1] == rest + Counter([b]):
                        return True
        return False

    if r in (Rule.TENSOR_R, Rule.PLUS_R1, Rule.PLUS_R2, Rule.ONE_R, Rule.BANG_R, Rule.INIT,
             Rule.RELEASE_R):
        if not isinstance(goal, RightFocus):
            return False
        f = goal.focus
        if r is Rule.TENSOR_R:
            return (isinstance(f, Tensor) and ps[0].goal == RightFocus(f.left)
                    and ps[1].goal == RightFocus(f.right)
                    and _ms(ps[0].gamma) + _ms(ps[1].gamma) == g)
        if r in (Rule.PLUS_R1, Rule.PLUS_R2):
            side = f.left if r is Rule.PLUS_R1 else getattr(f, "right", None)
            return isinstance(f, Plus) and ps[0].goal == RightFocus(side) and _ms(ps[0].gamma) == g
        if r is Rule.ONE_R:
            return isinstance(f, One) and not g
        if r is Rule.BANG_R:
            return (isinstance(f, Bang) and not g and not ps[0].gamma
                    and ps[0].goal == NegPhase(f.body))
        if r is Rule.INIT:
            return (isinstance(f, Atom) and (f in c.theta or g[f] > 0)
                    and all(x == f for x in g) and sum(g.values()) <= 1)
        if r is Rule.RELEASE_R:
            return is_negative(f) and ps[0].goal == NegPhase(f) and _ms(ps[0].gamma) == g
        return False

    if not isinstance(goal, LeftFocus):
        return False
    f, delta = goal.focus, goal.delta
    if r is Rule.LIMP_L:
        return (isinstance(f, Limp) and ps[0].goal == RightFocus(f.left)
                and ps[1].goal == LeftFocus(f.right, delta)
                and _ms(ps[0].gamma) + _ms(ps[1].gamma) == g)
    if r in (Rule.WITH_L1, Rule.WITH_L2):
        if not isinstance(f, With):
            return False
        side = f.left if r is Rule.WITH_L1 else f.right
        return ps[0].goal == LeftFocus(side, delta) and _ms(ps[0].gamma) == g
    if r is Rule.BOT_L:
        return isinstance(f, Bot) and delta is None and not g
    if r is Rule.RELEASE_L:
        return (is_positive(f) and ps[0].goal == NegPhase(delta)
                and _ms(ps[0].gamma) == g + Counter([f]))
    return False


def check_proof(pt: ProofTree, s: Sequent | FocusedState) -> bool:
    """True iff ``pt`` is a correct ILLF derivation whose root matches ``s``."""
    root = s if isinstance(s, FocusedState) else initial_state(s)
    if pt.conclusion != root:
        return False
    return all(_check_node(n) for n in pt.nodes())
