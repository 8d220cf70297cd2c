"""Place/transition nets: PNML input, the token game, and the ILL encoding of reachability."""

from __future__ import annotations

import enum
import random
import re
import xml.etree.ElementTree as ET
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .formula import ONE, Atom, Bang, Formula, Limp, Sequent, Tensor
from .problem import Problem, ProblemStatus, make_problem, write_problem


class PnmlError(ValueError):
    pass


class XmlError(PnmlError):
    pass


class UnsupportedNet(PnmlError):
    pass


class DanglingArc(PnmlError):
    pass


class NotEnabled(ValueError):
    pass


@dataclass(frozen=True)
class Marking:
    """Multiset of places, stored canonically as sorted (place, count) pairs."""

    items: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, places: Iterable[str] | dict | Counter = ()) -> Marking:
        counts = Counter(places) if not isinstance(places, dict) else Counter(places)
        return cls(tuple(sorted((p, n) for p, n in counts.items() if n > 0)))

    def counter(self) -> Counter:
        return Counter(dict(self.items))

    def count(self, place: str) -> int:
        return dict(self.items).get(place, 0)

    def total(self) -> int:
        return sum(n for _, n in self.items)

    def elements(self) -> list[str]:
        return [p for p, n in self.items for _ in range(n)]

    def covers(self, other: Marking) -> bool:
        """``other`` is a multisubset of this marking."""
        mine = dict(self.items)
        return all(mine.get(p, 0) >= n for p, n in other.items)

    def __add__(self, other: Marking) -> Marking:
        return Marking.of(self.counter() + other.counter())

    def __sub__(self, other: Marking) -> Marking:
        return Marking.of(self.counter() - other.counter())

    def __len__(self) -> int:
        return self.total()

    def __str__(self) -> str:
        return "{" + ", ".join(self.elements()) + "}"


@dataclass(frozen=True)
class Transition:
    id: str
    preset: Marking
    postset: Marking


@dataclass(frozen=True)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[Transition, ...]
    name: str = "net"

    def __post_init__(self):
        known = set(self.places)
        for t in self.transitions:
            for p, _ in t.preset.items + t.postset.items:
                if p not in known:
                    raise ValueError(f"transition {t.id} uses undeclared place {p}")


@dataclass(frozen=True)
class ReachProblem:
    net: PetriNet
    source: Marking
    target: Marking


class Reach(enum.Enum):
    REACHABLE = "Reachable"
    UNREACHABLE = "Unreachable"
    UNKNOWN = "Unknown"


# ---------------------------------------------------------------------------
# PNML


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _text_int(elem, what: str) -> int:
    for child in elem.iter():
        if _local(child.tag) == "text" and child.text is not None:
            try:
                return int(child.text.strip())
            except ValueError:
                raise PnmlError(f"{what} is not an integer: {child.text.strip()!r}") from None
    return 0


def atom_name(ident: str) -> str:
    """Turn an arbitrary PNML id into a valid atom name."""
    name = re.sub(r"[^A-Za-z0-9_]", "_", ident)
    if not name or not name[0].isalpha():
        name = "p" + name
    return name


_HIGH_LEVEL = {"hlinitialmarking", "hlinscription", "declaration", "declarations", "type",
               "namedsort", "usersort", "productsort", "cyclicenumeration", "finiteenumeration"}


def parse_pnml(text: str) -> tuple[PetriNet, Marking]:
    """Read a P/T net and its initial marking from PNML text.

    Pages may be nested; only the first net of the document is read.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlError(str(exc)) from None
    nets = [e for e in root.iter() if _local(e.tag) == "net"]
    if not nets:
        raise PnmlError("no <net> element")
    net_el = nets[0]
    kind = net_el.get("type", "")
    if kind and not kind.rstrip("/#").lower().endswith("ptnet"):
        raise UnsupportedNet(f"only place/transition nets are supported, got {kind}")
    for e in net_el.iter():
        if _local(e.tag).lower() in _HIGH_LEVEL:
            raise UnsupportedNet(f"high-level construct <{_local(e.tag)}>")

    names: dict[str, str] = {}
    places: list[str] = []
    marking: Counter = Counter()
    transitions: list[str] = []
    pre: dict[str, Counter] = {}
    post: dict[str, Counter] = {}
    arcs = []
    taken = set()
    for e in net_el.iter():
        tag = _local(e.tag)
        if tag == "place":
            pid = e.get("id")
            if pid is None:
                raise PnmlError("place without id")
            name = atom_name(pid)
            while name in taken:
                name += "_"
            taken.add(name)
            names[pid] = name
            places.append(name)
            for child in e:
                if _local(child.tag) == "initialMarking":
                    tokens = _text_int(child, "initial marking")
                    if tokens:
                        marking[name] += tokens
        elif tag == "transition":
            tid = e.get("id")
            if tid is None:
                raise PnmlError("transition without id")
            transitions.append(tid)
            pre[tid], post[tid] = Counter(), Counter()
        elif tag == "arc":
            arcs.append(e)
    for arc in arcs:
        src, dst = arc.get("source"), arc.get("target")
        weight = 1
        for child in arc:
            if _local(child.tag) == "inscription":
                weight = _text_int(child, "arc inscription") or 1
        if src in names and dst in pre:
            pre[dst][names[src]] += weight
        elif src in pre and dst in names:
            post[src][names[dst]] += weight
        elif (src in names or src in pre) and (dst in names or dst in pre):
            raise PnmlError(f"arc {arc.get('id')} does not connect a place and a transition")
        else:
            raise DanglingArc(f"arc {arc.get('id')} references unknown node {src if src not in names and src not in pre else dst}")
    name = net_el.get("id") or "net"
    ts = tuple(Transition(t, Marking.of(pre[t]), Marking.of(post[t])) for t in transitions)
    return PetriNet(tuple(places), ts, name), Marking.of(marking)


# ---------------------------------------------------------------------------
# token game


def enabled(net: PetriNet, m: Marking) -> list[Transition]:
    return [t for t in net.transitions if m.covers(t.preset)]


def fire(net: PetriNet, m: Marking, t: Transition) -> Marking:
    if not m.covers(t.preset):
        raise NotEnabled(f"{t.id} is not enabled in {m}")
    return (m - t.preset) + t.postset


@dataclass(frozen=True)
class SimResult:
    marking: Marking
    steps: int
    deadlock: bool
    trace: tuple[str, ...] = field(default=(), compare=False)


class Simulator:
    """Seeded random token game that can be advanced in stages."""

    def __init__(self, net: PetriNet, m0: Marking, seed: int):
        self.net = net
        self.marking = m0
        self.rng = random.Random(seed)
        self.trace: list[str] = []
        self.deadlock = False

    def run(self, steps: int) -> SimResult:
        while len(self.trace) < steps and not self.deadlock:
            choices = enabled(self.net, self.marking)
            if not choices:
                self.deadlock = True
                break
            t = self.rng.choice(choices)
            self.marking = fire(self.net, self.marking, t)
            self.trace.append(t.id)
        return SimResult(self.marking, len(self.trace), self.deadlock, tuple(self.trace))


def simulate(net: PetriNet, m0: Marking, steps: int, seed: int = 0) -> SimResult:
    """Fire ``steps`` transitions chosen uniformly among the enabled ones."""
    return Simulator(net, m0, seed).run(steps)


def reachable_bfs(p: ReachProblem, state_budget: int = 100_000) -> Reach:
    seen = {p.source}
    queue = deque([p.source])
    while queue:
        m = queue.popleft()
        if m == p.target:
            return Reach.REACHABLE
        for t in enabled(p.net, m):
            nxt = fire(p.net, m, t)
            if nxt not in seen:
                if len(seen) >= state_budget:
                    return Reach.UNKNOWN
                seen.add(nxt)
                queue.append(nxt)
    return Reach.UNREACHABLE


# ---------------------------------------------------------------------------
# encoding


def _fold_tensor(parts: list[Formula]) -> Formula:
    if not parts:
        return ONE
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = Tensor(f, out)
    return out


def encode_marking(m: Marking, places: tuple[str, ...] | None = None) -> Formula:
    order = {p: i for i, p in enumerate(places or ())}
    tokens = sorted(m.elements(), key=lambda p: (order.get(p, len(order)), p))
    return _fold_tensor([Atom(p) for p in tokens])


def encode_transition(t: Transition, places: tuple[str, ...] | None = None) -> Formula:
    return Bang(Limp(encode_marking(t.preset, places), encode_marking(t.postset, places)))


def reachability_sequent(p: ReachProblem) -> Sequent:
    rules = _fold_tensor([encode_transition(t, p.net.places) for t in p.net.transitions])
    goal = Limp(encode_marking(p.source, p.net.places), encode_marking(p.target, p.net.places))
    return Sequent((rules,), goal)


def encode_reachability(p: ReachProblem, name: str | None = None,
                        status: ProblemStatus = ProblemStatus.UNKNOWN,
                        extra: dict | None = None) -> Problem:
    headers = {"Category": "PETRI", "Source": f"{p.source} to {p.target}"}
    headers.update(extra or {})
    return make_problem(name or f"{p.net.name}-reach", reachability_sequent(p), status, headers)


def checkpoint_problems(net: PetriNet, m0: Marking, steps: Iterable[int], seed: int) -> list[Problem]:
    """One problem per step count, stopping after the first early deadlock."""
    sim = Simulator(net, m0, seed)
    problems = []
    for k in sorted(set(steps)):
        res = sim.run(k)
        extra = {"Steps": f"{res.steps} of {k}", "Seed": str(seed), "Marking": str(res.marking)}
        if res.deadlock:
            extra["Deadlock"] = "yes"
        problems.append(encode_reachability(
            ReachProblem(net, m0, res.marking), f"{net.name}-{k}-{seed}", ProblemStatus.THEOREM, extra))
        if res.deadlock:
            break
    return problems


def write_checkpoints(net: PetriNet, m0: Marking, steps: Iterable[int], seed: int,
                      outdir: str | Path) -> list[Path]:
    return [write_problem(p, outdir) for p in checkpoint_problems(net, m0, steps, seed)]


def random_net(rng: random.Random, max_places: int = 5, max_transitions: int = 4,
               max_tokens: int = 3, max_arc: int = 2) -> tuple[PetriNet, Marking]:
    places = tuple(f"s{i}" for i in range(1, rng.randint(1, max_places) + 1))

    def bag(lo: int) -> Marking:
        return Marking.of(rng.choice(places) for _ in range(rng.randint(lo, max_arc)))

    ts = tuple(Transition(f"t{i}", bag(1), bag(0)) for i in range(1, rng.randint(1, max_transitions) + 1))
    m0 = Marking.of(rng.choice(places) for _ in range(rng.randint(1, max_tokens)))
    return PetriNet(places, ts, "rnd"), m0
