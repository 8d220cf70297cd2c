"""Benchmark harness: run the prover over problem sets, tabulate, render.

Statistics follow the layout of the usual comparison table: one column per
group, with rows for problem count, unsolved, theorems, non-theorems and
min/avg/max time.  Times are averaged over decided problems only.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .formula import (
    Atom,
    Bang,
    Bot,
    Formula,
    Limp,
    One,
    Plus,
    Tensor,
    Top,
    With,
    Zero,
    sort_key,
)
from .illf import (
    NEGATIVE_RULES,
    FocusedState,
    LeftFocus,
    NegPhase,
    ProofTree,
    RightFocus,
    Rule,
    SearchLimits,
    Verdict,
    prove,
)
from .problem import ProblemSyntaxError, Problem, format_formula, load_problem, parse_formula


@dataclass(frozen=True)
class RunRecord:
    name: str
    category: str
    translation: str
    verdict: Verdict
    elapsed_ms: float
    reason: str | None = None
    proof_size: int | None = None
    expected: str | None = None

    @property
    def decided(self) -> bool:
        return self.verdict is not Verdict.UNKNOWN


def _tags(p: Problem) -> tuple[str, str]:
    return p.header("Category") or "-", p.header("Translation") or "-"


def run_problem(item: Problem | str | Path, limits: SearchLimits) -> RunRecord:
    """Prove one problem; parse failures become an Unknown record."""
    if not isinstance(item, Problem):
        path = Path(item)
        try:
            item = load_problem(path)
        except (OSError, ProblemSyntaxError, UnicodeDecodeError, ValueError) as exc:
            return RunRecord(path.stem, "-", "-", Verdict.UNKNOWN, 0.0, f"ParseError: {exc}")
    category, translation = _tags(item)
    try:
        res = prove(item.to_sequent(), limits)
    except ValueError as exc:  # e.g. ⅋ or ? in the input
        return RunRecord(item.name, category, translation, Verdict.UNKNOWN, 0.0,
                         f"Unsupported: {exc}", None, item.status.value)
    reason = None if res.reason is None else res.reason.value
    size = None if res.proof is None else res.proof.size()
    return RunRecord(item.name, category, translation, res.verdict, res.elapsed_ms, reason, size,
                     item.status.value)


def _run_plain(item, limits):
    return run_problem(item, limits)


def run_suite(problems: Iterable[Problem | str | Path], limits: SearchLimits | None = None,
              workers: int = 1) -> list[RunRecord]:
    """Attempt every problem once, in input order.

    ``problems`` may mix parsed problems and file paths.  With ``workers``
    above one the problems are spread over a process pool.
    """
    limits = limits or SearchLimits()
    items = list(problems)
    if workers <= 1 or len(items) <= 1:
        return [run_problem(p, limits) for p in items]
    if limits.cancel is not None:
        limits = replace(limits, cancel=None)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_plain, items, [limits] * len(items)))


def problem_files(directory: str | Path) -> list[Path]:
    return sorted(Path(directory).glob("*.p"))


# ---------------------------------------------------------------------------
# statistics


ROW_LABELS = ("Num. of Problems", "Unsolved (timeouts)", "Solved (Theorems)", "Non-Theorems",
              "Min Time", "Avg Time", "Max Time")


@dataclass(frozen=True)
class SuiteStats:
    group: str
    num_problems: int
    unsolved: int
    solved_theorems: int
    non_theorems: int
    min_ms: float | None
    avg_ms: float | None
    max_ms: float | None

    def row(self) -> list[str]:
        return [str(self.num_problems), str(self.unsolved), str(self.solved_theorems),
                str(self.non_theorems), _fmt(self.min_ms), _fmt(self.avg_ms), _fmt(self.max_ms)]


def _fmt(x: float | None) -> str:
    return "-" if x is None else f"{x:.2f}"


GROUPINGS: dict[str, Callable[[RunRecord], str]] = {
    "all": lambda r: "all",
    "category": lambda r: r.category,
    "translation": lambda r: r.translation,
    "translation+category": lambda r: f"{r.translation}/{r.category}",
}


def _stats(group: str, records: Sequence[RunRecord]) -> SuiteStats:
    times = [r.elapsed_ms for r in records if r.decided]
    return SuiteStats(
        group,
        len(records),
        sum(1 for r in records if not r.decided),
        sum(1 for r in records if r.verdict is Verdict.PROVABLE),
        sum(1 for r in records if r.verdict is Verdict.NOT_PROVABLE),
        min(times) if times else None,
        math.fsum(times) / len(times) if times else None,
        max(times) if times else None,
    )


def summarize(records: Iterable[RunRecord],
              group_by: str | Callable[[RunRecord], str] = "all") -> list[SuiteStats]:
    """One SuiteStats per group, in order of first appearance."""
    if isinstance(group_by, str):
        if group_by not in GROUPINGS:
            raise ValueError(f"unknown grouping {group_by!r}; expected one of {sorted(GROUPINGS)}")
        key = GROUPINGS[group_by]
    else:
        key = group_by
    groups: dict[str, list[RunRecord]] = {}
    for r in records:
        groups.setdefault(key(r), []).append(r)
    return [_stats(g, rs) for g, rs in groups.items()]


_CSV_FIELDS = ("group", "num_problems", "unsolved", "solved_theorems", "non_theorems",
               "min_ms", "avg_ms", "max_ms")


def emit_report(stats: Sequence[SuiteStats], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_CSV_FIELDS)
        for s in stats:
            w.writerow([s.group] + s.row())
        return buf.getvalue()
    if fmt == "latex":
        cols = len(stats)
        lines = ["\\begin{tabular}{|l|" + "c|" * cols + "}", "\\hline",
                 " & " + " & ".join(_tex_escape(s.group) for s in stats) + " \\\\\\hline"]
        rows = [s.row() for s in stats]
        for i, label in enumerate(ROW_LABELS):
            cells = [row[i] for row in rows]
            lines.append(f"{label} & " + " & ".join(cells) + " \\\\\\hline")
        lines.append("\\end{tabular}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def _tex_escape(text: str) -> str:
    return "".join("\\" + c if c in "&%$#_{}" else c for c in text)


def records_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("name", "category", "translation", "verdict", "reason", "elapsed_ms", "proof_size",
                "expected"))
    for r in records:
        w.writerow((r.name, r.category, r.translation, r.verdict.value, r.reason or "",
                    f"{r.elapsed_ms:.2f}", "" if r.proof_size is None else r.proof_size,
                    r.expected or ""))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# LaTeX proofs

_TEX_PREC = {Tensor: 5, With: 4, Plus: 3, Limp: 1}
_TEX_OP = {Tensor: "\\otimes", With: "\\mathbin{\\&}", Plus: "\\oplus", Limp: "\\multimap"}
_TEX_CONST = {One: "\\mathbf{1}", Zero: "\\mathbf{0}", Top: "\\top", Bot: "\\bot"}


def formula_latex(f: Formula, _ctx: int = 0) -> str:
    if isinstance(f, Atom):
        name = f.name.replace("_", "\\_")
        return name if len(name) == 1 else f"\\mathit{{{name}}}"
    if type(f) in _TEX_CONST:
        return _TEX_CONST[type(f)]
    if isinstance(f, Bang):
        return "{!}" + formula_latex(f.body, 6)
    prec = _TEX_PREC.get(type(f))
    if prec is None:
        raise ValueError(f"no LaTeX rendering for {f!r}")
    if isinstance(f, Limp):
        text = f"{formula_latex(f.left, prec + 1)} {_TEX_OP[Limp]} {formula_latex(f.right, prec)}"
    else:
        text = f"{formula_latex(f.left, prec)} {_TEX_OP[type(f)]} {formula_latex(f.right, prec + 1)}"
    return f"({text})" if prec < _ctx else text


def _list(fs) -> str:
    return ", ".join(formula_latex(f) for f in fs) if fs else "\\cdot"


def sequent_latex(st: FocusedState) -> str:
    """Θ (in blue) : Γ, then the arrow of the phase."""
    theta = "\\textcolor{blue}{" + _list(sorted(st.theta, key=sort_key)) + "}"
    gamma = _list(st.gamma)
    match st.goal:
        case NegPhase(d):
            return f"{theta} : {gamma} \\longrightarrow {'' if d is None else formula_latex(d)}"
        case RightFocus(f):
            return f"{theta} : {gamma} \\;-_{{{formula_latex(f)}}}\\!\\!\\to"
        case LeftFocus(f, d):
            return f"{theta} : {gamma} \\xrightarrow{{{formula_latex(f)}}} {'' if d is None else formula_latex(d)}"


_RULE_TEX = {
    Rule.TENSOR_R: "\\otimes_R", Rule.LIMP_L: "\\multimap_L", Rule.PLUS_R1: "\\oplus_{R_1}",
    Rule.PLUS_R2: "\\oplus_{R_2}", Rule.WITH_L1: "\\&_{L_1}", Rule.WITH_L2: "\\&_{L_2}",
    Rule.ONE_R: "1_R", Rule.BOT_L: "\\bot_L", Rule.BANG_R: "!_R", Rule.INIT: "",
    Rule.DECIDE_L1: "D_{L1}", Rule.DECIDE_L2: "D_{L2}", Rule.DECIDE_R: "D_R",
    Rule.RELEASE_L: "R_L", Rule.RELEASE_R: "R_R", Rule.SATURATE: "\\mathsf{sat}",
}

_STAR = "\\star"
_SEGMENT = NEGATIVE_RULES


def _segment_exits(pt: ProofTree) -> list[ProofTree]:
    """Premises left open by a maximal run of negative-phase rules."""
    out: list[ProofTree] = []
    stack = [pt]
    while stack:
        t = stack.pop()
        if t.rule in _SEGMENT:
            stack.extend(reversed(t.premises))
        else:
            out.append(t)
    return out


def _infer(label: str, conclusion: str, premises: list[str]) -> str:
    lab = f"[{label}]" if label else ""
    return f"\\infer{lab}{{{conclusion}}}{{{' & '.join(premises)}}}"


def _render(pt: ProofTree, shown: FocusedState | None = None) -> str:
    concl = sequent_latex(shown or pt.conclusion)
    if pt.rule in _SEGMENT:
        return _infer(_STAR, concl, [_render(p) for p in _segment_exits(pt)])
    if pt.rule in (Rule.DECIDE_L2, Rule.DECIDE_R):
        # the decision shows as the first focused rule applied to its conclusion
        return _render(pt.premises[0], shown or pt.conclusion)
    if pt.rule in (Rule.RELEASE_L, Rule.RELEASE_R):
        return _render(pt.premises[0])
    return _infer(_RULE_TEX[pt.rule], concl, [_render(p) for p in pt.premises])


def render_latex_proof(pt: ProofTree) -> str:
    """Inference-style LaTeX (proof.sty).  Negative phases collapse into ★
    steps, DL2/DR and releases are folded into their neighbours, and the
    classical context is coloured."""
    return "$" + _render(pt) + "$"


LATEX_PREAMBLE = ("\\documentclass{article}\n\\usepackage{amsmath,amssymb,proof,xcolor}\n"
                  "\\usepackage[landscape,margin=1cm]{geometry}\n")


def latex_document(bodies: Iterable[str]) -> str:
    parts = [LATEX_PREAMBLE, "\\begin{document}\n"]
    for body in bodies:
        parts.append("\\noindent\\resizebox{\\textwidth}{!}{" + body + "}\n\n\\bigskip\n")
    parts.append("\\end{document}\n")
    return "".join(parts)


# ---------------------------------------------------------------------------
# proofs as JSON


def _goal_json(goal) -> dict:
    match goal:
        case NegPhase(d):
            return {"phase": "neg", "delta": None if d is None else format_formula(d)}
        case RightFocus(f):
            return {"phase": "right", "focus": format_formula(f)}
        case LeftFocus(f, d):
            return {"phase": "left", "focus": format_formula(f),
                    "delta": None if d is None else format_formula(d)}
    raise TypeError(goal)


def _goal_from(d: dict):
    def opt(key):
        return None if d.get(key) is None else parse_formula(d[key])

    phase = d["phase"]
    if phase == "neg":
        return NegPhase(opt("delta"))
    if phase == "right":
        return RightFocus(parse_formula(d["focus"]))
    if phase == "left":
        return LeftFocus(parse_formula(d["focus"]), opt("delta"))
    raise ValueError(f"unknown phase {phase!r}")


def proof_to_dict(pt: ProofTree) -> dict:
    st = pt.conclusion
    return {
        "rule": pt.rule.value,
        "theta": [format_formula(f) for f in sorted(st.theta, key=sort_key)],
        "gamma": [format_formula(f) for f in st.gamma],
        "goal": _goal_json(st.goal),
        "premises": [proof_to_dict(p) for p in pt.premises],
    }


def proof_from_dict(d: dict) -> ProofTree:
    st = FocusedState(frozenset(parse_formula(x) for x in d["theta"]),
                      tuple(parse_formula(x) for x in d["gamma"]), _goal_from(d["goal"]))
    return ProofTree(Rule(d["rule"]), st, tuple(proof_from_dict(p) for p in d.get("premises", ())))


def dump_proof(pt: ProofTree) -> str:
    return json.dumps(proof_to_dict(pt), ensure_ascii=False, indent=1)


def load_proof(text: str) -> ProofTree:
    return proof_from_dict(json.loads(text))
