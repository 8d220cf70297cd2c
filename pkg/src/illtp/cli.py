"""Command-line interface.

Exit codes: 0 success (or Provable), 1 NotProvable / invalid proof,
2 Unknown, 64 usage error, 65 malformed input, 66 missing input, 74 I/O error.
Human-readable messages go to stderr; files and reports go where the flags say.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, kleene, petri
from .formula import ILSequent
from .il import ResourceExceeded, prove_il
from .illf import SearchLimits, Verdict, check_proof, prove
from .problem import (
    ProblemStatus,
    ProblemSyntaxError,
    format_il_formula,
    load_problem,
    make_problem,
    parse_il_problem,
    serialize_problem,
    write_problem,
)
from .translate import TranslationKind, trans_sequent

EX_OK, EX_FAIL, EX_UNKNOWN = 0, 1, 2
EX_USAGE, EX_DATAERR, EX_NOINPUT, EX_IOERR = 64, 65, 66, 74

# defaults of options that may also come from a config file
DEFAULTS = {
    "timeout_ms": 300_000.0,
    "decide_bound": 4,
    "max_depth": 256,
    "max_nodes": None,
    "no_saturate": False,
    "workers": 1,
    "group_by": "translation",
    "report": "csv",
    "seed": 0,
    "steps": "1,5,10,20,50,100",
    "logic": "ill",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _limit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--timeout-ms", type=float, help="wall-clock limit per problem (default 300000)")
    p.add_argument("--decide-bound", type=int, help="copies of a classical formula per branch (default 4)")
    p.add_argument("--max-depth", type=int, help="decide nesting limit (default 256)")
    p.add_argument("--max-nodes", type=int, help="deterministic work budget instead of wall clock")
    p.add_argument("--no-saturate", action="store_true", default=None,
                   help="turn off the classical-context rewriting heuristic")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="illtp", description="Intuitionistic linear logic theorem proving tools.")
    ap.add_argument("--config", help="JSON file with default values for any long option")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("translate", help="translate an intuitionistic problem into ILL")
    p.add_argument("kind", choices=[k.value for k in TranslationKind])
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("prove", help="decide one problem")
    p.add_argument("file")
    p.add_argument("--logic", choices=["il", "ill"])
    _limit_flags(p)
    p.add_argument("--proof", help="write the proof as JSON (ill only)")
    p.add_argument("--latex", help="write the proof as a LaTeX document (ill only)")

    p = sub.add_parser("check", help="validate a JSON proof against a problem")
    p.add_argument("proof_file")
    p.add_argument("problem_file")

    p = sub.add_parser("petri-sim", help="play the token game on a PNML net")
    p.add_argument("pnml")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true", help="print the result as JSON on stdout")

    p = sub.add_parser("petri-encode", help="write reachability problems for simulated markings")
    p.add_argument("pnml")
    p.add_argument("--steps", help="comma separated step counts (default 1,5,10,20,50,100)")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--outdir", required=True)

    p = sub.add_parser("corpus", help="generate a problem library")
    p.add_argument("name", choices=["kleene"])
    p.add_argument("-o", "--outdir", required=True)
    p.add_argument("--no-alternatives", action="store_true")
    p.add_argument("--il-sources", help="also write the intuitionistic sources to this directory")

    p = sub.add_parser("bench", help="run the prover over a directory of problems")
    p.add_argument("dir")
    _limit_flags(p)
    p.add_argument("--workers", type=int)
    p.add_argument("--group-by", choices=sorted(bench.GROUPINGS))
    p.add_argument("--report", choices=["csv", "latex"])
    p.add_argument("-o", "--output", help="report file (default: stdout)")
    p.add_argument("--records", help="also write one CSV row per problem here")
    return ap


def _apply_defaults(args: argparse.Namespace) -> None:
    config = {}
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise FileNotFoundError(exc) from None
        if not isinstance(config, dict):
            raise UsageError("config file must hold a JSON object")
        config = {k.replace("-", "_"): v for k, v in config.items()}
    for key, value in vars(args).items():
        if value is None:
            if key in config:
                setattr(args, key, config[key])
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])


def _limits(args) -> SearchLimits:
    try:
        return SearchLimits(timeout_ms=float(args.timeout_ms), max_depth=int(args.max_depth),
                            decide_bound=int(args.decide_bound), max_nodes=args.max_nodes,
                            saturate=not args.no_saturate)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(text: str, target: str | None) -> None:
    if target is None:
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def _read_il(path: str) -> tuple[str, ILSequent]:
    name, seq, _ = parse_il_problem(Path(path).read_text(encoding="utf-8"))
    return name or Path(path).stem, seq


# -- commands -----------------------------------------------------------------


def cmd_translate(args) -> int:
    name, seq = _read_il(args.input)
    kind = TranslationKind(args.kind)
    problem = make_problem(f"{name}-{kind.value}", trans_sequent(seq, kind), ProblemStatus.UNKNOWN,
                           {"Translation": kind.value, "Source": str(seq)})
    _write(serialize_problem(problem), args.output)
    _say(f"translated {args.input} ({kind.value})")
    return EX_OK


def cmd_prove(args) -> int:
    if args.logic == "il":
        _, seq = _read_il(args.file)
        try:
            res = prove_il(seq, args.max_nodes)
        except ResourceExceeded as exc:
            _say(f"Unknown: {exc}")
            return EX_UNKNOWN
        _say(f"{res.verdict}  ({res.nodes} nodes)")
        return EX_OK if res.provable else EX_FAIL
    problem = load_problem(args.file)
    res = prove(problem.to_sequent(), _limits(args))
    _say(f"{problem.name}: {res}")
    if res.proof is not None:
        _say(f"proof size {res.proof.size()}")
        if args.proof:
            _write(bench.dump_proof(res.proof) + "\n", args.proof)
        if args.latex:
            _write(bench.latex_document([bench.render_latex_proof(res.proof)]), args.latex)
    if res.verdict is Verdict.PROVABLE:
        return EX_OK
    return EX_FAIL if res.verdict is Verdict.NOT_PROVABLE else EX_UNKNOWN


def cmd_check(args) -> int:
    try:
        pt = bench.load_proof(Path(args.proof_file).read_text(encoding="utf-8"))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValueError(f"malformed proof file: {exc}") from None
    problem = load_problem(args.problem_file)
    if check_proof(pt, problem.to_sequent()):
        _say(f"valid proof of {problem.name} ({pt.size()} nodes)")
        return EX_OK
    _say(f"NOT a valid proof of {problem.name}")
    return EX_FAIL


def _load_net(path: str):
    return petri.parse_pnml(Path(path).read_text(encoding="utf-8"))


def cmd_petri_sim(args) -> int:
    net, m0 = _load_net(args.pnml)
    res = petri.simulate(net, m0, args.steps, int(args.seed))
    _say(f"{net.name}: {res.steps} steps from {m0} to {res.marking}" + ("  (deadlock)" if res.deadlock else ""))
    if args.json:
        print(json.dumps({"net": net.name, "initial": dict(m0.items), "marking": dict(res.marking.items),
                          "steps": res.steps, "deadlock": res.deadlock, "trace": list(res.trace)}))
    return EX_OK


def cmd_petri_encode(args) -> int:
    try:
        steps = [int(x) for x in str(args.steps).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--steps must be a comma separated list of integers, got {args.steps!r}") from None
    if not steps or min(steps) < 0:
        raise UsageError("--steps needs non-negative step counts")
    net, m0 = _load_net(args.pnml)
    paths = petri.write_checkpoints(net, m0, steps, int(args.seed), args.outdir)
    for p in paths:
        _say(f"wrote {p}")
    return EX_OK


def cmd_corpus(args) -> int:
    problems = kleene.generate_library(alternatives=not args.no_alternatives)
    for p in problems:
        write_problem(p, args.outdir)
    _say(f"wrote {len(problems)} problems to {args.outdir}")
    if args.il_sources:
        out = Path(args.il_sources)
        out.mkdir(parents=True, exist_ok=True)
        for e in kleene.kleene_corpus():
            lines = [f"% Problem : KLE-{e.index}"]
            lines += [f"fof(h{i}, axiom, {format_il_formula(h)})." for i, h in enumerate(e.sequent.antecedent, 1)]
            lines.append(f"fof(goal, conjecture, {format_il_formula(e.sequent.succedent)}).")
            (out / f"KLE-{e.index}.p").write_text("\n".join(lines) + "\n", encoding="utf-8")
        _say(f"wrote {len(kleene.kleene_corpus())} intuitionistic sources to {out}")
    return EX_OK


def cmd_bench(args) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        raise FileNotFoundError(f"no such directory: {directory}")
    files = bench.problem_files(directory)
    records = bench.run_suite(files, _limits(args), int(args.workers))
    stats = bench.summarize(records, args.group_by)
    _write(bench.emit_report(stats, args.report), args.output)
    if args.records:
        _write(bench.records_csv(records), args.records)
    for s in stats:
        _say(f"{s.group}: {s.num_problems} problems, {s.solved_theorems} provable, "
             f"{s.non_theorems} not provable, {s.unsolved} unsolved")
    return EX_OK


COMMANDS = {
    "translate": cmd_translate, "prove": cmd_prove, "check": cmd_check, "petri-sim": cmd_petri_sim,
    "petri-encode": cmd_petri_encode, "corpus": cmd_corpus, "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_defaults(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        _say(str(exc))
        return EX_USAGE
    except FileNotFoundError as exc:
        _say(f"error: {exc}")
        return EX_NOINPUT
    except (ProblemSyntaxError, petri.PnmlError, ValueError) as exc:
        _say(f"error: {exc}")
        return EX_DATAERR
    except OSError as exc:
        _say(f"error: {exc}")
        return EX_IOERR


if __name__ == "__main__":
    sys.exit(main())
