import csv
import io
from pathlib import Path

import pytest

from illtp.bench import (
    ROW_LABELS,
    RunRecord,
    dump_proof,
    emit_report,
    latex_document,
    load_proof,
    problem_files,
    records_csv,
    render_latex_proof,
    run_problem,
    run_suite,
    summarize,
)
from illtp.formula import TOP, Atom, Limp, Sequent
from illtp.illf import SearchLimits, Verdict, check_proof, prove
from illtp.kleene import generate_library
from illtp.translate import TranslationKind

SMOKE = Path(__file__).parent / "data" / "smoke"
A, B, C = Atom("A"), Atom("B"), Atom("C")


def rec(verdict, ms, group="g", reason=None):
    return RunRecord("p", "KLE", group, verdict, ms, reason)


def test_summarize_average():
    (s,) = summarize([rec(Verdict.PROVABLE, 17), rec(Verdict.PROVABLE, 383)], "all")
    assert (s.min_ms, s.max_ms, s.avg_ms) == (17, 383, 200)
    assert (s.num_problems, s.solved_theorems) == (2, 2)


def test_summarize_all_unknown():
    (s,) = summarize([rec(Verdict.UNKNOWN, 5, reason="Timeout")] * 3, "all")
    assert s.unsolved == 3
    assert s.min_ms is s.avg_ms is s.max_ms is None
    assert s.row()[-3:] == ["-", "-", "-"]


def test_summarize_single_refutation():
    (s,) = summarize([rec(Verdict.NOT_PROVABLE, 50)], "all")
    assert s.non_theorems == 1
    assert s.min_ms == s.avg_ms == s.max_ms == 50


def test_timeouts_are_left_out_of_time_stats():
    (s,) = summarize([rec(Verdict.PROVABLE, 10), rec(Verdict.UNKNOWN, 1000, reason="Timeout")], "all")
    assert s.max_ms == 10


def test_grouping_keeps_first_appearance_order():
    records = [rec(Verdict.PROVABLE, 1, "cbv"), rec(Verdict.PROVABLE, 1, "mult"), rec(Verdict.PROVABLE, 1, "cbv")]
    assert [s.group for s in summarize(records, "translation")] == ["cbv", "mult"]
    with pytest.raises(ValueError):
        summarize(records, "colour")


def test_csv_report():
    records = [rec(Verdict.PROVABLE, 1, "cbv"), rec(Verdict.NOT_PROVABLE, 2, "mult")]
    stats = summarize(records, "translation")
    rows = list(csv.reader(io.StringIO(emit_report(stats, "csv"))))
    assert rows[0][0] == "group" and "num_problems" in rows[0]
    assert len(rows) == 1 + len(stats)


def test_latex_report():
    stats = summarize([rec(Verdict.PROVABLE, 1, "cbv"), rec(Verdict.PROVABLE, 1, "mult")], "translation")
    tex = emit_report(stats, "latex")
    assert tex.startswith("\\begin{tabular}") and tex.rstrip().endswith("\\end{tabular}")
    for label in ROW_LABELS:
        assert label in tex
    with pytest.raises(ValueError):
        emit_report(stats, "xml")


def test_records_csv():
    text = records_csv([rec(Verdict.PROVABLE, 1)])
    assert len(list(csv.reader(io.StringIO(text)))) == 2


def test_empty_directory(tmp_path):
    assert problem_files(tmp_path) == []
    assert run_suite(problem_files(tmp_path)) == []
    assert summarize([], "all") == []


def test_smoke_suite_partition():
    records = run_suite(problem_files(SMOKE), SearchLimits(timeout_ms=1_000))
    assert len(records) == 8
    by_name = {r.name: r for r in records}
    assert by_name["BAD-1"].verdict is Verdict.UNKNOWN
    assert by_name["BAD-1"].reason.startswith("ParseError")
    assert by_name["KLE-12-mult"].verdict is Verdict.NOT_PROVABLE
    assert by_name["HARD-1"].reason == "Timeout"
    for group_by in ("all", "category", "translation", "translation+category"):
        for s in summarize(records, group_by):
            assert s.num_problems == s.unsolved + s.solved_theorems + s.non_theorems


def test_timeout_is_respected():
    r = run_problem(SMOKE / "HARD-1.p", SearchLimits(timeout_ms=1))
    assert r.verdict is Verdict.UNKNOWN and r.reason == "Timeout"
    assert r.elapsed_ms < 1 + 250


def test_unsupported_formula_is_recorded(tmp_path):
    (tmp_path / "par.p").write_text("fof(g, conjecture, a | a).\n")
    (r,) = run_suite(problem_files(tmp_path))
    assert r.verdict is Verdict.UNKNOWN and r.reason.startswith("Unsupported")


def test_workers_give_the_same_verdicts():
    probs = generate_library(kinds=(TranslationKind.MULT,), alternatives=False)[:20]
    limits = SearchLimits(max_nodes=200_000)
    one = run_suite(probs, limits, workers=1)
    two = run_suite(probs, limits, workers=2)
    assert sorted((r.name, r.verdict) for r in one) == sorted((r.name, r.verdict) for r in two)


# -- rendering ---------------------------------------------------------------


def test_identity_renders_in_two_steps():
    tex = render_latex_proof(prove(Sequent((), Limp(A, A))).proof)
    assert tex.count("\\infer") == 2
    assert tex.startswith("$\\infer[\\star]")


def test_composition_multiplicative_root():
    tex = render_latex_proof(prove(Sequent((Limp(A, B), Limp(B, C)), Limp(A, C))).proof)
    root = tex.split("}{\\infer", 1)[0]
    assert "A \\multimap B, B \\multimap C \\longrightarrow A \\multimap C" in root
    assert "\\star" in root


def test_top_leaf_has_a_label():
    tex = render_latex_proof(prove(Sequent((A,), TOP)).proof)
    assert tex.startswith("$\\infer[") and tex.endswith("{}$")


def test_latex_document():
    doc = latex_document([render_latex_proof(prove(Sequent((), Limp(A, A))).proof)])
    assert "\\usepackage" in doc and "proof" in doc
    assert doc.rstrip().endswith("\\end{document}")


def test_json_proof_round_trip():
    for p in generate_library()[:40]:
        s = p.to_sequent()
        res = prove(s)
        if res.proof is None:
            continue
        back = load_proof(dump_proof(res.proof))
        assert back == res.proof
        assert check_proof(back, s)
