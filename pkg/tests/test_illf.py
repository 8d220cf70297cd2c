import random
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from gen import ill_sequents, ll_formulas, random_sequent
from oracles import naive_ill_provable
from illtp.formula import (
    BOT,
    ONE,
    TOP,
    ZERO,
    Atom,
    Bang,
    Limp,
    Par,
    Plus,
    Sequent,
    Tensor,
    With,
    bang_free,
)
from illtp.illf import (
    FocusedState,
    LeftFocus,
    NegPhase,
    NonAdmissibleFormula,
    ProofTree,
    RightFocus,
    Rule,
    SearchLimits,
    UnknownReason,
    Verdict,
    check_proof,
    decide,
    is_normal,
    negative_phase,
    positive_phase,
    prove,
    saturate_classical,
)

A, B, C, p, q = Atom("a"), Atom("b"), Atom("c"), Atom("p"), Atom("q")
DECIDES = {Rule.DECIDE_L1, Rule.DECIDE_L2, Rule.DECIDE_R}
QUICK = SearchLimits(timeout_ms=20_000)


def proved(s, limits=QUICK):
    res = prove(s, limits)
    if res.proof is not None:
        assert check_proof(res.proof, s), s
    return res


# -- prove -------------------------------------------------------------------


def test_identity():
    res = proved(Sequent((), Limp(A, A)))
    assert res.verdict is Verdict.PROVABLE
    assert [n.rule for n in res.proof.nodes()] == [Rule.LIMP_R, Rule.DECIDE_R, Rule.INIT]


def test_tensor_with_negation_does_not_prove_anything():
    assert proved(Sequent((Tensor(A, Limp(A, BOT)),), B)).verdict is Verdict.NOT_PROVABLE


def test_zero_proves_anything():
    res = proved(Sequent((ZERO,), B))
    assert res.provable
    assert res.proof.rule is Rule.ZERO_L


def test_storing_loop_hits_the_bound():
    s = Sequent((Bang(A), Bang(Limp(Bang(A), B))), ZERO)
    res = prove(s)
    assert res.verdict is Verdict.UNKNOWN
    assert res.reason is UnknownReason.BOUND_HIT


def test_non_admissible_input():
    with pytest.raises(NonAdmissibleFormula):
        prove(Sequent((Par(A, B),), A))


def test_empty_succedent():
    assert proved(Sequent((A, Limp(A, BOT)), None)).provable
    assert proved(Sequent((A,), None)).verdict is Verdict.NOT_PROVABLE


def test_contraction_through_bang():
    assert proved(Sequent((Bang(A),), Tensor(A, A))).provable
    assert proved(Sequent((A,), Tensor(A, A))).verdict is Verdict.NOT_PROVABLE


def test_weakening_only_through_bang():
    assert proved(Sequent((Bang(B), A), A)).provable
    assert proved(Sequent((B, A), A)).verdict is Verdict.NOT_PROVABLE


# -- resource management -----------------------------------------------------


def test_tensor_split():
    assert proved(Sequent((A, B), Tensor(A, B))).provable
    assert proved(Sequent((A,), Tensor(ONE, A))).provable
    assert proved(Sequent((A, B), Tensor(A, A))).verdict is Verdict.NOT_PROVABLE


def test_with_premises_consume_the_same_resources():
    assert proved(Sequent((A, B), With(Tensor(A, B), Tensor(B, A)))).provable
    assert proved(Sequent((A, B), With(A, Tensor(A, B)))).verdict is Verdict.NOT_PROVABLE


def test_top_absorbs_leftovers():
    assert proved(Sequent((A, B, C), Tensor(A, TOP))).provable
    assert proved(Sequent((A, B), With(Tensor(A, TOP), Tensor(B, TOP)))).provable
    assert proved(Sequent((A, B, C), With(Tensor(A, TOP), B))).verdict is Verdict.NOT_PROVABLE


# -- single-step views -------------------------------------------------------


def test_negative_phase_examples():
    theta = frozenset({C})
    st = FocusedState(theta, (Tensor(A, B),), NegPhase(C))
    assert negative_phase(st) == [FocusedState(theta, (A, B), NegPhase(C))]
    assert negative_phase(FocusedState(theta, (A,), NegPhase(TOP))) == []
    st = FocusedState(theta, (Bang(A),), NegPhase(C))
    assert negative_phase(st) == [FocusedState(theta | {A}, (), NegPhase(C))]


def test_negative_phase_output_is_normal():
    st = FocusedState((), (Plus(A, Tensor(B, ONE)), Bang(C)), NegPhase(With(Limp(A, B), BOT)))
    out = negative_phase(st)
    assert len(out) == 4
    assert all(is_normal(x) for x in out)


def test_decide_examples():
    f = Limp(Bang(A), B)
    choices = decide(FocusedState({f}, (), NegPhase(B)))
    assert (Rule.DECIDE_L1, FocusedState({f}, (), LeftFocus(f, B))) in choices
    choices = decide(FocusedState((), (With(A, B),), NegPhase(None)))
    assert (Rule.DECIDE_L2, FocusedState((), (), LeftFocus(With(A, B), None))) in choices
    choices = decide(FocusedState((), (), NegPhase(p)))
    assert (Rule.DECIDE_R, FocusedState((), (), RightFocus(p))) in choices


def test_decide_order_and_bound():
    f = Limp(A, B)
    st = FocusedState({f, A}, (With(A, C),), NegPhase(Tensor(A, B)))
    rules = [r for r, _ in decide(st)]
    assert rules == [Rule.DECIDE_L2, Rule.DECIDE_R, Rule.DECIDE_L1]
    assert [r for r, _ in decide(st, {f: 2}, bound=2)] == [Rule.DECIDE_L2, Rule.DECIDE_R]
    with pytest.raises(ValueError):
        decide(FocusedState((), (Tensor(A, B),), NegPhase(A)))


def test_positive_phase_examples():
    assert positive_phase(FocusedState({p}, (), RightFocus(p))).provable
    assert positive_phase(FocusedState((), (), RightFocus(ONE))).provable
    res = positive_phase(FocusedState((), (A,), RightFocus(Bang(A))))
    assert res.verdict is Verdict.NOT_PROVABLE
    assert positive_phase(FocusedState((), (p,), LeftFocus(Limp(p, q), q))).provable


def test_saturate_examples():
    assert saturate_classical(frozenset({With(p, q)})) == {p, q}
    assert saturate_classical(frozenset({A, Limp(A, B)})) == {A, B, Limp(A, B)}
    assert saturate_classical(frozenset()) == frozenset()
    # components that are not positive stay under the &
    w = With(Limp(A, B), C)
    assert saturate_classical(frozenset({w})) == {w}


def test_saturate_does_not_undo_a_split():
    # the & produced by the implication is split and must stay split
    imp = Limp(A, With(B, Plus(C, A)))
    assert saturate_classical(frozenset({A, imp})) == {A, imp, B, Plus(C, A)}


@settings(max_examples=200, deadline=None)
@given(st.lists(ll_formulas(max_leaves=6, full_ll=False), max_size=4))
def test_saturate_is_idempotent(fs):
    once = saturate_classical(frozenset(fs))
    assert saturate_classical(once) == once


# -- checker -----------------------------------------------------------------


def _swap_init(pt: ProofTree, new) -> ProofTree:
    if pt.rule is Rule.INIT:
        return replace(pt, conclusion=FocusedState(pt.conclusion.theta, (), RightFocus(new)))
    return replace(pt, premises=tuple(_swap_init(x, new) for x in pt.premises))


def test_checker_examples():
    s = Sequent((), Limp(A, A))
    pt = prove(s).proof
    assert check_proof(pt, s)
    assert not check_proof(_swap_init(pt, B), s)
    assert not check_proof(pt, Sequent((), Limp(B, B)))


def test_checker_rejects_wrong_arity():
    s = Sequent((A, B), Tensor(A, B))
    pt = prove(s).proof
    bad = replace(pt, premises=pt.premises + pt.premises)
    assert not check_proof(bad, s)


def test_corpus_proofs_check():
    from illtp.kleene import generate_library
    for prob in generate_library():
        s = prob.to_sequent()
        res = prove(s, QUICK)
        if res.proof is not None:
            assert check_proof(res.proof, s), prob.name


# -- properties --------------------------------------------------------------


def decide_nodes_normal(pt: ProofTree) -> bool:
    return all(is_normal(n.conclusion) for n in pt.nodes() if n.rule in DECIDES)


def _lin(st: FocusedState) -> Counter:
    return Counter(st.gamma)


def resources_balance(pt: ProofTree) -> bool:
    """Every multiplicative split hands each linear formula to exactly one premise."""
    for n in pt.nodes():
        c = n.conclusion
        if n.rule in (Rule.TENSOR_R, Rule.LIMP_L):
            if _lin(c) != _lin(n.premises[0].conclusion) + _lin(n.premises[1].conclusion):
                return False
        elif n.rule in (Rule.ONE_R, Rule.BANG_R, Rule.BOT_L):
            if c.gamma:
                return False
        elif n.rule is Rule.INIT:
            atom = c.goal.focus
            if not (c.gamma == (atom,) or (not c.gamma and atom in c.theta)):
                return False
    return True


def _sample(seed: int, n: int, depth: int, bangs):
    rng = random.Random(seed)
    for _ in range(n):
        b = rng.random() < 0.5 if bangs is None else bangs
        yield random_sequent(rng, rng.randint(1, depth), bangs=b)


def test_soundness_normality_linearity():
    for s in _sample(11, 200, 6, None):
        res = proved(s)
        if res.proof is not None:
            assert decide_nodes_normal(res.proof), s
            assert resources_balance(res.proof), s
            assert res.proof.conclusion == FocusedState((), s.antecedent, NegPhase(s.succedent))


def test_extra_linear_resource_breaks_the_proof():
    for s in _sample(12, 200, 5, None):
        res = prove(s, QUICK)
        if res.proof is None:
            continue
        fat = Sequent(s.antecedent + (Atom("fresh"),), s.succedent)
        assert not check_proof(res.proof, fat)


def test_bang_free_agrees_with_naive_oracle():
    for s in _sample(13, 300, 5, False):
        assert all(bang_free(f) for f in s.antecedent)
        res = proved(s)
        assert res.verdict is not Verdict.UNKNOWN, s
        assert res.provable == naive_ill_provable(s), s


def test_saturation_does_not_change_verdicts():
    on = SearchLimits(timeout_ms=3_000)
    off = replace(on, saturate=False)
    for s in _sample(14, 200, 6, True):
        r1, r2 = proved(s, on), proved(s, off)
        if r1.verdict is not Verdict.UNKNOWN and r2.verdict is not Verdict.UNKNOWN:
            assert r1.verdict == r2.verdict, s


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(ll_formulas(max_leaves=6, full_ll=False), ll_formulas(max_leaves=6, full_ll=False))
def test_bang_equivalence(f, g):
    left, right = Bang(With(f, g)), Tensor(Bang(f), Bang(g))
    assert proved(Sequent((left,), right)).provable
    assert proved(Sequent((right,), left)).provable


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(ill_sequents(max_leaves=6))
def test_every_proof_checks(s):
    res = proved(s, SearchLimits(timeout_ms=5_000))
    if res.proof is not None:
        assert decide_nodes_normal(res.proof)


# -- limits ------------------------------------------------------------------


def test_cancellation_is_reported_as_timeout():
    res = prove(Sequent((Bang(A), Bang(Limp(Bang(A), B))), ZERO), SearchLimits(cancel=lambda: True))
    assert res.verdict is Verdict.UNKNOWN and res.reason is UnknownReason.TIMEOUT


def test_node_budget_is_deterministic():
    s = Sequent((Bang(A), Bang(Limp(Bang(A), B))), ZERO)
    runs = {prove(s, SearchLimits(max_nodes=5)).reason for _ in range(3)}
    assert runs == {UnknownReason.TIMEOUT}


@pytest.mark.parametrize("kw", [{"timeout_ms": 0}, {"decide_bound": 0}, {"max_depth": -1}, {"max_nodes": 0}])
def test_limits_must_be_positive(kw):
    with pytest.raises(ValueError):
        SearchLimits(**kw)


def test_larger_bound_finds_deeper_proofs():
    # !(a -o a * a), a |- a^5 needs four copies of the rule
    rule = Bang(Limp(A, Tensor(A, A)))
    goal = Tensor(A, Tensor(A, Tensor(A, Tensor(A, A))))
    s = Sequent((rule, A), goal)
    assert prove(s, SearchLimits(decide_bound=2)).verdict is Verdict.UNKNOWN
    assert proved(s, SearchLimits(decide_bound=4)).provable
