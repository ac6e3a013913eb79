import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tarl.formulas import Imp, Var, parse_formula
from tarl.registry import corpus_ids, get_corpus_entry
from tarl.sequents import (
    Assertion, Axiom, Cut, ImpR, NegR, NotABijection, OrR,
    Proof, RuleError, Sequent, Weaken, check_proof, check_step,
    format_proof_script, is_axiom, objects_level, parse_proof_script,
    permute_indices, substitute_proof,
)


def a(text, i, j):
    return Assertion(parse_formula(text), i, j)


def seq(left=(), right=()):
    return Sequent.of(left, right)


def test_assertions_must_be_core():
    with pytest.raises(ValueError):
        Assertion(parse_formula("p o q"), 0, 0)


def test_axiom_detection():
    assert is_axiom(seq([a("p", 0, 1)], [a("p", 0, 1)]))
    assert not is_axiom(seq([a("p", 0, 1)], [a("p", 1, 0)]))
    assert is_axiom(seq([a("a", 1, 0), a("b", 1, 0)], [a("b", 1, 0)]))


def test_impr_step_ok():
    prem = seq([a("a", 1, 0)], [a("a", 1, 0)])
    concl = seq([], [a("a -> a", 0, 0)])
    check_step([prem], (concl, ImpR(1, eigen=1)))  # no exception


def test_impr_eigenvariable_violation():
    # the eigen index recurs in the leftover context
    prem = seq([a("a", 1, 0), a("b", 1, 1)], [a("a", 1, 0)])
    concl = seq([a("b", 1, 1)], [a("a -> a", 0, 0)])
    with pytest.raises(RuleError) as e:
        check_step([prem], (concl, ImpR(1, eigen=1)))
    assert e.value.kind == "EigenvariableViolation"


def test_negr_transposes_indices():
    prem = seq([a("p", 0, 1)], [a("p", 0, 1)])
    good = seq([], [a("p", 0, 1), a("~p", 1, 0)])
    check_step([prem], (good, NegR(1)))
    bad = seq([], [a("p", 0, 1), a("~p", 0, 1)])
    with pytest.raises(RuleError) as e:
        check_step([prem], (bad, NegR(1)))
    assert e.value.kind == "ShapeMismatch"


def test_index_out_of_bound():
    concl = seq([a("p", 5, 0)], [a("p", 5, 0)])
    with pytest.raises(RuleError) as e:
        check_step([], (concl, Axiom()), bound=4)
    assert e.value.kind == "IndexOutOfBound"


def test_bad_ref():
    concl = seq([a("p", 0, 0)], [a("p", 0, 0)])
    with pytest.raises(RuleError) as e:
        check_step([], (concl, Weaken(3)))
    assert e.value.kind == "BadRef"


def test_not_axiom():
    with pytest.raises(RuleError) as e:
        check_step([], (seq([a("p", 0, 1)], [a("p", 1, 0)]), Axiom()))
    assert e.value.kind == "NotAxiom"


def test_cut_accepts_either_premise_order():
    p1 = seq([a("a", 1, 0), a("b", 1, 0)], [a("a & b", 1, 0)])
    p2 = seq([a("a & b", 1, 0)], [a("c", 1, 0)])
    concl = seq([a("a", 1, 0), a("b", 1, 0)], [a("c", 1, 0)])
    check_step([p1, p2], (concl, Cut(1, 2)))
    check_step([p2, p1], (concl, Cut(1, 2)))
    named = Cut(1, 2, a("a & b", 1, 0))
    check_step([p1, p2], (concl, named))


def test_weaken_supersets():
    prem = seq([a("p", 0, 0)], [a("q", 0, 0)])
    good = seq([a("p", 0, 0), a("r", 1, 0)], [a("q", 0, 0)])
    check_step([prem], (good, Weaken(1)))
    # equality counts as weakening: a rule may do nothing
    check_step([prem], (prem, Weaken(1)))
    with pytest.raises(RuleError):
        check_step([prem], (seq([], [a("q", 0, 0)]), Weaken(1)))


def test_check_proof_reports_and_never_raises():
    lines = [
        (seq([a("p", 0, 0)], [a("p", 0, 0)]), Axiom()),
        (seq([], [a("q", 0, 0)]), OrR(1)),  # wrong rule shape
    ]
    report = check_proof(Proof(lines=lines))
    assert not report.valid
    assert report.first_error[0] == 2
    assert report.objects_used == {0}


def test_goal_must_appear():
    lines = [(seq([a("p", 0, 0)], [a("p", 0, 0)]), Axiom())]
    report = check_proof(Proof(lines=lines, goal=parse_formula("p -> p")))
    assert not report.valid
    assert report.first_error[1] == "GoalMissing"


def test_objects_level_examples():
    assert objects_level(get_corpus_entry("t6").proof) == 1
    assert objects_level(get_corpus_entry("A4").proof) == 3
    assert objects_level(get_corpus_entry("t10").proof) == 4


def test_permute_identity_is_noop():
    proof = get_corpus_entry("A1").proof
    same = permute_indices(proof, {0: 0, 1: 1, 2: 2, 3: 3})
    assert same.lines == proof.lines


def test_permute_swap_conclusion():
    proof = get_corpus_entry("A1").proof
    swapped = permute_indices(proof, {0: 1, 1: 0, 2: 2, 3: 3})
    assert check_proof(swapped).valid
    target = Sequent.of((), (Assertion(Imp(Var("a"), Var("a")), 1, 1),))
    assert any(s == target for s, _ in swapped.lines)


def test_permute_rejects_non_bijection():
    proof = get_corpus_entry("A1").proof
    with pytest.raises(NotABijection):
        permute_indices(proof, {0: 0, 1: 0, 2: 2, 3: 3})


def test_permutation_invariance_over_corpus():
    rng = random.Random(7)
    for lemma in corpus_ids():
        proof = get_corpus_entry(lemma).proof
        perm = list(range(proof.bound))
        rng.shuffle(perm)
        mapping = dict(enumerate(perm))
        assert check_proof(permute_indices(proof, mapping)).valid


def test_weaken_insertion_keeps_validity():
    # duplicating any line via Weaken preserves a valid proof
    entry = get_corpus_entry("A2")
    lines = list(entry.proof.lines)
    dup_seq = lines[1][0]
    new_lines = lines[:2] + [(dup_seq, Weaken(2))]
    # shift references in the tail by one
    def shift(j):
        from tarl import sequents as sq
        if isinstance(j, (sq.Cut, sq.OrL, sq.AndR, sq.ImpL)):
            kind = type(j)
            r1 = j.ref1 + (j.ref1 >= 3)
            r2 = j.ref2 + (j.ref2 >= 3)
            return sq.Cut(r1, r2, j.cut) if isinstance(j, sq.Cut) else kind(r1, r2)
        if isinstance(j, sq.ImpR):
            return sq.ImpR(j.ref + (j.ref >= 3), j.eigen)
        if isinstance(j, sq.Axiom):
            return j
        return type(j)(j.ref + (j.ref >= 3))
    new_lines += [(s, shift(j)) for s, j in lines[2:]]
    assert check_proof(Proof(lines=new_lines, bound=4)).valid


def test_corpus_mutations_fail():
    from tarl import sequents as sq
    entry = get_corpus_entry("A4")
    lines = list(entry.proof.lines)
    # retarget a two-premise reference
    s, _ = lines[2]
    broken = lines.copy()
    broken[2] = (s, sq.ImpL(1, 1))
    assert not check_proof(Proof(lines=broken, bound=4)).valid
    # move the final eigenvariable onto an index that occurs in the premise
    s, j = lines[-1]
    broken = lines.copy()
    broken[-1] = (s, sq.ImpR(j.ref, 0))
    assert not check_proof(Proof(lines=broken, bound=4)).valid
    # drop an assertion from a conclusion
    s, j = lines[5]
    smaller = Sequent(s.left, frozenset(list(s.right)[1:]))
    broken = lines.copy()
    broken[5] = (smaller, j)
    assert not check_proof(Proof(lines=broken, bound=4)).valid


def test_substitution_preserves_validity():
    proof = get_corpus_entry("T12").proof
    inst = substitute_proof(proof, {"a": parse_formula("p o q"),
                                    "b": parse_formula("r | ~s")})
    assert check_proof(inst).valid


def test_script_roundtrip_over_corpus():
    for lemma in corpus_ids():
        proof = get_corpus_entry(lemma).proof
        text = format_proof_script(lemma, proof)
        name, again = parse_proof_script(text)
        assert name == lemma
        assert again.lines == proof.lines
        assert check_proof(again).valid


def test_script_rejects_misnumbered_lines():
    bad = "lemma x\n2. (p)[0,0] => (p)[0,0] ; axiom\n"
    with pytest.raises(Exception):
        parse_proof_script(bad)


def test_script_bound_header():
    text = ("lemma small : p -> p bound 2\n"
            "1. (p)[1,0] => (p)[1,0] ; axiom\n"
            "2. => (p -> p)[0,0] ; impR k=1\n")
    name, proof = parse_proof_script(text)
    assert proof.bound == 2
    assert check_proof(proof).valid
    wide = text.replace("[1,0]", "[3,0]").replace("k=1", "k=3")
    _, proof2 = parse_proof_script(wide)
    report = check_proof(proof2)
    assert not report.valid
    assert "IndexOutOfBound" in report.first_error[1]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(corpus_ids()), st.permutations(list(range(4))))
def test_permutation_invariance_property(lemma, perm):
    proof = get_corpus_entry(lemma).proof
    mapping = dict(enumerate(perm))
    assert check_proof(permute_indices(proof, mapping)).valid
