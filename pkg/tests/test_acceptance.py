"""Acceptance suite: one test per release criterion, each printing a
PASS line (run with -s to see them).  Tolerances are exact set equality
and the stated wall-clock budgets; nothing is sampled where an exhaustive
sweep is required."""

import itertools
import random
import time

from tarl.algebra import (
    ComplexAlgebra, DERIVED_LAWS, ProperAlgebra, TARSKI_AXIOMS, check_chain,
    eval_term, get_law, holds_law, parse_chain, translate, verified_in_algebra,
)
from tarl.derived import apply_derived_rule
from tarl.formulas import Imp, Neg, Var, parse_formula, print_formula, variables
from tarl.gen import random_formula
from tarl.groups import PARTITIONS, build_atom_structure, check_sigma_homomorphism
from tarl.models import (
    SemanticWitness, Valuation, check_postulates, composition_table,
    find_invalidating_singletons, interpret, op_fusion, op_implies, op_neg,
    valid_in, variable_sharing_certificate,
)
from tarl.registry import (
    corpus_ids, data_dir, get_corpus_entry, get_formula, get_structure,
    list_corpus,
)
from tarl.sequents import (
    Assertion, Sequent, check_proof, parse_proof_script, substitute_proof,
)

K1 = get_structure("K1")
K2 = get_structure("K2")
K3 = get_structure("K3")
K4 = get_structure("K4")
K5 = get_structure("K5")
CK3, CK4, CK5 = (ComplexAlgebra(m) for m in (K3, K4, K5))


def done(n, label):
    print(f"criterion {n} ({label}): PASS")


def val(**kw):
    return Valuation({k: frozenset(v) for k, v in kw.items()})


def test_criterion_1_corpus_fidelity():
    t0 = time.perf_counter()
    for lemma in corpus_ids():
        text = (data_dir() / "corpus" / f"{lemma}.prf").read_text()
        name, proof = parse_proof_script(text)
        report = check_proof(proof)
        assert name == lemma
        assert report.valid, (lemma, report.first_error)
        expected = get_corpus_entry(lemma).expected_objects
        assert frozenset(report.objects_used) == expected, lemma
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"corpus took {elapsed:.2f}s"
    done(1, "corpus fidelity, 38/38 under 1s")


def test_criterion_2_derived_rules():
    P = lambda lemma, sub=None: (substitute_proof(get_corpus_entry(lemma).proof, sub)
                                 if sub else get_corpus_entry(lemma).proof)
    a, b, c, pp = (parse_formula(t) for t in ("a", "b", "c", "p -> p"))
    runs = [
        ("adjunction", [P("t6"), P("A1")], []),
        ("modusponens", [P("prefixingA", {"b": a}), P("A1")], []),
        ("transitivity", [P("A2"), P("A5")], []),
        ("contraposition", [P("A2")], []),
        ("contraposition2", [P("t3")], []),
        ("cut", [P("A3"), P("A5", {"a": b, "b": a})], []),
        ("erule", [P("t6")], [parse_formula("q")]),
        ("suffixing", [P("A2")], [c]),
        ("cycling", [P("t9")], []),
        ("prefixingR", [P("A2")], [c]),
        ("affixing", [P("A2"), P("A5")], []),
        ("monotonicfusion", [P("A2"), P("A5")], []),
    ]
    not_notpp = apply_derived_rule(
        "modusponens", [P("t3", {"a": pp}), P("A1", {"a": Var("p")})])
    flipped = apply_derived_rule(
        "modusponens", [P("comm1", {"b": pp, "a": Neg(pp)}), P("t6", {"a": pp})])
    runs.append(("disjunctivesyllogism", [flipped, not_notpp], []))
    seen = set()
    for rule, inputs, params in runs:
        out = apply_derived_rule(rule, inputs, params)
        assert check_proof(out).valid, rule
        seen.add(rule)
    assert len(seen) == 13
    # contraposition and the E-rule run on an index-swapped copy of their input
    contrap = apply_derived_rule("contraposition", [P("A2")])
    swapped = Sequent.of((), (Assertion(parse_formula("a & b -> a"), 1, 1),))
    assert any(s == swapped for s, _ in contrap.lines)
    erule_out = apply_derived_rule("erule", [P("t6")], [parse_formula("q")])
    swapped_a = Sequent.of((), (Assertion(parse_formula("a | ~a"), 1, 1),))
    assert any(s == swapped_a for s, _ in erule_out.lines)
    done(2, "13 derived-rule combinators re-check")


def test_criterion_3_kowalski_countermodel():
    A = get_formula("reflectionA").formula
    B = get_formula("reflectionB").formula
    refl = get_formula("reflection").formula
    v1 = val(p={"a"}, q={"a"}, s={"a"}, r={"b"})
    assert interpret(K1, v1, parse_formula("~s")) == {"0", "b", "b*"}
    assert interpret(K1, v1, parse_formula("p & ~s")) == frozenset()
    assert interpret(K1, v1, parse_formula("p o q")) == {"0", "a", "b"}
    assert interpret(K1, v1, parse_formula("s o r")) == {"b", "b*"}
    assert interpret(K1, v1, A) == {"b"}
    assert interpret(K1, v1, B) == frozenset()
    # the K2 walkthrough pins J(r) = {b*}, which forces J(A) = {b*}; the
    # one-line recap stating {b} is inconsistent with its own valuation
    # (no K2 valuation at all yields J(A)={b} with J(B)={}; see notes)
    v2 = val(p={"b"}, q={"b"}, s={"b*"}, r={"b*"})
    assert interpret(K2, v2, parse_formula("~s")) == {"0", "a", "b*"}
    assert interpret(K2, v2, parse_formula("p & ~s")) == frozenset()
    assert interpret(K2, v2, parse_formula("p o q")) == {"a", "b", "b*"}
    assert interpret(K2, v2, parse_formula("s o r")) == {"a", "b*"}
    assert interpret(K2, v2, parse_formula("q & (s o r)")) == frozenset()
    assert interpret(K2, v2, A) == {"b*"}
    assert interpret(K2, v2, B) == frozenset()
    assert not valid_in(K1, refl).valid
    assert not valid_in(K2, refl).valid
    for alg in (CK3, CK4, CK5):
        assert verified_in_algebra(alg, refl).passed
    entry = get_corpus_entry("reflection")
    report = check_proof(entry.proof)
    assert report.valid and report.objects_used == {0, 1, 2}
    done(3, "countermodel in K1/K2, validity in K3/K4/K5, 3-object proof")


def test_criterion_4_postulate_audits():
    reports = {name: check_postulates(get_structure(name))
               for name in ("K1", "K2", "K3", "K4", "K5")}
    for name in ("K1", "K2", "K3", "K4"):
        assert reports[name].passes(
            ["p1", "p2", "p3", "p4", "p5", "p6", "comm"]), name
    assert reports["K5"].passes(["p1", "p2", "p4", "p6", "p3prime", "p5prime"])
    assert not reports["K5"].flags["comm"]
    for name, r in reports.items():
        assert r.flags["normal"] and r.flags["crstar"], name
    assert not reports["K1"].flags["peirce"]
    assert reports["K1"].peirce_missing == (
        ("a", "a", "b*"), ("a", "b", "a"), ("b", "a", "a"))
    assert not reports["K2"].flags["peirce"]
    assert reports["K2"].peirce_missing == (("b*", "b*", "b"),)
    assert reports["K3"].flags["peirce"]
    done(4, "postulate audits match the published flags")


def test_criterion_5_k5_singleton_lists():
    expected = {
        "contra": [{"p": {"a"}, "q": {"b"}}, {"p": {"b"}, "q": {"b*"}},
                   {"p": {"b*"}, "q": {"a"}}],
        "perm": [{"p": {"a"}, "q": {"b"}, "r": {"a"}},
                 {"p": {"b*"}, "q": {"a"}, "r": {"a"}}],
        "suff": [{"p": {"0"}, "q": {"a"}, "r": {"a"}},
                 {"p": {"0"}, "q": {"b"}, "r": {"a"}},
                 {"p": {"b"}, "q": {"a"}, "r": {"a"}},
                 {"p": {"b"}, "q": {"b"}, "r": {"a"}}],
        "mp": [{"p": {"a"}, "q": {"a"}}, {"p": {"b"}, "q": {"a"}}],
    }
    for name, rows in expected.items():
        got = find_invalidating_singletons(K5, get_formula(name).formula)
        got_rows = [{k: set(v) for k, v in w.assignment.items()} for w in got]
        assert got_rows == rows, name
    done(5, "K5 invalidating singleton lists reproduced exactly")


def test_criterion_6_named_formula_semantics():
    t0 = time.perf_counter()
    for name in ("contra", "perm", "suff", "mp", "contr", "reduc"):
        f = get_formula(name).formula
        for m in (K1, K2, K3):
            assert valid_in(m, f).valid, (name, m.name)
    ming = get_formula("ming").formula
    for m in (K1, K2, K3):
        res = valid_in(m, ming)
        assert not res.valid
        assert res.witness.assignment == {"p": frozenset({"a"})}
        assert interpret(m, res.witness, ming) == frozenset()
    for name in ("contr", "reduc"):
        assert valid_in(K5, get_formula(name).formula).valid
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    done(6, "axiom validity pattern over K1-K3 and K5")


def test_criterion_7_variable_sharing():
    for entry in list_corpus():
        goal = entry.proof.goal
        if isinstance(goal, Imp):
            assert variables(goal.left) & variables(goal.right), entry.lemma_id
    rng = random.Random(777)
    for _ in range(200):
        a = random_formula(rng, rng.randint(1, 8), ["p", "q"])
        b = random_formula(rng, rng.randint(1, 8), ["r", "s"])
        cert = variable_sharing_certificate(a, b)
        assert isinstance(cert, SemanticWitness)
        assert cert.implication_value == frozenset()
    family_a = [frozenset({"a"}), frozenset({"0", "a"})]
    family_b = [frozenset({"a*"}), frozenset({"0", "a*"})]
    for family in (family_a, family_b):
        for x, y in itertools.product(family, repeat=2):
            assert op_fusion(K4, x, y) in family
            assert op_implies(K4, x, y) in family
            assert (x | y) in family and (x & y) in family
        for x in family:
            assert op_neg(K4, x) in family
    for x in family_a:
        for y in family_b:
            assert op_implies(K4, x, y) == frozenset()
    done(7, "variable sharing: corpus, 200 disjoint pairs, K4 closure table")


def test_criterion_8_group_construction():
    t0 = time.perf_counter()
    expected = composition_table(K3)
    for p in PARTITIONS:
        m = build_atom_structure(p)
        assert composition_table(m) == expected, p.id
        assert m.star == K3.star
        report = check_sigma_homomorphism(p)
        assert report.passed, (p.id, report.failures()[:2])
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    done(8, "8 partitions rebuild K3; sigma identities pass under 5s")


def test_criterion_9_algebra_laws():
    refleq = get_law("refleq")
    for alg in (CK3, CK4, CK5):
        assert holds_law(alg, refleq).passed
    for name, law in DERIVED_LAWS.items():
        for alg in (CK3, CK4, CK5):
            assert holds_law(alg, law).passed, name
    algs = {"K3": CK3, "K4": CK4, "K5": CK5}
    for chain in ("ra4", "ra7", "refleq"):
        steps = parse_chain((data_dir() / "chains" / f"{chain}.chain").read_text())
        report = check_chain(algs, steps)
        assert report.passed, chain
    for base in (2, 3, 4, 5):
        alg = ProperAlgebra(base)
        for name, law in TARSKI_AXIOMS.items():
            result = holds_law(alg, law, trials=1000, seed=base)
            assert result.passed, (base, name)
    done(9, "refleq + derived laws + chains on complexes; ra1-ra10 random")


def test_criterion_10_soundness_bridge():
    goals = [entry.proof.goal for entry in list_corpus()]
    for goal in goals:
        for alg in (CK3, CK4, CK5):
            result = verified_in_algebra(alg, goal)
            assert result.passed, (print_formula(goal), alg.describe())
    for base in (2, 3, 4, 5):
        alg = ProperAlgebra(base)
        for goal in goals:
            result = verified_in_algebra(alg, goal, trials=500, seed=base)
            assert result.passed, (print_formula(goal), base,
                                   result.counterexample)
    done(10, "every corpus theorem contains the identity, both routes")


def test_criterion_11_property_suites():
    from tarl.formulas import parse_formula as parse
    rng = random.Random(424242)
    for _ in range(10000):
        f = random_formula(rng, rng.randint(1, 14), ["p", "q", "r", "s"])
        assert parse(print_formula(f)) == f
    structures = (K1, K2, K3, K4, K5)
    for m in structures:
        subsets = [frozenset(c) for r in range(len(m.elements) + 1)
                   for c in itertools.combinations(m.elements, r)]
        for xs in subsets:
            for ys in subsets:
                assert op_implies(m, xs, ys) == op_neg(m, op_fusion(m, xs, op_neg(m, ys)))
        # distribution over union, exhaustive over all subset triples
        from tarl.models import tables_for
        t = tables_for(m)
        for x in range(t.size):
            row = t.fus[x]
            assert row[0] == 0 and t.fus[0][x] == 0
            for y in range(t.size):
                for z in range(t.size):
                    assert row[y | z] == row[y] | row[z]
                    assert t.fus[y | z][x] == t.fus[y][x] | t.fus[z][x]
    peircean = (K3, K4, K5)
    for _ in range(1000):
        f = random_formula(rng, rng.randint(1, 12), ["p", "q", "r"])
        term = translate(f)
        for m in peircean:
            subsets = [frozenset(), frozenset({"a"}), frozenset(m.elements)]
            env = {name: rng.choice(subsets) for name in ("p", "q", "r")}
            assert (interpret(m, Valuation(env), f)
                    == eval_term(ComplexAlgebra(m), env, term))
    done(11, "round trip x10000, duality/distribution, dual-route agreement")
