"""Derived inference rules assembled from complete proofs.

Each combinator takes finished proofs of its premises and emits one fully
elaborated proof of its conclusion: input proofs are concatenated (permuting
indices first where the construction calls for a relabelled copy) and the
glue lines are appended with explicit references, so every output can be
re-checked line by line.  Nothing is trusted: inputs are checked on the way
in and outputs carry their conclusion as the goal.
"""

from __future__ import annotations

from .formulas import And, Formula, Imp, Neg, Or, desugar_fusion, print_formula
from .sequents import (
    AndR, Assertion, Axiom, Cut, ImpL, ImpR, NegL, NegR, OrL, Proof,
    Sequent, check_proof, permute_indices, substitute_proof,
)

__all__ = ["apply_derived_rule", "PremiseMismatch", "InvalidInput",
            "DERIVED_RULES", "conclusion_formula"]


class PremiseMismatch(ValueError):
    pass


class InvalidInput(ValueError):
    pass


def _a(f: Formula, i: int, j: int) -> Assertion:
    return Assertion(desugar_fusion(f), i, j)


def _seq(left=(), right=()) -> Sequent:
    return Sequent.of(left, right)


def conclusion_formula(proof: Proof) -> Formula:
    """The formula F with => (F)[0,0] proved, from the goal or last line."""
    if proof.goal is not None:
        return desugar_fusion(proof.goal)
    last = proof.conclusion()
    if last.left or len(last.right) != 1:
        raise PremiseMismatch("input proof does not end in => (F)[0,0]")
    (only,) = last.right
    if (only.i, only.j) != (0, 0):
        raise PremiseMismatch("input proof does not conclude at indices 0,0")
    return only.formula


def _admit(proof: Proof, what: str) -> Formula:
    report = check_proof(proof)
    if not report.valid:
        raise InvalidInput(f"{what} fails to check: {report.first_error}")
    f = conclusion_formula(proof)
    target = _seq((), (Assertion(f, 0, 0),))
    if all(seq != target for seq, _ in proof.lines):
        raise InvalidInput(f"{what} never derives => ({print_formula(f)})[0,0]")
    return f


class _Builder:
    """Accumulates lines; splicing an input proof offsets its references."""

    def __init__(self, bound: int):
        self.bound = bound
        self.lines: list[tuple[Sequent, object]] = []

    def splice(self, proof: Proof, target: Sequent) -> int:
        """Append a whole proof; return the 1-based line number of target."""
        offset = len(self.lines)
        found = None
        for seq, just in proof.lines:
            self.lines.append((seq, _shift(just, offset)))
            if seq == target:
                found = len(self.lines)
        if found is None:
            raise PremiseMismatch(f"spliced proof never derives {target}")
        return found

    def add(self, seq: Sequent, just) -> int:
        self.lines.append((seq, just))
        return len(self.lines)

    def done(self, goal: Formula) -> Proof:
        return Proof(lines=self.lines, bound=self.bound, goal=goal)


def _shift(just, offset: int):
    kind = type(just)
    if isinstance(just, (Cut, OrL, AndR, ImpL)):
        if isinstance(just, Cut):
            return Cut(just.ref1 + offset, just.ref2 + offset, just.cut)
        return kind(just.ref1 + offset, just.ref2 + offset)
    if isinstance(just, ImpR):
        return ImpR(just.ref + offset, just.eigen)
    if isinstance(just, Axiom):
        return just
    return kind(just.ref + offset)


def _goal_line(f: Formula) -> Sequent:
    return _seq((), (_a(f, 0, 0),))


def _need(condition: bool, message: str):
    if not condition:
        raise PremiseMismatch(message)


def _swap(proof: Proof, x: int, y: int) -> Proof:
    perm = {i: i for i in range(proof.bound)}
    perm[x], perm[y] = y, x
    return permute_indices(proof, perm)


def _max_bound(*proofs: Proof, at_least: int = 2) -> int:
    return max([at_least] + [p.bound for p in proofs])


# ------------------------------------------------------------------
# The rules
# ------------------------------------------------------------------

def _adjunction(pa: Proof, pb: Proof) -> Proof:
    fa, fb = _admit(pa, "first input"), _admit(pb, "second input")
    b = _Builder(_max_bound(pa, pb, at_least=1))
    la = b.splice(pa, _goal_line(fa))
    lb = b.splice(pb, _goal_line(fb))
    b.add(_goal_line(And(fa, fb)), AndR(la, lb))
    return b.done(And(fa, fb))


def _modusponens(pimp: Proof, pa: Proof) -> Proof:
    fimp, fa = _admit(pimp, "first input"), _admit(pa, "second input")
    _need(isinstance(fimp, Imp), "first input must prove an implication")
    _need(fimp.left == fa, "second input must prove the antecedent")
    fb = fimp.right
    b = _Builder(_max_bound(pimp, pa, at_least=1))
    limp = b.splice(pimp, _goal_line(fimp))
    la = b.splice(pa, _goal_line(fa))
    l3 = b.add(_seq((_a(fb, 0, 0),), (_a(fb, 0, 0),)), Axiom())
    l4 = b.add(_seq((_a(fimp, 0, 0),), (_a(fb, 0, 0),)), ImpL(la, l3))
    b.add(_goal_line(fb), Cut(limp, l4, _a(fimp, 0, 0)))
    return b.done(fb)


def _disjunctivesyllogism(por: Proof, pneg: Proof) -> Proof:
    forr, fneg = _admit(por, "first input"), _admit(pneg, "second input")
    _need(isinstance(forr, Or), "first input must prove a disjunction")
    _need(isinstance(fneg, Neg) and fneg.body == forr.left,
          "second input must prove the negated left disjunct")
    fa, fb = forr.left, forr.right
    b = _Builder(_max_bound(por, pneg, at_least=1))
    lor = b.splice(por, _goal_line(forr))
    lneg = b.splice(pneg, _goal_line(fneg))
    l1 = b.add(_seq((_a(fa, 0, 0),), (_a(fa, 0, 0),)), Axiom())
    l2 = b.add(_seq((_a(fb, 0, 0),), (_a(fb, 0, 0),)), Axiom())
    l3 = b.add(_seq((_a(forr, 0, 0),), (_a(fa, 0, 0), _a(fb, 0, 0))),
               OrL(l1, l2))
    l4 = b.add(_seq((), (_a(fa, 0, 0), _a(fb, 0, 0))),
               Cut(lor, l3, _a(forr, 0, 0)))
    l5 = b.add(_seq((_a(fneg, 0, 0),), (_a(fb, 0, 0),)), NegL(l4))
    b.add(_goal_line(fb), Cut(lneg, l5, _a(fneg, 0, 0)))
    return b.done(fb)


def _transitivity(p1: Proof, p2: Proof) -> Proof:
    f1, f2 = _admit(p1, "first input"), _admit(p2, "second input")
    _need(isinstance(f1, Imp) and isinstance(f2, Imp),
          "both inputs must prove implications")
    _need(f1.right == f2.left, "middle formulas must agree")
    fa, fb, fc = f1.left, f1.right, f2.right
    b = _Builder(_max_bound(p1, p2))
    l1 = b.splice(p1, _goal_line(f1))
    l2 = b.add(_seq((_a(fa, 1, 0),), (_a(fa, 1, 0),)), Axiom())
    l3 = b.add(_seq((_a(fb, 1, 0),), (_a(fb, 1, 0),)), Axiom())
    l4 = b.add(_seq((_a(f1, 0, 0), _a(fa, 1, 0)), (_a(fb, 1, 0),)),
               ImpL(l2, l3))
    l5 = b.add(_seq((_a(fa, 1, 0),), (_a(fb, 1, 0),)),
               Cut(l1, l4, _a(f1, 0, 0)))
    l6 = b.splice(p2, _goal_line(f2))
    l7 = b.add(_seq((_a(fb, 1, 0),), (_a(fb, 1, 0),)), Axiom())
    l8 = b.add(_seq((_a(fc, 1, 0),), (_a(fc, 1, 0),)), Axiom())
    l9 = b.add(_seq((_a(f2, 0, 0), _a(fb, 1, 0)), (_a(fc, 1, 0),)),
               ImpL(l7, l8))
    l10 = b.add(_seq((_a(fb, 1, 0),), (_a(fc, 1, 0),)),
                Cut(l6, l9, _a(f2, 0, 0)))
    l11 = b.add(_seq((_a(fa, 1, 0),), (_a(fc, 1, 0),)),
                Cut(l5, l10, _a(fb, 1, 0)))
    b.add(_goal_line(Imp(fa, fc)), ImpR(l11, 1))
    return b.done(Imp(fa, fc))


def _contraposition(p: Proof) -> Proof:
    f = _admit(p, "input")
    _need(isinstance(f, Imp), "input must prove an implication")
    fa, fb = f.left, f.right
    b = _Builder(_max_bound(p))
    l1 = b.splice(_swap(p, 0, 1), _seq((), (_a(f, 1, 1),)))
    l2 = b.add(_seq((_a(fa, 0, 1),), (_a(fa, 0, 1),)), Axiom())
    l3 = b.add(_seq((_a(fb, 0, 1),), (_a(fb, 0, 1),)), Axiom())
    l4 = b.add(_seq((_a(fa, 0, 1), _a(f, 1, 1)), (_a(fb, 0, 1),)),
               ImpL(l2, l3))
    l5 = b.add(_seq((_a(fa, 0, 1),), (_a(fb, 0, 1),)),
               Cut(l1, l4, _a(f, 1, 1)))
    l6 = b.add(_seq((), (_a(fb, 0, 1), _a(Neg(fa), 1, 0))), NegR(l5))
    l7 = b.add(_seq((_a(Neg(fb), 1, 0),), (_a(Neg(fa), 1, 0),)), NegL(l6))
    goal = Imp(Neg(fb), Neg(fa))
    b.add(_goal_line(goal), ImpR(l7, 1))
    return b.done(goal)


def _contraposition2(p: Proof) -> Proof:
    f = _admit(p, "input")
    _need(isinstance(f, Imp) and isinstance(f.right, Neg),
          "input must prove an implication with negated consequent")
    fa, fb = f.left, f.right.body
    b = _Builder(_max_bound(p))
    l1 = b.splice(_swap(p, 0, 1), _seq((), (_a(f, 1, 1),)))
    l2 = b.add(_seq((_a(fa, 0, 1),), (_a(fa, 0, 1),)), Axiom())
    l3 = b.add(_seq((_a(fb, 1, 0),), (_a(fb, 1, 0),)), Axiom())
    l4 = b.add(_seq((_a(Neg(fb), 0, 1), _a(fb, 1, 0)), ()), NegL(l3))
    l5 = b.add(_seq((_a(f, 1, 1), _a(fb, 1, 0), _a(fa, 0, 1)), ()),
               ImpL(l2, l4))
    l6 = b.add(_seq((_a(fb, 1, 0), _a(fa, 0, 1)), ()),
               Cut(l1, l5, _a(f, 1, 1)))
    l7 = b.add(_seq((_a(fb, 1, 0),), (_a(Neg(fa), 1, 0),)), NegR(l6))
    goal = Imp(fb, Neg(fa))
    b.add(_goal_line(goal), ImpR(l7, 1))
    return b.done(goal)


def _cutrule(p1: Proof, p2: Proof) -> Proof:
    f1, f2 = _admit(p1, "first input"), _admit(p2, "second input")
    _need(isinstance(f1, Imp) and isinstance(f1.left, And),
          "first premise must be a conjunction implication")
    _need(isinstance(f2, Imp) and isinstance(f2.right, Or),
          "second premise must imply a disjunction")
    fa, fb = f1.left.left, f1.left.right
    fc = f1.right
    _need(f2.left == fb and f2.right.left == fc and f2.right.right == fa,
          "premises must be A&B->C and B->C|A over matching formulas")
    b = _Builder(_max_bound(p1, p2))
    l1 = b.add(_seq((_a(fb, 1, 0),), (_a(fb, 1, 0),)), Axiom())
    l2 = b.add(_seq((_a(f2.right, 1, 0),), (_a(f2.right, 1, 0),)), Axiom())
    l3 = b.add(_seq((_a(f2, 0, 0), _a(fb, 1, 0)), (_a(f2.right, 1, 0),)),
               ImpL(l1, l2))
    l4 = b.splice(p2, _goal_line(f2))
    l5 = b.add(_seq((_a(fb, 1, 0),), (_a(f2.right, 1, 0),)),
               Cut(l4, l3, _a(f2, 0, 0)))
    l6 = b.add(_seq((_a(fc, 1, 0),), (_a(fc, 1, 0),)), Axiom())
    l7 = b.add(_seq((_a(fa, 1, 0),), (_a(fa, 1, 0),)), Axiom())
    l8 = b.add(_seq((_a(f2.right, 1, 0),), (_a(fc, 1, 0), _a(fa, 1, 0))),
               OrL(l6, l7))
    l9 = b.add(_seq((_a(fb, 1, 0),), (_a(fc, 1, 0), _a(fa, 1, 0))),
               Cut(l5, l8, _a(f2.right, 1, 0)))
    l10 = b.add(_seq((_a(f1.left, 1, 0),), (_a(f1.left, 1, 0),)), Axiom())
    l11 = b.add(_seq((_a(fc, 1, 0),), (_a(fc, 1, 0),)), Axiom())
    l12 = b.add(_seq((_a(f1, 0, 0), _a(f1.left, 1, 0)), (_a(fc, 1, 0),)),
                ImpL(l10, l11))
    l13 = b.splice(p1, _goal_line(f1))
    l14 = b.add(_seq((_a(f1.left, 1, 0),), (_a(fc, 1, 0),)),
                Cut(l13, l12, _a(f1, 0, 0)))
    l15 = b.add(_seq((_a(fa, 1, 0),), (_a(fa, 1, 0),)), Axiom())
    l16 = b.add(_seq((_a(fb, 1, 0),), (_a(fb, 1, 0),)), Axiom())
    l17 = b.add(_seq((_a(fa, 1, 0), _a(fb, 1, 0)), (_a(f1.left, 1, 0),)),
                AndR(l15, l16))
    l18 = b.add(_seq((_a(fa, 1, 0), _a(fb, 1, 0)), (_a(fc, 1, 0),)),
                Cut(l17, l14, _a(f1.left, 1, 0)))
    l19 = b.add(_seq((_a(fb, 1, 0),), (_a(fc, 1, 0),)),
                Cut(l9, l18, _a(fa, 1, 0)))
    goal = Imp(fb, fc)
    b.add(_goal_line(goal), ImpR(l19, 1))
    return b.done(goal)


def _erule(p: Proof, fb: Formula) -> Proof:
    fa = _admit(p, "input")
    fb = desugar_fusion(fb)
    b = _Builder(_max_bound(p))
    l1 = b.splice(_swap(p, 0, 1), _seq((), (_a(fa, 1, 1),)))
    l2 = b.add(_seq((_a(fb, 1, 0),), (_a(fb, 1, 0),)), Axiom())
    l3 = b.add(_seq((_a(Imp(fa, fb), 1, 0),), (_a(fb, 1, 0),)), ImpL(l1, l2))
    goal = Imp(Imp(fa, fb), fb)
    b.add(_goal_line(goal), ImpR(l3, 1))
    return b.done(goal)


def _suffixing(p: Proof, fc: Formula) -> Proof:
    f = _admit(p, "input")
    _need(isinstance(f, Imp), "input must prove an implication")
    fa, fb = f.left, f.right
    fc = desugar_fusion(fc)
    b = _Builder(_max_bound(p, at_least=3))
    l1 = b.splice(_swap(p, 0, 1), _seq((), (_a(f, 1, 1),)))
    l2 = b.add(_seq((_a(fa, 2, 1),), (_a(fa, 2, 1),)), Axiom())
    l3 = b.add(_seq((_a(fb, 2, 1),), (_a(fb, 2, 1),)), Axiom())
    l4 = b.add(_seq((_a(f, 1, 1), _a(fa, 2, 1)), (_a(fb, 2, 1),)),
               ImpL(l2, l3))
    l5 = b.add(_seq((_a(fc, 2, 0),), (_a(fc, 2, 0),)), Axiom())
    l6 = b.add(_seq((_a(Imp(fb, fc), 1, 0), _a(fb, 2, 1)), (_a(fc, 2, 0),)),
               ImpL(l3, l5))
    l7 = b.add(_seq((_a(fa, 2, 1),), (_a(fb, 2, 1),)),
               Cut(l1, l4, _a(f, 1, 1)))
    l8 = b.add(_seq((_a(Imp(fb, fc), 1, 0), _a(fa, 2, 1)), (_a(fc, 2, 0),)),
               Cut(l7, l6, _a(fb, 2, 1)))
    l9 = b.add(_seq((_a(Imp(fb, fc), 1, 0),), (_a(Imp(fa, fc), 1, 0),)),
               ImpR(l8, 2))
    goal = Imp(Imp(fb, fc), Imp(fa, fc))
    b.add(_goal_line(goal), ImpR(l9, 1))
    return b.done(goal)


def _cycling(p: Proof) -> Proof:
    f = _admit(p, "input")
    _need(isinstance(f, Imp) and isinstance(f.right, Imp),
          "input must prove A -> (B -> C)")
    fa, fb, fc = f.left, f.right.left, f.right.right
    fbc = f.right
    b = _Builder(_max_bound(p, at_least=3))
    l1 = b.add(_seq((_a(fa, 0, 2),), (_a(fa, 0, 2),)), Axiom())
    l2 = b.add(_seq((_a(fbc, 0, 2),), (_a(fbc, 0, 2),)), Axiom())
    l3 = b.add(_seq((_a(f, 2, 2), _a(fa, 0, 2)), (_a(fbc, 0, 2),)),
               ImpL(l1, l2))
    l4 = b.splice(_swap(p, 0, 2), _seq((), (_a(f, 2, 2),)))
    l5 = b.add(_seq((_a(fa, 0, 2),), (_a(fbc, 0, 2),)),
               Cut(l4, l3, _a(f, 2, 2)))
    l6 = b.add(_seq((_a(fb, 1, 0),), (_a(fb, 1, 0),)), Axiom())
    l7 = b.add(_seq((_a(fc, 1, 2),), (_a(fc, 1, 2),)), Axiom())
    l8 = b.add(_seq((_a(fbc, 0, 2), _a(fb, 1, 0)), (_a(fc, 1, 2),)),
               ImpL(l6, l7))
    l9 = b.add(_seq((_a(fa, 0, 2), _a(fb, 1, 0)), (_a(fc, 1, 2),)),
               Cut(l5, l8, _a(fbc, 0, 2)))
    l10 = b.add(_seq((_a(fb, 1, 0),), (_a(fc, 1, 2), _a(Neg(fa), 2, 0))),
                NegR(l9))
    l11 = b.add(_seq((_a(fb, 1, 0), _a(Neg(fc), 2, 1)), (_a(Neg(fa), 2, 0),)),
                NegL(l10))
    l12 = b.add(_seq((_a(fb, 1, 0),), (_a(Imp(Neg(fc), Neg(fa)), 1, 0),)),
                ImpR(l11, 2))
    goal = Imp(fb, Imp(Neg(fc), Neg(fa)))
    b.add(_goal_line(goal), ImpR(l12, 1))
    return b.done(goal)


def _prefixingR(p: Proof, fc: Formula) -> Proof:
    from .registry import get_corpus_entry

    f = _admit(p, "input")
    _need(isinstance(f, Imp), "input must prove an implication")
    fc = desugar_fusion(fc)
    schema = get_corpus_entry("prefixingA").proof
    instance = substitute_proof(schema, {"a": f.left, "b": f.right, "c": fc})
    return _modusponens(instance, p)


def _affixing(p1: Proof, p2: Proof) -> Proof:
    f1, f2 = _admit(p1, "first input"), _admit(p2, "second input")
    _need(isinstance(f1, Imp) and isinstance(f2, Imp),
          "both inputs must prove implications")
    return _transitivity(_suffixing(p1, f2.left), _prefixingR(p2, f1.left))


def _monotonicfusion(p1: Proof, p2: Proof) -> Proof:
    f1, f2 = _admit(p1, "first input"), _admit(p2, "second input")
    _need(isinstance(f1, Imp) and isinstance(f2, Imp),
          "both inputs must prove implications")
    fa, fb = f1.left, f1.right
    fc, fd = f2.left, f2.right
    contra_cd = _contraposition(p2)                      # ~D -> ~C
    step4 = _suffixing(p1, Neg(fd))                      # (B->~D) -> (A->~D)
    step5 = _prefixingR(contra_cd, fa)                   # (A->~D) -> (A->~C)
    step6 = _prefixingR(step5, Imp(fb, Neg(fd)))
    step7 = _modusponens(step6, step4)                   # (B->~D) -> (A->~C)
    return _contraposition(step7)                        # ~(A->~C) -> ~(B->~D)


DERIVED_RULES = {
    "adjunction": (_adjunction, 2, 0),
    "modusponens": (_modusponens, 2, 0),
    "disjunctivesyllogism": (_disjunctivesyllogism, 2, 0),
    "transitivity": (_transitivity, 2, 0),
    "contraposition": (_contraposition, 1, 0),
    "contraposition2": (_contraposition2, 1, 0),
    "cut": (_cutrule, 2, 0),
    "erule": (_erule, 1, 1),
    "suffixing": (_suffixing, 1, 1),
    "cycling": (_cycling, 1, 0),
    "prefixingR": (_prefixingR, 1, 1),
    "affixing": (_affixing, 2, 0),
    "monotonicfusion": (_monotonicfusion, 2, 0),
}


def apply_derived_rule(rule: str, inputs: list[Proof],
                       parameters: list[Formula] = ()) -> Proof:
    """Run a named combinator; the result re-checks and proves its goal."""
    if rule not in DERIVED_RULES:
        raise PremiseMismatch(f"unknown derived rule {rule!r}")
    fn, n_inputs, n_params = DERIVED_RULES[rule]
    if len(inputs) != n_inputs:
        raise PremiseMismatch(f"{rule} takes {n_inputs} input proof(s)")
    if len(parameters) != n_params:
        raise PremiseMismatch(f"{rule} takes {n_params} formula parameter(s)")
    out = fn(*inputs, *parameters)
    report = check_proof(out)
    if not report.valid:  # pragma: no cover - would be a construction bug
        raise AssertionError(f"combinator emitted a bad proof: {report.first_error}")
    return out
