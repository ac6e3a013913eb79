"""Sequents of indexed assertions and the bounded-variable proof checker.

An assertion (A)[i,j] is a fusion-free formula tagged with two object
indices below the proof's bound (4 by default, configurable 1..8).  A proof
is a numbered list of sequents, each justified as an axiom or by one rule
applied to earlier lines.  The rules:

    axiom                Γ ∩ Δ nonempty
    cut r1 r2            from Γ => Δ, X  and  X, Γ' => Δ'  infer Γ,Γ' => Δ,Δ'
    weaken r             any superset sequent of line r
    orL r1 r2 / orR r    disjunction left / right
    andL r / andR r1 r2  conjunction left / right
    negL r / negR r      move (A)[i,j] across => as (~A)[j,i]
    impL r1 r2           from Γ => Δ, (A)[k,i] and Γ', (B)[k,j] => Δ'
                         infer Γ, Γ', (A->B)[i,j] => Δ, Δ'
    impR r k=<idx>       from Γ, (A)[k,i] => Δ, (B)[k,j] infer
                         Γ => Δ, (A->B)[i,j], provided k differs from i and j
                         and appears nowhere in Γ, Δ

Contexts are sets, so a cut (or other) assertion may legitimately survive in
the conclusion when it also occurs in a context; the checker tries every
reading.  For two-premise rules the reference order is immaterial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formulas import (
    Formula, Imp, And, Or, Neg, ParseError,
    desugar_fusion, is_core, parse_formula, print_formula, substitute,
)

__all__ = [
    "Assertion", "Sequent", "Proof", "CheckReport", "RuleError",
    "Axiom", "Cut", "Weaken", "OrL", "OrR", "AndL", "AndR",
    "NegL", "NegR", "ImpL", "ImpR", "Justification",
    "check_step", "check_proof", "permute_indices", "objects_level",
    "substitute_proof", "parse_proof_script", "format_proof_script",
    "NotABijection", "InvalidProof",
]

DEFAULT_BOUND = 4
MAX_BOUND = 8


@dataclass(frozen=True)
class Assertion:
    formula: Formula
    i: int
    j: int

    def __post_init__(self):
        if not is_core(self.formula):
            raise ValueError("assertions carry fusion-free formulas; desugar first")

    def key(self):
        return (print_formula(self.formula), self.i, self.j)

    def __str__(self) -> str:
        return f"({print_formula(self.formula)})[{self.i},{self.j}]"


@dataclass(frozen=True)
class Sequent:
    left: frozenset[Assertion]
    right: frozenset[Assertion]

    @staticmethod
    def of(left: Iterable[Assertion] = (), right: Iterable[Assertion] = ()) -> "Sequent":
        return Sequent(frozenset(left), frozenset(right))

    def indices(self) -> frozenset[int]:
        out = set()
        for a in self.left | self.right:
            out.add(a.i)
            out.add(a.j)
        return frozenset(out)

    def is_axiom(self) -> bool:
        return bool(self.left & self.right)

    def __str__(self) -> str:
        fmt = lambda side: ", ".join(str(a) for a in sorted(side, key=Assertion.key))
        return f"{fmt(self.left)} => {fmt(self.right)}".strip()


def is_axiom(s: Sequent) -> bool:
    """True when some assertion occurs on both sides (formula and indices equal)."""
    return s.is_axiom()


# ------------------------------------------------------------------
# Justifications
# ------------------------------------------------------------------

@dataclass(frozen=True)
class Axiom:
    pass


@dataclass(frozen=True)
class Cut:
    ref1: int
    ref2: int
    cut: Assertion | None = None  # scripts leave it implicit; combinators name it


@dataclass(frozen=True)
class Weaken:
    ref: int


@dataclass(frozen=True)
class OrL:
    ref1: int
    ref2: int


@dataclass(frozen=True)
class OrR:
    ref: int


@dataclass(frozen=True)
class AndL:
    ref: int


@dataclass(frozen=True)
class AndR:
    ref1: int
    ref2: int


@dataclass(frozen=True)
class NegL:
    ref: int


@dataclass(frozen=True)
class NegR:
    ref: int


@dataclass(frozen=True)
class ImpL:
    ref1: int
    ref2: int


@dataclass(frozen=True)
class ImpR:
    ref: int
    eigen: int


Justification = (Axiom | Cut | Weaken | OrL | OrR | AndL | AndR
                 | NegL | NegR | ImpL | ImpR)


@dataclass
class Proof:
    """A numbered proof; lines are (sequent, justification), refs are 1-based."""
    lines: list[tuple[Sequent, Justification]]
    bound: int = DEFAULT_BOUND
    goal: Formula | None = None

    def conclusion(self) -> Sequent:
        return self.lines[-1][0]

    def goal_sequent(self) -> Sequent | None:
        if self.goal is None:
            return None
        return Sequent.of((), (Assertion(desugar_fusion(self.goal), 0, 0),))


@dataclass
class CheckReport:
    valid: bool
    objects_used: frozenset[int]
    first_error: tuple[int, str] | None = None

    @property
    def level(self) -> int:
        return len(self.objects_used)


class RuleError(Exception):
    """A line that does not check; kind is one of BadRef, ShapeMismatch,
    EigenvariableViolation, IndexOutOfBound, NotAxiom."""

    def __init__(self, line: int, kind: str, detail: str = ""):
        self.line = line
        self.kind = kind
        self.detail = detail
        msg = f"line {line}: {kind}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NotABijection(ValueError):
    pass


class InvalidProof(ValueError):
    pass


# ------------------------------------------------------------------
# Rule checking
# ------------------------------------------------------------------

def _context_variants(side: frozenset, active: Assertion):
    # set semantics: the active assertion may or may not also belong to the
    # surrounding context, so either reading of the premise is legitimate
    return (side - {active}, side)


def _get(earlier: Sequence[Sequent], ref: int, line_no: int) -> Sequent:
    if not 1 <= ref <= len(earlier):
        raise RuleError(line_no, "BadRef", f"reference {ref} out of range")
    return earlier[ref - 1]


def _check_rule(concl: Sequent, just: Justification,
                earlier: Sequence[Sequent], line_no: int, bound: int) -> None:
    if isinstance(just, Axiom):
        if not concl.is_axiom():
            raise RuleError(line_no, "NotAxiom", "no assertion common to both sides")
        return

    if isinstance(just, Weaken):
        prem = _get(earlier, just.ref, line_no)
        if concl.left >= prem.left and concl.right >= prem.right:
            return
        raise RuleError(line_no, "ShapeMismatch", "not a superset of the premise")

    if isinstance(just, (NegL, NegR)):
        prem = _get(earlier, just.ref, line_no)
        principal_side = concl.left if isinstance(just, NegL) else concl.right
        prem_active_side = prem.right if isinstance(just, NegL) else prem.left
        for principal in principal_side:
            if not isinstance(principal.formula, Neg):
                continue
            active = Assertion(principal.formula.body, principal.j, principal.i)
            if active not in prem_active_side:
                continue
            for rest in _context_variants(prem_active_side, active):
                if isinstance(just, NegL):
                    if concl.left == prem.left | {principal} and concl.right == rest:
                        return
                else:
                    if concl.right == prem.right | {principal} and concl.left == rest:
                        return
        raise RuleError(line_no, "ShapeMismatch", "negation rule shape")

    if isinstance(just, (OrR, AndL)):
        prem = _get(earlier, just.ref, line_no)
        if isinstance(just, OrR):
            conn, principal_side, prem_side = Or, concl.right, prem.right
        else:
            conn, principal_side, prem_side = And, concl.left, prem.left
        for principal in principal_side:
            f = principal.formula
            if not isinstance(f, conn):
                continue
            a = Assertion(f.left, principal.i, principal.j)
            b = Assertion(f.right, principal.i, principal.j)
            if a not in prem_side or b not in prem_side:
                continue
            for rest_a in _context_variants(prem_side, a):
                for rest in _context_variants(rest_a, b):
                    got = rest | {principal}
                    if isinstance(just, OrR):
                        if concl.right == got and concl.left == prem.left:
                            return
                    else:
                        if concl.left == got and concl.right == prem.right:
                            return
        raise RuleError(line_no, "ShapeMismatch",
                        "orR/andL shape" if isinstance(just, OrR) else "andL shape")

    if isinstance(just, (OrL, AndR)):
        p1 = _get(earlier, just.ref1, line_no)
        p2 = _get(earlier, just.ref2, line_no)
        conn = Or if isinstance(just, OrL) else And
        principal_side = concl.left if isinstance(just, OrL) else concl.right
        for principal in principal_side:
            f = principal.formula
            if not isinstance(f, conn):
                continue
            a = Assertion(f.left, principal.i, principal.j)
            b = Assertion(f.right, principal.i, principal.j)
            for first, second in ((p1, p2), (p2, p1)):
                if isinstance(just, OrL):
                    if a not in first.left or b not in second.left:
                        continue
                    for v1 in _context_variants(first.left, a):
                        for v2 in _context_variants(second.left, b):
                            if (concl.left == v1 | v2 | {principal}
                                    and concl.right == first.right | second.right):
                                return
                else:
                    if a not in first.right or b not in second.right:
                        continue
                    for v1 in _context_variants(first.right, a):
                        for v2 in _context_variants(second.right, b):
                            if (concl.right == v1 | v2 | {principal}
                                    and concl.left == first.left | second.left):
                                return
        raise RuleError(line_no, "ShapeMismatch",
                        "orL shape" if isinstance(just, OrL) else "andR shape")

    if isinstance(just, ImpL):
        p1 = _get(earlier, just.ref1, line_no)
        p2 = _get(earlier, just.ref2, line_no)
        for principal in concl.left:
            f = principal.formula
            if not isinstance(f, Imp):
                continue
            i, j = principal.i, principal.j
            for first, second in ((p1, p2), (p2, p1)):
                for k in range(bound):
                    a = Assertion(f.left, k, i)
                    b = Assertion(f.right, k, j)
                    if a not in first.right or b not in second.left:
                        continue
                    for v1 in _context_variants(first.right, a):
                        for v2 in _context_variants(second.left, b):
                            if (concl.left == first.left | v2 | {principal}
                                    and concl.right == v1 | second.right):
                                return
        raise RuleError(line_no, "ShapeMismatch", "impL shape")

    if isinstance(just, ImpR):
        prem = _get(earlier, just.ref, line_no)
        k = just.eigen
        if not 0 <= k < bound:
            raise RuleError(line_no, "IndexOutOfBound", f"eigen index {k}")
        eigen_trouble = False
        for principal in concl.right:
            f = principal.formula
            if not isinstance(f, Imp):
                continue
            i, j = principal.i, principal.j
            a = Assertion(f.left, k, i)
            b = Assertion(f.right, k, j)
            if a not in prem.left or b not in prem.right:
                continue
            gamma = prem.left - {a}
            delta = prem.right - {b}
            if concl.left != gamma or concl.right != delta | {principal}:
                continue
            rest = Sequent(gamma, delta)
            if k == i or k == j or k in rest.indices():
                eigen_trouble = True
                continue
            return
        if eigen_trouble:
            raise RuleError(line_no, "EigenvariableViolation",
                            f"index {k} not fresh")
        raise RuleError(line_no, "ShapeMismatch", "impR shape")

    if isinstance(just, Cut):
        p1 = _get(earlier, just.ref1, line_no)
        p2 = _get(earlier, just.ref2, line_no)
        for prem_r, prem_l in ((p1, p2), (p2, p1)):
            if just.cut is not None:
                candidates = {just.cut}
            else:
                candidates = prem_r.right & prem_l.left
            for x in candidates:
                if x not in prem_r.right or x not in prem_l.left:
                    continue
                for v_r in _context_variants(prem_r.right, x):
                    for v_l in _context_variants(prem_l.left, x):
                        if (concl.left == prem_r.left | v_l
                                and concl.right == v_r | prem_l.right):
                            return
        raise RuleError(line_no, "ShapeMismatch", "cut shape")

    raise RuleError(line_no, "ShapeMismatch", f"unknown rule {just!r}")


def check_step(earlier: Sequence[Sequent], line: tuple[Sequent, Justification],
               bound: int = DEFAULT_BOUND) -> None:
    """Validate one line against earlier sequents; raises RuleError if bad."""
    concl, just = line
    line_no = len(earlier) + 1
    for idx in concl.indices():
        if not 0 <= idx < bound:
            raise RuleError(line_no, "IndexOutOfBound", f"index {idx}")
    _check_rule(concl, just, earlier, line_no, bound)


def check_proof(proof: Proof) -> CheckReport:
    """Check every line; reports rather than raising."""
    earlier: list[Sequent] = []
    objects: set[int] = set()
    first_error = None
    for n, line in enumerate(proof.lines, start=1):
        seq, _ = line
        objects |= seq.indices()
        if first_error is None:
            try:
                check_step(earlier, line, proof.bound)
            except RuleError as e:
                first_error = (n, f"{e.kind}: {e.detail}" if e.detail else e.kind)
        earlier.append(seq)
    if first_error is None and proof.goal is not None:
        target = proof.goal_sequent()
        if all(seq != target for seq, _ in proof.lines):
            first_error = (len(proof.lines), "GoalMissing")
    return CheckReport(valid=first_error is None,
                       objects_used=frozenset(objects),
                       first_error=first_error)


def objects_level(proof: Proof) -> int:
    """Number of distinct indices a valid proof uses (its L1..Ln class)."""
    report = check_proof(proof)
    if not report.valid:
        raise InvalidProof(f"proof does not check: {report.first_error}")
    return report.level


# ------------------------------------------------------------------
# Transformations
# ------------------------------------------------------------------

def permute_indices(proof: Proof, perm: dict[int, int]) -> Proof:
    """Apply a bijection on 0..bound-1 to every index, eigen indices included."""
    domain = set(range(proof.bound))
    if set(perm) != domain or set(perm.values()) != domain:
        raise NotABijection(f"{perm!r} is not a bijection on 0..{proof.bound - 1}")

    def redo_assertion(a: Assertion) -> Assertion:
        return Assertion(a.formula, perm[a.i], perm[a.j])

    def redo_sequent(s: Sequent) -> Sequent:
        return Sequent(frozenset(map(redo_assertion, s.left)),
                       frozenset(map(redo_assertion, s.right)))

    def redo_just(j: Justification) -> Justification:
        if isinstance(j, ImpR):
            return ImpR(j.ref, perm[j.eigen])
        if isinstance(j, Cut) and j.cut is not None:
            return Cut(j.ref1, j.ref2, redo_assertion(j.cut))
        return j

    # the goal lives at indices 0,0, so it survives only if 0 stays put
    goal = proof.goal if perm[0] == 0 else None
    return Proof(lines=[(redo_sequent(s), redo_just(j)) for s, j in proof.lines],
                 bound=proof.bound, goal=goal)


def substitute_proof(proof: Proof, mapping: dict[str, Formula]) -> Proof:
    """Instantiate a schematic proof; rule applications survive substitution."""
    core_map = {name: desugar_fusion(f) for name, f in mapping.items()}

    def redo_assertion(a: Assertion) -> Assertion:
        return Assertion(substitute(a.formula, core_map), a.i, a.j)

    def redo_sequent(s: Sequent) -> Sequent:
        return Sequent(frozenset(map(redo_assertion, s.left)),
                       frozenset(map(redo_assertion, s.right)))

    def redo_just(j: Justification) -> Justification:
        if isinstance(j, Cut) and j.cut is not None:
            return Cut(j.ref1, j.ref2, redo_assertion(j.cut))
        return j

    goal = substitute(proof.goal, mapping) if proof.goal is not None else None
    return Proof(lines=[(redo_sequent(s), redo_just(j)) for s, j in proof.lines],
                 bound=proof.bound, goal=goal)


# ------------------------------------------------------------------
# Proof scripts
# ------------------------------------------------------------------
#
# lemma <name> [: <formula>] [bound <n>]
# <k>. <sequent> ; <rule> [<refs>] [k=<idx>]
# with sequents written  (formula)[i,j], ... => ...

_ASSERTION_RE = re.compile(r"\s*\(")


def _split_assertions(side: str, offset: int) -> list[Assertion]:
    out = []
    pos = 0
    text = side
    while pos < len(text):
        while pos < len(text) and text[pos] in " \t,":
            pos += 1
        if pos >= len(text):
            break
        if text[pos] != "(":
            raise ParseError(offset + pos, "'(' starting an assertion", text[pos])
        depth = 0
        start = pos
        while pos < len(text):
            if text[pos] == "(":
                depth += 1
            elif text[pos] == ")":
                depth -= 1
                if depth == 0:
                    break
            pos += 1
        if depth != 0:
            raise ParseError(offset + start, "balanced parentheses")
        formula_text = text[start + 1:pos]
        pos += 1
        m = re.match(r"\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]", text[pos:])
        if not m:
            raise ParseError(offset + pos, "'[i,j]' after assertion formula")
        pos += m.end()
        f = desugar_fusion(parse_formula(formula_text))
        out.append(Assertion(f, int(m.group(1)), int(m.group(2))))
    return out


def _parse_sequent(text: str, offset: int) -> Sequent:
    if "=>" not in text:
        raise ParseError(offset, "'=>' separating the sequent sides")
    left_text, right_text = text.split("=>", 1)
    return Sequent.of(_split_assertions(left_text, offset),
                      _split_assertions(right_text, offset + len(left_text) + 2))


_RULES_ONE_REF = {"weaken": Weaken, "orR": OrR, "andL": AndL,
                  "negL": NegL, "negR": NegR}
_RULES_TWO_REF = {"cut": Cut, "orL": OrL, "andR": AndR, "impL": ImpL}


def _parse_justification(text: str, line_no: int, offset: int) -> Justification:
    parts = text.split()
    if not parts:
        raise ParseError(offset, "a rule name")
    name, args = parts[0], parts[1:]
    eigen = None
    refs = []
    for arg in args:
        m = re.fullmatch(r"k\s*=\s*(\d+)", arg)
        if m:
            eigen = int(m.group(1))
        elif re.fullmatch(r"\d+", arg):
            refs.append(int(arg))
        else:
            raise ParseError(offset, "a line reference or k=<idx>", arg)
    if name == "axiom":
        return Axiom()
    if name == "impR":
        if eigen is None:
            raise ParseError(offset, "k=<idx> on impR")
        ref = refs[0] if refs else line_no - 1
        return ImpR(ref, eigen)
    if name in _RULES_ONE_REF:
        ref = refs[0] if refs else line_no - 1
        return _RULES_ONE_REF[name](ref)
    if name in _RULES_TWO_REF:
        if len(refs) == 2:
            r1, r2 = refs
        elif not refs:
            r1, r2 = line_no - 2, line_no - 1
        else:
            raise ParseError(offset, f"zero or two references on {name}")
        return _RULES_TWO_REF[name](r1, r2)
    raise ParseError(offset, "a rule name", name)


def parse_proof_script(text: str) -> tuple[str, Proof]:
    """Parse the line-oriented script format; returns (lemma name, proof)."""
    name = None
    goal = None
    bound = DEFAULT_BOUND
    lines: list[tuple[Sequent, Justification]] = []
    offset = 0
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        offset += len(raw) + 1
        if not stripped:
            continue
        if stripped.startswith("lemma"):
            header = stripped[len("lemma"):].strip()
            m = re.match(r"(\S+)\s*(?::(.*?))?(?:\bbound\s+(\d+))?$", header)
            if not m:
                raise ParseError(offset, "lemma <name> [: <formula>] [bound <n>]")
            name = m.group(1)
            if m.group(2) and m.group(2).strip():
                goal = parse_formula(m.group(2).strip())
            if m.group(3):
                bound = int(m.group(3))
                if not 1 <= bound <= MAX_BOUND:
                    raise ParseError(offset, f"bound between 1 and {MAX_BOUND}")
            continue
        m = re.match(r"(\d+)\s*\.\s*(.*?)\s*;\s*(.*)$", stripped)
        if not m:
            raise ParseError(offset, "'<k>. <sequent> ; <rule>'")
        line_no = int(m.group(1))
        if line_no != len(lines) + 1:
            raise ParseError(offset, f"line number {len(lines) + 1}", m.group(1))
        seq = _parse_sequent(m.group(2), offset)
        just = _parse_justification(m.group(3), line_no, offset)
        lines.append((seq, just))
    if name is None:
        raise ParseError(0, "a 'lemma <name>' header")
    return name, Proof(lines=lines, bound=bound, goal=goal)


def _format_justification(j: Justification) -> str:
    if isinstance(j, Axiom):
        return "axiom"
    if isinstance(j, Weaken):
        return f"weaken {j.ref}"
    if isinstance(j, OrR):
        return f"orR {j.ref}"
    if isinstance(j, AndL):
        return f"andL {j.ref}"
    if isinstance(j, NegL):
        return f"negL {j.ref}"
    if isinstance(j, NegR):
        return f"negR {j.ref}"
    if isinstance(j, OrL):
        return f"orL {j.ref1} {j.ref2}"
    if isinstance(j, AndR):
        return f"andR {j.ref1} {j.ref2}"
    if isinstance(j, ImpL):
        return f"impL {j.ref1} {j.ref2}"
    if isinstance(j, Cut):
        return f"cut {j.ref1} {j.ref2}"
    if isinstance(j, ImpR):
        return f"impR {j.ref} k={j.eigen}"
    raise TypeError(f"not a justification: {j!r}")


def format_proof_script(name: str, proof: Proof) -> str:
    header = f"lemma {name}"
    if proof.goal is not None:
        header += f" : {print_formula(proof.goal)}"
    if proof.bound != DEFAULT_BOUND:
        header += f" bound {proof.bound}"
    out = [header]
    for n, (seq, just) in enumerate(proof.lines, start=1):
        out.append(f"{n}. {seq} ; {_format_justification(just)}")
    return "\n".join(out) + "\n"
