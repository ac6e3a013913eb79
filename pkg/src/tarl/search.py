"""Bounded backward proof search for the sequent calculus.

Backward chaining from the goal sequent.  Invertible steps (andL, orR,
negL, negR, and impR with the least unused index) are applied eagerly;
branching steps (orL, andR, impL over every candidate index) are explored
depth-first.  Cut is never applied.  Loops are detected on canonical forms
of sequents modulo index renaming, and every returned proof re-checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formulas import And, Formula, Imp, Neg, Or, desugar_fusion
from .sequents import (
    AndL, AndR, Assertion, Axiom, ImpL, ImpR, Justification, NegL, NegR,
    OrL, OrR, Proof, Sequent, check_proof,
)

__all__ = ["SearchBudget", "SearchOutcome", "search_proof"]


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 16
    max_index: int = 4
    max_nodes: int = 20000

    def __post_init__(self):
        if self.max_depth <= 0 or self.max_nodes <= 0:
            raise ValueError("budget fields must be positive")
        if not 1 <= self.max_index <= 8:
            raise ValueError("max_index must be within 1..8")


@dataclass
class SearchOutcome:
    status: str  # "proved" | "not_found" | "budget_exhausted"
    proof: Proof | None = None
    nodes: int = 0

    @property
    def proved(self) -> bool:
        return self.status == "proved"


class _Node:
    __slots__ = ("sequent", "rule", "children", "eigen")

    def __init__(self, sequent, rule, children=(), eigen=None):
        self.sequent = sequent
        self.rule = rule
        self.children = children
        self.eigen = eigen


class _Budget:
    def __init__(self, budget: SearchBudget):
        self.max_nodes = budget.max_nodes
        self.nodes = 0
        self.cutoff = False

    def tick(self) -> bool:
        self.nodes += 1
        return self.nodes <= self.max_nodes


_intern: dict = {}


def _fid(f: Formula) -> int:
    fid = _intern.get(f)
    if fid is None:
        fid = len(_intern)
        _intern[f] = fid
    return fid


def _canonical(seq: Sequent, max_index: int) -> tuple:
    """Least encoded form over all renamings of the used indices."""
    used = sorted(seq.indices())
    left = [(_fid(a.formula), a.i, a.j) for a in seq.left]
    right = [(_fid(a.formula), a.i, a.j) for a in seq.right]
    best = None
    for image in itertools.permutations(range(max_index), len(used)):
        ren = dict(zip(used, image))
        key = (tuple(sorted((f, ren[i], ren[j]) for (f, i, j) in left)),
               tuple(sorted((f, ren[i], ren[j]) for (f, i, j) in right)))
        if best is None or key < best:
            best = key
    return best


def _fresh_index(seq: Sequent, avoid: tuple[int, int], max_index: int) -> int | None:
    used = seq.indices()
    for k in range(max_index):
        if k not in used and k not in avoid:
            return k
    return None


def _invert(seq: Sequent, max_index: int):
    """One invertible backward step, or None."""
    for a in sorted(seq.left, key=Assertion.key):
        if isinstance(a.formula, And):
            new = Sequent(seq.left - {a}
                          | {Assertion(a.formula.left, a.i, a.j),
                             Assertion(a.formula.right, a.i, a.j)},
                          seq.right)
            return new, "andL", None
        if isinstance(a.formula, Neg):
            new = Sequent(seq.left - {a},
                          seq.right | {Assertion(a.formula.body, a.j, a.i)})
            return new, "negL", None
    for a in sorted(seq.right, key=Assertion.key):
        if isinstance(a.formula, Or):
            new = Sequent(seq.left,
                          seq.right - {a}
                          | {Assertion(a.formula.left, a.i, a.j),
                             Assertion(a.formula.right, a.i, a.j)})
            return new, "orR", None
        if isinstance(a.formula, Neg):
            new = Sequent(seq.left | {Assertion(a.formula.body, a.j, a.i)},
                          seq.right - {a})
            return new, "negR", None
    for a in sorted(seq.right, key=Assertion.key):
        if isinstance(a.formula, Imp):
            k = _fresh_index(seq, (a.i, a.j), max_index)
            if k is None:
                continue
            new = Sequent(seq.left | {Assertion(a.formula.left, k, a.i)},
                          seq.right - {a}
                          | {Assertion(a.formula.right, k, a.j)})
            return new, ("impR", a), k
    return None


def _branches(seq: Sequent, max_index: int):
    """Branching alternatives: each is (rule, principal, [subgoals], eigen)."""
    out = []
    for a in sorted(seq.left, key=Assertion.key):
        if isinstance(a.formula, Or):
            left = Sequent(seq.left - {a}
                           | {Assertion(a.formula.left, a.i, a.j)}, seq.right)
            right = Sequent(seq.left - {a}
                            | {Assertion(a.formula.right, a.i, a.j)}, seq.right)
            out.append(("orL", a, [left, right], None))
    for a in sorted(seq.right, key=Assertion.key):
        if isinstance(a.formula, And):
            left = Sequent(seq.left, seq.right - {a}
                           | {Assertion(a.formula.left, a.i, a.j)})
            right = Sequent(seq.left, seq.right - {a}
                            | {Assertion(a.formula.right, a.i, a.j)})
            out.append(("andR", a, [left, right], None))
    for a in sorted(seq.left, key=Assertion.key):
        if isinstance(a.formula, Imp):
            for k in range(max_index):
                p1 = Sequent(seq.left,
                             seq.right | {Assertion(a.formula.left, k, a.i)})
                p2 = Sequent(seq.left | {Assertion(a.formula.right, k, a.j)},
                             seq.right)
                out.append(("impL", a, [p1, p2], None))
    return out


def _prove(seq: Sequent, depth: int, seen: frozenset, budget: _Budget,
           max_index: int, fail_cache: dict) -> _Node | None:
    if not budget.tick():
        raise _OutOfNodes()
    if seq.is_axiom():
        return _Node(seq, "axiom")
    if depth <= 0:
        budget.cutoff = True
        return None
    key = _canonical(seq, max_index)
    if key in seen:
        return None
    if fail_cache.get(key, -1) >= depth:
        return None
    seen = seen | {key}

    step = _invert(seq, max_index)
    if step is not None:
        new, rule, eigen = step
        child = _prove(new, depth - 1, seen, budget, max_index, fail_cache)
        if child is not None:
            return _Node(seq, rule, (child,), eigen)
        fail_cache[key] = depth
        return None

    for rule, principal, subgoals, eigen in _branches(seq, max_index):
        children = []
        for sub in subgoals:
            child = _prove(sub, depth - 1, seen, budget, max_index, fail_cache)
            if child is None:
                children = None
                break
            children.append(child)
        if children is not None:
            return _Node(seq, (rule, principal), tuple(children), eigen)
    fail_cache[key] = depth
    return None


class _OutOfNodes(Exception):
    pass


def _linearize(node: _Node, lines: list, index: dict) -> int:
    if node.sequent in index:
        return index[node.sequent]
    child_refs = [_linearize(c, lines, index) for c in node.children]
    just = _make_justification(node, child_refs)
    lines.append((node.sequent, just))
    index[node.sequent] = len(lines)
    return len(lines)


def _make_justification(node: _Node, refs: list[int]) -> Justification:
    rule = node.rule
    if rule == "axiom":
        return Axiom()
    if rule == "andL":
        return AndL(refs[0])
    if rule == "negL":
        return NegL(refs[0])
    if rule == "orR":
        return OrR(refs[0])
    if rule == "negR":
        return NegR(refs[0])
    if isinstance(rule, tuple) and rule[0] == "impR":
        return ImpR(refs[0], node.eigen)
    kind, _principal = rule
    if kind == "orL":
        return OrL(refs[0], refs[1])
    if kind == "andR":
        return AndR(refs[0], refs[1])
    if kind == "impL":
        return ImpL(refs[0], refs[1])
    raise AssertionError(f"unknown search rule {rule!r}")


def search_proof(goal: Formula, budget: SearchBudget = SearchBudget()) -> SearchOutcome:
    """Search for a proof of => (goal)[0,0]; fusion is desugared first."""
    core = desugar_fusion(goal)
    root_seq = Sequent.of((), (Assertion(core, 0, 0),))
    tracker = _Budget(budget)
    fail_cache: dict = {}
    try:
        tree = _prove(root_seq, budget.max_depth, frozenset(), tracker,
                      budget.max_index, fail_cache)
    except _OutOfNodes:
        return SearchOutcome("budget_exhausted", nodes=tracker.nodes)
    if tree is None:
        status = "budget_exhausted" if tracker.cutoff else "not_found"
        return SearchOutcome(status, nodes=tracker.nodes)
    lines: list = []
    _linearize(tree, lines, {})
    proof = Proof(lines=lines, bound=budget.max_index, goal=goal)
    report = check_proof(proof)
    if not report.valid:  # pragma: no cover - soundness guard
        raise AssertionError(f"search produced a bad proof: {report.first_error}")
    return SearchOutcome("proved", proof=proof, nodes=tracker.nodes)
