"""Finite ternary-relation structures and their subset algebras.

A structure is a finite set K with a ternary relation R, an involution *
and a distinguished element 0.  Subsets of K form an algebra under

    X o Y  = {z : R x y z for some x in X, y in Y}
    X -> Y = {z : whenever R z x y and x in X, y in Y}
    X*     = {x* : x in X}
    ~X     = K minus X*

and a formula is interpreted by structural recursion, with variables mapped
to subsets subject to heredity (truth propagates along R0-successors).  The
structure postulates (p1..p6 and friends) are audited, never assumed, so
deliberately defective structures can be represented and inspected.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .formulas import (
    And, Formula, Fusion, Imp, Neg, Or, ParseError, Var, variables,
)

__all__ = [
    "ModelStructure", "Valuation", "PostulateReport", "ValidityResult",
    "Shared", "SemanticWitness", "ClosureViolation", "UnassignedVariable",
    "TooManyValuations", "Unsupported",
    "structure_from_table", "composition_table",
    "op_fusion", "op_implies", "op_star", "op_neg",
    "interpret", "verified", "valid_in", "find_invalidating_singletons",
    "is_hereditary", "hereditary_subsets", "check_postulates",
    "variable_sharing_certificate", "enumerate_structures",
    "load_model_file", "dump_model_file",
    "POSTULATE_NAMES",
]

DEFAULT_VALUATION_CAP = 2 ** 20

POSTULATE_NAMES = ("p1", "p2", "p3", "p4", "p5", "p6",
                   "comm", "p3prime", "p5prime", "normal", "crstar", "peirce")


class UnassignedVariable(KeyError):
    pass


class TooManyValuations(ValueError):
    pass


class Unsupported(ValueError):
    pass


class ClosureViolation(AssertionError):
    pass


@dataclass
class ModelStructure:
    name: str
    elements: tuple[str, ...]
    zero: str
    star: dict[str, str]
    triples: frozenset[tuple[str, str, str]]
    _tables: "_Tables | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.zero not in self.elements:
            raise ValueError("zero must be an element")
        if set(self.star) != set(self.elements):
            raise ValueError("star must be a total map on the elements")
        for t in self.triples:
            for e in t:
                if e not in self.elements:
                    raise ValueError(f"triple {t} mentions unknown element {e}")

    def index(self, e: str) -> int:
        return self.elements.index(e)

    def has(self, a: str, b: str, c: str) -> bool:
        return (a, b, c) in self.triples

    def same_as(self, other: "ModelStructure") -> bool:
        """Equality up to renaming nothing: same elements, star, 0, triples."""
        return (self.elements == other.elements and self.zero == other.zero
                and self.star == other.star and self.triples == other.triples)


def structure_from_table(name: str, elements: tuple[str, ...], zero: str,
                         star: dict[str, str],
                         table: list[list[set[str]]]) -> ModelStructure:
    """Build a structure from its singleton composition table."""
    triples = set()
    for x, row in zip(elements, table):
        for y, cell in zip(elements, row):
            for z in cell:
                triples.add((x, y, z))
    return ModelStructure(name, tuple(elements), zero, dict(star),
                          frozenset(triples))


def composition_table(m: ModelStructure) -> dict[tuple[str, str], frozenset[str]]:
    """Derived view: (x, y) -> {x} o {y}."""
    out = {}
    for x in m.elements:
        for y in m.elements:
            out[(x, y)] = frozenset(z for z in m.elements if m.has(x, y, z))
    return out


# ------------------------------------------------------------------
# Bitmask tables; subsets of K are masks over the element order
# ------------------------------------------------------------------

class _Tables:
    def __init__(self, m: ModelStructure):
        n = len(m.elements)
        if n > 10:
            raise TooManyValuations(f"{n} elements is beyond table support")
        self.n = n
        size = 1 << n
        self.size = size
        self.all_mask = size - 1
        self.zero_bit = m.index(m.zero)
        idx = {e: i for i, e in enumerate(m.elements)}
        single = [[0] * n for _ in range(n)]
        for (x, y, z) in m.triples:
            single[idx[x]][idx[y]] |= 1 << idx[z]
        fus = [[0] * size for _ in range(size)]
        for mx in range(size):
            for my in range(size):
                acc = 0
                for i in range(n):
                    if mx >> i & 1:
                        row = single[i]
                        for j in range(n):
                            if my >> j & 1:
                                acc |= row[j]
                fus[mx][my] = acc
        star = [0] * size
        for mk in range(size):
            acc = 0
            for i in range(n):
                if mk >> i & 1:
                    acc |= 1 << idx[m.star[m.elements[i]]]
            star[mk] = acc
        neg = [self.all_mask ^ s for s in star]
        # z is in X->Y iff every pair (x, y) with R z x y and x in X has y in Y
        pairs_by_z = [[] for _ in range(n)]
        for (a, b, c) in m.triples:
            pairs_by_z[idx[a]].append((idx[b], idx[c]))
        req = [[0] * size for _ in range(n)]
        for z in range(n):
            for mx in range(size):
                acc = 0
                for (x, y) in pairs_by_z[z]:
                    if mx >> x & 1:
                        acc |= 1 << y
                req[z][mx] = acc
        imp = [[0] * size for _ in range(size)]
        for mx in range(size):
            for my in range(size):
                acc = 0
                for z in range(n):
                    if req[z][mx] & ~my & self.all_mask == 0:
                        acc |= 1 << z
                imp[mx][my] = acc
        self.fus = fus
        self.imp = imp
        self.star_mask = star
        self.neg = neg
        self.fus_np = np.array(fus, dtype=np.int64)
        self.imp_np = np.array(imp, dtype=np.int64)
        self.star_np = np.array(star, dtype=np.int64)
        self.neg_np = np.array(neg, dtype=np.int64)

    def mask_of(self, m: ModelStructure, subset) -> int:
        acc = 0
        for e in subset:
            acc |= 1 << m.index(e)
        return acc

    def subset_of(self, m: ModelStructure, mask: int) -> frozenset[str]:
        return frozenset(e for i, e in enumerate(m.elements) if mask >> i & 1)


def tables_for(m: ModelStructure) -> _Tables:
    if m._tables is None:
        m._tables = _Tables(m)
    return m._tables


# ------------------------------------------------------------------
# Subset operations (public, set-valued)
# ------------------------------------------------------------------

def op_fusion(m: ModelStructure, xs, ys) -> frozenset[str]:
    xs, ys = set(xs), set(ys)
    return frozenset(z for (a, b, z) in m.triples if a in xs and b in ys)


def op_implies(m: ModelStructure, xs, ys) -> frozenset[str]:
    xs, ys = set(xs), set(ys)
    out = []
    for z in m.elements:
        if all(not (a == z and b in xs and c not in ys)
               for (a, b, c) in m.triples):
            out.append(z)
    return frozenset(out)


def op_star(m: ModelStructure, xs) -> frozenset[str]:
    return frozenset(m.star[x] for x in xs)


def op_neg(m: ModelStructure, xs) -> frozenset[str]:
    return frozenset(m.elements) - op_star(m, xs)


# ------------------------------------------------------------------
# Valuations and interpretation
# ------------------------------------------------------------------

@dataclass
class Valuation:
    assignment: dict[str, frozenset[str]]

    def __str__(self) -> str:
        items = []
        for v in sorted(self.assignment):
            inner = ",".join(sorted(self.assignment[v]))
            items.append(f"{v}->{{{inner}}}")
        return " ".join(items)


def is_hereditary(m: ModelStructure, v: Valuation) -> bool:
    """Heredity: if R 0 a b and a is in J(p) then b is in J(p)."""
    succ = [(b, c) for (a, b, c) in m.triples if a == m.zero]
    return all(not (a in val and b not in val)
               for val in v.assignment.values() for (a, b) in succ)


def hereditary_subsets(m: ModelStructure) -> list[int]:
    """Masks closed under R0-successors, ascending (lexicographic) order."""
    t = tables_for(m)
    succ = [(m.index(b), m.index(c)) for (a, b, c) in m.triples if a == m.zero]
    out = []
    for mask in range(t.size):
        if all(not (mask >> a & 1 and not mask >> b & 1) for (a, b) in succ):
            out.append(mask)
    return out


def _interpret_mask(f: Formula, env: dict[str, int], t: _Tables) -> int:
    if isinstance(f, Var):
        if f.name not in env:
            raise UnassignedVariable(f.name)
        return env[f.name]
    if isinstance(f, Neg):
        return t.neg[_interpret_mask(f.body, env, t)]
    if isinstance(f, And):
        return _interpret_mask(f.left, env, t) & _interpret_mask(f.right, env, t)
    if isinstance(f, Or):
        return _interpret_mask(f.left, env, t) | _interpret_mask(f.right, env, t)
    if isinstance(f, Imp):
        return t.imp[_interpret_mask(f.left, env, t)][_interpret_mask(f.right, env, t)]
    if isinstance(f, Fusion):
        return t.fus[_interpret_mask(f.left, env, t)][_interpret_mask(f.right, env, t)]
    raise TypeError(f"not a formula: {f!r}")


def interpret(m: ModelStructure, v: Valuation, f: Formula) -> frozenset[str]:
    """J(f): the set of elements where f holds; fusion is interpreted directly."""
    t = tables_for(m)
    env = {name: t.mask_of(m, val) for name, val in v.assignment.items()}
    return t.subset_of(m, _interpret_mask(f, env, t))


def verified(m: ModelStructure, v: Valuation, f: Formula) -> bool:
    return m.zero in interpret(m, v, f)


def _interpret_vec(f: Formula, env: dict[str, np.ndarray], t: _Tables) -> np.ndarray:
    if isinstance(f, Var):
        if f.name not in env:
            raise UnassignedVariable(f.name)
        return env[f.name]
    if isinstance(f, Neg):
        return t.neg_np[_interpret_vec(f.body, env, t)]
    if isinstance(f, And):
        return _interpret_vec(f.left, env, t) & _interpret_vec(f.right, env, t)
    if isinstance(f, Or):
        return _interpret_vec(f.left, env, t) | _interpret_vec(f.right, env, t)
    if isinstance(f, Imp):
        return t.imp_np[_interpret_vec(f.left, env, t), _interpret_vec(f.right, env, t)]
    if isinstance(f, Fusion):
        return t.fus_np[_interpret_vec(f.left, env, t), _interpret_vec(f.right, env, t)]
    raise TypeError(f"not a formula: {f!r}")


def _valuation_grid(names: list[str], allowed: list[int],
                    cap: int) -> dict[str, np.ndarray]:
    """Columns for every assignment of allowed masks, first name most
    significant, so row order is the lexicographic order of assignments."""
    base = len(allowed)
    total = base ** len(names)
    if total > cap:
        raise TooManyValuations(f"{total} valuations exceeds cap {cap}")
    allowed_np = np.array(allowed, dtype=np.int64)
    rows = np.arange(total)
    env = {}
    for pos, name in enumerate(names):
        stride = base ** (len(names) - 1 - pos)
        env[name] = allowed_np[(rows // stride) % base]
    return env


@dataclass
class ValidityResult:
    valid: bool
    witness: Valuation | None = None

    def __bool__(self) -> bool:
        return self.valid


def valid_in(m: ModelStructure, f: Formula,
             cap: int = DEFAULT_VALUATION_CAP) -> ValidityResult:
    """Exhaustive check over every heredity-closed valuation."""
    t = tables_for(m)
    names = sorted(variables(f))
    allowed = hereditary_subsets(m)
    if not names:
        env: dict[str, np.ndarray] = {}
        value = _interpret_mask(f, {}, t)
        ok = bool(value >> t.zero_bit & 1)
        return ValidityResult(ok, None if ok else Valuation({}))
    env = _valuation_grid(names, allowed, cap)
    value = _interpret_vec(f, env, t)
    failing = np.nonzero((value >> t.zero_bit & 1) == 0)[0]
    if failing.size == 0:
        return ValidityResult(True)
    row = int(failing[0])
    witness = Valuation({name: t.subset_of(m, int(env[name][row]))
                         for name in names})
    return ValidityResult(False, witness)


def find_invalidating_singletons(m: ModelStructure, f: Formula) -> list[Valuation]:
    """All singleton-valued valuations sending the whole formula to the
    empty set, in lexicographic order of the assignments."""
    t = tables_for(m)
    names = sorted(variables(f))
    singles = [1 << i for i in range(t.n)]
    hered = set(hereditary_subsets(m))
    out = []
    for combo in itertools.product(singles, repeat=len(names)):
        if any(mask not in hered for mask in combo):
            continue
        env = dict(zip(names, combo))
        if _interpret_mask(f, env, t) == 0:
            out.append(Valuation({name: t.subset_of(m, mask)
                                  for name, mask in env.items()}))
    return out


# ------------------------------------------------------------------
# Postulate audit
# ------------------------------------------------------------------

@dataclass
class PostulateReport:
    flags: dict[str, bool]
    witnesses: dict[str, tuple]
    peirce_missing: tuple[tuple[str, str, str], ...]

    def passes(self, names) -> bool:
        return all(self.flags[n] for n in names)


def check_postulates(m: ModelStructure) -> PostulateReport:
    """Decide every postulate by exhaustive quantification; witnesses are the
    lexicographically least failures in element order."""
    elems = m.elements
    order = {e: i for i, e in enumerate(elems)}
    R = m.triples
    star = m.star
    zero = m.zero

    def r2(a, b, c, d):
        return any((a, b, x) in R and (x, c, d) in R for x in elems)

    def r2_assoc(a, b, c, d):
        return any((b, c, x) in R and (a, x, d) in R for x in elems)

    flags: dict[str, bool] = {}
    witnesses: dict[str, tuple] = {}

    def record(name, witness):
        if name not in witnesses:
            flags[name] = False
            witnesses[name] = witness

    for name in POSTULATE_NAMES:
        flags[name] = True

    for a in elems:
        if (zero, a, a) not in R:
            record("p1", (a,))
        if (a, a, a) not in R:
            record("p2", (a,))
        if star[star[a]] != a:
            record("p6", (a,))
    if star[zero] != zero:
        record("normal", (zero,))
    for a in elems:
        for b in elems:
            have = (zero, a, b) in R
            if have != (a == b):
                record("crstar", (a, b))
    for (a, b, c) in sorted(R, key=lambda t: tuple(order[e] for e in t)):
        if (a, star[c], star[b]) not in R:
            record("p5", (a, b, c))
        if (star[c], a, star[b]) not in R:
            record("p5prime", (a, b, c))
        if (b, a, c) not in R:
            record("comm", (a, b, c))
    for a, b, c, d in itertools.product(elems, repeat=4):
        if r2(a, b, c, d):
            if not r2(a, c, b, d):
                record("p3", (a, b, c, d))
            if not r2_assoc(a, b, c, d):
                record("p3prime", (a, b, c, d))
    for a, b, c in itertools.product(elems, repeat=3):
        if r2(zero, a, b, c) and (a, b, c) not in R:
            record("p4", (a, b, c))
    missing = set()
    for (x, y, z) in R:
        image = (z, star[y], x)
        if image not in R:
            flags["peirce"] = False
            missing.add(image)
    if missing and "peirce" not in witnesses:
        witnesses["peirce"] = min(
            (t for t in missing), key=lambda t: tuple(order[e] for e in t))
    missing_sorted = tuple(sorted(missing,
                                  key=lambda t: tuple(order[e] for e in t)))
    return PostulateReport(flags, witnesses, missing_sorted)


# ------------------------------------------------------------------
# Variable sharing certificate
# ------------------------------------------------------------------

@dataclass
class Shared:
    variables: frozenset[str]


@dataclass
class SemanticWitness:
    structure: str
    valuation: Valuation
    left_value: frozenset[str]
    right_value: frozenset[str]
    implication_value: frozenset[str]


def variable_sharing_certificate(a: Formula, b: Formula):
    """Shared variables, or else the canonical refuting valuation on K4."""
    from .registry import get_structure  # deferred; registry builds on models

    shared = variables(a) & variables(b)
    if shared:
        return Shared(frozenset(shared))
    k4 = get_structure("K4")
    assignment = {}
    vars_a = variables(a)
    for name in sorted(vars_a | variables(b)):
        assignment[name] = frozenset({"a"} if name in vars_a else {"a*"})
    v = Valuation(assignment)
    ja = interpret(k4, v, a)
    jb = interpret(k4, v, b)
    jimp = interpret(k4, v, Imp(a, b))
    if ja not in (frozenset({"a"}), frozenset({"0", "a"})):
        raise ClosureViolation(f"left value {set(ja)} escaped the closure")
    if jb not in (frozenset({"a*"}), frozenset({"0", "a*"})):
        raise ClosureViolation(f"right value {set(jb)} escaped the closure")
    if jimp:
        raise ClosureViolation(f"implication value {set(jimp)} is not empty")
    return SemanticWitness("K4", v, ja, jb, jimp)


# ------------------------------------------------------------------
# Structure enumeration (auditable brute force, sizes 2..3)
# ------------------------------------------------------------------

def _involutions(n: int, fix_zero: bool):
    def go(rest, acc):
        if not rest:
            yield dict(acc)
            return
        a = rest[0]
        yield from go(rest[1:], acc + [(a, a)])
        for b in rest[1:]:
            yield from go([x for x in rest[1:] if x != b], acc + [(a, b), (b, a)])
    items = list(range(n))
    if fix_zero:
        for s in go(items[1:], [(0, 0)]):
            yield s
    else:
        yield from go(items, [])


def enumerate_structures(size: int, required, force: bool = False):
    """Yield every structure on `size` elements whose audit passes the
    required postulates.  Exhaustive over the raw encoding (no isomorphism
    reduction); star maps and triple sets are backtracked with p1/p2/crstar
    seeding and orbit closure for p5/p5'/comm."""
    required = frozenset(required)
    unknown = required - set(POSTULATE_NAMES)
    if unknown:
        raise ValueError(f"unknown postulates: {sorted(unknown)}")
    if size > 3 and not force:
        raise Unsupported("sizes above 3 need force=True")
    elems = tuple(str(i) for i in range(size))
    idx = range(size)
    count = 0
    for star in _involutions(size, fix_zero=("normal" in required)):
        forced_in = set()
        forced_out = set()
        if "p1" in required or "crstar" in required:
            forced_in |= {(0, a, a) for a in idx}
        if "p2" in required:
            forced_in |= {(a, a, a) for a in idx}
        if "crstar" in required:
            forced_out |= {(0, a, b) for a in idx for b in idx if a != b}
        transforms = []
        if "p5" in required:
            transforms.append(lambda t: (t[0], star[t[2]], star[t[1]]))
        if "p5prime" in required:
            transforms.append(lambda t: (star[t[2]], t[0], star[t[1]]))
        if "comm" in required:
            transforms.append(lambda t: (t[1], t[0], t[2]))
        all_triples = list(itertools.product(idx, repeat=3))
        orbit_of = {}
        orbits = []
        for t in all_triples:
            if t in orbit_of:
                continue
            orbit = {t}
            frontier = [t]
            while frontier:
                cur = frontier.pop()
                for tr in transforms:
                    nxt = tr(cur)
                    if nxt not in orbit:
                        orbit.add(nxt)
                        frontier.append(nxt)
            orbits.append(frozenset(orbit))
            for u in orbit:
                orbit_of[u] = orbit
        fixed_in = []
        free = []
        conflict = False
        for orbit in orbits:
            has_in = bool(orbit & forced_in)
            has_out = bool(orbit & forced_out)
            if has_in and has_out:
                conflict = True
                break
            if has_in:
                fixed_in.append(orbit)
            elif not has_out:
                free.append(orbit)
        if conflict:
            continue
        base = set().union(*fixed_in) if fixed_in else set()
        for bits in range(1 << len(free)):
            triples_idx = set(base)
            for i, orbit in enumerate(free):
                if bits >> i & 1:
                    triples_idx |= orbit
            m = ModelStructure(
                name=f"enum{size}_{count}",
                elements=elems,
                zero=elems[0],
                star={elems[a]: elems[star[a]] for a in idx},
                triples=frozenset((elems[a], elems[b], elems[c])
                                  for (a, b, c) in triples_idx))
            report = check_postulates(m)
            if report.passes(required):
                count += 1
                yield m


# ------------------------------------------------------------------
# Model files
# ------------------------------------------------------------------

def load_model_file(text: str) -> ModelStructure:
    name = None
    elements: tuple[str, ...] | None = None
    zero = None
    star: dict[str, str] | None = None
    triples: set[tuple[str, str, str]] | None = None
    table_rows: list[list[frozenset[str]]] | None = None
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].split("#", 1)[0].strip()
        i += 1
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "model":
            name = rest.strip()
        elif head == "elements":
            elements = tuple(rest.split())
        elif head == "zero":
            zero = rest.strip()
        elif head == "star":
            star = {}
            for pair in rest.split():
                a, _, b = pair.partition(":")
                star[a] = b
        elif head == "triples":
            triples = set()
            while i < len(lines):
                row = lines[i].split("#", 1)[0].strip()
                i += 1
                if row == "end":
                    break
                if not row:
                    continue
                parts = row.split()
                if len(parts) != 3:
                    raise ParseError(i, "three elements per triple line")
                triples.add((parts[0], parts[1], parts[2]))
        elif head == "table":
            if elements is None:
                raise ParseError(i, "'elements' before 'table'")
            table_rows = []
            while len(table_rows) < len(elements) and i < len(lines):
                row = lines[i].split("#", 1)[0].strip()
                i += 1
                if not row:
                    continue
                cells = re.findall(r"\{([^}]*)\}", row)
                if len(cells) != len(elements):
                    raise ParseError(i, f"{len(elements)} cells per table row")
                table_rows.append([
                    frozenset(x.strip() for x in cell.split(",") if x.strip())
                    for cell in cells])
        else:
            raise ParseError(i, "a model file directive", head)
    if name is None or elements is None or zero is None or star is None:
        raise ParseError(0, "model, elements, zero and star sections")
    if triples is None and table_rows is None:
        raise ParseError(0, "a 'triples' or 'table' section")
    from_table = None
    if table_rows is not None:
        from_table = {(x, y, z)
                      for x, row in zip(elements, table_rows)
                      for y, cell in zip(elements, row) for z in cell}
    if triples is not None and from_table is not None and set(triples) != from_table:
        raise ParseError(0, "matching 'triples' and 'table' sections")
    final = triples if triples is not None else from_table
    return ModelStructure(name, elements, zero, star, frozenset(final))


def dump_model_file(m: ModelStructure) -> str:
    out = [f"model {m.name}",
           "elements " + " ".join(m.elements),
           f"zero {m.zero}",
           "star " + " ".join(f"{a}:{b}" for a, b in
                              ((e, m.star[e]) for e in m.elements)),
           "table"]
    table = composition_table(m)
    for x in m.elements:
        cells = []
        for y in m.elements:
            members = sorted(table[(x, y)], key=m.elements.index)
            cells.append("{" + ",".join(members) + "}")
        out.append(" ".join(cells))
    return "\n".join(out) + "\n"
