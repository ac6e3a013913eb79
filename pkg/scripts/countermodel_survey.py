#!/usr/bin/env python3
"""Validity of the named axioms across the built-in structures, plus the
complete singleton countermodel lists for the non-commutative structure."""

from tarl.models import find_invalidating_singletons, valid_in
from tarl.registry import get_formula, get_structure

AXIOMS = ["contra", "perm", "suff", "mp", "contr", "reduc", "ming"]
STRUCTURES = ["K1", "K2", "K3", "K4", "K5"]


def main():
    print(f"{'axiom':8s}" + "".join(f"{name:>8s}" for name in STRUCTURES))
    for axiom in AXIOMS:
        f = get_formula(axiom).formula
        cells = []
        for name in STRUCTURES:
            cells.append("valid" if valid_in(get_structure(name), f).valid
                         else "no")
        print(f"{axiom:8s}" + "".join(f"{c:>8s}" for c in cells))
    print("\nsingleton refutations in K5:")
    k5 = get_structure("K5")
    for axiom in ["contra", "perm", "suff", "mp"]:
        rows = find_invalidating_singletons(k5, get_formula(axiom).formula)
        print(f"  {axiom}: " + "; ".join(str(v) for v in rows))


if __name__ == "__main__":
    main()
