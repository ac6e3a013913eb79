#!/usr/bin/env python3
"""Run the axiom and derived-law suites in proper and complex algebras."""

from tarl.algebra import (
    ComplexAlgebra, DERIVED_LAWS, ProperAlgebra, TARSKI_AXIOMS, check_chain,
    holds_law, parse_chain,
)
from tarl.registry import data_dir, get_structure


def main():
    complexes = {n: ComplexAlgebra(get_structure(n)) for n in ("K3", "K4", "K5")}
    print("axioms on random proper algebras (1000 trials each):")
    for base in (2, 3, 4, 5):
        alg = ProperAlgebra(base)
        bad = [n for n, law in TARSKI_AXIOMS.items()
               if not holds_law(alg, law, trials=1000, seed=base).passed]
        print(f"  base {base}: {'all pass' if not bad else bad}")
    print("derived laws, exhaustive on the three peircean complexes:")
    for name, law in DERIVED_LAWS.items():
        oks = [holds_law(alg, law).passed for alg in complexes.values()]
        print(f"  {name:8s} {'pass' if all(oks) else oks}")
    print("derivation chains:")
    for chain in ("ra4", "ra7", "refleq"):
        steps = parse_chain((data_dir() / "chains" / f"{chain}.chain").read_text())
        report = check_chain(complexes, steps)
        print(f"  {chain}: {len(report.steps)} steps, "
              f"{'pass' if report.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
