#!/usr/bin/env python3
"""Rebuild the four-block structure from each group partition and audit it."""

from tarl.groups import PARTITIONS, build_atom_structure, check_sigma_homomorphism
from tarl.models import check_postulates, composition_table, dump_model_file
from tarl.registry import get_structure


def main():
    k3 = get_structure("K3")
    expected = composition_table(k3)
    for p in PARTITIONS:
        m = build_atom_structure(p)
        table_ok = composition_table(m) == expected
        audit = check_postulates(m)
        sigma = check_sigma_homomorphism(p)
        flags = audit.passes(["p1", "p2", "p3", "p4", "p5", "p6", "peirce"])
        print(f"partition {p.id}: table==K3 {table_ok}, postulates {flags}, "
              f"sigma {sigma.passed} ({len(sigma.checks)} identity checks)")
    print("\nderived composition table (partition 1):\n")
    print(dump_model_file(build_atom_structure(PARTITIONS[0])))


if __name__ == "__main__":
    main()
