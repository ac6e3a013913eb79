#!/usr/bin/env python3
"""Re-check the embedded proof corpus and print the objects classification."""

import time

from tarl.registry import list_corpus
from tarl.sequents import check_proof
from tarl.formulas import print_formula


def main():
    t0 = time.perf_counter()
    rows = []
    for entry in list_corpus():
        report = check_proof(entry.proof)
        rows.append((entry.lemma_id, report, entry))
    elapsed = time.perf_counter() - t0
    print(f"{'lemma':14s} {'ok':3s} {'objects':12s} formula")
    for lemma, report, entry in rows:
        objs = "{" + ",".join(map(str, sorted(report.objects_used))) + "}"
        ok = "ok" if (report.valid and
                      frozenset(report.objects_used) == entry.expected_objects) else "BAD"
        print(f"{lemma:14s} {ok:3s} {objs:12s} {print_formula(entry.proof.goal)}")
    good = sum(1 for _, r, e in rows
               if r.valid and frozenset(r.objects_used) == e.expected_objects)
    print(f"\n{good}/{len(rows)} valid in {elapsed * 1000:.0f} ms")


if __name__ == "__main__":
    main()
