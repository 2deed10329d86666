"""Marker reprogramming on the five-component example.

Target: every minimal trap space has b = 1 and c = 1.  The loop proposes a
perturbation, looks for a configuration that sits in a minimal trap space of
the perturbed network without matching the marker, and refines.

    python demos/02_reprogramming.py
"""

from pathlib import Path

from trapcegar import (Variant, apply_perturbation, config_to_str, enumerate_mts, enumerate_reprogramming,
                       read_bnet)
from trapcegar.cegar import ReprogrammingCegar
from trapcegar.oracle import brute_reprogramming, solve_qdimacs_by_expansion
from trapcegar.qdimacs import export_qdimacs

f = read_bnet(Path(__file__).parent / "data" / "ex2.bnet")
marker = {f.index["b"]: 1, f.index["c"]: 1}


def named(p):
    return "{" + ", ".join(f"{f.names[i]}={b}" for i, b in sorted(p.items())) + "}"


def trace_run():
    def hook(solver, p, x):
        g = apply_perturbation(f, p)
        print(f"   candidate {named(p)} rejected: {config_to_str(x, f.n)} lies in "
              f"{[str(m) for m in enumerate_mts(g) if m.contains(x)]}")

    result = ReprogrammingCegar(f, marker, 2, on_refine=hook).run()
    print("solutions:", [named(p) for p in result.solutions])
    for p in result.solutions:
        print(f"   MTS of f/{named(p)}:", sorted(map(str, enumerate_mts(apply_perturbation(f, p)))))
    expected = brute_reprogramming(f, marker, 2)
    print("brute force agrees:", sorted(map(named, expected)) == sorted(map(named, result.solutions)))


def compare_variants():
    print("\ncounter-examples per refinement variant:")
    for v in Variant:
        r = enumerate_reprogramming(f, marker, 2, variant=v)
        print(f"   V{int(v)} {v.name:<10} {r.stats.counter_examples}")


def compare_qbf():
    print("\nmonolithic QBF, decided by expanding the universal block:")
    for k in range(3):
        print(f"   k={k}:", solve_qdimacs_by_expansion(export_qdimacs(f, marker, k)))


if __name__ == "__main__":
    print("CEGAR run, k = 2, marker nodes may be perturbed:")
    trace_run()
    compare_variants()
    compare_qbf()
