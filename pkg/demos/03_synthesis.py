"""Synthesis over signed influence graphs.

On the complete positive graph over three nodes every candidate keeps 000
and 111 as fixed points, so no marker with a fixed value is reachable.  A
mixed-sign graph gives the loop something to do.

    python demos/03_synthesis.py
"""

from pathlib import Path

from trapcegar import enumerate_mts, parse_influence_graph, solve_synthesis
from trapcegar.network import to_bnet
from trapcegar.oracle import brute_synthesis

complete = parse_influence_graph((Path(__file__).parent / "data" / "complete3.graph").read_text())
for marker in ({0: 0}, {}):
    r = solve_synthesis(complete, marker, "exact")
    print(f"complete graph, marker {marker}: {r.status} "
          f"({r.stats.counter_examples} counter-examples, {r.stats.total_ms:.0f} ms)")

mixed = parse_influence_graph("""
a -> a +
b -> a -
a -> b -
c -> b +
a -> c +
""")
for mode in ("exact", "subset"):
    r = solve_synthesis(mixed, {1: 1}, mode, budget=2)
    print(f"\nmixed graph, b = 1, {mode} mode: {r.status}, {r.stats.counter_examples} counter-examples")
    if r.solution is not None:
        print(to_bnet(r.solution), end="")
        print("minimal trap spaces:", sorted(map(str, enumerate_mts(r.solution))))
    print("brute force says", "sat" if brute_synthesis(mixed, mode, 2, {1: 1}) else "unsat")
