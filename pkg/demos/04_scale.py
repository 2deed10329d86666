"""First solutions on random 200-component networks.

Each instance draws up to three signed regulators per component and marks
three output components.  Prints the outcome per refinement variant.

    python demos/04_scale.py [instances] [timeout-seconds]
"""

import sys
import time

from trapcegar import solve_reprogramming
from trapcegar.generate import random_marker, random_network

count = int(sys.argv[1]) if len(sys.argv) > 1 else 3
timeout = float(sys.argv[2]) if len(sys.argv) > 2 else 120.0

print(f"{'seed':>4} {'variant':>7} {'status':>8} {'|P|':>3} {'ces':>4} {'seconds':>8}")
for seed in range(count):
    f = random_network(200, 3, seed)
    marker = random_marker(f, 3, seed)
    for variant in (2, 1, 0):
        t0 = time.perf_counter()
        r = solve_reprogramming(f, marker, 4, variant=variant, forbid_marker_nodes=True, timeout=timeout)
        size = len(r.solution) if r.solution is not None else "-"
        print(f"{seed:>4} {'V' + str(variant):>7} {r.status:>8} {size:>3} {r.stats.counter_examples:>4} "
              f"{time.perf_counter() - t0:>8.1f}")
