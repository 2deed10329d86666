"""Random locally monotone networks and markers for tests and benchmarks."""

from __future__ import annotations

from typing import Dict, List, Optional

import networkx as nx
import numpy as np

from .network import BooleanNetwork, UnateDnf, influence_graph


def random_network(n: int, max_indegree: int = 3, rng=None, constant_rate: float = 0.0,
                   self_loops: bool = True) -> BooleanNetwork:
    """Each component draws 1..``max_indegree`` signed regulators and a random
    irredundant DNF over them (all regulators used)."""
    rng = np.random.default_rng(rng)
    functions = []
    for i in range(n):
        if rng.random() < constant_rate:
            functions.append(UnateDnf.const(bool(rng.integers(2))))
            continue
        pool = [j for j in range(n) if self_loops or j != i]
        r = int(rng.integers(1, min(max_indegree, len(pool)) + 1))
        regs = [int(j) for j in rng.choice(pool, size=r, replace=False)]
        signs = {j: bool(rng.integers(2)) for j in regs}
        while True:
            nclauses = int(rng.integers(1, r + 1))
            clauses = []
            for _ in range(nclauses):
                size = int(rng.integers(1, r + 1))
                clauses.append({(j, signs[j]) for j in rng.choice(regs, size=size, replace=False).tolist()})
            fn = UnateDnf.from_clauses(clauses)
            if set(fn.regulators()) == set(regs):
                break
        functions.append(fn)
    return BooleanNetwork(tuple(f"x{i + 1}" for i in range(n)), tuple(functions))


def output_nodes(f: BooleanNetwork) -> List[int]:
    """Components regulating no other component, else members of bottom SCCs."""
    g = influence_graph(f)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(f.n))
    dg.add_edges_from(e for e in g.pos_edges | g.neg_edges if e[0] != e[1])
    sinks = [v for v in dg if dg.out_degree(v) == 0]
    if sinks:
        return sorted(sinks)
    cond = nx.condensation(dg)
    return sorted(v for c in cond if cond.out_degree(c) == 0 for v in cond.nodes[c]["members"])


def random_marker(f: BooleanNetwork, size: int, rng=None, outputs_first: bool = True) -> Dict[int, int]:
    """``size`` marked components, preferring outputs, with random values."""
    rng = np.random.default_rng(rng)
    size = min(size, f.n)
    chosen: List[int] = []
    if outputs_first:
        outs = output_nodes(f)
        take = min(size, len(outs))
        chosen = [int(v) for v in rng.choice(outs, size=take, replace=False)] if take else []
    rest = [i for i in range(f.n) if i not in chosen]
    if len(chosen) < size:
        chosen += [int(v) for v in rng.choice(rest, size=size - len(chosen), replace=False)]
    return {i: int(rng.integers(2)) for i in sorted(chosen)}


def random_instance(n: int, marker_size: Optional[int] = None, rng=None, max_indegree: int = 3):
    rng = np.random.default_rng(rng)
    f = random_network(n, max_indegree, rng)
    if marker_size is None:
        marker_size = int(rng.integers(1, min(3, n) + 1))
    return f, random_marker(f, marker_size, rng)
