"""Brute-force ground truth for small instances.

Everything here works from the definitions only: trap spaces are found by
checking closure of every subcube over all of its vertices, never through the
saturation procedure or the SAT encodings.  Each function refuses inputs
beyond its size guard instead of degrading silently.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np
from pysat.solvers import Solver

from .cube import Subcube, as_config
from .network import (Assignment, BooleanNetwork, InfluenceGraph, UnateDnf,
                      apply_perturbation, matches)


class OracleScaleError(ValueError):
    """Instance exceeds the oracle's size guard."""


def _guard(cond: bool, what: str) -> None:
    if not cond:
        raise OracleScaleError(f"oracle scale exceeded: {what}")


@lru_cache(maxsize=4096)
def _trap_table(f: BooleanNetwork) -> np.ndarray:
    """``trap[S, v]``: subcube with free mask ``S`` and fixed values ``v`` is closed."""
    n = f.n
    size = 1 << n
    xs = np.arange(size, dtype=np.int64)
    image = np.array([f(int(x)) for x in xs], dtype=np.int64)
    masks = xs[:, None]  # free masks S along axis 0
    keys = xs[None, :] & ~masks  # fixed part of each vertex under S
    escapes = ((image[None, :] ^ xs[None, :]) & ~masks) != 0
    bad = np.zeros((size, size), dtype=bool)
    rows = np.broadcast_to(masks, (size, size))
    np.logical_or.at(bad, (rows, keys), escapes)
    return ~bad


def trap_spaces(f: BooleanNetwork) -> List[Subcube]:
    """All trap spaces of ``f`` (``n <= 10``)."""
    _guard(f.n <= 10, f"trap space enumeration needs n <= 10, got {f.n}")
    trap = _trap_table(f)
    full = (1 << f.n) - 1
    out = []
    for s in range(1 << f.n):
        for v in range(1 << f.n):
            if v & s == 0 and trap[s, v]:
                out.append(Subcube(f.n, v | s, (full & ~v) | s))
    return out


@lru_cache(maxsize=4096)
def _ts_table(f: BooleanNetwork) -> np.ndarray:
    """Free mask of the intersection of all trap spaces containing each configuration."""
    n = f.n
    size = 1 << n
    trap = _trap_table(f)
    xs = np.arange(size, dtype=np.int64)
    masks = xs[:, None]
    contains = trap[np.broadcast_to(masks, (size, size)), xs[None, :] & ~masks]
    full = np.int64(size - 1)
    return np.bitwise_and.reduce(np.where(contains, masks, full), axis=0)


def brute_ts(f: BooleanNetwork, x) -> Subcube:
    """Smallest trap space containing ``x``, as the intersection of all trap spaces containing it."""
    _guard(f.n <= 10, f"brute_ts needs n <= 10, got {f.n}")
    x = as_config(x, f.n)
    free = int(_ts_table(f)[x])
    full = (1 << f.n) - 1
    v = x & ~free
    return Subcube(f.n, v | free, (full & ~v) | free)


def brute_mts(f: BooleanNetwork) -> Set[Subcube]:
    """Minimal trap spaces: closed subcubes containing no smaller closed subcube."""
    _guard(f.n <= 12, f"brute_mts needs n <= 12, got {f.n}")
    if f.n > 10:
        return _brute_mts_large(f)
    found: List[Subcube] = []
    for h in sorted(trap_spaces(f), key=Subcube.dimension):
        if not any(m.issubset(h) for m in found):
            found.append(h)
    return set(found)


def _closed(f: BooleanNetwork, h: Subcube) -> bool:
    return all(h.contains(f(y)) for y in h.vertices())


def _brute_mts_large(f: BooleanNetwork) -> Set[Subcube]:
    # n in (10, 12]: the dense tables get too big; walk subcubes by dimension
    found: List[Subcube] = []
    full = (1 << f.n) - 1
    for d in range(f.n + 1):
        for free_dims in itertools.combinations(range(f.n), d):
            s = sum(1 << i for i in free_dims)
            fixed = [i for i in range(f.n) if not (s >> i) & 1]
            for bits in range(1 << len(fixed)):
                v = sum(1 << i for k, i in enumerate(fixed) if (bits >> k) & 1)
                h = Subcube(f.n, v | s, (full & ~v) | s)
                if not any(m.issubset(h) for m in found) and _closed(f, h):
                    found.append(h)
    return set(found)


def brute_in_mts(f: BooleanNetwork, x) -> bool:
    x = as_config(x, f.n)
    return any(m.contains(x) for m in brute_mts(f))


def perturbation_domain(n: int, k: int, controllable: Optional[Iterable[int]] = None) -> List[Assignment]:
    """All perturbations with at most ``k`` entries over ``controllable`` components."""
    comps = sorted(range(n) if controllable is None else controllable)
    out: List[Assignment] = []
    for size in range(min(k, len(comps)) + 1):
        for dom in itertools.combinations(comps, size):
            for vals in itertools.product((0, 1), repeat=size):
                out.append(dict(zip(dom, vals)))
    return out


def all_mts_match(f: BooleanNetwork, marker: Mapping[int, int]) -> bool:
    return all(matches(m, marker) for m in brute_mts(f))


def subset_minimal(perturbations: Sequence[Assignment]) -> List[Assignment]:
    items = [frozenset(p.items()) for p in perturbations]
    return [dict(p) for p in items if not any(q < p for q in items)]


def brute_reprogramming(f: BooleanNetwork, marker: Mapping[int, int], k: int,
                        controllable: Optional[Iterable[int]] = None,
                        forbid_marker_nodes: bool = False) -> List[Assignment]:
    """Subset-minimal perturbations of size at most ``k`` making every MTS match ``marker``."""
    _guard(f.n <= 10 and k <= 3, f"brute_reprogramming needs n <= 10 and k <= 3, got n={f.n}, k={k}")
    comps = set(range(f.n) if controllable is None else controllable)
    if forbid_marker_nodes:
        comps -= set(marker)
    good = [p for p in perturbation_domain(f.n, k, comps)
            if all_mts_match(apply_perturbation(f, p), marker)]
    return subset_minimal(good)


# ---------------------------------------------------------------------------
# synthesis


def _component_functions(regs: Mapping[int, bool], budget: int, mode: str) -> List[UnateDnf]:
    """Distinct functions reachable by raw selector assignments of one component."""
    regs_sorted = sorted(regs)
    if not regs_sorted:
        return [UnateDnf.const(False), UnateDnf.const(True)]
    r = len(regs_sorted)
    rows = list(range(1, 1 << r))  # each used row selects a nonempty literal set
    seen = {}
    for used in range(1, budget + 1):
        for choice in itertools.product(rows, repeat=used):
            clauses = [{(regs_sorted[b], regs[regs_sorted[b]]) for b in range(r) if (row >> b) & 1}
                       for row in choice]
            fn = UnateDnf.from_clauses(clauses)
            if len(fn.clauses) > budget:
                continue
            if mode == "exact" and set(fn.regulators()) != set(regs):
                continue
            seen[fn] = None
    return list(seen)


def brute_synthesis(graph: InfluenceGraph, mode: str, budget: int,
                    marker: Mapping[int, int]) -> Optional[BooleanNetwork]:
    """A network of the DNF domain whose MTSs all match ``marker``, or None."""
    regs = [graph.regulators(i) for i in range(graph.n)]
    _guard(graph.n <= 3 and budget <= 2 and all(len(r) <= 3 for r in regs),
           "brute_synthesis needs n <= 3, budget <= 2, in-degree <= 3")
    per_comp = [_component_functions(r, budget, mode) for r in regs]
    names = graph.node_names()
    for combo in itertools.product(*per_comp):
        f = BooleanNetwork(names, tuple(combo))
        if all_mts_match(f, marker):
            return f
    return None


def synthesis_domain(graph: InfluenceGraph, mode: str, budget: int) -> List[BooleanNetwork]:
    regs = [graph.regulators(i) for i in range(graph.n)]
    per_comp = [_component_functions(r, budget, mode) for r in regs]
    names = graph.node_names()
    return [BooleanNetwork(names, tuple(c)) for c in itertools.product(*per_comp)]


# ---------------------------------------------------------------------------
# QDIMACS by universal expansion


def parse_qdimacs(text: str):
    """Return ``(nvars, prefix, clauses)``; prefix is a list of ``(quantifier, vars)``."""
    nvars = None
    prefix: List[Tuple[str, List[int]]] = []
    clauses: List[List[int]] = []
    declared = None
    for line in text.splitlines():
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "p":
            if tok[1] != "cnf" or len(tok) != 4:
                raise ValueError(f"bad problem line {line!r}")
            nvars, declared = int(tok[2]), int(tok[3])
        elif tok[0] in ("a", "e"):
            if tok[-1] != "0":
                raise ValueError("quantifier line must end with 0")
            prefix.append((tok[0], [int(t) for t in tok[1:-1]]))
        else:
            lits = [int(t) for t in tok]
            if lits[-1] != 0:
                raise ValueError("clause must end with 0")
            clauses.append(lits[:-1])
    if nvars is None:
        raise ValueError("missing problem line")
    if declared != len(clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(clauses)}")
    return nvars, prefix, clauses


def solve_qdimacs_by_expansion(text: str, max_universal: int = 12) -> bool:
    """Decide an ``∃A ∀X ∃B`` QDIMACS formula by copying the matrix per value of ``X``."""
    nvars, prefix, clauses = parse_qdimacs(text)
    kinds = [q for q, _ in prefix]
    if kinds not in (["e", "a", "e"], ["a", "e"], ["e", "a"], ["e"], ["a"]):
        raise ValueError(f"unsupported prefix {''.join(kinds)}")
    outer: Set[int] = set()
    univ: List[int] = []
    for q, vs in prefix:
        if q == "a":
            univ = vs
            break
        outer |= set(vs)
    _guard(len(univ) <= max_universal, f"{len(univ)} universal variables")
    solver = Solver(name="glucose4")
    next_var = nvars
    for bits in range(1 << len(univ)):
        val = {v: (bits >> k) & 1 for k, v in enumerate(univ)}
        rename: Dict[int, int] = {}
        for c in clauses:
            out = []
            sat = False
            for lit in c:
                v = abs(lit)
                if v in val:
                    if (lit > 0) == bool(val[v]):
                        sat = True
                        break
                    continue
                if v not in outer:
                    if v not in rename:
                        next_var += 1
                        rename[v] = next_var
                    v = rename[v]
                out.append(v if lit > 0 else -v)
            if not sat:
                solver.add_clause(out)
    result = solver.solve()
    solver.delete()
    return bool(result)
