"""Monolithic QBF model of marker reprogramming, written as QDIMACS.

    ∃ P   ∀ x   ∃ (TS(x) layers, y, TS(y) layers, diff, counter)

The matrix says: ``|P| <= k'``, and for the chosen ``P`` every configuration
``x`` either matches the marker or has some ``y`` in ``TS(x)`` whose trap
space is strictly smaller, i.e. ``x`` lies in no minimal trap space of
``f/P`` unless it matches.

Apart from the cardinality counter the formula uses exactly the variables
of the model: clamp/value pairs, ``x``, ``n + 1`` layers of ``2n`` rails for
``TS(x)``, ``y``, the same for ``TS(y)``, and ``2n`` diff variables.  Layer
equations are therefore written as CNF directly, without gate auxiliaries;
for local functions of small in-degree the expansion stays small.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from .network import BooleanNetwork, UnateDnf

Clause = FrozenSet[int]


def _minimal(sets: Iterable[Clause]) -> List[Clause]:
    """Drop tautologies and supersets."""
    out: List[Clause] = []
    for s in sorted(set(sets), key=len):
        if any(-l in s for l in s):
            continue
        if not any(t <= s for t in out):
            out.append(s)
    return out


def _cross(groups: Sequence[Sequence[int]]) -> List[Clause]:
    """Minimal sets taking one literal from each group (DNF <-> CNF switch)."""
    if not groups:
        return [frozenset()]
    return _minimal(frozenset(choice) for choice in product(*groups))


def _or_cnf(a: List[Clause], b: List[Clause]) -> List[Clause]:
    return _minimal(x | y for x in a for y in b)


def _can_output(fn: UnateDnf, one: Sequence[int], zero: Sequence[int], b: int) -> Tuple[List[Clause], List[Clause]]:
    """``can output b`` on the rails, as (DNF terms, CNF clauses)."""
    if fn.is_constant:
        truth = fn.constant == bool(b)
        return ([frozenset()], []) if truth else ([], [frozenset()])
    if b:
        dnf = _minimal(frozenset(one[j] if s else zero[j] for j, s in c) for c in fn.clauses)
        return dnf, _cross([sorted(t) for t in dnf])
    cnf = _minimal(frozenset(zero[j] if s else one[j] for j, s in c) for c in fn.clauses)
    return _cross([sorted(c) for c in cnf]), cnf


class _Builder:
    def __init__(self):
        self.nvars = 0
        self.clauses: List[List[int]] = []
        self.roles: List[Tuple[str, int, int]] = []

    def block(self, role: str, count: int) -> List[int]:
        start = self.nvars + 1
        self.nvars += count
        if count:
            self.roles.append((role, start, self.nvars))
        return list(range(start, self.nvars + 1))

    def add(self, clause: Iterable[int]) -> None:
        self.clauses.append(list(clause))


def _circuit(bld: _Builder, f: BooleanNetwork, inputs: Sequence[int], clamp: Mapping[int, Tuple[int, int]],
             role: str) -> Tuple[List[int], List[int]]:
    n = f.n
    layers = [(bld.block(f"{role} layer 0 one-rails", n), bld.block(f"{role} layer 0 zero-rails", n))]
    for i, x in enumerate(inputs):
        one, zero = layers[0][0][i], layers[0][1][i]
        bld.add([-one, x])
        bld.add([one, -x])
        bld.add([-zero, -x])
        bld.add([zero, x])
    for t in range(1, n + 1):
        nxt = (bld.block(f"{role} layer {t} one-rails", n), bld.block(f"{role} layer {t} zero-rails", n))
        prev = layers[-1]
        for i in range(n):
            for b in (1, 0):
                out, keep = nxt[1 - b][i], prev[1 - b][i]
                dnf, cnf = _can_output(f.functions[i], prev[0], prev[1], b)
                rhs_dnf = [frozenset([keep])]
                rhs_cnf = [frozenset([keep])]
                if i in clamp:
                    cl, v = clamp[i]
                    vb = v if b else -v
                    rhs_dnf += [t | {-cl} for t in dnf] + [frozenset([cl, vb])]
                    free = _minimal([frozenset([-cl])] + cnf)
                    rhs_cnf = _or_cnf(rhs_cnf, _or_cnf(free, [frozenset([cl]), frozenset([vb])]))
                else:
                    rhs_dnf += dnf
                    rhs_cnf = _or_cnf(rhs_cnf, cnf)
                for c in rhs_cnf:
                    bld.add([-out] + sorted(c, key=abs))
                for term in _minimal(rhs_dnf):
                    bld.add([out] + sorted((-l for l in term), key=abs))
        layers.append(nxt)
    return layers[-1]


def _sequential_counter(bld: _Builder, lits: Sequence[int], k: int) -> None:
    if k >= len(lits):
        return
    if k == 0:
        for x in lits:
            bld.add([-x])
        return
    regs = [bld.block(f"counter register {i}", k) for i in range(len(lits) - 1)]
    for i, x in enumerate(lits):
        if i < len(lits) - 1:
            bld.add([-x, regs[i][0]])
            for j in range(1, k):
                if i:
                    bld.add([-regs[i - 1][j], regs[i][j]])
            if i:
                bld.add([-regs[i - 1][0], regs[i][0]])
                for j in range(1, k):
                    bld.add([-x, -regs[i - 1][j - 1], regs[i][j]])
        if i:
            bld.add([-x, -regs[i - 1][k - 1]])


def export_qdimacs(f: BooleanNetwork, marker: Mapping[int, int], k: int,
                   uncontrollable: Iterable[int] = (), forbid_marker_nodes: bool = False) -> str:
    """QDIMACS text of "some ``P``, ``|P| <= k``, makes every minimal trap space of ``f/P`` match ``marker``"."""
    n = f.n
    if not 0 <= k <= n:
        raise ValueError(f"k' must lie in [0, {n}], got {k}")
    if any(not 0 <= i < n for i in marker):
        raise ValueError("marker refers to a component outside the network")
    controllable = set(range(n)) - set(uncontrollable)
    if forbid_marker_nodes:
        controllable -= set(marker)
    bld = _Builder()
    clamp: Dict[int, Tuple[int, int]] = {}
    for i in sorted(controllable):
        cl, v = bld.block(f"clamped/value of {f.names[i]}", 2)
        clamp[i] = (cl, v)
        bld.add([cl, -v])
    outer = list(range(1, bld.nvars + 1))
    x = bld.block("x", n)
    first_inner = bld.nvars + 1
    x_one, x_zero = _circuit(bld, f, x, clamp, "TS(x)")
    y = bld.block("y", n)
    y_one, y_zero = _circuit(bld, f, y, clamp, "TS(y)")
    diff = bld.block("diff (one-rails then zero-rails)", 2 * n)
    budget = bld.nvars
    guard = [[x[i] if b else -x[i]] for i, b in marker.items()]  # disjuncts of "x matches M"
    if marker:
        tethered = []
        for i in range(n):
            tethered.append([-y[i], x_one[i]])
            tethered.append([y[i], x_zero[i]])
        tethered.append(diff)
        for c in tethered:
            for g in guard:
                bld.add(c + g)
        for d, o, p in zip(diff, x_one + x_zero, y_one + y_zero):
            bld.add([-d, o])
            bld.add([-d, -p])
            bld.add([d, -o, p])
    _sequential_counter(bld, [clamp[i][0] for i in sorted(clamp)], k)
    inner = list(range(first_inner, bld.nvars + 1))
    lines = [
        "c marker reprogramming: exists P forall x exists (circuits, y, diff, counter)",
        f"c n={n} k'={k} marker={{{', '.join(f'{f.names[i]}: {b}' for i, b in sorted(marker.items()))}}}",
        f"c model variables (without cardinality counter): {budget}",
    ]
    lines += [f"c vars {a}-{b}: {role}" for role, a, b in bld.roles]
    lines.append(f"p cnf {bld.nvars} {len(bld.clauses)}")
    if outer:
        lines.append("e " + " ".join(map(str, outer)) + " 0")
    lines.append("a " + " ".join(map(str, x)) + " 0")
    lines.append("e " + " ".join(map(str, inner)) + " 0")
    lines += [" ".join(map(str, c)) + " 0" for c in bld.clauses]
    return "\n".join(lines) + "\n"


def model_variable_count(text: str) -> int:
    """The non-cardinality variable count recorded in an export's header."""
    for line in text.splitlines():
        if line.startswith("c model variables"):
            return int(line.rsplit(":", 1)[1])
    raise ValueError("not an export of this module")
