"""Trap spaces of locally monotone networks.

``ts_of`` computes the smallest trap space containing a configuration by
saturation (polynomial for unate local functions).  Minimality of such a
trap space ``h`` amounts to the absence of a vertex ``y`` of ``h`` whose own
smallest trap space is strictly smaller; that search is delegated to a SAT
engine holding the layered circuit from :mod:`trapcegar.encoding`, or done by
brute force over the vertices of ``h`` for small networks.
"""

from __future__ import annotations

import random
from typing import List, Optional, Sequence

from .cube import ConfigLike, Subcube, as_config
from .encoding import Concrete, FunctionSpec, Perturbable, TsCircuit, encode_ts_circuit
from .network import BooleanNetwork, UnateDnf
from .sat import SatEngine

BRUTE_FORCE_MAX_N = 12
DESCENT_SAMPLES = 4


def _can(f: UnateDnf, one: int, zero: int, target: int) -> bool:
    if target:
        for pos, neg in f.masks:
            if (pos & ~one) == 0 and (neg & ~zero) == 0:
                return True
        return False
    for pos, neg in f.masks:
        if not ((pos & zero) or (neg & one)):
            return False
    return True


def can_output(f: BooleanNetwork, i: int, h: Subcube, b: int) -> bool:
    """Whether some vertex ``z`` of ``h`` has ``f_i(z) == b``."""
    return _can(f.functions[i], h.one, h.zero, int(b))


def is_trap_space(f: BooleanNetwork, h: Subcube) -> bool:
    for i in range(f.n):
        v = h.value(i)
        if v is not None and _can(f.functions[i], h.one, h.zero, 1 - v):
            return False
    return True


def _saturate(f: BooleanNetwork, x: int, trace: Optional[list] = None) -> Subcube:
    n = f.n
    one, zero = x, ((1 << n) - 1) & ~x
    fns = f.functions
    changed = True
    while changed:
        changed = False
        for i in range(n):
            bit = 1 << i
            if one & bit and zero & bit:
                continue
            if _can(fns[i], one, zero, 0 if one & bit else 1):
                one |= bit
                zero |= bit
                changed = True
        if changed and trace is not None:
            trace.append(Subcube(n, one, zero))
    return Subcube(n, one, zero)


def layered_rounds(f: BooleanNetwork, x: ConfigLike) -> int:
    """Rounds of simultaneous (layer by layer) saturation before the cube stops changing.

    This is the depth after which the unrolled circuit's layers repeat.
    """
    n = f.n
    x = as_config(x, n)
    one, zero = x, ((1 << n) - 1) & ~x
    rounds = 0
    while True:
        o, z = one, zero
        for i, fn in enumerate(f.functions):
            bit = 1 << i
            if not one & bit and _can(fn, one, zero, 1):
                o |= bit
            if not zero & bit and _can(fn, one, zero, 0):
                z |= bit
        if (o, z) == (one, zero):
            return rounds
        one, zero = o, z
        rounds += 1


def ts_of(f: BooleanNetwork, x: ConfigLike) -> Subcube:
    """Smallest trap space of ``f`` containing configuration ``x``."""
    return _saturate(f, as_config(x, f.n))


def saturation_trace(f: BooleanNetwork, x: ConfigLike) -> List[Subcube]:
    """Cube after each sweep that changed it, starting from the point cube of ``x``."""
    x = as_config(x, f.n)
    trace = [Subcube.point(x, f.n)]
    _saturate(f, x, trace)
    return trace


class TrapSpaceSolver:
    """A trap-space circuit on a SAT engine, answering minimality queries.

    ``spec`` defaults to the concrete network; a :class:`Perturbable` spec lets
    one circuit serve many perturbations, selected per call by
    ``assumptions`` (with ``network`` then being the perturbed network).
    """

    def __init__(self, network: BooleanNetwork, engine: Optional[SatEngine] = None,
                 spec: Optional[FunctionSpec] = None):
        self.engine = engine if engine is not None else SatEngine()
        self.spec = spec if spec is not None else Concrete(network)
        self.network = network
        inputs = self.engine.new_vars(network.n, "y")
        self.circuit: TsCircuit = encode_ts_circuit(self.engine, self.spec, inputs)
        self.queries = 0
        self.samples = DESCENT_SAMPLES
        self._rng = random.Random(0)

    def _fix_input(self, h: Subcube) -> List[int]:
        return [v if (h.one >> i) & 1 else -v
                for i, v in enumerate(self.circuit.inputs) if not (h.free >> i) & 1]

    def witness(self, h: Subcube, assumptions: Sequence[int] = (),
                network: Optional[BooleanNetwork] = None) -> Optional[int]:
        """A vertex ``y`` of the trap space ``h`` with ``TS(y) != h``, if any.

        ``h`` must be ``TS`` of one of its vertices, so that ``TS(y) ⊆ h``.
        """
        if h.free == 0:
            return None
        eng = self.engine
        one, zero = self.circuit.final
        q = eng.new_var()
        eng.add_clause([-q] + [lit for i in range(h.n) if (h.free >> i) & 1
                               for lit in (-one[i], -zero[i])])
        self.queries += 1
        sat = eng.solve([*assumptions, *self._fix_input(h), q])
        y = self.circuit.decode_input(eng) if sat else None
        eng.add_clause([-q])
        return y

    def is_minimal(self, h: Subcube, assumptions=()) -> bool:
        return self.witness(h, assumptions) is None

    def descend(self, x: int, assumptions=(), network=None, visited=None) -> Subcube:
        """Follow witnesses from ``TS(x)`` down to a minimal trap space.

        Before each solver call a few random vertices are tried concretely;
        on large cubes they usually shrink it much faster than a solver
        witness would.  Non-minimal cubes met on the way are appended to
        ``visited``.
        """
        g = network if network is not None else self.network
        h = ts_of(g, x)
        while True:
            y = self._sample_witness(g, h)
            if y is None:
                y = self.witness(h, assumptions)
            if y is None:
                return h
            if visited is not None:
                visited.append(h)
            h = ts_of(g, y)

    def _sample_witness(self, g: BooleanNetwork, h: Subcube) -> Optional[int]:
        if h.free == 0:
            return None
        for _ in range(self.samples):
            y = h.values | (self._rng.getrandbits(h.n) & h.free)
            if ts_of(g, y) != h:
                return y
        return None

    def enumerate(self, limit: Optional[int] = None) -> List[Subcube]:
        eng, circ = self.engine, self.circuit
        act = eng.new_var()
        found: List[Subcube] = []
        while limit is None or len(found) < limit:
            if not eng.solve([act]):
                break
            m = self.descend(circ.decode_input(eng))
            found.append(m)
            # any TS(x) reaching into m contains m: x is in m or in no minimal trap space
            eng.add_clause([-act] + circ.excludes(m.values))
        eng.add_clause([-act])
        return found


def _solver_for(f: BooleanNetwork, engine: Optional[SatEngine]) -> TrapSpaceSolver:
    if engine is None:
        return TrapSpaceSolver(f)
    key = ("trapspace", f)
    if key not in engine.memo:
        engine.memo[key] = TrapSpaceSolver(f, engine)
    return engine.memo[key]


def is_minimal(f: BooleanNetwork, h: Subcube, engine: Optional[SatEngine] = None) -> bool:
    """Minimality of a saturated trap space ``h`` (``h = TS(v)`` for its vertices).

    Without an engine, networks of at most 12 components are checked by
    enumerating the vertices of ``h``.
    """
    if engine is None and f.n <= BRUTE_FORCE_MAX_N:
        return all(_saturate(f, y) == h for y in h.vertices())
    return _solver_for(f, engine).is_minimal(h)


def in_mts(f: BooleanNetwork, x: ConfigLike, engine: Optional[SatEngine] = None) -> bool:
    """Whether ``x`` lies in a minimal trap space of ``f``."""
    return is_minimal(f, ts_of(f, x), engine)


def descend_to_mts(f: BooleanNetwork, x: ConfigLike, engine: Optional[SatEngine] = None) -> Subcube:
    """A minimal trap space inside ``TS(x)``."""
    return _solver_for(f, engine).descend(as_config(x, f.n))


def enumerate_mts(f: BooleanNetwork, engine: Optional[SatEngine] = None,
                  limit: Optional[int] = None) -> List[Subcube]:
    """Minimal trap spaces of ``f`` (order is solver dependent)."""
    return _solver_for(f, engine).enumerate(limit)


def perturbable_solver(f: BooleanNetwork, controllable=None,
                       engine: Optional[SatEngine] = None) -> TrapSpaceSolver:
    eng = engine if engine is not None else SatEngine()
    spec = Perturbable.create(eng, f, controllable)
    return TrapSpaceSolver(f, eng, spec)
