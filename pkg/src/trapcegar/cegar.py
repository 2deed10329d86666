"""Counter-example guided solving of universal marker properties over minimal trap spaces.

Both problems share one loop.  A candidate (a perturbation, or a whole
network for synthesis) is drawn from an under-approximation that only asks
for *some* trap space matching the marker.  The candidate is then checked for
a counter-example: a configuration that lies in a minimal trap space and does
not match the marker.  If there is one, a refinement excludes every
candidate under which that configuration still lies in a minimal trap space
(variant 1), or also requires that a matching trap space sits below it
(variant 2), or just blocks the candidate itself (variant 0).

Two encoding shortcuts are used by default; both are exact:

* "some ``y`` has ``TS(y) ⊨ M``" holds iff some trap space matches ``M``
  (``TS(y)`` is one, and any vertex of a matching trap space is such a
  ``y``).  The same goes for "some ``y`` has ``TS(y)`` strictly inside
  ``TS(x)``".  So the ``y`` side needs one closure layer, not an unrolled
  circuit.  ``witness="circuit"`` uses unrolled circuits instead.
* The circuit for ``TS(x̂)`` under a symbolic candidate needs ``n`` layers
  in general.  On large networks the refinement circuit is unrolled only a
  fixed margin deeper than the rejected candidate needs, and the refinement
  is made conditional on the last two layers coinciding.  Candidates whose
  saturation from ``x̂`` is deeper are left unconstrained: still sound, and
  the rejected candidate is always excluded.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Iterable, List, Mapping, Optional, Sequence

from .cube import Subcube, config_to_str
from .encoding import (Concrete, FunctionSpec, Perturbable, SequentialCounter, Synthesizable,
                       encode_converged, encode_marker_on_cube, encode_strict_containment,
                       encode_synth_structure, encode_trap_cube, encode_ts_circuit)
from .network import (Assignment, BooleanNetwork, InfluenceGraph, apply_perturbation,
                      assignment_to_json, matches)
from .sat import EngineError, SatEngine, SolveTimeout
from .trapspace import TrapSpaceSolver, layered_rounds, ts_of

DEFAULT_MAX_REFINEMENTS = 10_000
FULL_DEPTH_MAX_N = 64  # "auto" depth: exact n-layer refinements up to this size
ADAPTIVE_MARGIN = 16  # extra layers past the rejected candidate's own saturation depth
ORACLE_VERIFY_MAX_N = 10


class Variant(IntEnum):
    BLOCK = 0  # forbid the rejected candidate only
    NOT_IN_MTS = 1  # the counter-example must not lie in a minimal trap space
    FULL = 2  # ... and a trap space below it must match the marker


class RefinementLimit(RuntimeError):
    pass


@dataclass
class CegarStats:
    counter_examples: int = 0
    candidate_solves: int = 0
    ce_solves: int = 0
    refinements: int = 0
    candidate_ms: float = 0.0
    ce_ms: float = 0.0
    refine_ms: float = 0.0
    verify_ms: float = 0.0
    first_ms: Optional[float] = None
    total_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "counter_examples": self.counter_examples,
            "candidate_solves": self.candidate_solves,
            "ce_solves": self.ce_solves,
            "refinements": self.refinements,
            "time_ms": {"candidate": round(self.candidate_ms, 3), "counter_example": round(self.ce_ms, 3),
                        "refine": round(self.refine_ms, 3), "verify": round(self.verify_ms, 3),
                        "first": None if self.first_ms is None else round(self.first_ms, 3),
                        "total": round(self.total_ms, 3)},
        }


@dataclass
class CegarResult:
    status: str  # "sat", "unsat", "timeout", "limit"
    solutions: list
    stats: CegarStats
    counter_example_log: List[int] = field(default_factory=list)
    complete: bool = True  # False when enumeration stopped early

    @property
    def solution(self):
        return self.solutions[0] if self.solutions else None

    def to_json(self, names: Sequence[str]) -> dict:
        sols = [s.to_bnet() if isinstance(s, BooleanNetwork) else assignment_to_json(s, names)
                for s in self.solutions]
        out = {"status": self.status, "solutions": sols, "complete": self.complete}
        out.update(self.stats.to_json())
        return out


def _violating_vertex(m: Subcube, marker: Mapping[int, int]) -> int:
    x = m.values
    for i, b in marker.items():
        v = m.value(i)
        if v is None:
            return (x | (1 << i)) if b == 0 else x
        if v != b:
            return x
    raise ValueError("cube matches the marker")


class CounterExampleFinder:
    """Search for ``x ⊭ M`` lying in a minimal trap space.

    The circuit is built once; for a perturbable spec each query fixes the
    clamps through ``assumptions``.  When ``TS(x)`` is not minimal, the
    search descends from the witness to a minimal trap space ``m``.  If ``m``
    does not match ``M``, a non-matching vertex of ``m`` is the answer.
    Otherwise every ``x'`` outside ``m`` whose ``TS(x')`` contains a vertex
    of ``m`` has a non-minimal ``TS(x')`` (it strictly contains ``m``), and
    all of them are blocked at once on the circuit's last layer.  Each round
    thus discovers a new matching minimal trap space or ends the search.
    """

    def __init__(self, network: BooleanNetwork, marker: Mapping[int, int],
                 engine: Optional[SatEngine] = None, controllable: Optional[Iterable[int]] = None,
                 perturbable: bool = False):
        self.engine = engine if engine is not None else SatEngine()
        self.marker = dict(marker)
        spec: FunctionSpec
        if perturbable:
            spec = Perturbable.create(self.engine, network, controllable)
        else:
            spec = Concrete(network)
        self.spec = spec
        self.solver = TrapSpaceSolver(network, self.engine, spec)
        self.circuit = self.solver.circuit
        self.outside = self.engine.new_var("outside-marker")
        x = self.circuit.inputs
        if self.marker:
            self.engine.add_clause([-self.outside] + [-x[i] if b else x[i] for i, b in self.marker.items()])

    def assumptions(self, perturbation: Mapping[int, int]) -> List[int]:
        if isinstance(self.spec, Perturbable):
            return self.spec.assumptions(perturbation)
        if perturbation:
            raise ValueError("a concrete finder cannot apply perturbations")
        return []

    def find(self, g: Optional[BooleanNetwork] = None, assumptions: Sequence[int] = ()) -> Optional[int]:
        """A counter-example for network ``g`` (the spec under ``assumptions``), or None."""
        if not self.marker:
            return None
        g = g if g is not None else self.solver.network
        eng, circ = self.engine, self.circuit
        act = eng.new_var()
        try:
            while True:
                if not eng.solve([*assumptions, self.outside, act]):
                    return None
                x = circ.decode_input(eng)
                h = ts_of(g, x)
                y = self.solver.witness(h, assumptions)
                if y is None:
                    return x
                m = self.solver.descend(y, assumptions, network=g)
                if not matches(m, self.marker):
                    return _violating_vertex(m, self.marker)
                # TS(x') containing a vertex of m strictly contains m (x' outside m)
                eng.add_clause([-act] + circ.excludes(m.values))
        finally:
            eng.add_clause([-act])


def find_counter_example(g: BooleanNetwork, marker: Mapping[int, int],
                         engine: Optional[SatEngine] = None) -> Optional[int]:
    """Configuration ``x ⊭ marker`` inside a minimal trap space of ``g``, or None."""
    return CounterExampleFinder(g, marker, engine).find(g)


def _all_mts_match(g: BooleanNetwork, marker: Mapping[int, int]) -> bool:
    if g.n <= ORACLE_VERIFY_MAX_N:
        from .oracle import all_mts_match
        return all_mts_match(g, marker)
    return find_counter_example(g, marker) is None


class _Cegar:
    """Candidate engine plus the shared refinement logic."""

    def __init__(self, n: int, marker: Mapping[int, int], variant, witness: str, depth: str,
                 timeout: Optional[float], max_refinements: int, verify: bool,
                 on_refine: Optional[Callable] = None):
        if witness not in ("closure", "circuit"):
            raise ValueError(f"unknown witness encoding {witness!r}")
        if depth not in ("auto", "full", "adaptive"):
            raise ValueError(f"unknown refinement depth policy {depth!r}")
        self.n = n
        self.marker = dict(marker)
        self.variant = Variant(int(variant))
        self.witness = witness
        self.adaptive = depth == "adaptive" or (depth == "auto" and n > FULL_DEPTH_MAX_N)
        self.margin = ADAPTIVE_MARGIN
        self.timeout = timeout
        self.max_refinements = max_refinements
        self.verify = verify
        self.on_refine = on_refine
        self.engine = SatEngine()
        self.stats = CegarStats()
        self.ce_log: List[int] = []
        self._t0 = time.perf_counter()
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self.engine.deadline = self.deadline

    def _check_time(self) -> None:
        if self.deadline is not None and time.monotonic() >= self.deadline:
            raise SolveTimeout("deadline reached")

    def _encode_witness(self, spec: FunctionSpec) -> None:
        eng = self.engine
        if self.witness == "closure":
            self.w_cube = encode_trap_cube(eng, spec, prefix="w")
            encode_marker_on_cube(eng, self.w_cube, self.marker)
        else:
            circ = encode_ts_circuit(eng, spec, eng.new_vars(spec.n, "w"))
            encode_marker_on_cube(eng, circ, self.marker)
            self.w_cube = circ.final

    def decode_witness(self) -> int:
        """A configuration ``w`` of the current model with ``TS(w) ⊨ M``."""
        one, zero = self.w_cube
        return sum(1 << i for i in range(self.n)
                   if self.engine.model_value(one[i]) and not self.engine.model_value(zero[i]))

    def _solve_candidate(self, assumptions: Sequence[int] = ()) -> bool:
        self._check_time()
        t = time.perf_counter()
        try:
            return self.engine.solve(assumptions)
        finally:
            self.stats.candidate_solves += 1
            self.stats.candidate_ms += (time.perf_counter() - t) * 1e3

    def _find(self, finder: CounterExampleFinder, g: BooleanNetwork, assumptions=()) -> Optional[int]:
        self._check_time()
        finder.engine.deadline = self.deadline
        t = time.perf_counter()
        calls = finder.engine.solve_calls
        try:
            return finder.find(g, assumptions)
        finally:
            self.stats.ce_solves += finder.engine.solve_calls - calls
            self.stats.ce_ms += (time.perf_counter() - t) * 1e3

    def _verified(self, g: BooleanNetwork) -> None:
        if not self.verify:
            return
        t = time.perf_counter()
        ok = _all_mts_match(g, self.marker)
        self.stats.verify_ms += (time.perf_counter() - t) * 1e3
        if not ok:
            raise EngineError("candidate accepted by the counter-example search fails re-verification")

    def _refine_symbolic(self, spec: FunctionSpec, g: BooleanNetwork, x: int) -> None:
        """Require ``∃y: TS(y) ⊊ TS(x)`` (and ``TS(y) ⊨ M`` for the full variant)."""
        eng = self.engine
        n = self.n
        depth = n
        if self.adaptive:
            depth = min(n, layered_rounds(g, x) + 1 + self.margin)
        inputs = [eng.true if (x >> i) & 1 else eng.false for i in range(n)]
        outer = encode_ts_circuit(eng, spec, inputs, depth)
        guard = encode_converged(eng, outer) if depth < n else None
        if self.witness == "closure":
            inner = encode_trap_cube(eng, spec, guard, prefix="y")
        else:
            inner = encode_ts_circuit(eng, spec, eng.new_vars(n, "y")).final
        encode_strict_containment(eng, outer, inner, guard)
        if self.variant == Variant.FULL:
            encode_marker_on_cube(eng, inner, self.marker, guard)

    def _record_ce(self, x: int) -> None:
        self.ce_log.append(x)
        self.stats.counter_examples += 1
        if self.stats.refinements >= self.max_refinements:
            raise RefinementLimit(f"refinement cap of {self.max_refinements} reached")

    def _finish(self, status: str, solutions: list, complete: bool) -> CegarResult:
        self.stats.total_ms = (time.perf_counter() - self._t0) * 1e3
        return CegarResult(status, solutions, self.stats, list(self.ce_log), complete)

    def _mark_first(self) -> None:
        if self.stats.first_ms is None:
            self.stats.first_ms = (time.perf_counter() - self._t0) * 1e3


class ReprogrammingCegar(_Cegar):
    """Find perturbations ``P`` (``|P| <= k``) making every minimal trap space of ``f/P`` match ``M``.

    Sizes are explored in increasing order and each solution is blocked with
    all its supersets, so enumeration yields exactly the subset-minimal
    solutions.
    """

    def __init__(self, f: BooleanNetwork, marker: Mapping[int, int], k: int, variant=Variant.FULL,
                 controllable: Optional[Iterable[int]] = None, uncontrollable: Iterable[int] = (),
                 forbid_marker_nodes: bool = False, witness: str = "closure", depth: str = "auto",
                 timeout: Optional[float] = None, max_refinements: int = DEFAULT_MAX_REFINEMENTS,
                 verify: bool = True, on_refine: Optional[Callable] = None):
        if not 0 <= k <= f.n:
            raise ValueError(f"k must lie in [0, {f.n}], got {k}")
        if any(not 0 <= i < f.n for i in marker):
            raise ValueError("marker refers to a component outside the network")
        super().__init__(f.n, marker, variant, witness, depth, timeout, max_refinements, verify, on_refine)
        comps = set(range(f.n) if controllable is None else controllable) - set(uncontrollable)
        if forbid_marker_nodes:
            comps -= set(self.marker)
        self.f = f
        self.k = k
        self.controllable = sorted(comps)
        self.spec = Perturbable.create(self.engine, f, self.controllable)
        self._encode_witness(self.spec)
        self.counter = SequentialCounter(self.engine, list(self.spec.clamped.values()), k)
        self.finder = CounterExampleFinder(f, self.marker, controllable=self.controllable, perturbable=True)
        self.finder.engine.deadline = self.deadline

    def is_feasible(self, perturbation: Mapping[int, int]) -> bool:
        """Whether ``perturbation`` still satisfies the candidate formula (size bound ignored)."""
        if any(i not in self.spec.clamped for i in perturbation):
            return False
        return self.engine.solve(self.spec.assumptions(perturbation))

    def refine(self, perturbation: Assignment, x: int) -> None:
        t = time.perf_counter()
        if self.variant == Variant.BLOCK:
            self.engine.add_clause(self.spec.forbid_exact(perturbation))
        else:
            self._refine_symbolic(self.spec, apply_perturbation(self.f, perturbation), x)
        self.stats.refinements += 1
        self.stats.refine_ms += (time.perf_counter() - t) * 1e3

    def run(self, first: bool = False) -> CegarResult:
        solutions: List[Assignment] = []
        try:
            for kp in range(self.k + 1):
                bound = self.counter.at_most(kp)
                assumptions = [] if bound is None else [bound]
                while self._solve_candidate(assumptions):
                    p = self.spec.decode(self.engine)
                    g = apply_perturbation(self.f, p)
                    x = self._find(self.finder, g, self.finder.assumptions(p))
                    if x is None:
                        self._verified(g)
                        self._mark_first()
                        solutions.append(p)
                        if first:
                            return self._finish("sat", solutions, False)
                        if not p:
                            # every other perturbation is a superset of the empty one
                            return self._finish("sat", solutions, True)
                        self.engine.add_clause(self.spec.forbid(p))
                    else:
                        self._record_ce(x)
                        self.refine(p, x)
                        if self.on_refine is not None:
                            self.on_refine(self, p, x)
        except SolveTimeout:
            return self._finish("timeout", solutions, False)
        except RefinementLimit:
            return self._finish("limit", solutions, False)
        return self._finish("sat" if solutions else "unsat", solutions, True)


class SynthesisCegar(_Cegar):
    """Find a network over a signed influence graph whose minimal trap spaces all match ``M``.

    Local functions are irredundant DNFs of at most ``budget`` clauses using
    only edges of the graph (``subset``) or exactly its edges (``exact``).
    """

    def __init__(self, graph: InfluenceGraph, marker: Mapping[int, int], mode: str = "exact",
                 budget: int = 32, variant=Variant.FULL, witness: str = "closure", depth: str = "auto",
                 timeout: Optional[float] = None, max_refinements: int = DEFAULT_MAX_REFINEMENTS,
                 verify: bool = True, on_refine: Optional[Callable] = None):
        if any(not 0 <= i < graph.n for i in marker):
            raise ValueError("marker refers to a component outside the graph")
        super().__init__(graph.n, marker, variant, witness, depth, timeout, max_refinements, verify, on_refine)
        self.graph = graph
        self.spec = Synthesizable.create(self.engine, graph, mode, budget)
        encode_synth_structure(self.engine, self.spec)
        self._encode_witness(self.spec)

    def refine(self, g: BooleanNetwork, x: int) -> None:
        t = time.perf_counter()
        if self.variant == Variant.BLOCK:
            self.engine.add_clause(self.spec.forbid_current(self.engine))
        else:
            self._refine_symbolic(self.spec, g, x)
        self.stats.refinements += 1
        self.stats.refine_ms += (time.perf_counter() - t) * 1e3

    def run(self) -> CegarResult:
        try:
            while self._solve_candidate():
                g = self.spec.decode(self.engine)
                x = self._find(CounterExampleFinder(g, self.marker), g)
                if x is None:
                    self._verified(g)
                    self._mark_first()
                    return self._finish("sat", [g], True)
                self._record_ce(x)
                self.refine(g, x)
                if self.on_refine is not None:
                    self.on_refine(self, g, x)
        except SolveTimeout:
            return self._finish("timeout", [], False)
        except RefinementLimit:
            return self._finish("limit", [], False)
        return self._finish("unsat", [], True)


def solve_reprogramming(f: BooleanNetwork, marker: Mapping[int, int], k: int, **options) -> CegarResult:
    """First perturbation found (smallest size first); see :class:`ReprogrammingCegar` for options."""
    return ReprogrammingCegar(f, marker, k, **options).run(first=True)


def enumerate_reprogramming(f: BooleanNetwork, marker: Mapping[int, int], k: int, **options) -> CegarResult:
    """All subset-minimal perturbations of size at most ``k``."""
    return ReprogrammingCegar(f, marker, k, **options).run(first=False)


def solve_synthesis(graph: InfluenceGraph, marker: Mapping[int, int], mode: str = "exact",
                    budget: int = 32, **options) -> CegarResult:
    return SynthesisCegar(graph, marker, mode, budget, **options).run()


def counter_examples_as_str(result: CegarResult, n: int) -> List[str]:
    return [config_to_str(x, n) for x in result.counter_example_log]
