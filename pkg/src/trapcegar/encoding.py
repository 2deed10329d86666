"""CNF encodings of the smallest-trap-space computation and related constraints.

The trap space ``TS(x)`` of a configuration is obtained by saturating the
point cube ``x``: a fixed dimension is freed as soon as its local function can
output the other value somewhere in the cube.  The circuit unrolls ``n`` such
rounds; layer ``t`` holds two rails per component, ``one[t][i]`` (value 1
reachable) and ``zero[t][i]`` (value 0 reachable)::

    one[t+1][i]  <->  one[t][i]  or  (can_be_1(f_i, layer t) and not clamped_i)  or  (clamped_i and value_i)
    zero[t+1][i] <->  zero[t][i] or  (can_be_0(f_i, layer t) and not clamped_i)  or  (clamped_i and not value_i)

For a unate DNF, ``can_be_1`` holds iff some clause has every literal
compatible with the cube (positive literal -> one rail, negative -> zero rail)
and ``can_be_0`` iff every clause has a literal that can be falsified: taking,
per variable, the value that falsifies its (single-signed) literals gives one
vertex falsifying all clauses at once.  All definitions are bi-implications,
so fixing the inputs lets unit propagation alone evaluate the whole circuit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .cube import Subcube
from .network import BooleanNetwork, InfluenceGraph, UnateDnf
from .sat import SatEngine

Layer = Tuple[List[int], List[int]]  # (one rails, zero rails)


# ---------------------------------------------------------------------------
# function specifications


@dataclass
class Concrete:
    network: BooleanNetwork

    @property
    def n(self) -> int:
        return self.network.n


@dataclass
class Perturbable:
    """A network whose controllable components may be clamped to constants."""

    network: BooleanNetwork
    clamped: Dict[int, int]
    value: Dict[int, int]

    @classmethod
    def create(cls, engine: SatEngine, network: BooleanNetwork, controllable=None) -> "Perturbable":
        if controllable is None:
            controllable = range(network.n)
        clamped, value = {}, {}
        for i in sorted(controllable):
            name = network.names[i]
            clamped[i] = engine.new_var(f"clamped[{name}]")
            value[i] = engine.new_var(f"value[{name}]")
            # an unclamped component keeps value false: one model per perturbation
            engine.add_clause([clamped[i], -value[i]])
        return cls(network, clamped, value)

    @property
    def n(self) -> int:
        return self.network.n

    @property
    def controllable(self) -> List[int]:
        return list(self.clamped)

    def assumptions(self, perturbation: Mapping[int, int]) -> List[int]:
        """Literals fixing the clamp variables to exactly ``perturbation``."""
        out = []
        for i in self.clamped:
            if i in perturbation:
                out.append(self.clamped[i])
                out.append(self.value[i] if perturbation[i] else -self.value[i])
            else:
                out += [-self.clamped[i], -self.value[i]]
        return out

    def decode(self, engine: SatEngine) -> Dict[int, int]:
        return {i: int(engine.model_value(self.value[i]))
                for i in self.clamped if engine.model_value(self.clamped[i])}

    def forbid(self, perturbation: Mapping[int, int]) -> List[int]:
        """Clause excluding ``perturbation`` and all its supersets."""
        return [lit for i, b in perturbation.items()
                for lit in (-self.clamped[i], -self.value[i] if b else self.value[i])]

    def forbid_exact(self, perturbation: Mapping[int, int]) -> List[int]:
        """Clause excluding exactly ``perturbation``."""
        clause = self.forbid(perturbation)
        clause += [self.clamped[i] for i in self.clamped if i not in perturbation]
        return clause


@dataclass
class SynthRow:
    used: int
    selectors: Dict[int, int]  # regulator -> selector variable


@dataclass
class Synthesizable:
    """Unknown network over a signed influence graph, local functions as DNFs.

    Component ``i`` with regulators gets up to ``budget`` clause rows; row ``c``
    contains regulator ``j`` (with the sign of edge ``j -> i``) when its
    selector is true.  Components without regulators get a free constant.
    """

    graph: InfluenceGraph
    mode: str
    budget: int
    rows: Dict[int, List[SynthRow]] = field(default_factory=dict)
    constants: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def create(cls, engine: SatEngine, graph: InfluenceGraph, mode: str = "exact",
               budget: int = 32) -> "Synthesizable":
        if mode not in ("exact", "subset"):
            raise ValueError(f"unknown synthesis mode {mode!r}")
        if budget < 1:
            raise ValueError("clause budget must be at least 1")
        if not graph.is_locally_monotone:
            raise ValueError("influence graph is not locally monotone")
        spec = cls(graph, mode, budget)
        names = graph.node_names()
        for i in range(graph.n):
            regs = graph.regulators(i)
            if not regs:
                spec.constants[i] = engine.new_var(f"const[{names[i]}]")
                continue
            # an antichain of subsets of r regulators has at most C(r, r//2) members
            nrows = min(budget, comb(len(regs), len(regs) // 2))
            spec.rows[i] = [
                SynthRow(engine.new_var(f"used[{names[i]},{c}]"),
                         {j: engine.new_var(f"sel[{names[i]},{c},{names[j]}]") for j in sorted(regs)})
                for c in range(nrows)]
        return spec

    @property
    def n(self) -> int:
        return self.graph.n

    def decode(self, engine: SatEngine) -> BooleanNetwork:
        functions = []
        for i in range(self.n):
            if i in self.constants:
                functions.append(UnateDnf.const(engine.model_value(self.constants[i])))
                continue
            regs = self.graph.regulators(i)
            clauses = [{(j, regs[j]) for j, s in row.selectors.items() if engine.model_value(s)}
                       for row in self.rows[i] if engine.model_value(row.used)]
            functions.append(UnateDnf.from_clauses(clauses))
        return BooleanNetwork(self.graph.node_names(), tuple(functions))

    def variables(self) -> List[int]:
        out = list(self.constants.values())
        for rows in self.rows.values():
            for row in rows:
                out.append(row.used)
                out += row.selectors.values()
        return out

    def forbid_current(self, engine: SatEngine) -> List[int]:
        """Clause excluding the selector assignment of the current model."""
        return [-v if engine.model_value(v) else v for v in self.variables()]


FunctionSpec = Union[Concrete, Perturbable, Synthesizable]


# ---------------------------------------------------------------------------
# the trap-space circuit


@dataclass
class TsCircuit:
    inputs: List[int]
    layers: List[Layer]
    spec: FunctionSpec

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def final(self) -> Layer:
        return self.layers[-1]

    def rail(self, b: int, i: int, t: int = -1) -> int:
        return self.layers[t][0 if b else 1][i]

    def layer_vars(self) -> List[int]:
        return [v for one, zero in self.layers for v in (*one, *zero)]

    def decode(self, engine: SatEngine, t: int = -1) -> Subcube:
        one, zero = self.layers[t]
        o = sum(1 << i for i, v in enumerate(one) if engine.model_value(v))
        z = sum(1 << i for i, v in enumerate(zero) if engine.model_value(v))
        return Subcube(self.n, o, z)

    def decode_input(self, engine: SatEngine) -> int:
        return sum(1 << i for i, v in enumerate(self.inputs) if engine.model_value(v))

    def decode_fixed(self, lits, t: int = -1) -> Optional[Subcube]:
        """Cube read from a set of fixed literals; None if some rail is unfixed."""
        one, zero = self.layers[t]
        o = z = 0
        for i in range(self.n):
            for rail, bit in ((one[i], 1), (zero[i], 0)):
                if rail in lits:
                    if bit:
                        o |= 1 << i
                    else:
                        z |= 1 << i
                elif -rail not in lits:
                    return None
        return Subcube(self.n, o, z)

    def excludes(self, z: int) -> List[int]:
        """Clause stating that configuration ``z`` is outside the final cube."""
        one, zero = self.final
        return [-(one[i] if (z >> i) & 1 else zero[i]) for i in range(self.n)]

    def differs_from(self, h: Subcube) -> List[int]:
        """Clause stating that the final layer is not ``h``."""
        one, zero = self.final
        clause = []
        for i in range(self.n):
            clause.append(-one[i] if (h.one >> i) & 1 else one[i])
            clause.append(-zero[i] if (h.zero >> i) & 1 else zero[i])
        return clause


def _rail(layer: Layer, j: int, positive: bool) -> int:
    return layer[0][j] if positive else layer[1][j]


def _eval_cubes(engine: SatEngine, spec: FunctionSpec, i: int, layer: Layer,
                target: bool) -> List[List[int]]:
    """``exists z in layer-cube: f_i(z) = target`` as a disjunction of literal conjunctions."""
    if isinstance(spec, Synthesizable):
        return _synth_cubes(engine, spec, i, layer, target)
    f = spec.network.functions[i]
    if f.is_constant:
        return [[]] if f.constant == target else []
    if target:
        return [[_rail(layer, j, s) for j, s in sorted(c)] for c in f.clauses]
    return [[engine.OR([_rail(layer, j, not s) for j, s in sorted(c)]) for c in f.clauses]]


def _synth_cubes(engine, spec: Synthesizable, i, layer, target):
    if i in spec.constants:
        k = spec.constants[i]
        return [[k if target else -k]]
    regs = spec.graph.regulators(i)
    if target:
        return [[row.used] + [engine.OR([-s, _rail(layer, j, regs[j])]) for j, s in row.selectors.items()]
                for row in spec.rows[i]]
    return [[engine.OR([-row.used] + [engine.AND([s, _rail(layer, j, not regs[j])])
                                      for j, s in row.selectors.items()])
             for row in spec.rows[i]]]


def encode_fun_eval(engine: SatEngine, spec: FunctionSpec, i: int, layer: Layer, target: bool) -> int:
    """Literal true iff local function ``i`` can output ``target`` inside the layer's cube."""
    return engine.OR([engine.AND(c) for c in _eval_cubes(engine, spec, i, layer, bool(target))])


def encode_ts_circuit(engine: SatEngine, spec: FunctionSpec, inputs: Sequence[int],
                      depth: Optional[int] = None) -> TsCircuit:
    """Unroll ``depth`` (default ``n``) saturation rounds from configuration ``inputs``.

    Allocates exactly ``2n(depth+1)`` layer variables; gate auxiliaries come on top.
    """
    n = spec.n
    if len(inputs) != n:
        raise ValueError("one input literal per component is required")
    depth = n if depth is None else depth
    one0 = engine.new_vars(n)
    zero0 = engine.new_vars(n)
    for i, x in enumerate(inputs):
        engine.add_clause([-one0[i], x])
        engine.add_clause([one0[i], -x])
        engine.add_clause([-zero0[i], -x])
        engine.add_clause([zero0[i], x])
    layers = [(one0, zero0)]
    for _ in range(depth):
        prev = layers[-1]
        nxt = (engine.new_vars(n), engine.new_vars(n))
        for i in range(n):
            for b in (1, 0):
                terms = [prev[1 - b][i]] + _output_terms(engine, spec, i, prev, b)
                engine.define_or(nxt[1 - b][i], terms)
        layers.append(nxt)
    return TsCircuit(list(inputs), layers, spec)


def _output_terms(engine: SatEngine, spec: FunctionSpec, i: int, layer: Layer, b: int) -> List[int]:
    """Disjuncts of "component ``i`` of the (possibly clamped) network can output ``b``"."""
    cubes = _eval_cubes(engine, spec, i, layer, bool(b))
    if isinstance(spec, Perturbable) and i in spec.clamped:
        cl, v = spec.clamped[i], spec.value[i]
        cubes = [c + [-cl] for c in cubes] + [[cl, v if b else -v]]
    return [engine.AND(c) for c in cubes]


def _guarded(engine: SatEngine, guard: Optional[int], clause: List[int]) -> None:
    engine.add_clause(clause if guard is None else [-guard] + clause)


def encode_trap_cube(engine: SatEngine, spec: FunctionSpec, guard: Optional[int] = None,
                     prefix: str = "h") -> Layer:
    """Fresh subcube rails constrained to be a trap space of the spec's network.

    A fixed dimension must not be able to take the other value anywhere in
    the cube: one round of the saturation circuit without the unrolling.
    """
    n = spec.n
    layer = (engine.new_vars(n, f"{prefix}.one"), engine.new_vars(n, f"{prefix}.zero"))
    for i in range(n):
        _guarded(engine, guard, [layer[0][i], layer[1][i]])
        for b in (1, 0):
            # rail b closed means the dimension is fixed to 1-b, so b must be unreachable
            can = engine.OR(_output_terms(engine, spec, i, layer, b))
            _guarded(engine, guard, [layer[0 if b else 1][i], -can])
    return layer


def _final(c: Union[TsCircuit, Layer]) -> Layer:
    return c.final if isinstance(c, TsCircuit) else c


def encode_marker_on_cube(engine: SatEngine, circuit: Union[TsCircuit, Layer], marker: Mapping[int, int],
                          guard: Optional[int] = None) -> None:
    """Final cube of ``circuit`` matches ``marker`` (each marked dimension fixed to its value).

    ``circuit`` may also be a bare ``(one, zero)`` rail pair.
    """
    one, zero = _final(circuit)
    for i, b in marker.items():
        _guarded(engine, guard, [one[i] if b else zero[i]])
        _guarded(engine, guard, [-(zero[i] if b else one[i])])


def encode_strict_containment(engine: SatEngine, outer: Union[TsCircuit, Layer],
                              inner: Union[TsCircuit, Layer], guard: Optional[int] = None) -> List[int]:
    """``c(inner) ⊊ c(outer)`` on the final layers; returns the diff variables."""
    diffs = []
    outer, inner = _final(outer), _final(inner)
    for b in (1, 0):
        for i in range(len(outer[0])):
            o, p = outer[1 - b][i], inner[1 - b][i]
            _guarded(engine, guard, [-p, o])
            d = engine.new_var()
            engine.add_clause([-d, o])
            engine.add_clause([-d, -p])
            engine.add_clause([d, -o, p])
            diffs.append(d)
    _guarded(engine, guard, diffs)
    return diffs


def encode_containment(engine: SatEngine, outer: Union[TsCircuit, Layer],
                       inner: Union[TsCircuit, Layer], guard: Optional[int] = None) -> None:
    """``c(inner) ⊆ c(outer)``: every open inner rail is open in the outer cube."""
    outer, inner = _final(outer), _final(inner)
    for b in (0, 1):
        for o, p in zip(outer[b], inner[b]):
            _guarded(engine, guard, [-p, o])


def encode_converged(engine: SatEngine, circuit: TsCircuit) -> int:
    """Literal true iff the last two layers of ``circuit`` coincide."""
    (o1, z1), (o0, z0) = circuit.layers[-1], circuit.layers[-2]
    opened = [engine.AND([a, -b]) for a, b in zip(o1 + z1, o0 + z0)]
    return -engine.OR(opened)


class SequentialCounter:
    """Unary counter over ``lits`` (Sinz); ``at_most(k)`` yields an assumption literal.

    ``out[j]`` is implied whenever at least ``j + 1`` inputs are true, so the
    assumption ``-out[k]`` enforces ``sum(lits) <= k``.  Bounds up to ``max_bound``
    share one encoding, which lets the bound grow between solver calls.
    """

    def __init__(self, engine: SatEngine, lits: Sequence[int], max_bound: int):
        self.engine = engine
        self.lits = list(lits)
        self.max_bound = max_bound
        width = min(max_bound + 1, len(self.lits))
        self.out: List[int] = []
        prev: List[int] = []
        for x in self.lits:
            cur = [engine.new_var() for _ in range(width)]
            engine.add_clause([-x, cur[0]])
            for j in range(width):
                if j < len(prev):
                    engine.add_clause([-prev[j], cur[j]])
                    if j + 1 < width:
                        engine.add_clause([-x, -prev[j], cur[j + 1]])
            prev = cur
        self.out = prev

    def at_most(self, k: int) -> Optional[int]:
        """Assumption literal for ``sum <= k``; None when the bound is vacuous."""
        if k < 0:
            raise ValueError("cardinality bound must be non-negative")
        if k >= len(self.lits):
            return None
        if k > self.max_bound:
            raise ValueError(f"counter was built for bounds up to {self.max_bound}")
        return -self.out[k]


def encode_cardinality_at_most(engine: SatEngine, lits: Sequence[int], k: int) -> Optional[int]:
    """One-shot ``sum(lits) <= k``; returns the activation assumption (None if vacuous)."""
    return SequentialCounter(engine, lits, k).at_most(k)


def _lex_geq(engine: SatEngine, a: Sequence[int], b: Sequence[int]) -> None:
    eq = engine.true
    for k, (x, y) in enumerate(zip(a, b)):
        engine.add_clause([-eq, x, -y])
        if k + 1 < len(a):
            nxt = engine.new_var()
            engine.add_clause([-eq, -x, -y, nxt])
            engine.add_clause([-eq, x, y, nxt])
            eq = nxt


def encode_synth_structure(engine: SatEngine, spec: Synthesizable) -> None:
    """Structural constraints on selector assignments.

    Rows are used as a prefix; a used row selects at least one literal and an
    unused row none; the used rows form an antichain (no clause contains
    another, so the DNF is irredundant and syntactic influences are the real
    ones) sorted in decreasing lexicographic order.  Regulated components use
    at least one row; in ``exact`` mode every regulator is selected somewhere.
    """
    for i, rows in spec.rows.items():
        engine.add_clause([rows[0].used])
        for c, row in enumerate(rows):
            sels = list(row.selectors.values())
            engine.add_clause([-row.used] + sels)
            for s in sels:
                engine.add_clause([-s, row.used])
            if c:
                engine.add_clause([-row.used, rows[c - 1].used])
        for c, rc in enumerate(rows):
            for d, rd in enumerate(rows):
                if c != d:
                    engine.add_clause([-rc.used] + [engine.AND([rc.selectors[j], -rd.selectors[j]])
                                                    for j in rc.selectors])
        for c in range(len(rows) - 1):
            _lex_geq(engine, list(rows[c].selectors.values()), list(rows[c + 1].selectors.values()))
        if spec.mode == "exact":
            for j in rows[0].selectors:
                engine.add_clause([row.selectors[j] for row in rows])
