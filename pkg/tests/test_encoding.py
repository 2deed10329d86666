import itertools

import pytest
from hypothesis import given, settings

from trapcegar import apply_perturbation, ts_of
from trapcegar.encoding import (Concrete, Perturbable, SequentialCounter, Synthesizable,
                                encode_containment, encode_converged, encode_marker_on_cube,
                                encode_strict_containment, encode_synth_structure, encode_trap_cube,
                                encode_ts_circuit)
from trapcegar.cube import Subcube
from trapcegar.network import InfluenceGraph
from trapcegar.oracle import perturbation_domain, synthesis_domain, trap_spaces
from trapcegar.sat import SatEngine
from trapcegar.trapspace import layered_rounds

from strategies import networks


def fix(inputs, x):
    return [v if (x >> i) & 1 else -v for i, v in enumerate(inputs)]


def models(eng, variables, assumptions=()):
    """All assignments to ``variables`` consistent with the engine, by blocking."""
    act = eng.new_var()
    out = []
    while eng.solve([*assumptions, act]):
        vals = tuple(eng.model_value(v) for v in variables)
        out.append(vals)
        eng.add_clause([-act] + [-v if b else v for v, b in zip(variables, vals)])
    eng.add_clause([-act])
    return out


def test_layer_variable_budget(ex2):
    eng = SatEngine()
    inputs = eng.new_vars(ex2.n)
    circ = encode_ts_circuit(eng, Concrete(ex2), inputs)
    n = ex2.n
    assert len(circ.layers) == n + 1
    assert len(set(circ.layer_vars())) == 2 * n * (n + 1)
    assert len(set(circ.layer_vars()) | set(inputs)) == 2 * n * (n + 1) + n


@given(networks(max_n=6))
def test_propagation_alone_evaluates_every_layer(f):
    eng = SatEngine()
    inputs = eng.new_vars(f.n)
    circ = encode_ts_circuit(eng, Concrete(f), inputs)
    for x in range(1 << f.n):
        fixed = eng.propagate_only(fix(inputs, x))
        cubes = [circ.decode_fixed(fixed, t) for t in range(f.n + 1)]
        assert all(c is not None for c in cubes)
        assert cubes[0] == Subcube.point(x, f.n)
        # rails only ever open, and the layers settle after the layered round count
        assert all(a <= b for a, b in zip(cubes, cubes[1:]))
        r = layered_rounds(f, x)
        assert all(c == ts_of(f, x) for c in cubes[r:])
        assert r == 0 or cubes[r - 1] != cubes[r]
    assert eng.stats().get("decisions", 0) == 0


@given(networks(min_n=2, max_n=5))
@settings(max_examples=25)
def test_perturbable_circuit_under_clamp_assumptions(f):
    eng = SatEngine()
    spec = Perturbable.create(eng, f)
    inputs = eng.new_vars(f.n)
    circ = encode_ts_circuit(eng, spec, inputs)
    for p in perturbation_domain(f.n, 2):
        g = apply_perturbation(f, p)
        for x in range(1 << f.n):
            fixed = eng.propagate_only([*spec.assumptions(p), *fix(inputs, x)])
            assert circ.decode_fixed(fixed) == ts_of(g, x)


def test_forbid_clauses(ex1):
    eng = SatEngine()
    spec = Perturbable.create(eng, ex1)
    eng.add_clause(spec.forbid({0: 1}))
    eng.add_clause(spec.forbid_exact({1: 0}))
    assert not eng.solve(spec.assumptions({0: 1}))
    assert not eng.solve(spec.assumptions({0: 1, 2: 0}))
    assert not eng.solve(spec.assumptions({1: 0}))
    assert eng.solve(spec.assumptions({1: 0, 2: 1}))
    assert eng.solve(spec.assumptions({0: 0}))
    # one model per perturbation: no value bit without a clamp
    clamps = [v for i in spec.clamped for v in (spec.clamped[i], spec.value[i])]
    assert len(models(eng, clamps, spec.assumptions({}))) == 1


@given(networks(max_n=4))
@settings(max_examples=30)
def test_trap_cube_models_are_the_trap_spaces(f):
    eng = SatEngine()
    one, zero = encode_trap_cube(eng, Concrete(f))
    found = {Subcube(f.n, sum(b << i for i, b in enumerate(m[:f.n])), sum(b << i for i, b in enumerate(m[f.n:])))
             for m in models(eng, one + zero)}
    assert found == set(trap_spaces(f))


def _fixed_cube(eng, h):
    one, zero = eng.new_vars(h.n), eng.new_vars(h.n)
    for i in range(h.n):
        eng.add_clause([one[i] if (h.one >> i) & 1 else -one[i]])
        eng.add_clause([zero[i] if (h.zero >> i) & 1 else -zero[i]])
    return one, zero


CUBES = [Subcube.from_str("".join(c)) for c in itertools.product("01-", repeat=3)]


@pytest.mark.parametrize("outer", CUBES[::4])
def test_containment_constraints(outer):
    for inner in CUBES:
        for strict in (False, True):
            eng = SatEngine()
            a, b = _fixed_cube(eng, outer), _fixed_cube(eng, inner)
            if strict:
                encode_strict_containment(eng, a, b)
                assert eng.solve() == (inner < outer)
            else:
                encode_containment(eng, a, b)
                assert eng.solve() == (inner <= outer)


def test_guarded_constraints_are_switchable():
    eng = SatEngine()
    a, b = _fixed_cube(eng, Subcube.from_str("1-")), _fixed_cube(eng, Subcube.from_str("0-"))
    g = eng.new_var()
    encode_strict_containment(eng, a, b, guard=g)
    assert eng.solve([-g]) and not eng.solve([g])


def test_marker_on_cube():
    for h in CUBES:
        for marker in ({0: 1}, {0: 0, 2: 1}, {}):
            eng = SatEngine()
            encode_marker_on_cube(eng, _fixed_cube(eng, h), marker)
            assert eng.solve() == all(h.value(i) == b for i, b in marker.items())


def test_converged_literal(sat_net):
    for depth in range(1, 5):
        eng = SatEngine()
        inputs = eng.new_vars(4)
        circ = encode_ts_circuit(eng, Concrete(sat_net), inputs, depth)
        conv = encode_converged(eng, circ)
        assert eng.solve([*fix(inputs, 0), conv]) == (layered_rounds(sat_net, 0) < depth)


@pytest.mark.parametrize("width, bound", [(5, 0), (5, 2), (4, 3), (3, 5)])
def test_sequential_counter(width, bound):
    eng = SatEngine()
    lits = eng.new_vars(width)
    counter = SequentialCounter(eng, lits, bound)
    for k in range(bound + 1):
        a = counter.at_most(k)
        got = models(eng, lits, [] if a is None else [a])
        assert sorted(got) == sorted(v for v in itertools.product((False, True), repeat=width) if sum(v) <= k)
    with pytest.raises(ValueError):
        counter.at_most(-1)


SMALL_GRAPH = InfluenceGraph(3, frozenset({(0, 2), (1, 2), (2, 2)}), frozenset({(2, 0)}))


@pytest.mark.parametrize("mode", ["exact", "subset"])
@pytest.mark.parametrize("budget", [1, 2, 3, 32])
def test_selector_models_are_the_dnf_domain(mode, budget):
    """Each network of the domain corresponds to exactly one selector model."""
    eng = SatEngine()
    spec = Synthesizable.create(eng, SMALL_GRAPH, mode, budget)
    encode_synth_structure(eng, spec)
    act = eng.new_var()
    decoded = []
    while eng.solve([act]):
        decoded.append(spec.decode(eng))
        eng.add_clause([-act] + spec.forbid_current(eng))
    assert len(decoded) == len(set(decoded))
    # three regulators admit antichains of at most three clauses
    assert set(decoded) == set(synthesis_domain(SMALL_GRAPH, mode, min(budget, 3)))
