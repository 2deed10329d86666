"""SAT engine wrapper and random instance generation."""

import itertools
import time

import pytest

from trapcegar.generate import output_nodes, random_marker, random_network
from trapcegar.network import is_locally_monotone, parse_bnet
from trapcegar.sat import SatEngine, SolveTimeout


def test_gates_are_shared_and_simplified():
    eng = SatEngine()
    a, b = eng.new_vars(2)
    assert eng.AND([a, b]) == eng.AND([b, a])
    assert eng.AND([a, -a]) == eng.false
    assert eng.AND([]) == eng.true and eng.OR([]) == eng.false
    assert eng.AND([a, eng.true]) == a
    g = eng.OR([a, b])
    assert eng.solve([g, -a]) and eng.model_value(b)
    assert not eng.solve([g, -a, -b])


def test_propagation_reports_conflicts_and_units():
    eng = SatEngine()
    a, b, c = eng.new_vars(3)
    eng.add_clause([-a, b])
    eng.add_clause([-b, c])
    eng.add_clause([c])
    fixed = eng.propagate_only([a])
    assert {a, b, c} <= fixed
    eng.add_clause([-c, -b])
    assert eng.propagate_only([a]) is None


def test_recorded_dimacs():
    eng = SatEngine(record=True)
    a = eng.new_var("a")
    eng.add_clause([a])
    text = eng.to_dimacs()
    assert "p cnf 2 2" in text and "c 2 a" in text


def _pigeonhole(eng, holes):
    x = [[eng.new_var() for _ in range(holes)] for _ in range(holes + 1)]
    for row in x:
        eng.add_clause(row)
    for h in range(holes):
        for p, q in itertools.combinations(range(holes + 1), 2):
            eng.add_clause([-x[p][h], -x[q][h]])


def test_deadline_interrupts_a_hard_solve():
    eng = SatEngine()
    _pigeonhole(eng, 11)
    eng.deadline = time.monotonic() + 0.2
    t0 = time.monotonic()
    with pytest.raises(SolveTimeout):
        eng.solve()
    assert time.monotonic() - t0 < 5


def test_random_networks_are_reproducible_and_unate():
    f = random_network(30, 3, 7)
    assert f == random_network(30, 3, 7)
    assert is_locally_monotone(f)
    assert f.names[0] == "x1"
    assert all(1 <= len(fn.regulators()) <= 3 for fn in f.functions)
    assert parse_bnet(f.to_bnet()) == f


def test_output_nodes():
    f = parse_bnet("a, b\nb, a\nc, a & !b\n")
    assert output_nodes(f) == [2]
    g = parse_bnet("a, a\nb, c | a\nc, b\n")  # no sink: bottom component {b, c}
    assert output_nodes(g) == [1, 2]


def test_markers_prefer_outputs():
    f = random_network(40, 3, 1)
    outs = set(output_nodes(f))
    m = random_marker(f, 3, 1)
    assert len(m) == 3 and set(m.values()) <= {0, 1}
    assert set(m) <= outs or outs < set(m)
