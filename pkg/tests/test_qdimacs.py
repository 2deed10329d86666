import re

import pytest
from hypothesis import given, settings, strategies as st

from trapcegar.oracle import brute_reprogramming, parse_qdimacs, solve_qdimacs_by_expansion
from trapcegar.qdimacs import export_qdimacs, model_variable_count

from strategies import instances


def roles(text):
    out = {}
    for m in re.finditer(r"^c vars (\d+)-(\d+): (.*)$", text, re.M):
        out[m.group(3)] = int(m.group(2)) - int(m.group(1)) + 1
    return out


def test_budget_breakdown(ex1):
    text = export_qdimacs(ex1, {3: 1}, 2)
    r = roles(text)
    n = 4
    clamps = sum(v for k, v in r.items() if k.startswith("clamped/value"))
    layers = sum(v for k, v in r.items() if "layer" in k)
    assert clamps == 2 * n
    assert r["x"] == n and r["y"] == n
    assert layers == 2 * 2 * n * (n + 1)
    assert r["diff (one-rails then zero-rails)"] == 2 * n
    assert model_variable_count(text) == clamps + layers + 2 * n + 2 * n == 104
    counter = sum(v for k, v in r.items() if k.startswith("counter"))
    nvars, prefix, _ = parse_qdimacs(text)
    assert nvars == 104 + counter


def test_restricted_components_lose_clamps(ex2):
    full = model_variable_count(export_qdimacs(ex2, {1: 1, 2: 1}, 2))
    assert model_variable_count(export_qdimacs(ex2, {1: 1, 2: 1}, 2, forbid_marker_nodes=True)) == full - 4
    assert model_variable_count(export_qdimacs(ex2, {1: 1, 2: 1}, 2, uncontrollable=[0])) == full - 2


def test_prefix_partitions_variables(ex2):
    nvars, prefix, clauses = parse_qdimacs(export_qdimacs(ex2, {1: 1, 2: 1}, 1))
    seen = [v for _, vs in prefix for v in vs]
    assert len(seen) == len(set(seen)) == nvars
    assert [q for q, _ in prefix] == ["e", "a", "e"]


def test_example_verdicts(ex2):
    marker = {1: 1, 2: 1}
    assert not solve_qdimacs_by_expansion(export_qdimacs(ex2, marker, 0))
    assert not solve_qdimacs_by_expansion(export_qdimacs(ex2, marker, 1))
    assert solve_qdimacs_by_expansion(export_qdimacs(ex2, marker, 2))
    assert not solve_qdimacs_by_expansion(export_qdimacs(ex2, marker, 2, forbid_marker_nodes=True))
    assert solve_qdimacs_by_expansion(export_qdimacs(ex2, {}, 0))


def test_argument_checks(ex1):
    with pytest.raises(ValueError):
        export_qdimacs(ex1, {0: 1}, 5)
    with pytest.raises(ValueError):
        export_qdimacs(ex1, {9: 1}, 1)
    with pytest.raises(ValueError):
        model_variable_count("p cnf 1 0\n")


@given(instances(min_n=1, max_n=4), st.integers(0, 3), st.booleans())
@settings(max_examples=60)
def test_expansion_agrees_with_brute_force(inst, k, forbid):
    f, marker = inst
    k = min(k, f.n)
    text = export_qdimacs(f, marker, k, forbid_marker_nodes=forbid)
    expected = bool(brute_reprogramming(f, marker, k, forbid_marker_nodes=forbid))
    assert solve_qdimacs_by_expansion(text) == expected
