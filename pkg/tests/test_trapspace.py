from hypothesis import given, settings

from trapcegar import (Subcube, can_output, descend_to_mts, enumerate_mts, in_mts, is_minimal,
                       is_trap_space, saturation_trace, ts_of)
from trapcegar.generate import random_network
from trapcegar.oracle import brute_in_mts, brute_mts, brute_ts, trap_spaces
from trapcegar.sat import SatEngine
from trapcegar.trapspace import layered_rounds

from strategies import networks

S = Subcube.from_str

# ground truth from trapcegar.oracle, frozen
EX1_MTS = {S("0001"), S("1101"), S("1110")}
EX2_MTS = {S("01000"), S("01011"), S("10--0"), S("10011")}


def all_cubes(n):
    for k in range(3 ** n):
        chars = []
        for _ in range(n):
            k, r = divmod(k, 3)
            chars.append("01-"[r])
        yield S("".join(chars))


def test_example1_facts(ex1):
    assert ts_of(ex1, "1100") == S("11--")
    assert is_trap_space(ex1, S("11--")) and not is_minimal(ex1, S("11--"))
    assert set(enumerate_mts(ex1)) == EX1_MTS
    assert descend_to_mts(ex1, "1100") in {m for m in EX1_MTS if m <= S("11--")}


def test_example2_facts(ex2):
    assert set(enumerate_mts(ex2)) == EX2_MTS
    assert is_trap_space(ex2, S("10---")) and not is_minimal(ex2, S("10---"))
    assert is_trap_space(ex2, S("010--")) and not is_minimal(ex2, S("010--"))
    assert in_mts(ex2, "10010") and not in_mts(ex2, "01100")
    assert ts_of(ex2, "01100") == S("01--0")


def test_saturation_trace_ends_at_ts(sat_net):
    trace = saturation_trace(sat_net, "0000")
    assert trace[0] == S("0000") and trace[-1] == ts_of(sat_net, "0000")
    assert all(a < b for a, b in zip(trace, trace[1:]))


def test_enumeration_limit(ex2):
    got = enumerate_mts(ex2, limit=2)
    assert len(got) == 2 and set(got) <= EX2_MTS


@given(networks(max_n=4))
def test_can_output_matches_vertex_scan(f):
    for h in all_cubes(f.n):
        for i in range(f.n):
            for b in (0, 1):
                direct = any(((f(y) >> i) & 1) == b for y in h.vertices())
                assert can_output(f, i, h, b) == direct


@given(networks(max_n=4))
def test_trap_space_check_matches_oracle(f):
    closed = set(trap_spaces(f))
    for h in all_cubes(f.n):
        assert is_trap_space(f, h) == (h in closed)


@given(networks(max_n=7))
def test_ts_of_is_smallest_trap_space(f):
    for x in range(1 << f.n):
        h = ts_of(f, x)
        assert h == brute_ts(f, x)
        assert x in h and is_trap_space(f, h)
        assert layered_rounds(f, x) <= f.n


@given(networks(max_n=7))
@settings(max_examples=40)
def test_mts_and_membership_match_oracle(f):
    expected = brute_mts(f)
    assert set(enumerate_mts(f)) == expected
    assert set(enumerate_mts(f, engine=SatEngine())) == expected
    eng = SatEngine()
    for x in range(1 << f.n):
        assert in_mts(f, x) == brute_in_mts(f, x)
        assert in_mts(f, x, eng) == brute_in_mts(f, x)
        m = descend_to_mts(f, x, eng)
        assert m in expected and m <= ts_of(f, x)


def test_mts_of_largest_brute_force_size():
    f = random_network(11, 3, 5)
    assert set(enumerate_mts(f)) == brute_mts(f)
