"""Trap spaces of the two small example networks.

Walks through saturation, minimality and enumeration, and checks each answer
against brute force over all subcubes.

    python demos/01_trap_spaces.py
"""

from pathlib import Path

from trapcegar import Subcube, enumerate_mts, is_minimal, is_trap_space, read_bnet, saturation_trace, ts_of
from trapcegar.oracle import brute_mts, brute_ts

DATA = Path(__file__).parent / "data"


def show_saturation():
    f = read_bnet(DATA / "saturation.bnet")
    print("saturation from 0000, one line per sweep that opened a rail:")
    for cube in saturation_trace(f, "0000"):
        print("   ", cube)
    print("brute force agrees:", brute_ts(f, "0000") == ts_of(f, "0000"))


def show_example1():
    f = read_bnet(DATA / "ex1.bnet")
    h = ts_of(f, "1100")
    print(f"\nex1: TS(1100) = {h}, trap space: {is_trap_space(f, h)}, minimal: {is_minimal(f, h)}")
    mts = sorted(map(str, enumerate_mts(f)))
    print("ex1 minimal trap spaces:", mts)
    # 1110 is a fixed point too, so 11-- holds two minimal trap spaces
    print("inside 11--:", [m for m in mts if Subcube.from_str(m) <= h])
    print("brute force agrees:", set(enumerate_mts(f)) == brute_mts(f))


def show_example2():
    f = read_bnet(DATA / "ex2.bnet")
    print("\nex2 minimal trap spaces:", sorted(map(str, enumerate_mts(f))))
    for text in ("010--", "10---"):
        h = Subcube.from_str(text)
        print(f"   {text}: trap space {is_trap_space(f, h)}, minimal {is_minimal(f, h)}")
    print("brute force agrees:", set(enumerate_mts(f)) == brute_mts(f))


if __name__ == "__main__":
    show_saturation()
    show_example1()
    show_example2()
