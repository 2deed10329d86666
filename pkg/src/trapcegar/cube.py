"""Configurations and subcubes of the Boolean hypercube.

A configuration of dimension ``n`` is stored as a Python ``int`` whose bit ``i``
is the state of component ``i``.  A subcube uses two such words, the *one rail*
and the *zero rail*: dimension ``i`` may take value 1 iff bit ``i`` of ``one``
is set, and value 0 iff bit ``i`` of ``zero`` is set.  A free dimension (``*``)
has both rails set.  Python integers are arbitrary precision, so the rails are
bit-packed whatever ``n`` is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

ConfigLike = Union[int, str, Sequence[int]]


def full_mask(n: int) -> int:
    return (1 << n) - 1


def config_from_str(text: str) -> int:
    """Parse ``"0110"`` (character ``i`` is component ``i``) into a bit word."""
    x = 0
    for i, ch in enumerate(text):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"invalid configuration character {ch!r} in {text!r}")
    return x


def config_to_str(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def as_config(x: ConfigLike, n: int) -> int:
    """Coerce a string, 0/1 sequence or bit word into a bit word of length ``n``."""
    if isinstance(x, str):
        if len(x) != n:
            raise ValueError(f"configuration {x!r} has length {len(x)}, expected {n}")
        return config_from_str(x)
    if isinstance(x, int):
        if x < 0 or x >> n:
            raise ValueError(f"configuration word {x} does not fit in {n} bits")
        return x
    bits = list(x)
    if len(bits) != n:
        raise ValueError(f"configuration has length {len(bits)}, expected {n}")
    return sum(1 << i for i, b in enumerate(bits) if b)


@dataclass(frozen=True)
class Subcube:
    """Element of ``{0,1,*}^n`` in dual-rail form."""

    n: int
    one: int
    zero: int

    def __post_init__(self):
        if (self.one | self.zero) != full_mask(self.n):
            raise ValueError("every dimension of a subcube needs at least one rail")

    @classmethod
    def point(cls, x: int, n: int) -> "Subcube":
        return cls(n, x, full_mask(n) & ~x)

    @classmethod
    def full(cls, n: int) -> "Subcube":
        m = full_mask(n)
        return cls(n, m, m)

    @classmethod
    def from_str(cls, text: str) -> "Subcube":
        """Parse ``"11--"``; ``*`` is accepted as a synonym of ``-``."""
        one = zero = 0
        for i, ch in enumerate(text):
            if ch == "1":
                one |= 1 << i
            elif ch == "0":
                zero |= 1 << i
            elif ch in "-*":
                one |= 1 << i
                zero |= 1 << i
            else:
                raise ValueError(f"invalid subcube character {ch!r} in {text!r}")
        return cls(len(text), one, zero)

    def __str__(self) -> str:
        out = []
        for i in range(self.n):
            o, z = (self.one >> i) & 1, (self.zero >> i) & 1
            out.append("-" if o and z else ("1" if o else "0"))
        return "".join(out)

    def __repr__(self) -> str:
        return f"Subcube('{self}')"

    @property
    def free(self) -> int:
        return self.one & self.zero

    @property
    def fixed(self) -> int:
        return full_mask(self.n) & ~self.free

    @property
    def values(self) -> int:
        """Values of the fixed dimensions (bits of free dimensions are 0)."""
        return self.one & ~self.zero

    def dimension(self) -> int:
        return bin(self.free).count("1")

    def value(self, i: int):
        """``0``, ``1`` or ``None`` for a free dimension."""
        o, z = (self.one >> i) & 1, (self.zero >> i) & 1
        if o and z:
            return None
        return 1 if o else 0

    def contains(self, x: int) -> bool:
        return (x & self.fixed) == self.values

    def __contains__(self, x) -> bool:
        return self.contains(as_config(x, self.n))

    def issubset(self, other: "Subcube") -> bool:
        """``c(self) ⊆ c(other)``."""
        return (self.one & ~other.one) == 0 and (self.zero & ~other.zero) == 0

    def __le__(self, other: "Subcube") -> bool:
        return self.issubset(other)

    def __lt__(self, other: "Subcube") -> bool:
        return self.issubset(other) and self != other

    def intersection(self, other: "Subcube"):
        one, zero = self.one & other.one, self.zero & other.zero
        if (one | zero) != full_mask(self.n):
            return None
        return Subcube(self.n, one, zero)

    def isdisjoint(self, other: "Subcube") -> bool:
        return self.intersection(other) is None

    def vertices(self) -> Iterator[int]:
        free = [i for i in range(self.n) if (self.free >> i) & 1]
        base = self.values
        for k in range(1 << len(free)):
            x = base
            for j, i in enumerate(free):
                if (k >> j) & 1:
                    x |= 1 << i
            yield x

    def to_json(self, names: Sequence[str]) -> dict:
        return {name: ("*" if self.value(i) is None else self.value(i))
                for i, name in enumerate(names)}

    @classmethod
    def from_json(cls, obj: Mapping[str, object], names: Sequence[str]) -> "Subcube":
        chars = []
        for name in names:
            v = obj[name]
            chars.append("-" if v == "*" else str(int(v)))
        return cls.from_str("".join(chars))
