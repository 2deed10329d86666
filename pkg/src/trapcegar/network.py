"""Boolean networks with unate DNF local functions.

Networks are read from the bnet text format (``name, expression`` per line)
and every local function is normalised into an irredundant unate DNF: a set of
clauses, each clause a set of signed literals, with no clause subsuming another
and each component occurring with a single sign across the whole function.
Inputs that cannot be written this way (not locally monotone) are rejected.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .cube import ConfigLike, Subcube, as_config

Literal = Tuple[int, bool]  # (component index, positive?)
Clause = frozenset  # frozenset[Literal]
Assignment = Dict[int, int]  # partial map component index -> 0/1 (markers, perturbations)


class BnetError(ValueError):
    """Malformed bnet input."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class NotLocallyMonotoneError(BnetError):
    """A local function needs a component with both signs."""


class Component(NamedTuple):
    index: int
    name: str


def _sort_key(clause: Clause):
    return (len(clause), sorted(clause))


@dataclass(frozen=True)
class UnateDnf:
    """Irredundant unate DNF, or a constant when ``constant`` is not None."""

    clauses: Tuple[Clause, ...] = ()
    constant: Optional[bool] = None

    @classmethod
    def const(cls, value: bool) -> "UnateDnf":
        return cls((), bool(value))

    @classmethod
    def from_clauses(cls, clauses: Iterable[Iterable[Literal]]) -> "UnateDnf":
        """Normalise a DNF: drop subsumed clauses, detect constants, check unateness.

        Raises ``NotLocallyMonotoneError`` when a clause or the whole function
        uses a variable with both signs.
        """
        cl = {frozenset(c) for c in clauses}
        signs: Dict[int, bool] = {}
        for c in cl:
            for j, pos in c:
                if signs.setdefault(j, pos) != pos:
                    raise NotLocallyMonotoneError(
                        f"component {j!r} occurs both positively and negatively")
        if frozenset() in cl:
            return cls.const(True)
        if not cl:
            return cls.const(False)
        kept = [c for c in cl if not any(d < c for d in cl)]
        return cls(tuple(sorted(kept, key=_sort_key)))

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    @cached_property
    def masks(self) -> Tuple[Tuple[int, int], ...]:
        """Per clause ``(positive mask, negative mask)``; constant True is one empty clause."""
        if self.constant is True:
            return ((0, 0),)
        out = []
        for c in self.clauses:
            pos = neg = 0
            for j, s in c:
                if s:
                    pos |= 1 << j
                else:
                    neg |= 1 << j
            out.append((pos, neg))
        return tuple(out)

    def regulators(self) -> Dict[int, bool]:
        return {j: s for c in self.clauses for j, s in c}

    def __call__(self, x: int) -> bool:
        for pos, neg in self.masks:
            if (x & pos) == pos and (x & neg) == 0:
                return True
        return False


@dataclass(frozen=True)
class BooleanNetwork:
    names: Tuple[str, ...]
    functions: Tuple[UnateDnf, ...]
    clamped: frozenset = field(default=frozenset(), compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.functions):
            raise ValueError("one local function per component is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("component names must be unique")
        for f in self.functions:
            for c in f.clauses:
                for j, _ in c:
                    if not 0 <= j < len(self.names):
                        raise ValueError(f"literal index {j} out of range")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def components(self) -> List[Component]:
        return [Component(i, name) for i, name in enumerate(self.names)]

    @cached_property
    def index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def __call__(self, x: ConfigLike) -> int:
        """Synchronous image ``f(x)`` as a bit word."""
        x = as_config(x, self.n)
        y = 0
        for i, fi in enumerate(self.functions):
            if fi(x):
                y |= 1 << i
        return y

    def to_bnet(self) -> str:
        return to_bnet(self)


# ---------------------------------------------------------------------------
# bnet parsing

_TOKEN = re.compile(r"\s*(?:(?P<op>[!&|()~])|(?P<name>[A-Za-z0-9_][A-Za-z0-9_.:]*))")
_HEADER = re.compile(r"^\s*targets\s*,\s*factors\s*$", re.IGNORECASE)


def _tokenize(expr: str, line: int, col0: int):
    pos = 0
    tokens = []
    while pos < len(expr):
        if expr[pos:].strip() == "":
            break
        m = _TOKEN.match(expr, pos)
        if not m:
            bad = pos + len(expr[pos:]) - len(expr[pos:].lstrip())
            raise BnetError(f"unexpected character {expr[bad]!r}", line, col0 + bad + 1)
        tok = m.group("op") or m.group("name")
        if tok == "~":
            tok = "!"
        tokens.append((tok, col0 + m.start(m.lastgroup) + 1))
        pos = m.end()
    return tokens


class _Parser:
    # grammar: or := and ('|' and)* ; and := not ('&' not)* ; not := '!' not | atom
    def __init__(self, tokens, line, index, eol_col):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.index = index
        self.eol_col = eol_col
        self.refs = {}

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def col(self):
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else self.eol_col

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        tree = self.parse_or()
        if self.pos != len(self.tokens):
            raise BnetError(f"unexpected token {self.peek()!r}", self.line, self.col())
        return tree

    def parse_or(self):
        terms = [self.parse_and()]
        while self.peek() == "|":
            self.take()
            terms.append(self.parse_and())
        return terms[0] if len(terms) == 1 else ("or", terms)

    def parse_and(self):
        terms = [self.parse_not()]
        while self.peek() == "&":
            self.take()
            terms.append(self.parse_not())
        return terms[0] if len(terms) == 1 else ("and", terms)

    def parse_not(self):
        if self.peek() == "!":
            self.take()
            return ("not", self.parse_not())
        return self.parse_atom()

    def parse_atom(self):
        tok = self.peek()
        if tok is None:
            raise BnetError("unexpected end of expression", self.line, self.col())
        if tok == "(":
            self.take()
            tree = self.parse_or()
            if self.peek() != ")":
                raise BnetError("expected ')'", self.line, self.col())
            self.take()
            return tree
        if tok in ("&", "|", ")"):
            raise BnetError(f"unexpected token {tok!r}", self.line, self.col())
        name, col = self.take()
        if name in ("0", "1"):
            return ("const", name == "1")
        self.refs.setdefault(name, col)
        return ("var", name)


def _to_dnf(tree, negate=False) -> List[frozenset]:
    """Expand an expression tree into a list of literal sets (no simplification)."""
    kind = tree[0]
    if kind == "const":
        return [frozenset()] if tree[1] != negate else []
    if kind == "var":
        return [frozenset({(tree[1], not negate)})]
    if kind == "not":
        return _to_dnf(tree[1], not negate)
    is_or = (kind == "or") != negate
    parts = [_to_dnf(t, negate) for t in tree[1]]
    if is_or:
        return [c for p in parts for c in p]
    out = [frozenset()]
    for p in parts:
        out = list({a | b for a in out for b in p})
    return out


def parse_bnet(text: str) -> BooleanNetwork:
    """Read a network in bnet format.

    Lines are ``name, expression``; ``#`` lines and a ``targets, factors``
    header are skipped. Operators are ``!`` > ``&`` > ``|`` with parentheses,
    and ``0``/``1`` denote constants. Components are indexed in file order.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#") or _HEADER.match(stripped):
            continue
        if "," not in raw:
            raise BnetError("expected 'name, expression'", lineno, 1)
        name, expr = raw.split(",", 1)
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_.:]*", name) or name in ("0", "1"):
            raise BnetError(f"invalid component name {name!r}", lineno, 1)
        rows.append((lineno, name, expr, len(raw) - len(expr)))
    names = [r[1] for r in rows]
    index = {}
    for lineno, name, _, _ in rows:
        if name in index:
            raise BnetError(f"component {name!r} defined twice", lineno, 1)
        index[name] = len(index)
    functions = []
    for lineno, name, expr, col0 in rows:
        tokens = _tokenize(expr, lineno, col0)
        if not tokens:
            raise BnetError(f"empty expression for {name!r}", lineno, col0 + 1)
        parser = _Parser(tokens, lineno, index, col0 + len(expr) + 1)
        dnf = _to_dnf(parser.parse())
        try:
            UnateDnf.from_clauses(dnf)  # sign check on names, before name resolution
        except NotLocallyMonotoneError as exc:
            raise NotLocallyMonotoneError(
                f"local function of {name!r} is not unate: {exc}", lineno) from None
        for ref, col in parser.refs.items():
            if ref not in index:
                raise BnetError(f"undefined component {ref!r}", lineno, col)
        functions.append(UnateDnf.from_clauses(
            [{(index[v], s) for v, s in c} for c in dnf]))
    return BooleanNetwork(tuple(names), tuple(functions))


def format_dnf(f: UnateDnf, names: Sequence[str]) -> str:
    if f.is_constant:
        return "1" if f.constant else "0"
    parts = []
    for c in f.clauses:
        lits = [("" if s else "!") + names[j] for j, s in sorted(c)]
        text = " & ".join(lits)
        parts.append(f"({text})" if len(lits) > 1 and len(f.clauses) > 1 else text)
    return " | ".join(parts)


def to_bnet(f: BooleanNetwork) -> str:
    return "".join(f"{name}, {format_dnf(fi, f.names)}\n" for name, fi in zip(f.names, f.functions))


def read_bnet(path) -> BooleanNetwork:
    with open(path) as fh:
        return parse_bnet(fh.read())


# ---------------------------------------------------------------------------
# influence graphs


@dataclass(frozen=True)
class InfluenceGraph:
    """Signed digraph over ``n`` components; edges are ``(source, target)``."""

    n: int
    pos_edges: frozenset = frozenset()
    neg_edges: frozenset = frozenset()
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        for s, t in self.pos_edges | self.neg_edges:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"edge ({s}, {t}) out of range")

    @property
    def is_locally_monotone(self) -> bool:
        return not (self.pos_edges & self.neg_edges)

    def regulators(self, target: int) -> Dict[int, bool]:
        """Signed regulators of ``target``; only meaningful for locally monotone graphs."""
        regs = {s: True for s, t in self.pos_edges if t == target}
        regs.update({s: False for s, t in self.neg_edges if t == target})
        return regs

    def node_names(self) -> Tuple[str, ...]:
        return self.names if self.names is not None else tuple(f"x{i + 1}" for i in range(self.n))


def influence_graph(f: BooleanNetwork) -> InfluenceGraph:
    """Signed influences read off the irredundant DNFs."""
    pos, neg = set(), set()
    for i, fi in enumerate(f.functions):
        for c in fi.clauses:
            for j, s in c:
                (pos if s else neg).add((j, i))
    return InfluenceGraph(f.n, frozenset(pos), frozenset(neg), f.names)


def is_locally_monotone(f: BooleanNetwork) -> bool:
    return influence_graph(f).is_locally_monotone


def parse_influence_graph(text: str) -> InfluenceGraph:
    """Read ``source -> target +|-`` lines; a bare ``name`` line declares a node.

    Nodes are indexed by first appearance.
    """
    names: List[str] = []
    index: Dict[str, int] = {}
    pos, neg = set(), set()

    def node(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"(\S+)\s*->\s*(\S+)\s+([+-])", line)
        if m:
            s, t = node(m.group(1)), node(m.group(2))
            (pos if m.group(3) == "+" else neg).add((s, t))
        elif re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_.:]*", line):
            node(line)
        else:
            raise BnetError("expected 'source -> target +|-'", lineno, 1)
    return InfluenceGraph(len(names), frozenset(pos), frozenset(neg), tuple(names))


def format_influence_graph(g: InfluenceGraph) -> str:
    names = g.node_names()
    lines = [names[i] for i in range(g.n)]
    for sign, edges in (("+", g.pos_edges), ("-", g.neg_edges)):
        lines += [f"{names[s]} -> {names[t]} {sign}" for s, t in sorted(edges)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# perturbations and markers


def apply_perturbation(f: BooleanNetwork, perturbation: Mapping[int, int]) -> BooleanNetwork:
    """Freeze the components of ``perturbation`` to constants."""
    if not perturbation:
        return f
    functions = list(f.functions)
    for i, b in perturbation.items():
        if not 0 <= i < f.n:
            raise ValueError(f"perturbation index {i} out of range")
        functions[i] = UnateDnf.const(bool(b))
    return BooleanNetwork(f.names, tuple(functions), f.clamped | frozenset(perturbation))


def eval_local(f: BooleanNetwork, i: int, x: ConfigLike) -> bool:
    return f.functions[i](as_config(x, f.n))


def matches(x, marker: Mapping[int, int], n: Optional[int] = None) -> bool:
    """``x ⊨ M`` for a configuration or a subcube (a free dimension never matches)."""
    if isinstance(x, Subcube):
        return all(x.value(i) == b for i, b in marker.items())
    if n is None:
        n = len(x) if isinstance(x, str) else max(marker, default=-1) + 1
    x = as_config(x, n) if not isinstance(x, int) else x
    return all(((x >> i) & 1) == b for i, b in marker.items())


def assignment_from_json(obj, f_or_names) -> Assignment:
    """Decode ``{"name": 0|1}`` (a dict or JSON text) into an index map."""
    names = f_or_names.names if isinstance(f_or_names, (BooleanNetwork, InfluenceGraph)) else f_or_names
    if isinstance(f_or_names, InfluenceGraph):
        names = f_or_names.node_names()
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict):
        raise ValueError("an assignment must be a JSON object of name -> 0/1")
    index = {name: i for i, name in enumerate(names)}
    out = {}
    for name, v in obj.items():
        if name not in index:
            raise ValueError(f"unknown component {name!r}")
        if v not in (0, 1, True, False):
            raise ValueError(f"value of {name!r} must be 0 or 1")
        out[index[name]] = int(v)
    return out


def assignment_to_json(a: Mapping[int, int], names: Sequence[str]) -> dict:
    return {names[i]: int(b) for i, b in sorted(a.items())}
