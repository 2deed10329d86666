"""Incremental SAT engine used by every encoding.

Thin wrapper over a `python-sat` solver with variable allocation, optional
variable names, structural hashing of AND/OR gates, and a DIMACS dump.

The constant-true literal ``engine.true`` is deliberately *not* a unit clause:
it is passed as an assumption on every call, so that literals implied through
it show up in :meth:`SatEngine.propagate_only` (the underlying solver does not
report root-level facts).
"""

from __future__ import annotations

import threading
import time
from typing import Dict, Iterable, List, Optional, Sequence, Set

from pysat.solvers import Solver

DEFAULT_SOLVER = "glucose4"


class EngineError(RuntimeError):
    pass


class SolveTimeout(TimeoutError):
    """The wall-clock deadline passed before or during a solver call."""


class SatEngine:
    def __init__(self, solver: str = DEFAULT_SOLVER, record: bool = False):
        self.solver_name = solver
        self._solver = Solver(name=solver)
        self.nvars = 0
        self.nclauses = 0
        self.names: Dict[int, str] = {}
        self.record = record
        self.clauses: List[List[int]] = []
        self._units: Set[int] = set()
        self._gates: Dict[tuple, int] = {}
        self._model: Optional[List[int]] = None
        self.solve_calls = 0
        self.solve_time = 0.0
        self.memo: dict = {}
        self.deadline: Optional[float] = None  # time.monotonic() value
        self.true = self.new_var("true")

    @property
    def false(self) -> int:
        return -self.true

    def new_var(self, name: Optional[str] = None) -> int:
        self.nvars += 1
        if name is not None:
            self.names[self.nvars] = name
        return self.nvars

    def new_vars(self, count: int, prefix: Optional[str] = None) -> List[int]:
        return [self.new_var(None if prefix is None else f"{prefix}[{i}]") for i in range(count)]

    def add_clause(self, lits: Iterable[int]) -> None:
        # literals of `false` are kept: they must stay visible to propagation
        clause = list(lits)
        if self.true in clause:
            return
        if len(clause) == 1:
            self._units.add(clause[0])
        self._solver.add_clause(clause)
        self.nclauses += 1
        if self.record:
            self.clauses.append(clause)

    # -- gates ---------------------------------------------------------------

    def AND(self, lits: Sequence[int]) -> int:
        """Literal defined (both directions) as the conjunction of ``lits``."""
        lits = sorted(set(lits), key=abs)
        if self.false in lits or any(-l in lits for l in lits):
            return self.false
        lits = [l for l in lits if l != self.true]
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        key = ("and", tuple(lits))
        out = self._gates.get(key)
        if out is None:
            out = self.new_var()
            for l in lits:
                self.add_clause([-out, l])
            self.add_clause([out] + [-l for l in lits])
            self._gates[key] = out
        return out

    def OR(self, lits: Sequence[int]) -> int:
        return -self.AND([-l for l in lits])

    def define_or(self, out: int, lits: Sequence[int]) -> None:
        """Clauses for ``out <-> OR(lits)`` with a caller-chosen output variable."""
        self.add_clause([-out] + list(lits))
        for l in lits:
            self.add_clause([out, -l])

    # -- solving -------------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        t0 = time.perf_counter()
        assumptions = [self.true, *assumptions]
        try:
            if self.deadline is None:
                sat = self._solver.solve(assumptions=assumptions)
            else:
                left = self.deadline - time.monotonic()
                if left <= 0:
                    raise SolveTimeout("deadline reached")
                timer = threading.Timer(left, self._solver.interrupt)
                timer.start()
                try:
                    sat = self._solver.solve_limited(assumptions=assumptions, expect_interrupt=True)
                finally:
                    timer.cancel()
                    self._solver.clear_interrupt()
                if sat is None:
                    raise SolveTimeout("deadline reached during solve")
        except SolveTimeout:
            raise
        except Exception as exc:  # pragma: no cover - solver crash
            raise EngineError(str(exc)) from exc
        self.solve_calls += 1
        self.solve_time += time.perf_counter() - t0
        self._model = self._solver.get_model() if sat else None
        return bool(sat)

    def model_value(self, var: int) -> bool:
        if self._model is None:
            raise EngineError("no model available")
        if var == self.true:
            return True
        if var < 0:
            return not self.model_value(-var)
        if var > len(self._model):
            return False
        return self._model[var - 1] > 0

    def lit_value(self, lit: int) -> bool:
        return self.model_value(lit)

    def propagate_only(self, assumptions: Sequence[int] = ()) -> Optional[Set[int]]:
        """Literals fixed by unit propagation from ``assumptions``; None on conflict.

        Root-level consequences of unit clauses are not observable through the
        solver; the unit clauses themselves are included.
        """
        ok, lits = self._solver.propagate(assumptions=[self.true, *assumptions])
        if not ok:
            return None
        return set(lits) | self._units

    def stats(self) -> dict:
        return dict(self._solver.accum_stats())

    def to_dimacs(self) -> str:
        if not self.record:
            raise EngineError("engine was created without clause recording")
        lines = [f"c {v} {name}" for v, name in sorted(self.names.items())]
        lines.append(f"p cnf {self.nvars} {len(self.clauses) + 1}")
        lines.append(f"{self.true} 0")
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    def close(self) -> None:
        self._solver.delete()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
