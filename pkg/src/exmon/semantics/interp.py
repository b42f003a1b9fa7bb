"""Expectation-transformer semantics for ExpLang over finite state spaces.

A program denotes a map from states to sub-expectations: exact weight
tables with mass at most 1, where the missing mass is the probability that
the program is still running (or diverges).  Loop-free programs always have
mass exactly 1.  Loops are resolved by bounded unfolding of the standard
chain

    W_{k+1}(s) = if guard(s) then (body ; W_k)(s) else dirac(s)

starting from the all-zero sub-expectation.  The chain is pointwise
nondecreasing, which is asserted at every step.  "n iterations" gives mass
to exactly the runs that finish within n executions of the loop body, so
the residual after n iterations is the probability of running longer.

Rows of a denotation are evaluated on demand and memoized, so an assignment
that would overflow its variable's range only raises for states whose own
execution path reaches it; inside a loop, the body is denoted at every
state satisfying the guard.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from ..effect.predicates import FinSet
from ..monads import Dist, Expectation
from ..rational import format_rational
from .syntax import (
    And,
    BinOp,
    BoolLit,
    Choose,
    Cmp,
    DetAssign,
    If,
    Lit,
    Not,
    Or,
    ParsedProgram,
    ProbAssign,
    QueryPredicate,
    Seq,
    Skip,
    Var,
    VarDecl,
    While,
    render_expr,
)

DEFAULT_MAX_ITER = 100
DEFAULT_TOL = Fraction(0)


class RuntimeProgramError(ValueError):
    """An assignment left its variable's declared range at some state."""


class StateSpace:
    """The finite product of declared variable ranges, in a fixed order."""

    def __init__(self, decls: Iterable[VarDecl]):
        self.decls = tuple(decls)
        if not self.decls:
            raise ValueError("a state space needs at least one declared variable")
        names = [d.name for d in self.decls]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self._var_pos = {d.name: i for i, d in enumerate(self.decls)}
        self.size = 1
        for d in self.decls:
            self.size *= d.size
        self._atoms: FinSet | None = None

    def var_pos(self, name: str) -> int:
        try:
            return self._var_pos[name]
        except KeyError:
            raise KeyError(f"undeclared variable {name!r}") from None

    def index(self, state: tuple[int, ...]) -> int:
        idx = 0
        for d, v in zip(self.decls, state):
            if not d.lo <= v <= d.hi:
                raise ValueError(f"{d.name}={v} outside range {d.lo}..{d.hi}")
            idx = idx * d.size + (v - d.lo)
        return idx

    def state(self, idx: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.decls):
            idx, r = divmod(idx, d.size)
            out.append(r + d.lo)
        return tuple(reversed(out))

    def states(self):
        return (self.state(i) for i in range(self.size))

    def label(self, state: tuple[int, ...]) -> str:
        return ",".join(f"{d.name}={v}" for d, v in zip(self.decls, state))

    def atoms(self) -> FinSet:
        if self._atoms is None:
            self._atoms = FinSet([self.label(s) for s in self.states()])
        return self._atoms

    def state_of(self, assignment: Mapping[str, int]) -> tuple[int, ...]:
        extra = set(assignment) - set(self._var_pos)
        if extra:
            raise ValueError(f"unknown variables {sorted(extra)}")
        missing = set(self._var_pos) - set(assignment)
        if missing:
            raise ValueError(f"initial state missing variables {sorted(missing)}")
        return tuple(assignment[d.name] for d in self.decls)


def eval_arith(expr, space: StateSpace, state: tuple[int, ...]) -> int:
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Var):
        return state[space.var_pos(expr.name)]
    if isinstance(expr, BinOp):
        a = eval_arith(expr.left, space, state)
        b = eval_arith(expr.right, space, state)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        raise ValueError(f"unknown operator {expr.op!r}")
    raise TypeError(f"not an arithmetic expression: {expr!r}")


def eval_bool(expr, space: StateSpace, state: tuple[int, ...]) -> bool:
    if isinstance(expr, BoolLit):
        return expr.value
    if isinstance(expr, Cmp):
        a = eval_arith(expr.left, space, state)
        b = eval_arith(expr.right, space, state)
        return {
            "=": a == b,
            "!=": a != b,
            "<": a < b,
            "<=": a <= b,
            ">": a > b,
            ">=": a >= b,
        }[expr.op]
    if isinstance(expr, And):
        return eval_bool(expr.left, space, state) and eval_bool(expr.right, space, state)
    if isinstance(expr, Or):
        return eval_bool(expr.left, space, state) or eval_bool(expr.right, space, state)
    if isinstance(expr, Not):
        return not eval_bool(expr.inner, space, state)
    raise TypeError(f"not a boolean expression: {expr!r}")


def eval_query(q: QueryPredicate, space: StateSpace, state: tuple[int, ...]) -> Fraction:
    value = q.const
    for w, cond in q.terms:
        if eval_bool(cond, space, state):
            value += w
    return value


class SubExpectation:
    """Sparse exact weights over state indices with total mass <= 1."""

    __slots__ = ("space", "weights")

    def __init__(self, space: StateSpace, weights: Mapping[int, Fraction]):
        cleaned = {t: w for t, w in weights.items() if w != 0}
        for t, w in cleaned.items():
            if w < 0:
                raise ValueError(f"negative weight {w} at state {t}")
        if sum(cleaned.values()) > 1:
            raise ValueError("sub-expectation mass exceeds 1")
        self.space = space
        self.weights = cleaned

    @property
    def mass(self) -> Fraction:
        return sum(self.weights.values(), start=Fraction(0))

    @property
    def residual(self) -> Fraction:
        return 1 - self.mass

    def weight(self, t: int) -> Fraction:
        return self.weights.get(t, Fraction(0))

    def items(self):
        return self.weights.items()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubExpectation)
            and self.space is other.space
            and self.weights == other.weights
        )

    def __repr__(self) -> str:
        body = ", ".join(
            f"{self.space.label(self.space.state(t))}: {w}" for t, w in self.weights.items()
        )
        return f"SubExpectation({{{body}}}, residual={self.residual})"

    def dominates(self, other: "SubExpectation") -> bool:
        """Every weight of other is <= the matching weight here."""
        return all(self.weight(t) >= w for t, w in other.items())

    def to_expectation(self) -> Expectation:
        """Total case only: reread a mass-1 table as an expectation."""
        if self.mass != 1:
            raise ValueError(f"mass is {self.mass}, not 1")
        atoms = self.space.atoms()
        return Expectation(
            atoms,
            {self.space.label(self.space.state(t)): w for t, w in self.items()},
        )


def _dirac(space: StateSpace, t: int) -> SubExpectation:
    return SubExpectation(space, {t: Fraction(1)})


def _zero(space: StateSpace) -> SubExpectation:
    return SubExpectation(space, {})


def _compose_row(
    row: SubExpectation, continuation: Callable[[int], SubExpectation]
) -> SubExpectation:
    out: dict[int, Fraction] = {}
    for t, w in row.items():
        for u, v in continuation(t).items():
            out[u] = out.get(u, Fraction(0)) + w * v
    return SubExpectation(row.space, out)


def _convex(space: StateSpace, parts: list[tuple[Fraction, SubExpectation]]) -> SubExpectation:
    out: dict[int, Fraction] = {}
    for r, row in parts:
        for t, w in row.items():
            out[t] = out.get(t, Fraction(0)) + r * w
    return SubExpectation(space, out)


@dataclass
class LoopResult:
    rows: list[SubExpectation]
    residuals: list[Fraction]
    iterations: int

    @property
    def max_residual(self) -> Fraction:
        return max(self.residuals)


def loop_semantics(
    guard,
    body_row: Callable[[int], SubExpectation],
    space: StateSpace,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: Fraction = DEFAULT_TOL,
) -> LoopResult:
    """Bounded unfolding of a while loop over the whole state space.

    Iteration n assigns mass to exactly the runs finishing within n body
    executions; stops once the largest per-state residual drops to tol, or
    at max_iter.  Non-convergence is reported through the residuals, never
    raised.  Raises only if the chain stops being pointwise nondecreasing
    or a mass exceeds 1, which would mean broken internal invariants.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if not 0 <= tol < 1:
        raise ValueError("tol must satisfy 0 <= tol < 1")
    guard_true = [eval_bool(guard, space, space.state(t)) for t in range(space.size)]
    # runs finishing within 0 body executions: exit immediately or contribute nothing
    current = [
        _zero(space) if guard_true[t] else _dirac(space, t) for t in range(space.size)
    ]
    iterations = 0
    for k in range(1, max_iter + 1):
        nxt = [
            _compose_row(body_row(t), lambda u: current[u])
            if guard_true[t]
            else _dirac(space, t)
            for t in range(space.size)
        ]
        for t in range(space.size):
            if not nxt[t].dominates(current[t]):
                raise RuntimeError(
                    f"loop chain not monotone at state {space.label(space.state(t))}"
                )
        current = nxt
        iterations = k
        if max(row.residual for row in current) <= tol:
            break
    residuals = [row.residual for row in current]
    return LoopResult(current, residuals, iterations)


class Denoter:
    """Lazy, memoized evaluation of statement denotations per state."""

    def __init__(self, space: StateSpace, max_iter: int = DEFAULT_MAX_ITER,
                 tol: Fraction = DEFAULT_TOL):
        self.space = space
        self.max_iter = max_iter
        self.tol = tol
        self._rows: dict[tuple[object, int], SubExpectation] = {}
        self._loops: dict[object, LoopResult] = {}
        self.loop_iterations = 0  # accumulated across all loops encountered

    def row(self, stmt, t: int) -> SubExpectation:
        key = (stmt, t)
        cached = self._rows.get(key)
        if cached is None:
            cached = self._rows[key] = self._compute(stmt, t)
        return cached

    def _compute(self, stmt, t: int) -> SubExpectation:
        space = self.space
        state = space.state(t)
        if isinstance(stmt, Skip):
            return _dirac(space, t)
        if isinstance(stmt, DetAssign):
            pos = space.var_pos(stmt.var)
            decl = space.decls[pos]
            value = eval_arith(stmt.expr, space, state)
            if not decl.lo <= value <= decl.hi:
                raise RuntimeProgramError(
                    f"at state {space.label(state)}: {stmt.var} := "
                    f"{render_expr(stmt.expr)} evaluates to {value}, outside "
                    f"{decl.lo}..{decl.hi}"
                )
            updated = state[:pos] + (value,) + state[pos + 1 :]
            return _dirac(space, space.index(updated))
        if isinstance(stmt, ProbAssign):
            pos = space.var_pos(stmt.var)
            out = {}
            for value, w in stmt.entries:
                updated = state[:pos] + (value,) + state[pos + 1 :]
                out[space.index(updated)] = w
            return SubExpectation(space, out)
        if isinstance(stmt, Seq):
            first = self.row(stmt.first, t)
            return _compose_row(first, lambda u: self.row(stmt.second, u))
        if isinstance(stmt, If):
            taken = stmt.then_branch if eval_bool(stmt.cond, space, state) else stmt.else_branch
            return self.row(taken, t)
        if isinstance(stmt, Choose):
            return _convex(
                space, [(r, self.row(branch, t)) for r, branch in stmt.branches]
            )
        if isinstance(stmt, While):
            return self._loop(stmt).rows[t]
        raise TypeError(f"not a statement: {stmt!r}")

    def _loop(self, stmt: While) -> LoopResult:
        cached = self._loops.get(stmt)
        if cached is None:
            cached = loop_semantics(
                stmt.cond,
                lambda t: self.row(stmt.body, t),
                self.space,
                self.max_iter,
                self.tol,
            )
            self._loops[stmt] = cached
            self.loop_iterations += cached.iterations
        return cached

    def table(self, stmt) -> list[SubExpectation]:
        return [self.row(stmt, t) for t in range(self.space.size)]


@dataclass
class Denotation:
    """A fully materialized state-indexed transformer."""

    space: StateSpace
    rows: list[SubExpectation]
    loop_iterations: int

    def row(self, t: int) -> SubExpectation:
        return self.rows[t]

    def residuals(self) -> list[Fraction]:
        return [row.residual for row in self.rows]


def denote(
    program,
    space: StateSpace,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: Fraction = DEFAULT_TOL,
) -> Denotation:
    """Materialize the transformer at every state of the space."""
    d = Denoter(space, max_iter, tol)
    rows = d.table(program)
    return Denotation(space, rows, d.loop_iterations)


@dataclass
class WpResult:
    """Sound bounds on the expected query value, plus loop bookkeeping."""

    lo: Fraction
    hi: Fraction
    iterations: int
    residual: Fraction

    def to_json(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "iterations": self.iterations,
            "residual": format_rational(self.residual),
        }


def _initial_weights(space: StateSpace, init) -> list[tuple[int, Fraction]]:
    if isinstance(init, Dist):
        out = []
        for value, w in init.items():
            state = space.state_of(value) if isinstance(value, Mapping) else tuple(value)
            out.append((space.index(state), w))
        return out
    if isinstance(init, Mapping):
        return [(space.index(space.state_of(init)), Fraction(1))]
    if isinstance(init, tuple):
        return [(space.index(init), Fraction(1))]
    raise TypeError("init must be a variable assignment, state tuple, or Dist over states")


def wp(
    parsed: ParsedProgram,
    query: QueryPredicate,
    init,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: Fraction = DEFAULT_TOL,
) -> WpResult:
    """Expected value bounds of the query from the initial state(s).

    lo sums query values over the reached mass; hi adds the unresolved
    residual (sound since queries stay within [0,1]).  For loop-free
    programs the two bounds coincide exactly.
    """
    space = StateSpace(parsed.decls)
    denoter = Denoter(space, max_iter, tol)
    init_weights = _initial_weights(space, init)
    lo = Fraction(0)
    residual = Fraction(0)
    qcache: dict[int, Fraction] = {}
    for s, w in init_weights:
        row = denoter.row(parsed.program, s)
        for t, v in row.items():
            if t not in qcache:
                qcache[t] = eval_query(query, space, space.state(t))
            lo += w * v * qcache[t]
        residual += w * row.residual
    return WpResult(lo, lo + residual, denoter.loop_iterations, residual)
