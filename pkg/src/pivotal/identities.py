"""Pivotal operations and the fixed catalog of equations they may satisfy.

Every equation is a pair of term evaluators written against a callable
``P(x, y, z)``.  The same evaluator serves a single table and a batch of
tables: variables arrive as arrays over all assignments, and ``P`` gathers
from one table or from a stack of them, so the broadcasting does the rest.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .ops import Domain, Operation, all_tuples

__all__ = [
    "Identity",
    "IdentityReport",
    "PivotalOperation",
    "NotPivotalError",
    "make_pivotal",
    "check_identity",
    "identity_mask",
    "is_symmetric",
    "a_delta",
    "from_delta_function",
    "builtin",
    "BUILTIN_NAMES",
]


class Identity(str, enum.Enum):
    PRI = "pri"
    SYM01 = "sym01"
    SYM02 = "sym02"
    SYM23 = "sym23"
    SYM12 = "sym12"
    EX01 = "ex01"
    EX04 = "ex04"
    FINE01 = "fine01"
    FINE02 = "fine02"
    THM28 = "thm28"
    DERIVED = "derived"

    @property
    def equations(self) -> list["Equation"]:
        return _CATALOG[self]

    @property
    def nvars(self) -> int:
        return max(eq.nvars for eq in self.equations)


@dataclass(frozen=True)
class Equation:
    text: str
    nvars: int
    sides: Callable  # (P, zero, one, *vars) -> (lhs, rhs)


def _eq(text, nvars):
    def wrap(fn):
        return Equation(text, nvars, fn)
    return wrap


# fmt: off
_CATALOG = {
    Identity.PRI: [
        _eq("P(x,y,y) = y", 2)(lambda P, o, i, x, y: (P(x, y, y), y)),
    ],
    Identity.SYM01: [
        _eq("P(x,y,z) = P(z,x,y)", 3)(lambda P, o, i, x, y, z: (P(x, y, z), P(z, x, y))),
    ],
    Identity.SYM02: [
        _eq("P(x,y,z) = P(z,y,x)", 3)(lambda P, o, i, x, y, z: (P(x, y, z), P(z, y, x))),
    ],
    Identity.SYM23: [
        _eq("P(x,y,z) = P(x,z,y)", 3)(lambda P, o, i, x, y, z: (P(x, y, z), P(x, z, y))),
    ],
    Identity.SYM12: [
        _eq("P(x,y,z) = P(y,x,z)", 3)(lambda P, o, i, x, y, z: (P(x, y, z), P(y, x, z))),
    ],
    Identity.EX01: [
        _eq("P(x,1,0) = x", 1)(lambda P, o, i, x: (P(x, i, o), x)),
    ],
    Identity.EX04: [
        _eq("P(P(x,y,z),t,u) = P(x,P(y,t,u),P(z,t,u))", 5)(
            lambda P, o, i, x, y, z, t, u: (P(P(x, y, z), t, u), P(x, P(y, t, u), P(z, t, u)))),
    ],
    Identity.FINE01: [
        _eq("P(P(1,0,1),0,1) = P(1,P(0,0,1),P(1,0,1))", 0)(
            lambda P, o, i: (P(P(i, o, i), o, i), P(i, P(o, o, i), P(i, o, i)))),
    ],
    Identity.FINE02: [
        _eq("P(P(0,0,1),0,1) = P(0,P(0,0,1),P(1,0,1))", 0)(
            lambda P, o, i: (P(P(o, o, i), o, i), P(o, P(o, o, i), P(i, o, i)))),
    ],
    Identity.THM28: [
        _eq("P(0,1,0) = P(0,0,1)", 0)(lambda P, o, i: (P(o, i, o), P(o, o, i))),
        _eq("P(1,1,0) = P(1,0,1)", 0)(lambda P, o, i: (P(i, i, o), P(i, o, i))),
    ],
    Identity.DERIVED: [
        _eq("P(0,1,z) = z", 1)(lambda P, o, i, z: (P(o, i, z), z)),
        _eq("P(1,1,z) = 1", 1)(lambda P, o, i, z: (P(i, i, z), i)),
        _eq("P(0,y,0) = 0", 1)(lambda P, o, i, y: (P(o, y, o), o)),
        _eq("P(1,y,0) = y", 1)(lambda P, o, i, y: (P(i, y, o), y)),
    ],
}
# fmt: on


class _Gather:
    """``P(x, y, z)`` over one flat table, or over a stack with row offsets."""

    def __init__(self, flat: np.ndarray, m: int, base=0):
        self.flat = flat
        self.m = m
        self.base = base

    def __call__(self, x, y, z):
        m = self.m
        return self.flat[self.base + (x * m + y) * m + z]


@dataclass(frozen=True)
class IdentityReport:
    identity: Identity
    holds: bool
    witness: tuple[int, ...] | None = None
    equation: str | None = None

    def to_dict(self) -> dict:
        return {
            "identity": self.identity.value,
            "holds": self.holds,
            "witness": None if self.witness is None else list(self.witness),
            "equation": self.equation,
        }


class NotPivotalError(ValueError):
    def __init__(self, witness: tuple[int, int]):
        x, y = witness
        super().__init__(f"P(x,y,y) = y fails at (x, y) = ({x}, {y})")
        self.witness = witness


class PivotalOperation(Operation):
    """A ternary operation satisfying ``P(x, y, y) = y``; checked on construction."""

    __slots__ = ()

    def __init__(self, domain: Domain, table):
        super().__init__(domain, 3, table)
        m = domain.size
        cube = self.table.reshape(m, m, m)
        diag = cube[:, np.arange(m), np.arange(m)]  # diag[x, y] = P(x, y, y)
        bad = np.argwhere(diag != np.arange(m)[None, :])
        if bad.size:
            raise NotPivotalError(tuple(int(v) for v in bad[0]))

    @classmethod
    def from_operation(cls, op: Operation) -> "PivotalOperation":
        if isinstance(op, cls):
            return op
        if op.arity != 3:
            raise ValueError(f"pivotal operations are ternary, got arity {op.arity}")
        return cls(op.domain, op.table)


def make_pivotal(op: Operation) -> PivotalOperation:
    return PivotalOperation.from_operation(op)


def _equation_sides(eq: Equation, P, domain: Domain, grid: np.ndarray):
    cols = [grid[:, j] for j in range(eq.nvars)]
    return eq.sides(P, domain.zero, domain.one, *cols)


def check_identity(pi: Operation, identity: Identity | str) -> IdentityReport:
    """Exhaustively check one catalog entry on ``pi``.

    On failure the witness is the lexicographically first assignment of the
    equation's variables (in the order they appear in its text) that makes
    the sides differ.  For multi-equation entries the first failing equation
    is reported.
    """
    identity = Identity(identity)
    m = pi.domain.size
    P = _Gather(pi.table.astype(np.intp), m)
    for eq in identity.equations:
        grid = all_tuples(m, eq.nvars)
        lhs, rhs = _equation_sides(eq, P, pi.domain, grid)
        lhs, rhs = np.broadcast_arrays(lhs, rhs, np.empty(grid.shape[0]))[:2]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            w = tuple(int(v) for v in grid[bad[0]])
            return IdentityReport(identity, False, w, eq.text)
    return IdentityReport(identity, True)


def identity_mask(tables: np.ndarray, domain: Domain, identity: Identity | str) -> np.ndarray:
    """Boolean mask over a stack of ternary tables, shape ``(B, m**3)``."""
    identity = Identity(identity)
    m = domain.size
    tables = np.asarray(tables)
    B = tables.shape[0]
    flat = tables.astype(np.intp).ravel()
    base = (np.arange(B, dtype=np.intp) * m**3)[:, None]
    P = _Gather(flat, m, base)
    ok = np.ones(B, dtype=bool)
    for eq in identity.equations:
        grid = all_tuples(m, eq.nvars)
        lhs, rhs = _equation_sides(eq, P, domain, grid)
        lhs, rhs = np.broadcast_arrays(lhs, rhs, np.empty((B, grid.shape[0])))[:2]
        ok &= (lhs == rhs).all(axis=1)
    return ok


def is_symmetric(pi: Operation) -> bool:
    m = pi.domain.size
    cube = pi.table.reshape(m, m, m)
    return all(
        np.array_equal(cube, cube.transpose(perm)) for perm in itertools.permutations(range(3))
    )


def a_delta(domain: Domain) -> list[tuple[int, int]]:
    """Pairs ``(y, z)`` with ``y != z`` other than ``(1, 0)``, lexicographic."""
    return [
        (y, z)
        for y in domain.elements
        for z in domain.elements
        if y != z and (y, z) != (domain.one, domain.zero)
    ]


def from_delta_function(domain: Domain, f: Mapping[tuple[int, int], int]) -> PivotalOperation:
    """The pivotal operation with ``P(x,1,0) = x`` and ``P(x,y,z) = f(y,z)`` off the diagonal.

    ``f`` must be defined on every pair returned by :func:`a_delta`.
    """
    m = domain.size
    cube = np.empty((m, m, m), dtype=np.int64)
    for y in domain.elements:
        cube[:, y, y] = y
    cube[:, domain.one, domain.zero] = np.arange(m)
    for pair in a_delta(domain):
        if pair not in f:
            raise KeyError(f"delta function undefined at {pair}")
        v = int(f[pair])
        if not 0 <= v < m:
            raise ValueError(f"delta value {v} at {pair} outside domain")
        cube[:, pair[0], pair[1]] = v
    return PivotalOperation(domain, cube.ravel())


# -- built-in tables -----------------------------------------------------------

BOOL = Domain(2)

# Three-element carrier {0, a, 1} stored as 0 -> 0, a -> 1, 1 -> 2.
THREE_0A1 = Domain(3, zero=0, one=2)


def _boolean(fn) -> PivotalOperation:
    x, y, z = all_tuples(2, 3).T
    return PivotalOperation(BOOL, fn(x, y, z) & 1)


def _negation_twist(consistent: bool = False) -> PivotalOperation:
    # P(x,0,1) = N(x) with N swapping 0 and 1 and fixing a; the remaining
    # off-diagonal sections other than (1,0) are constant.  The literal
    # constants break the distributive equation at (t,u) = (0,1); the
    # consistent variant picks constants that commute with N.
    o, a, i = 0, 1, 2
    cube = np.empty((3, 3, 3), dtype=np.int64)
    for y in range(3):
        cube[:, y, y] = y
    cube[:, i, o] = np.arange(3)
    cube[:, o, i] = [i, a, o]
    if consistent:
        cube[:, o, a], cube[:, i, a], cube[:, a, i], cube[:, a, o] = o, i, o, i
    else:
        cube[:, i, a], cube[:, o, a], cube[:, a, i], cube[:, a, o] = i, i, o, o
    return PivotalOperation(THREE_0A1, cube.ravel())


def _delta_zero() -> PivotalOperation:
    d = Domain(3)
    return from_delta_function(d, {p: 0 for p in a_delta(d)})


_BUILTINS = {
    "med": lambda: _boolean(lambda x, y, z: (x & y) | (x & z) | (y & z)),
    "pi1": lambda: _boolean(lambda x, y, z: (x & y) | ((1 - x) & z)),
    "pi2": lambda: _boolean(lambda x, y, z: y & (x | z)),
    "pi3": lambda: _boolean(lambda x, y, z: z | (x & y)),
    "example3elem": _negation_twist,
    "negation-compatible": lambda: _negation_twist(consistent=True),
    "delta-zero": _delta_zero,
}
_ALIASES = {"pi0": "med", "shannon": "pi1"}

BUILTIN_NAMES = tuple(sorted(set(_BUILTINS) | set(_ALIASES)))


def builtin(name: str) -> PivotalOperation:
    key = _ALIASES.get(name, name)
    try:
        return _BUILTINS[key]()
    except KeyError:
        raise KeyError(f"unknown built-in {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None
