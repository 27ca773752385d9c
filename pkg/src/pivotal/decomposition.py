"""Pivotal decomposability and the normal forms it induces.

``f`` is decomposable by a pivotal ``P`` when, for every tuple ``x`` and
every position ``i``, ``f(x) = P(x_i, f(x with x_i := 1), f(x with x_i := 0))``.
Iterating that identity from the last variable down to the first yields a
binary expression tree whose leaves are values of ``f`` on {0,1}-tuples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .identities import Identity, PivotalOperation, check_identity, is_symmetric
from .ops import ArityError, Operation, all_tuples

__all__ = [
    "MembershipReport",
    "TheoremReport",
    "BudgetError",
    "decomposition_sides",
    "decomposition_terms",
    "is_pi_decomposable",
    "decomposable_mask",
    "is_self_decomposable",
    "check_cyclic_symmetry",
    "check_symmetry_criterion",
    "Leaf",
    "Node",
    "build_normal_form",
    "nf_to_operation",
    "simplify",
    "format_nf",
    "parse_nf",
    "nf_membership_oracle",
]


class BudgetError(RuntimeError):
    """A computation would exceed its configured budget."""


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    witness: tuple[int, tuple[int, ...]] | None = None  # (position, tuple)

    def to_dict(self) -> dict:
        if self.witness is None:
            return {"member": self.member, "witness": None}
        i, x = self.witness
        return {"member": self.member, "witness": {"position": i, "tuple": list(x)}}


def _pivot_indices(m: int, n: int, zero: int, one: int):
    """Per position: (column of x_i, index of x_i^1, index of x_i^0), all over A^n."""
    X = all_tuples(m, n)
    idx = np.arange(m**n, dtype=np.int64)
    out = []
    for i in range(n):
        w = m ** (n - 1 - i)
        xi = X[:, i]
        out.append((xi, idx + (one - xi) * w, idx + (zero - xi) * w))
    return out


def decomposition_sides(f: Operation, pi: Operation) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the decomposition identity as ``(n, m**n)`` arrays."""
    d = f.domain
    if pi.domain != d:
        raise ArityError("operation and pivot live on different domains")
    m, n = d.size, f.arity
    t = f.table.astype(np.int64)
    p = pi.table
    lhs = np.broadcast_to(t, (n, m**n))
    rhs = np.empty((n, m**n), dtype=np.int64)
    for i, (xi, i1, i0) in enumerate(_pivot_indices(m, n, d.zero, d.one)):
        rhs[i] = p[(xi * m + t[i1]) * m + t[i0]]
    return lhs, rhs


def decomposition_terms(f: Operation, pi: Operation, i: int, x) -> tuple[int, int]:
    """``(f(x), P(x_i, f(x_i^1), f(x_i^0)))`` for a single position and tuple."""
    d = f.domain
    x = list(x)
    hi, lo = list(x), list(x)
    hi[i - 1], lo[i - 1] = d.one, d.zero
    return f(*x), pi(x[i - 1], f(*hi), f(*lo))


def is_pi_decomposable(f: Operation, pi: Operation) -> MembershipReport:
    """Exhaustive membership test; the witness is the first failing (position, tuple)."""
    lhs, rhs = decomposition_sides(f, pi)
    bad = np.argwhere(lhs != rhs)
    if bad.size == 0:
        return MembershipReport(True)
    i, k = bad[0]
    x = tuple(int(v) for v in all_tuples(f.domain.size, f.arity)[k])
    return MembershipReport(False, (int(i) + 1, x))


def decomposable_mask(tables: np.ndarray, arity: int, pi: Operation) -> np.ndarray:
    """Membership of each row of ``tables`` (n-ary tables, one per row)."""
    d = pi.domain
    m = d.size
    t = np.asarray(tables).astype(np.intp)
    p = pi.table.astype(np.intp)
    ok = np.ones(t.shape[0], dtype=bool)
    for xi, i1, i0 in _pivot_indices(m, arity, d.zero, d.one):
        rhs = p[(xi * m + t[:, i1]) * m + t[:, i0]]
        ok &= (rhs == t).all(axis=1)
    return ok


def is_self_decomposable(pi: Operation) -> MembershipReport:
    return is_pi_decomposable(pi, pi)


# -- symmetry theorems as executable checks ------------------------------------


@dataclass
class TheoremReport:
    """Outcome of checking an implication on one pivotal operation.

    ``status`` is ``"holds"`` when premises and conclusion both hold,
    ``"vacuous"`` when some premise fails, and ``"violated"`` otherwise.
    """

    name: str
    status: str
    premises: dict[str, bool] = field(default_factory=dict)
    conclusion: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != "violated"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "premises": dict(self.premises),
            "conclusion": dict(self.conclusion),
        }


def _holds(pi, ident) -> bool:
    return check_identity(pi, ident).holds


def check_cyclic_symmetry(pi: PivotalOperation) -> TheoremReport:
    """Self-decomposable, ``P(x,1,0) = x`` and cyclically symmetric imply fully symmetric."""
    premises = {
        "self_decomposable": is_self_decomposable(pi).member,
        "ex01": _holds(pi, Identity.EX01),
        "sym01": _holds(pi, Identity.SYM01),
    }
    conclusion = {"sym02": _holds(pi, Identity.SYM02), "symmetric": is_symmetric(pi)}
    if not all(premises.values()):
        status = "vacuous"
    else:
        status = "holds" if all(conclusion.values()) else "violated"
    return TheoremReport("cyclic-symmetry", status, premises, conclusion)


def check_symmetry_criterion(pi: PivotalOperation) -> TheoremReport:
    """For self-decomposable ``P`` with ``P(x,1,0) = x``: symmetric iff the two
    constant equations ``P(0,1,0) = P(0,0,1)`` and ``P(1,1,0) = P(1,0,1)`` hold."""
    premises = {
        "self_decomposable": is_self_decomposable(pi).member,
        "ex01": _holds(pi, Identity.EX01),
    }
    conclusion = {"symmetric": is_symmetric(pi), "thm28": _holds(pi, Identity.THM28)}
    if not all(premises.values()):
        status = "vacuous"
    else:
        status = "holds" if conclusion["symmetric"] == conclusion["thm28"] else "violated"
    return TheoremReport("symmetry-criterion", status, premises, conclusion)


# -- normal forms --------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    value: int


@dataclass(frozen=True)
class Node:
    var: int  # pivots on x_var
    high: "NormalForm"
    low: "NormalForm"


NormalForm = Union[Leaf, Node]


def build_normal_form(f: Operation) -> NormalForm:
    """Full expansion of ``f``: the root pivots on ``x_n``, leaves are values on {0,1}-tuples."""
    d = f.domain
    cube = f.table.reshape((d.size,) * f.arity)

    def expand(c, k):
        if k == 0:
            return Leaf(int(c))
        return Node(k, expand(c[..., d.one], k - 1), expand(c[..., d.zero], k - 1))

    return expand(cube, f.arity)


def _depth(expr: NormalForm) -> int:
    return expr.var if isinstance(expr, Node) else 0


def nf_to_operation(expr: NormalForm, pi: Operation, arity: int | None = None) -> Operation:
    """Evaluate a normal form under ``pi`` as an operation of the given arity.

    ``arity`` defaults to the pivot variable at the root (0 for a leaf).
    """
    d = pi.domain
    m = d.size
    n = _depth(expr) if arity is None else arity
    if n < _depth(expr):
        raise ArityError(f"expression mentions x{_depth(expr)} but arity is {n}")
    X = all_tuples(m, n)
    p = pi.table.astype(np.int64)
    memo: dict[int, np.ndarray] = {}

    def value(e):
        key = id(e)
        if key not in memo:
            if isinstance(e, Leaf):
                memo[key] = np.full(m**n, e.value, dtype=np.int64)
            else:
                if e.var > n:
                    raise ArityError(f"expression mentions x{e.var} but arity is {n}")
                memo[key] = p[(X[:, e.var - 1] * m + value(e.high)) * m + value(e.low)]
        return memo[key]

    return Operation(d, n, value(expr))


def simplify(expr: NormalForm) -> NormalForm:
    """Collapse every node whose two children are identical."""
    if isinstance(expr, Leaf):
        return expr
    hi, lo = simplify(expr.high), simplify(expr.low)
    if hi == lo:
        return hi
    return Node(expr.var, hi, lo)


def format_nf(expr: NormalForm) -> str:
    if isinstance(expr, Leaf):
        return str(expr.value)
    return f"(x{expr.var} {format_nf(expr.high)} {format_nf(expr.low)})"


_TOKEN = re.compile(r"\(|\)|x\d+|\d+")


def parse_nf(text: str) -> NormalForm:
    tokens = _TOKEN.findall(text)
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise ValueError(f"unexpected characters in normal form {text!r}")
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of normal form")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            var = tokens[pos] if pos < len(tokens) else ""
            if not var.startswith("x"):
                raise ValueError(f"expected a variable after '(', got {var!r}")
            pos += 1
            hi, lo = parse(), parse()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError("missing ')'")
            pos += 1
            return Node(int(var[1:]), hi, lo)
        if tok.isdigit():
            return Leaf(int(tok))
        raise ValueError(f"unexpected token {tok!r}")

    expr = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens after normal form")
    return expr


def nf_membership_oracle(f: Operation, pi: Operation, max_assignments: int = 1 << 16) -> bool:
    """Whether some leaf assignment of the full depth-n shape evaluates to ``f``.

    Brute force over all ``m**(2**n)`` assignments; raises :class:`BudgetError`
    above ``max_assignments``.
    """
    d = f.domain
    m, n = d.size, f.arity
    n_leaves = 2**n
    total = m**n_leaves
    if total > max_assignments:
        raise BudgetError(f"{m}**{n_leaves} leaf assignments exceed the budget of {max_assignments}")
    leaves = all_tuples(m, n_leaves)  # rows: assignments; leaf j = path bits, high first
    X = all_tuples(m, n)
    p = pi.table.astype(np.int64)
    vals = np.broadcast_to(leaves[:, :, None], (total, n_leaves, m**n))
    for k in range(1, n + 1):
        xk = X[:, k - 1][None, None, :]
        vals = p[(xk * m + vals[:, 0::2]) * m + vals[:, 1::2]]
    target = f.table.astype(np.int64)
    return bool((vals[:, 0, :] == target).all(axis=1).any())

