"""Finite operations stored as flat value tables.

Elements of a domain of size ``m`` are the integers ``0..m-1``.  An n-ary
operation is a table of length ``m**n``; the tuple ``(x_1, ..., x_n)`` lives
at index ``sum(x_i * m**(n-i))``, so ``x_1`` varies slowest.  Positions of
arguments are 1-based throughout the public API, matching the usual
``p^n_i`` notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Domain",
    "Operation",
    "FormatError",
    "ArityError",
    "all_tuples",
    "encode_tuple",
    "decode_index",
    "evaluate",
    "projection",
    "constant_op",
    "compose",
    "section",
    "is_essential",
    "identify_args",
    "table_keys",
    "parse_table",
    "format_table",
    "load_table",
    "save_table",
]


class FormatError(ValueError):
    """Malformed tuple, table, or table file."""


class ArityError(ValueError):
    """Arguments do not match the arity or domain of an operation."""


@dataclass(frozen=True)
class Domain:
    """Finite carrier ``{0, ..., size-1}`` with two designated elements."""

    size: int
    zero: int = 0
    one: int = 1

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"domain size must be at least 2, got {self.size}")
        for name in ("zero", "one"):
            v = getattr(self, name)
            if not 0 <= v < self.size:
                raise ValueError(f"{name}={v} outside domain of size {self.size}")
        if self.zero == self.one:
            raise ValueError("zero and one must be distinct")

    @property
    def elements(self) -> range:
        return range(self.size)


@lru_cache(maxsize=64)
def _tuples(m: int, n: int) -> np.ndarray:
    if n == 0:
        out = np.zeros((1, 0), dtype=np.int64)
    else:
        out = np.indices((m,) * n).reshape(n, -1).T.copy()
    out.setflags(write=False)
    return out


def all_tuples(m: int, n: int) -> np.ndarray:
    """All of ``A^n`` as an ``(m**n, n)`` array, row ``k`` being the tuple encoded by ``k``."""
    return _tuples(m, n)


def _weights(m: int, n: int) -> np.ndarray:
    return m ** np.arange(n - 1, -1, -1, dtype=np.int64)


def encode_tuple(domain: Domain, tup: Sequence[int]) -> int:
    m = domain.size
    idx = 0
    for v in tup:
        v = int(v)
        if not 0 <= v < m:
            raise FormatError(f"element {v} outside domain of size {m}")
        idx = idx * m + v
    return idx


def decode_index(domain: Domain, index: int, n: int) -> tuple[int, ...]:
    m = domain.size
    if not 0 <= index < m**n:
        raise FormatError(f"index {index} outside [0, {m}**{n})")
    out = []
    for _ in range(n):
        index, r = divmod(index, m)
        out.append(r)
    return tuple(reversed(out))


class Operation:
    """An immutable n-ary operation on a finite domain.

    Operations compare and hash by ``(domain, arity, table)``, and are
    callable: ``op(x, y, z)`` evaluates the table.
    """

    __slots__ = ("domain", "arity", "table", "_hash")

    def __init__(self, domain: Domain, arity: int, table: Iterable[int]):
        m = domain.size
        if arity < 0:
            raise ArityError(f"negative arity {arity}")
        if isinstance(table, np.ndarray) and table.dtype == np.uint8:
            raw = table
        else:
            raw = np.asarray(table if isinstance(table, np.ndarray) else list(table), dtype=np.int64)
        if raw.ndim != 1 or raw.size != m**arity:
            raise FormatError(f"table of length {raw.size}, expected {m}**{arity} = {m**arity}")
        if raw.size and (int(raw.min()) < 0 or int(raw.max()) >= m):
            raise FormatError(f"table entries must lie in [0, {m})")
        t = raw.astype(np.uint8, copy=True)
        t.setflags(write=False)
        self.domain = domain
        self.arity = arity
        self.table = t
        self._hash = None

    def __call__(self, *args: int) -> int:
        return evaluate(self, args)

    def __eq__(self, other):
        if not isinstance(other, Operation):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.arity == other.arity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, self.arity, self.table.tobytes()))
        return self._hash

    def __repr__(self):
        vals = " ".join(map(str, self.table.tolist()))
        return f"{type(self).__name__}(m={self.domain.size}, arity={self.arity}, table=[{vals}])"

    @property
    def key(self) -> int:
        """Integer key; ordering by key is lexicographic ordering of tables."""
        return int(table_keys(self.table[None, :], self.domain.size)[0])


def evaluate(op: Operation, tup: Sequence[int]) -> int:
    if len(tup) != op.arity:
        raise ArityError(f"{len(tup)} arguments given to an operation of arity {op.arity}")
    return int(op.table[encode_tuple(op.domain, tup)])


def projection(domain: Domain, n: int, i: int) -> Operation:
    if not 1 <= i <= n:
        raise ArityError(f"projection index {i} outside [1, {n}]")
    return Operation(domain, n, all_tuples(domain.size, n)[:, i - 1])


def constant_op(domain: Domain, n: int, c: int) -> Operation:
    if not 0 <= c < domain.size:
        raise FormatError(f"constant {c} outside domain of size {domain.size}")
    return Operation(domain, n, np.full(domain.size**n, c, dtype=np.uint8))


def compose(f: Operation, gs: Sequence[Operation], arity: int | None = None) -> Operation:
    """``f(g_1, ..., g_n)``; ``arity`` is only needed when ``f`` is nullary."""
    if len(gs) != f.arity:
        raise ArityError(f"{len(gs)} inner operations for an outer operation of arity {f.arity}")
    if not gs:
        if arity is None:
            raise ArityError("target arity required when composing a nullary operation")
        return constant_op(f.domain, arity, int(f.table[0]))
    k = gs[0].arity
    for g in gs:
        if g.domain != f.domain:
            raise ArityError("inner operation on a different domain")
        if g.arity != k:
            raise ArityError("inner operations must share one arity")
    if arity is not None and arity != k:
        raise ArityError(f"inner operations have arity {k}, not {arity}")
    m = f.domain.size
    idx = np.zeros(m**k, dtype=np.int64)
    for g in gs:
        idx = idx * m + g.table
    return Operation(f.domain, k, f.table[idx])


def section(f: Operation, positions: Iterable[int], a: Sequence[int | None]) -> Operation:
    """The section of ``f`` keeping ``positions`` free and fixing the rest to ``a``.

    Free arguments of the result are ordered by increasing position.  Entries
    of ``a`` at free positions are ignored and may be ``None``.
    """
    n, m = f.arity, f.domain.size
    if len(a) != n:
        raise ArityError(f"fixing tuple has length {len(a)}, expected {n}")
    free = sorted(set(positions))
    for p in free:
        if not 1 <= p <= n:
            raise ArityError(f"position {p} outside [1, {n}]")
    xs = all_tuples(m, len(free))
    full = np.empty((xs.shape[0], n), dtype=np.int64)
    for p in range(1, n + 1):
        if p in free:
            full[:, p - 1] = xs[:, free.index(p)]
        else:
            v = a[p - 1]
            if v is None or not 0 <= v < m:
                raise FormatError(f"fixed value {v!r} at position {p} is not an element")
            full[:, p - 1] = v
    return Operation(f.domain, len(free), f.table[full @ _weights(m, n)])


def is_essential(f: Operation, k: int) -> tuple[bool, tuple[int, ...] | None]:
    """Whether argument ``k`` is essential, with the first witnessing tuple.

    The witness ``b`` has ``b_k = 0``; the section of ``f`` at ``b`` on
    position ``k`` is non-constant.
    """
    n, m = f.arity, f.domain.size
    if not 1 <= k <= n:
        raise ArityError(f"position {k} outside [1, {n}]")
    cube = np.moveaxis(f.table.reshape((m,) * n), k - 1, -1).reshape(-1, m)
    varies = np.flatnonzero((cube != cube[:, :1]).any(axis=1))
    if varies.size == 0:
        return False, None
    rest = all_tuples(m, n - 1)[varies[0]].tolist()
    return True, tuple(rest[: k - 1] + [0] + rest[k - 1 :])


def identify_args(f: Operation, assignment: Mapping[int, int] | Sequence[int]) -> Operation:
    """Rename the arguments of ``f``: position ``i`` reads target variable ``assignment[i]``.

    A sequence is read as ``assignment[i-1]`` for position ``i``.  Targets
    must cover exactly ``1..m'`` for some ``m'``.
    """
    n, m = f.arity, f.domain.size
    if isinstance(assignment, Mapping):
        targets = [assignment.get(i) for i in range(1, n + 1)]
    else:
        targets = list(assignment)
    if len(targets) != n or any(t is None for t in targets):
        raise ArityError("assignment must cover every position of the operation")
    k = max(targets, default=0)
    if set(targets) != set(range(1, k + 1)):
        raise ArityError(f"targets {sorted(set(targets))} do not form a prefix 1..{k}")
    ys = all_tuples(m, k)
    full = ys[:, [t - 1 for t in targets]] if n else np.zeros((ys.shape[0], 0), dtype=np.int64)
    return Operation(f.domain, k, f.table[full @ _weights(m, n)])


def table_keys(tables: np.ndarray, m: int) -> np.ndarray:
    """Lexicographic keys of table rows.

    Rows of length ``L`` with ``m**L < 2**63`` map to int64 codes whose
    numeric order is the lexicographic order of rows.  Longer rows fall back
    to a fixed-width bytes view, which sorts the same way.
    """
    tables = np.asarray(tables)
    L = tables.shape[-1]
    if L * np.log2(m) < 62.5:
        w = _weights(m, L)
        return tables.astype(np.int64) @ w
    rows = np.ascontiguousarray(tables, dtype=np.uint8)
    return rows.view(np.dtype((np.bytes_, L))).reshape(rows.shape[:-1])


def keys_to_tables(keys: np.ndarray, m: int, L: int) -> np.ndarray:
    keys = np.asarray(keys)
    if keys.dtype.kind == "S":
        return np.frombuffer(keys.tobytes(), dtype=np.uint8).reshape(-1, L).copy()
    w = _weights(m, L)
    return ((keys[:, None] // w) % m).astype(np.uint8)


# -- table files -------------------------------------------------------------


def format_table(op: Operation) -> str:
    d = op.domain
    entries = " ".join(str(v) for v in op.table.tolist())
    return (
        f"domain {d.size}\n"
        f"zero {d.zero}\n"
        f"one {d.one}\n"
        f"arity {op.arity}\n"
        f"table {entries}\n"
    )


def parse_table(text: str) -> Operation:
    fields: dict[str, list[str]] = {}
    order = ["domain", "zero", "one", "arity", "table"]
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) != len(order):
        raise FormatError(f"expected {len(order)} non-comment lines, found {len(lines)}")
    for expected, line in zip(order, lines):
        head, *rest = line.split()
        if head != expected:
            raise FormatError(f"expected a '{expected}' line, found {line!r}")
        fields[head] = rest
    try:
        (m,), (zero,), (one,), (arity,) = (
            [int(v) for v in fields[k]] for k in ("domain", "zero", "one", "arity")
        )
        table = [int(v) for v in fields["table"]]
    except ValueError as exc:
        raise FormatError(f"malformed header: {exc}") from None
    try:
        domain = Domain(m, zero, one)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return Operation(domain, arity, table)


def load_table(path: str | Path) -> Operation:
    return parse_table(Path(path).read_text())


def save_table(op: Operation, path: str | Path) -> None:
    Path(path).write_text(format_table(op))
