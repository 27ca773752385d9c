"""Exhaustive enumeration and classification of pivotal operations.

Candidates are the ternary tables whose forced entries are fixed
(``P(x,y,y) = y``, and ``P(x,1,0) = x`` when requested) and whose remaining
entries range over the domain.  A candidate's id is its index in
lexicographic order of those free entries, so ids are stable across runs.

Two classification paths exist.  :func:`classify` works on one operation
through the general-purpose checks; :func:`flag_arrays` evaluates every flag
for a stack of tables at once and is what the large censuses use.  Tests
cross-check the two.
"""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .clones import Budget, clone_certificate, lambda_fragment
from .decomposition import BudgetError, is_self_decomposable
from .identities import (
    PivotalOperation,
    a_delta,
    builtin,
    check_identity,
    identity_mask,
    is_symmetric,
)
from .ops import Domain, Operation, all_tuples, keys_to_tables

__all__ = [
    "FLAGS",
    "ClassificationRecord",
    "CensusSummary",
    "DomainTooLarge",
    "free_positions",
    "candidate_count",
    "candidate_tables",
    "candidate_id",
    "enumerate_pivotal",
    "flag_arrays",
    "classify",
    "monotone_fragment",
    "boolean_census",
    "ternary_census",
]

FLAGS = (
    "ex01",
    "sym01",
    "sym02",
    "symmetric",
    "ex04",
    "fine01",
    "fine02",
    "thm28",
    "derived",
    "self_decomposable",
    "from_delta_shaped",
)

MAX_CENSUS_SIZE = 3


class DomainTooLarge(ValueError):
    pass


def free_positions(domain: Domain, require_ex01: bool = False) -> np.ndarray:
    m = domain.size
    xyz = all_tuples(m, 3)
    fixed = xyz[:, 1] == xyz[:, 2]
    if require_ex01:
        fixed |= (xyz[:, 1] == domain.one) & (xyz[:, 2] == domain.zero)
    return np.flatnonzero(~fixed)


def candidate_count(domain: Domain, require_ex01: bool = False) -> int:
    return domain.size ** free_positions(domain, require_ex01).size


def _base_table(domain: Domain, require_ex01: bool) -> np.ndarray:
    m = domain.size
    x, y, z = all_tuples(m, 3).T
    base = np.where(y == z, y, 0)
    if require_ex01:
        base = np.where((y == domain.one) & (z == domain.zero), x, base)
    return base.astype(np.uint8)


def candidate_tables(domain: Domain, require_ex01: bool, start: int, stop: int) -> np.ndarray:
    """Tables of candidates ``start..stop-1`` as a ``(stop-start, m**3)`` uint8 array."""
    m = domain.size
    free = free_positions(domain, require_ex01)
    ids = np.arange(start, stop, dtype=np.int64)
    w = m ** np.arange(free.size - 1, -1, -1, dtype=np.int64)
    out = np.repeat(_base_table(domain, require_ex01)[None, :], ids.size, axis=0)
    out[:, free] = (ids[:, None] // w) % m
    return out


def candidate_id(op: Operation, require_ex01: bool = False) -> int:
    """Inverse of :func:`candidate_tables` for a table with the forced entries."""
    d = op.domain
    base = _base_table(d, require_ex01)
    free = free_positions(d, require_ex01)
    fixed = np.setdiff1d(np.arange(d.size**3), free)
    if not np.array_equal(op.table[fixed], base[fixed]):
        raise ValueError("table violates the forced entries of this census")
    idx = 0
    for v in op.table[free].tolist():
        idx = idx * d.size + v
    return idx


def enumerate_pivotal(domain: Domain, require_ex01: bool = False, chunk: int = 4096) -> Iterator[PivotalOperation]:
    if domain.size > MAX_CENSUS_SIZE:
        raise DomainTooLarge(f"censuses are limited to domains of size <= {MAX_CENSUS_SIZE}")
    total = candidate_count(domain, require_ex01)
    for start in range(0, total, chunk):
        for row in candidate_tables(domain, require_ex01, start, min(start + chunk, total)):
            yield PivotalOperation(domain, row)


# -- batched flags -----------------------------------------------------------------


def _ex04_mask(tables: np.ndarray, domain: Domain, block: int = 27) -> np.ndarray:
    """The distributive equation, dropping rows as soon as one assignment fails."""
    m = domain.size
    grid = all_tuples(m, 5)
    x, y, z, t, u = (grid[:, j] for j in range(5))
    alive = np.arange(tables.shape[0])
    flat_all = tables.astype(np.intp)
    for s in range(0, grid.shape[0], block):
        if alive.size == 0:
            break
        sl = slice(s, s + block)
        flat = flat_all[alive].ravel()
        base = (np.arange(alive.size, dtype=np.intp) * m**3)[:, None]
        xs, ys, zs, ts, us = x[sl], y[sl], z[sl], t[sl], u[sl]
        inner = flat[base + (xs * m + ys) * m + zs]
        lhs = flat[base + (inner * m + ts) * m + us]
        a = flat[base + (ys * m + ts) * m + us]
        b = flat[base + (zs * m + ts) * m + us]
        rhs = flat[base + (xs * m + a) * m + b]
        alive = alive[(lhs == rhs).all(axis=1)]
    out = np.zeros(tables.shape[0], dtype=bool)
    out[alive] = True
    return out


def _self_decomposable_mask(tables: np.ndarray, domain: Domain) -> np.ndarray:
    """Decomposability of each table by itself; rows drop out at their first failure."""
    m = domain.size
    t_all = tables.astype(np.intp)
    X = all_tuples(m, 3)
    idx = np.arange(m**3)
    alive = np.arange(tables.shape[0])
    for i in range(3):
        if alive.size == 0:
            break
        w = m ** (2 - i)
        xi = X[:, i]
        t = t_all[alive]
        base = (np.arange(alive.size, dtype=np.intp) * m**3)[:, None]
        hi = t[:, idx + (domain.one - xi) * w]
        lo = t[:, idx + (domain.zero - xi) * w]
        alive = alive[(t.ravel()[base + (xi * m + hi) * m + lo] == t).all(axis=1)]
    out = np.zeros(tables.shape[0], dtype=bool)
    out[alive] = True
    return out


def _permuted_mask(tables: np.ndarray, domain: Domain, perm) -> np.ndarray:
    """``P(x1,x2,x3) = P(x_perm...)`` read off the table cube directly."""
    m = domain.size
    cube = tables.reshape(-1, m, m, m)
    return (cube == cube.transpose((0,) + perm)).reshape(len(cube), -1).all(axis=1)


def _symmetric_mask(tables: np.ndarray, domain: Domain) -> np.ndarray:
    ok = np.ones(tables.shape[0], dtype=bool)
    for perm in itertools.permutations((1, 2, 3)):
        ok &= _permuted_mask(tables, domain, perm)
    return ok


def _delta_shaped_mask(tables: np.ndarray, domain: Domain) -> np.ndarray:
    m = domain.size
    cube = tables.reshape(-1, m, m, m)
    ok = np.ones(tables.shape[0], dtype=bool)
    for y, z in a_delta(domain):
        sec = cube[:, :, y, z]
        ok &= (sec == sec[:, :1]).all(axis=1)
    return ok


def flag_arrays(tables: np.ndarray, domain: Domain) -> dict[str, np.ndarray]:
    """Every census flag for a stack of pivotal tables."""
    tables = np.asarray(tables)
    out = {
        name: identity_mask(tables, domain, name)
        for name in ("ex01", "fine01", "fine02", "thm28", "derived")
    }
    # cube[x,y,z] against cube[z,x,y] and cube[z,y,x]
    out["sym01"] = _permuted_mask(tables, domain, (2, 3, 1))
    out["sym02"] = _permuted_mask(tables, domain, (3, 2, 1))
    out["symmetric"] = _symmetric_mask(tables, domain)
    out["ex04"] = _ex04_mask(tables, domain)
    out["self_decomposable"] = _self_decomposable_mask(tables, domain)
    out["from_delta_shaped"] = _delta_shaped_mask(tables, domain)
    return {k: out[k] for k in FLAGS}


def _aggregate(flags: dict[str, np.ndarray]) -> dict[str, int]:
    f = flags
    counts = {"total": int(f["ex01"].size)}
    counts.update({k: int(v.sum()) for k, v in f.items()})
    combos = {
        "ex01_ex04": f["ex01"] & f["ex04"],
        "ex04_self_decomposable": f["ex04"] & f["self_decomposable"],
        "ex04_not_self_decomposable": f["ex04"] & ~f["self_decomposable"],
        "ex01_ex04_not_self_decomposable": f["ex01"] & f["ex04"] & ~f["self_decomposable"],
        "from_delta_shaped_ex01": f["from_delta_shaped"] & f["ex01"],
        "from_delta_shaped_ex01_ex04": f["from_delta_shaped"] & f["ex01"] & f["ex04"],
        # implications that should have no counterexamples
        "viol_cyclic_symmetry": f["self_decomposable"] & f["ex01"] & f["sym01"] & ~f["symmetric"],
        "viol_symmetry_criterion": f["self_decomposable"] & f["ex01"] & (f["symmetric"] != f["thm28"]),
        "viol_fine_from_ex04": f["ex04"] & ~(f["fine01"] & f["fine02"]),
        "viol_fine_from_symmetric_ex01": f["symmetric"] & f["ex01"] & ~(f["fine01"] & f["fine02"]),
        "viol_delta_construction": f["from_delta_shaped"] & f["ex01"] & ~f["ex04"],
        "viol_derived_with_decomposition": f["ex01"] & f["self_decomposable"] & ~f["derived"],
        # the derived equations assuming P(x,1,0) = x alone
        "viol_derived_as_stated": f["ex01"] & ~f["derived"],
    }
    counts.update({k: int(v.sum()) for k, v in combos.items()})
    return counts


# -- records -----------------------------------------------------------------------


@dataclass
class ClassificationRecord:
    id: int | None
    table: tuple[int, ...]
    flags: dict[str, bool]
    clone: str = "unverified"  # certified / bounded-verified / sampled / refuted / unverified
    lambda_sizes: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        d["table"] = list(self.table)
        d["lambda_sizes"] = {str(k): v for k, v in self.lambda_sizes.items()}
        return json.dumps(d, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ClassificationRecord":
        d = json.loads(text)
        return cls(
            id=d["id"],
            table=tuple(d["table"]),
            flags=dict(d["flags"]),
            clone=d["clone"],
            lambda_sizes={int(k): v for k, v in d["lambda_sizes"].items()},
        )


def equational_verdict(m: int, ex01: bool, ex04: bool) -> str:
    """Clone verdict from the two equations alone, without any fragment.

    Missing ``P(x,1,0) = x`` means the unary projection is not decomposable,
    so the class is never a clone.  Both equations settle clone-ness only on
    two elements; elsewhere the answer needs bounded evidence.
    """
    if not ex01:
        return "refuted"
    if m == 2 and ex04:
        return "certified"
    return "unverified"


def _single_flags(pi: PivotalOperation) -> dict[str, bool]:
    d = pi.domain
    flags = {
        name: check_identity(pi, name).holds
        for name in ("ex01", "sym01", "sym02", "ex04", "fine01", "fine02", "thm28", "derived")
    }
    flags["symmetric"] = is_symmetric(pi)
    flags["self_decomposable"] = is_self_decomposable(pi).member
    cube = pi.table.reshape((d.size,) * 3)
    flags["from_delta_shaped"] = all(len(set(cube[:, y, z].tolist())) == 1 for y, z in a_delta(d))
    return {k: flags[k] for k in FLAGS}


def classify(
    pi: Operation,
    arity_cap: int = 2,
    *,
    candidate: int | None = None,
    budget: Budget | None = None,
) -> ClassificationRecord:
    """Full record for one pivotal operation.

    With ``arity_cap >= 1`` the decomposable fragment is built up to the cap
    and the clone certificate is attached; budget failures leave ``clone`` as
    ``unverified`` and omit the sizes that could not be computed.
    """
    pi = PivotalOperation.from_operation(pi)
    d = pi.domain
    rec = ClassificationRecord(candidate, tuple(pi.table.tolist()), _single_flags(pi))
    f = rec.flags
    rec.clone = equational_verdict(d.size, f["ex01"], f["ex04"])
    if arity_cap >= 1:
        cert = clone_certificate(pi, arity_cap, budget)
        rec.clone = cert.verdict
        rec.lambda_sizes = dict(cert.lambda_sizes)
        if not rec.lambda_sizes:
            for n in range(1, arity_cap + 1):
                try:
                    rec.lambda_sizes[n] = len(lambda_fragment(pi, n, budget))
                except BudgetError:
                    break
    return rec


# -- Boolean census ------------------------------------------------------------------


def monotone_fragment(n: int) -> np.ndarray:
    """Keys of the monotone n-ary Boolean functions (tables in key order)."""
    L = 2**n
    X = all_tuples(2, n)
    below = [(a, b) for a in range(L) for b in range(L) if a != b and (X[a] <= X[b]).all()]
    a_idx = np.array([p[0] for p in below], dtype=np.intp)
    b_idx = np.array([p[1] for p in below], dtype=np.intp)
    keys = np.arange(2**L, dtype=np.int64)
    tabs = keys_to_tables(keys, 2, L)
    ok = (tabs[:, a_idx] <= tabs[:, b_idx]).all(axis=1) if below else np.ones(keys.size, bool)
    return keys[ok]


_CLOSED_FORMS = {
    "pi0": "(x and y) or (x and z) or (y and z)",
    "pi1": "(x and y) or (not x and z)",
    "pi2": "y and (x or z)",
    "pi3": "z or (x and y)",
}


def boolean_census(arity_cap: int = 3, budget: Budget | None = None) -> dict:
    """Classify all 16 Boolean pivotal operations.

    For the four satisfying ``P(x,1,0) = x`` the report names the unary
    section ``P(x,0,1)``, matches the table against the closed forms, and
    compares each decomposable fragment with the monotone and the full
    fragment arity by arity.
    """
    d = Domain(2)
    records = [classify(pi, arity_cap, candidate=i, budget=budget) for i, pi in enumerate(enumerate_pivotal(d))]
    section_names = {(0, 1): "x", (1, 0): "not x", (0, 0): "0", (1, 1): "1"}
    ex01 = []
    for rec in records:
        if not rec.flags["ex01"]:
            continue
        cube = np.array(rec.table).reshape(2, 2, 2)
        section = section_names[tuple(cube[:, 0, 1].tolist())]
        matches = [
            name for name in _CLOSED_FORMS if tuple(builtin(name).table.tolist()) == rec.table
        ]
        pi = PivotalOperation(d, rec.table)
        fragments = {}
        for n in range(1, arity_cap + 1):
            lam = lambda_fragment(pi, n, budget).keys
            if np.array_equal(lam, monotone_fragment(n)):
                fragments[n] = "monotone"
            elif lam.size == 2 ** (2**n):
                fragments[n] = "all"
            else:
                fragments[n] = "other"
        ex01.append(
            {
                "id": rec.id,
                "section_0_1": section,
                "closed_form": [_CLOSED_FORMS[k] for k in matches],
                "builtin": matches,
                "fragments": fragments,
            }
        )
    return {
        "count": len(records),
        "ex01_count": len(ex01),
        "ex01": ex01,
        "records": records,
        "summary": _aggregate(flag_arrays(np.array([r.table for r in records], dtype=np.uint8), d)),
    }


# -- streamed census -----------------------------------------------------------------


@dataclass
class CensusSummary:
    domain: Domain
    require_ex01: bool
    start: int
    cursor: int
    total: int
    counts: dict[str, int]

    @property
    def complete(self) -> bool:
        return self.cursor >= self.total

    def merge(self, later: "CensusSummary") -> "CensusSummary":
        """Combine with the run that resumed at this run's cursor."""
        if later.start != self.cursor or later.domain != self.domain or later.require_ex01 != self.require_ex01:
            raise ValueError("census runs are not adjacent")
        counts = {k: self.counts.get(k, 0) + later.counts.get(k, 0) for k in self.counts.keys() | later.counts.keys()}
        return CensusSummary(self.domain, self.require_ex01, self.start, later.cursor, self.total, counts)

    def to_dict(self) -> dict:
        return {
            "domain": {"size": self.domain.size, "zero": self.domain.zero, "one": self.domain.one},
            "require_ex01": self.require_ex01,
            "start": self.start,
            "cursor": self.cursor,
            "total": self.total,
            "complete": self.complete,
            "counts": dict(sorted(self.counts.items())),
        }


def _census_chunk(args):
    domain, require_ex01, start, stop, want_flags = args
    tables = candidate_tables(domain, require_ex01, start, stop)
    flags = flag_arrays(tables, domain)
    counts = _aggregate(flags)
    return start, counts, (tables, flags) if want_flags else None


def _record_lines(start, tables, flags, where: Sequence[tuple[str, bool]], m: int) -> Iterator[str]:
    keep = np.ones(tables.shape[0], dtype=bool)
    for name, want in where:
        keep &= flags[name] == want
    names = list(FLAGS)
    cols = np.stack([flags[k] for k in names], axis=1)
    for j in np.flatnonzero(keep):
        fl = ",".join(f'"{k}":{"true" if v else "false"}' for k, v in zip(names, cols[j]))
        cert = equational_verdict(m, flags["ex01"][j], flags["ex04"][j])
        table = ",".join(map(str, tables[j].tolist()))
        yield f'{{"id":{start + j},"table":[{table}],"flags":{{{fl}}},"clone":"{cert}","lambda_sizes":{{}}}}'


def ternary_census(
    domain: Domain = Domain(3),
    require_ex01: bool = True,
    *,
    start: int = 0,
    limit: int | None = None,
    workers: int | None = 1,
    chunk: int = 3**8,
    on_record: Callable[[str], None] | None = None,
    where: Sequence[tuple[str, bool]] = (),
) -> CensusSummary:
    """Flag every candidate from ``start`` on, at most ``limit`` of them.

    Counts are merged in id order and records (when ``on_record`` is given)
    are emitted in id order, whatever the number of worker processes.  The
    returned summary's ``cursor`` is where a later run should resume.
    """
    if domain.size > MAX_CENSUS_SIZE:
        raise DomainTooLarge(f"censuses are limited to domains of size <= {MAX_CENSUS_SIZE}")
    total = candidate_count(domain, require_ex01)
    stop = total if limit is None else min(total, start + limit)
    start = min(start, total)
    bounds = [(s, min(s + chunk, stop)) for s in range(start, stop, chunk)]
    jobs = [(domain, require_ex01, s, e, on_record is not None) for s, e in bounds]
    counts: dict[str, int] = {}

    def absorb(result):
        s, c, payload = result
        for k, v in c.items():
            counts[k] = counts.get(k, 0) + v
        if payload is not None:
            for line in _record_lines(s, *payload, where, domain.size):
                on_record(line)

    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            absorb(_census_chunk(job))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(_census_chunk, jobs, chunksize=4):
                absorb(result)
    if not counts:
        counts = {k: 0 for k in _aggregate(flag_arrays(candidate_tables(domain, require_ex01, 0, 1), domain))}
    return CensusSummary(domain, require_ex01, start, stop, total, counts)
