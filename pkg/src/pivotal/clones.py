"""Bounded clone fragments: term closure, decomposable classes, certificates.

Everything here works one arity at a time.  A *fragment* holds, for each
arity ``1..cap``, a deduplicated set of tables stored as a sorted array of
integer keys (see :func:`pivotal.ops.table_keys`).  Two sources exist:

* :func:`generate_fragment` closes projections (and optionally constants)
  under a set of generators with a semi-naive worklist;
* :func:`lambda_fragment` enumerates every table and keeps the decomposable
  ones.

Nothing in this module claims clone-ness beyond the arity cap it inspected.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .decomposition import (
    BudgetError,
    MembershipReport,
    TheoremReport,
    decomposable_mask,
    is_self_decomposable,
)
from .identities import Identity, IdentityReport, check_identity, is_symmetric
from .ops import Domain, Operation, constant_op, format_table, keys_to_tables, projection, table_keys

__all__ = [
    "Budget",
    "OpSet",
    "Fragment",
    "ClosureReport",
    "CloneCertificate",
    "generate_fragment",
    "generated_fragment",
    "lambda_fragment",
    "lambda_fragment_upto",
    "is_closed_under_composition",
    "clone_certificate",
    "check_generation",
    "check_derived_equations",
    "check_composition_preservation",
    "check_projection_criterion",
    "check_clone_sufficiency",
    "check_clone_characterization",
    "check_symmetric_characterization",
]

log = logging.getLogger(__name__)

_CHUNK = 1 << 16


@dataclass(frozen=True)
class Budget:
    """Limits for fixpoints, enumerations and closure checks.

    ``PIVOTAL_BUDGET`` overrides the defaults: either a bare integer (the
    maximum set size) or comma-separated ``name=value`` pairs.
    """

    max_size: int = 10**6
    max_rounds: int = 64
    max_candidates: int = 1 << 24
    max_compositions: int = 10**8
    max_exhaustive: int = 2 * 10**7
    samples: int = 10**4
    seed: int = 20150101

    @classmethod
    def from_env(cls, env: str | None = None) -> "Budget":
        raw = os.environ.get("PIVOTAL_BUDGET", "") if env is None else env
        raw = raw.strip()
        if not raw:
            return cls()
        if raw.isdigit():
            return cls(max_size=int(raw))
        kwargs = {}
        for part in raw.split(","):
            name, _, value = part.partition("=")
            name = name.strip()
            if name not in cls.__dataclass_fields__:
                raise ValueError(f"unknown budget field {name!r} in PIVOTAL_BUDGET")
            kwargs[name] = int(value)
        return cls(**kwargs)


def _budget(budget):
    return Budget.from_env() if budget is None else budget


class OpSet:
    """A deduplicated set of n-ary tables over one domain, ordered by key."""

    def __init__(self, domain: Domain, arity: int, keys: np.ndarray):
        self.domain = domain
        self.arity = arity
        self.keys = np.unique(np.asarray(keys))

    @classmethod
    def from_tables(cls, domain: Domain, arity: int, tables) -> "OpSet":
        tables = np.asarray(tables, dtype=np.uint8).reshape(-1, domain.size**arity)
        return cls(domain, arity, table_keys(tables, domain.size))

    @classmethod
    def from_operations(cls, domain: Domain, arity: int, ops: Iterable[Operation]) -> "OpSet":
        rows = [op.table for op in ops]
        return cls.from_tables(domain, arity, np.array(rows, dtype=np.uint8))

    @property
    def tables(self) -> np.ndarray:
        return keys_to_tables(self.keys, self.domain.size, self.domain.size**self.arity)

    def __len__(self):
        return int(self.keys.size)

    def __iter__(self) -> Iterator[Operation]:
        for row in self.tables:
            yield Operation(self.domain, self.arity, row)

    def contains_keys(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys)
        if self.keys.size == 0:
            return np.zeros(keys.shape, dtype=bool)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, self.keys.size - 1)
        return self.keys[pos] == keys

    def __contains__(self, op: Operation) -> bool:
        if op.domain != self.domain or op.arity != self.arity:
            return False
        return bool(self.contains_keys(table_keys(op.table[None, :], self.domain.size))[0])

    def __eq__(self, other):
        if not isinstance(other, OpSet):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.arity == other.arity
            and np.array_equal(self.keys, other.keys)
        )

    def issubset(self, other: "OpSet") -> bool:
        return bool(other.contains_keys(self.keys).all())

    def difference(self, other: "OpSet") -> "OpSet":
        return OpSet(self.domain, self.arity, self.keys[~other.contains_keys(self.keys)])

    def __repr__(self):
        return f"OpSet(m={self.domain.size}, arity={self.arity}, size={len(self)})"


@dataclass
class Fragment:
    domain: Domain
    arity_cap: int
    sets: dict[int, OpSet]
    provenance: str  # "generated" or "decomposable"
    budget_used: dict = field(default_factory=dict)

    def sizes(self) -> dict[int, int]:
        return {k: len(v) for k, v in sorted(self.sets.items())}

    def __getitem__(self, arity: int) -> OpSet:
        return self.sets[arity]

    def export(self, directory: str | Path, verdict: str | None = None) -> Path:
        """Write one table file per member plus ``manifest.json``."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for arity, s in sorted(self.sets.items()):
            for j, op in enumerate(s):
                name = f"a{arity}_{j:06d}.tbl"
                (out / name).write_text(format_table(op))
                files.append(name)
        manifest = {
            "domain": {"size": self.domain.size, "zero": self.domain.zero, "one": self.domain.one},
            "arity": self.arity_cap,
            "count": sum(len(s) for s in self.sets.values()),
            "counts": {str(k): v for k, v in self.sizes().items()},
            "provenance": self.provenance,
            "budget_used": self.budget_used,
            "verdict": verdict,
            "files": files,
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        return out


# -- term closure ---------------------------------------------------------------


def _combine(pools: Sequence[np.ndarray], ids: np.ndarray, m: int) -> np.ndarray:
    """Row-wise mixed-radix index ``sum_j pools[j][ids_j] * m**(k-1-j)``."""
    shape = tuple(p.shape[0] for p in pools)
    multi = np.unravel_index(ids, shape)
    idx = np.zeros((ids.size, pools[0].shape[1]), dtype=np.intp)
    for p, ix in zip(pools, multi):
        idx *= m
        idx += p[ix]
    return idx


def generate_fragment(
    generators: Iterable[Operation],
    n: int,
    *,
    domain: Domain | None = None,
    include_constants: bool = True,
    budget: Budget | None = None,
    stats: dict | None = None,
) -> OpSet:
    """The n-ary term operations built from projections, constants and ``generators``.

    Least set of n-ary tables containing the projections (and constants when
    requested) closed under applying each generator.  Each round only applies
    generators to argument lists with at least one member found in the
    previous round.  Exceeding the budget raises :class:`BudgetError`.
    """
    budget = _budget(budget)
    generators = list(generators)
    if domain is None:
        if not generators:
            raise ValueError("domain required when there are no generators")
        domain = generators[0].domain
    if any(g.domain != domain for g in generators):
        raise ValueError("generators must share one domain")
    if n < 1:
        raise ValueError("fragments start at arity 1")
    m = domain.size
    seeds = [projection(domain, n, i) for i in range(1, n + 1)]
    if include_constants:
        seeds += [constant_op(domain, n, c) for c in domain.elements]
    seeds += [constant_op(domain, n, int(g.table[0])) for g in generators if g.arity == 0]
    active = [g for g in generators if g.arity > 0]

    keys = np.unique(table_keys(np.array([s.table for s in seeds]), m))
    is_new = np.ones(keys.size, dtype=bool)
    rounds = evaluated = 0
    while is_new.any():
        rounds += 1
        if rounds > budget.max_rounds:
            raise BudgetError(f"closure did not stabilise within {budget.max_rounds} rounds")
        L = m**n
        every = keys_to_tables(keys, m, L).astype(np.intp)
        old, new = every[~is_new], every[is_new]
        found = []
        for g in active:
            gt = g.table
            k = g.arity
            for j in range(k):
                pools = [old] * j + [new] + [every] * (k - 1 - j)
                total = int(np.prod([p.shape[0] for p in pools], dtype=object))
                if total == 0:
                    continue
                evaluated += total
                if evaluated > budget.max_compositions:
                    raise BudgetError(
                        f"closure needs more than {budget.max_compositions} generator applications"
                    )
                for start in range(0, total, _CHUNK):
                    ids = np.arange(start, min(start + _CHUNK, total))
                    out = gt[_combine(pools, ids, m)]
                    found.append(np.unique(table_keys(out, m)))
        if found:
            cand = np.unique(np.concatenate(found))
            fresh = np.setdiff1d(cand, keys, assume_unique=True)
        else:
            fresh = keys[:0]
        if keys.size + fresh.size > budget.max_size:
            raise BudgetError(f"fragment grew beyond {budget.max_size} tables")
        keys = np.union1d(keys, fresh)
        is_new = np.isin(keys, fresh)
        log.debug("arity %d round %d: %d tables (+%d)", n, rounds, keys.size, fresh.size)
    if stats is not None:
        stats["rounds"] = stats.get("rounds", 0) + rounds
        stats["compositions"] = stats.get("compositions", 0) + evaluated
    return OpSet(domain, n, keys)


def generated_fragment(
    generators: Iterable[Operation],
    cap: int,
    *,
    domain: Domain | None = None,
    include_constants: bool = True,
    budget: Budget | None = None,
) -> Fragment:
    generators = list(generators)
    domain = domain or generators[0].domain
    stats: dict = {}
    sets = {
        n: generate_fragment(
            generators, n, domain=domain, include_constants=include_constants,
            budget=budget, stats=stats,
        )
        for n in range(1, cap + 1)
    }
    return Fragment(domain, cap, sets, "generated", stats)


# -- decomposable classes -------------------------------------------------------


def lambda_fragment(pi: Operation, n: int, budget: Budget | None = None, stats: dict | None = None) -> OpSet:
    """All n-ary operations decomposable by ``pi``, by enumerating every table."""
    budget = _budget(budget)
    d = pi.domain
    m = d.size
    L = m**n
    total = m**L
    if total > budget.max_candidates:
        raise BudgetError(f"{m}**{L} candidate tables exceed the budget of {budget.max_candidates}")
    kept = []
    for start in range(0, total, _CHUNK):
        keys = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        tables = keys_to_tables(keys, m, L)
        kept.append(keys[decomposable_mask(tables, n, pi)])
    if stats is not None:
        stats["candidates"] = stats.get("candidates", 0) + total
    return OpSet(d, n, np.concatenate(kept))


def lambda_fragment_upto(pi: Operation, cap: int, budget: Budget | None = None) -> Fragment:
    stats: dict = {}
    sets = {n: lambda_fragment(pi, n, budget, stats) for n in range(1, cap + 1)}
    return Fragment(pi.domain, cap, sets, "decomposable", stats)


# -- closure verification --------------------------------------------------------


@dataclass
class ClosureReport:
    closed: bool
    mode: str  # "exhaustive" or "sampled"
    checked: int
    seed: int | None = None
    counterexample: tuple[Operation, tuple[Operation, ...]] | None = None

    def to_dict(self) -> dict:
        cx = None
        if self.counterexample is not None:
            f, gs = self.counterexample
            cx = {"outer": f.table.tolist(), "inner": [g.table.tolist() for g in gs]}
        return {
            "closed": self.closed,
            "mode": self.mode,
            "checked": self.checked,
            "seed": self.seed,
            "counterexample": cx,
        }


def is_closed_under_composition(fragment: Fragment, budget: Budget | None = None) -> ClosureReport:
    """Check ``f(g_1..g_k)`` stays inside the fragment for members of arity <= cap.

    Exhaustive when the number of compositions fits ``budget.max_exhaustive``;
    otherwise ``budget.samples`` compositions drawn with ``budget.seed``.
    """
    budget = _budget(budget)
    d = fragment.domain
    m = d.size
    arities = sorted(a for a, s in fragment.sets.items() if a >= 1)
    tabs = {a: fragment.sets[a].tables.astype(np.intp) for a in arities}
    total = sum(len(tabs[k]) * len(tabs[t]) ** k for k in arities for t in arities)

    def members(t, out):
        return fragment.sets[t].contains_keys(table_keys(out, m))

    def witness(k, t, f_ix, g_ix):
        f = Operation(d, k, tabs[k][f_ix])
        return f, tuple(Operation(d, t, tabs[t][j]) for j in g_ix)

    if total <= budget.max_exhaustive:
        for k in arities:
            for t in arities:
                F, G = tabs[k], tabs[t]
                if len(F) == 0 or len(G) == 0:
                    continue
                pools = [G] * k
                per_f = len(G) ** k
                count = len(F) * per_f
                for start in range(0, count, _CHUNK):
                    ids = np.arange(start, min(start + _CHUNK, count))
                    f_ix, rest = np.divmod(ids, per_f)
                    out = F[f_ix[:, None], _combine(pools, rest, m)]
                    ok = members(t, out)
                    if not ok.all():
                        bad = int(np.flatnonzero(~ok)[0])
                        g_ix = np.unravel_index(rest[bad], (len(G),) * k)
                        return ClosureReport(
                            False, "exhaustive", total, None,
                            witness(k, t, int(f_ix[bad]), [int(v) for v in g_ix]),
                        )
        return ClosureReport(True, "exhaustive", total)

    rng = np.random.default_rng(budget.seed)
    pairs = [(k, t) for k in arities for t in arities if len(tabs[k]) and len(tabs[t])]
    counts = rng.multinomial(budget.samples, [1 / len(pairs)] * len(pairs))
    for (k, t), c in zip(pairs, counts):
        F, G = tabs[k], tabs[t]
        f_ix = rng.integers(0, len(F), size=c)
        g_ix = rng.integers(0, len(G), size=(c, k))
        idx = np.zeros((c, G.shape[1]), dtype=np.intp)
        for j in range(k):
            idx = idx * m + G[g_ix[:, j]]
        ok = members(t, F[f_ix[:, None], idx])
        if not ok.all():
            bad = int(np.flatnonzero(~ok)[0])
            return ClosureReport(
                False, "sampled", budget.samples, budget.seed,
                witness(k, t, int(f_ix[bad]), [int(v) for v in g_ix[bad]]),
            )
    return ClosureReport(True, "sampled", budget.samples, budget.seed)


# -- certificates ----------------------------------------------------------------


@dataclass
class CloneCertificate:
    """Everything known about whether the decomposable class of ``pi`` is a clone.

    ``sufficiency`` records that ``P(x,1,0) = x`` and the distributive
    equation both hold.  On two-element domains that settles clone-ness at
    every arity and the verdict is ``certified``.  On larger domains it does
    not: identifying variables can leave the class (see
    ``tests/test_clones.py::test_equations_do_not_suffice_on_three_elements``),
    so the verdict there is the bounded evidence alone, and ``conflict``
    flags the equations holding while closure is refuted.

    ``bounded`` is ``bounded-verified`` (exhaustive closure check up to the
    cap), ``sampled``, ``refuted`` (a projection is missing or a composition
    leaves the class) or ``unverified`` (budget exceeded).
    """

    arity_cap: int
    domain_size: int
    ex01: IdentityReport
    ex04: IdentityReport
    fine01: IdentityReport
    fine02: IdentityReport
    self_decomposable: MembershipReport
    sufficiency: bool
    bounded: str
    projections_present: bool | None = None
    closure: ClosureReport | None = None
    lambda_sizes: dict[int, int] = field(default_factory=dict)
    characterization_applies: bool = False
    characterization_consistent: bool | None = None
    note: str | None = None

    @property
    def verdict(self) -> str:
        if self.equational and self.bounded != "refuted":
            return "certified"
        return self.bounded

    @property
    def equational(self) -> bool:
        """The equations alone certify a clone (two-element domains only)."""
        return self.sufficiency and self.domain_size == 2

    @property
    def verdicts(self) -> list[str]:
        out = ["certified"] if self.equational else []
        out.append(self.bounded)
        return out

    @property
    def conflict(self) -> bool:
        """The sufficient equations hold, yet a composition leaves the class."""
        return self.sufficiency and self.bounded == "refuted"

    @property
    def bounded_clone(self) -> bool | None:
        """Bounded evidence only: True/False, or None when unverified."""
        if self.bounded == "unverified":
            return None
        return self.bounded in ("bounded-verified", "sampled")

    def to_dict(self) -> dict:
        return {
            "arity_cap": self.arity_cap,
            "domain_size": self.domain_size,
            "identities": {
                r.identity.value: r.to_dict() for r in (self.ex01, self.ex04, self.fine01, self.fine02)
            },
            "self_decomposable": self.self_decomposable.to_dict(),
            "sufficiency": self.sufficiency,
            "bounded": self.bounded,
            "projections_present": self.projections_present,
            "closure": None if self.closure is None else self.closure.to_dict(),
            "lambda_sizes": {str(k): v for k, v in self.lambda_sizes.items()},
            "characterization_applies": self.characterization_applies,
            "characterization_consistent": self.characterization_consistent,
            "verdict": self.verdict,
            "verdicts": self.verdicts,
            "conflict": self.conflict,
            "note": self.note,
        }


def _bounded_evidence(pi: Operation, cap: int, budget: Budget):
    frag = lambda_fragment_upto(pi, cap, budget)
    proj = all(
        projection(pi.domain, n, i) in frag[n] for n in range(1, cap + 1) for i in range(1, n + 1)
    )
    closure = is_closed_under_composition(frag, budget)
    if not proj or not closure.closed:
        status = "refuted"
    else:
        status = "bounded-verified" if closure.mode == "exhaustive" else "sampled"
    return frag, proj, closure, status


def clone_certificate(pi: Operation, arity_cap: int = 2, budget: Budget | None = None) -> CloneCertificate:
    budget = _budget(budget)
    reports = {i: check_identity(pi, i) for i in (Identity.EX01, Identity.EX04, Identity.FINE01, Identity.FINE02)}
    selfdec = is_self_decomposable(pi)
    cert = CloneCertificate(
        arity_cap=arity_cap,
        domain_size=pi.domain.size,
        ex01=reports[Identity.EX01],
        ex04=reports[Identity.EX04],
        fine01=reports[Identity.FINE01],
        fine02=reports[Identity.FINE02],
        self_decomposable=selfdec,
        sufficiency=reports[Identity.EX01].holds and reports[Identity.EX04].holds,
        bounded="unverified",
    )
    try:
        frag, proj, closure, status = _bounded_evidence(pi, arity_cap, budget)
    except BudgetError as exc:
        cert.note = str(exc)
        return cert
    cert.bounded = status
    cert.projections_present = proj
    cert.closure = closure
    cert.lambda_sizes = frag.sizes()
    cert.characterization_applies = (
        selfdec.member and reports[Identity.FINE01].holds and reports[Identity.FINE02].holds
    )
    if cert.characterization_applies:
        cert.characterization_consistent = cert.bounded_clone == cert.sufficiency
    return cert


# -- implication checks over the clone results -------------------------------------


def _status(premises: dict, conclusion_ok: bool) -> str:
    if not all(premises.values()):
        return "vacuous"
    return "holds" if conclusion_ok else "violated"


def check_generation(pi: Operation, arity_cap: int = 3, budget: Budget | None = None) -> TheoremReport:
    """When the decomposable class is a clone containing ``pi``, it equals the
    clone generated by ``pi`` and the constants, arity by arity up to the cap.

    Vacuous cases still report whether the generated sets stay inside the
    class (``generated_subset``), or ``None`` when that ran out of budget.
    """
    budget = _budget(budget)
    ex01, ex04 = check_identity(pi, Identity.EX01).holds, check_identity(pi, Identity.EX04).holds
    selfdec = is_self_decomposable(pi).member
    premises = {"clone": ex01 and ex04, "self_decomposable": selfdec}
    equal, subset = {}, {}
    try:
        for n in range(1, arity_cap + 1):
            lam = lambda_fragment(pi, n, budget)
            gen = generate_fragment([pi], n, budget=budget)
            equal[n] = gen == lam
            subset[n] = gen.issubset(lam)
            if not subset[n]:
                break
    except BudgetError:
        pass
    complete = len(equal) == arity_cap
    conclusion = {f"equal_{n}": v for n, v in equal.items()}
    conclusion["generated_subset"] = all(subset.values()) if complete or not all(subset.values()) else None
    if not all(premises.values()):
        status = "vacuous"
    elif not complete:
        status = "unverified"
    else:
        status = "holds" if all(equal.values()) else "violated"
    return TheoremReport("generation", status, premises, conclusion)


@dataclass
class DerivedReport:
    """The four derived equations, with both candidate hypotheses.

    ``as_stated`` assumes only ``P(x,1,0) = x``; ``with_decomposition``
    additionally assumes ``pi`` is self-decomposable.
    """

    report: IdentityReport
    ex01: bool
    self_decomposable: bool

    @property
    def as_stated(self) -> str:
        return _status({"ex01": self.ex01}, self.report.holds)

    @property
    def with_decomposition(self) -> str:
        return _status({"ex01": self.ex01, "self_decomposable": self.self_decomposable}, self.report.holds)

    def to_dict(self) -> dict:
        return {
            "derived": self.report.to_dict(),
            "ex01": self.ex01,
            "self_decomposable": self.self_decomposable,
            "as_stated": self.as_stated,
            "with_decomposition": self.with_decomposition,
        }


def check_derived_equations(pi: Operation) -> DerivedReport:
    return DerivedReport(
        check_identity(pi, Identity.DERIVED),
        check_identity(pi, Identity.EX01).holds,
        is_self_decomposable(pi).member,
    )


def check_composition_preservation(
    pi: Operation, arity_cap: int = 2, budget: Budget | None = None
) -> tuple[TheoremReport, ClosureReport]:
    """The distributive equation implies that compositions of decomposable
    operations stay decomposable; checked on the fragment up to the cap."""
    budget = _budget(budget)
    premises = {"ex04": check_identity(pi, Identity.EX04).holds}
    closure = is_closed_under_composition(lambda_fragment_upto(pi, arity_cap, budget), budget)
    report = TheoremReport(
        "composition-preservation", _status(premises, closure.closed), premises,
        {"closed": closure.closed},
    )
    return report, closure


def check_projection_criterion(pi: Operation, arity_cap: int = 3, budget: Budget | None = None) -> TheoremReport:
    """``P(x,1,0) = x`` iff the identity is decomposable iff every projection is."""
    frag = lambda_fragment_upto(pi, arity_cap, budget)
    d = pi.domain
    conclusion = {
        "ex01": check_identity(pi, Identity.EX01).holds,
        "unary_projection": projection(d, 1, 1) in frag[1],
        "all_projections": all(
            projection(d, n, i) in frag[n] for n in range(1, arity_cap + 1) for i in range(1, n + 1)
        ),
    }
    same = len(set(conclusion.values())) == 1
    return TheoremReport("projection-criterion", "holds" if same else "violated", {}, conclusion)


def check_clone_sufficiency(cert: CloneCertificate) -> TheoremReport:
    """Given the distributive equation: bounded clone iff ``P(x,1,0) = x``."""
    premises = {"ex04": cert.ex04.holds}
    ok = cert.bounded_clone == cert.ex01.holds
    return TheoremReport(
        "clone-sufficiency", _status(premises, ok), premises,
        {"bounded_clone": cert.bounded_clone, "ex01": cert.ex01.holds},
    )


def check_clone_characterization(cert: CloneCertificate) -> TheoremReport:
    """For self-decomposable ``pi`` satisfying both fine equations:
    clone iff ``P(x,1,0) = x`` and the distributive equation."""
    premises = {
        "self_decomposable": cert.self_decomposable.member,
        "fine01": cert.fine01.holds,
        "fine02": cert.fine02.holds,
    }
    ok = cert.bounded_clone == (cert.ex01.holds and cert.ex04.holds)
    return TheoremReport(
        "clone-characterization", _status(premises, ok), premises,
        {"bounded_clone": cert.bounded_clone, "ex01_ex04": cert.ex01.holds and cert.ex04.holds},
    )


def check_clone_characterization_restated(cert: CloneCertificate) -> TheoremReport:
    """For self-decomposable ``pi``: (clone and both fine equations) iff
    (``P(x,1,0) = x`` and the distributive equation)."""
    premises = {"self_decomposable": cert.self_decomposable.member}
    left = bool(cert.bounded_clone) and cert.fine01.holds and cert.fine02.holds
    right = cert.ex01.holds and cert.ex04.holds
    return TheoremReport(
        "clone-characterization-restated", _status(premises, left == right), premises,
        {"clone_fine": left, "ex01_ex04": right},
    )


def check_symmetric_characterization(pi: Operation, cert: CloneCertificate) -> TheoremReport:
    """Symmetric, self-decomposable, ``P(x,1,0) = x``: both fine equations hold,
    and the class is a clone iff the distributive equation holds."""
    premises = {
        "symmetric": is_symmetric(pi),
        "self_decomposable": cert.self_decomposable.member,
        "ex01": cert.ex01.holds,
    }
    conclusion = {
        "fine": cert.fine01.holds and cert.fine02.holds,
        "clone_iff_ex04": cert.bounded_clone == cert.ex04.holds,
    }
    return TheoremReport(
        "symmetric-characterization", _status(premises, all(conclusion.values())), premises, conclusion
    )


def with_budget(budget: Budget | None = None, **changes) -> Budget:
    return replace(_budget(budget), **changes)
