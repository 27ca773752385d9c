"""Desk-scale re-verification of every statement about pivotal decompositions.

Each row checks one implication or example over a fixed set of probes:
all 16 Boolean pivotal operations plus the named three-element tables.
A row passes when no probe violates it; vacuous probes (a premise fails)
are counted separately.  Rows never stop early, so one report shows every
failure at once.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .census import enumerate_pivotal, monotone_fragment
from .clones import (
    Budget,
    CloneCertificate,
    _budget,
    check_clone_characterization,
    check_clone_characterization_restated,
    check_clone_sufficiency,
    check_composition_preservation,
    check_derived_equations,
    check_generation,
    check_projection_criterion,
    check_symmetric_characterization,
    clone_certificate,
    lambda_fragment,
)
from .decomposition import (
    build_normal_form,
    check_cyclic_symmetry,
    check_symmetry_criterion,
    decomposition_terms,
    is_pi_decomposable,
    is_self_decomposable,
    nf_to_operation,
)
from .identities import (
    PivotalOperation,
    a_delta,
    builtin,
    check_identity,
    from_delta_function,
    identity_mask,
)
from .ops import Domain, all_tuples, constant_op

__all__ = ["SuiteRow", "ROW_KEYS", "default_tables", "faulty_tables", "run_suite", "suite_payload"]

TERNARY_PROBES = ("example3elem", "negation-compatible", "delta-zero")
NAMED = ("med", "pi1", "pi2", "pi3") + TERNARY_PROBES

# Independent closed forms for the four Boolean pivots with P(x,1,0) = x.
_CLOSED = {
    "med": (lambda x, y, z: (x & y) | (x & z) | (y & z), "x"),
    "pi1": (lambda x, y, z: (x & y) | ((1 - x) & z), "not x"),
    "pi2": (lambda x, y, z: y & (x | z), "0"),
    "pi3": (lambda x, y, z: z | (x & y), "1"),
}


@dataclass
class SuiteRow:
    key: str
    statement: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "statement": self.statement,
            "status": "pass" if self.passed else "fail",
            "seconds": round(self.seconds, 3),
            "detail": self.detail,
        }


def default_tables() -> dict[str, PivotalOperation]:
    return {name: builtin(name) for name in NAMED}


def faulty_tables() -> dict[str, PivotalOperation]:
    """Named tables with one off-diagonal entry of ``med`` negated."""
    tables = default_tables()
    t = tables["med"].table.copy()
    t[1] ^= 1  # med(0,0,1): 0 -> 1
    tables["med"] = PivotalOperation(tables["med"].domain, t)
    return tables


@dataclass
class _Probe:
    name: str
    pi: PivotalOperation
    cap: int
    cert: CloneCertificate


def _probes(tables: Mapping[str, PivotalOperation], budget: Budget) -> list[_Probe]:
    out = [
        _Probe(f"bool#{i}", pi, 3, clone_certificate(pi, 2, budget))
        for i, pi in enumerate(enumerate_pivotal(Domain(2)))
    ]
    for name in TERNARY_PROBES:
        out.append(_Probe(name, tables[name], 2, clone_certificate(tables[name], 2, budget)))
    return out


def _tally(reports: Mapping[str, object]) -> tuple[bool, dict]:
    statuses = {k: r.status for k, r in reports.items()}
    counts = Counter(statuses.values())
    violated = sorted(k for k, s in statuses.items() if s == "violated")
    return not violated and not counts.get("unverified"), {
        "counts": dict(sorted(counts.items())),
        "violated": violated,
    }


# -- rows ----------------------------------------------------------------------------


def _constants(ctx) -> tuple[bool, dict]:
    failures = []
    checked = 0
    for p in ctx.probes:
        d = p.pi.domain
        for n in range(1, p.cap + 1):
            for c in d.elements:
                checked += 1
                r = is_pi_decomposable(constant_op(d, n, c), p.pi)
                if not r.member:
                    failures.append({"probe": p.name, "arity": n, "value": c, "witness": r.to_dict()["witness"]})
    return not failures, {"checked": checked, "failures": failures}


def _normal_forms(ctx) -> tuple[bool, dict]:
    failures = []
    checked = 0
    for p in ctx.probes:
        for n in range(1, p.cap + 1):
            for f in lambda_fragment(p.pi, n, ctx.budget):
                checked += 1
                if nf_to_operation(build_normal_form(f), p.pi, n) != f:
                    failures.append({"probe": p.name, "table": f.table.tolist()})
    return not failures, {"checked": checked, "failures": failures[:5], "failure_count": len(failures)}


def _per_probe(check: Callable) -> Callable:
    def row(ctx):
        return _tally({p.name: check(ctx, p) for p in ctx.probes})
    return row


def _composition(ctx) -> tuple[bool, dict]:
    reports, closures = {}, {}
    for p in ctx.probes:
        reports[p.name], closure = check_composition_preservation(p.pi, 2, ctx.budget)
        if not closure.closed:
            closures[p.name] = closure.to_dict()
    ok, detail = _tally(reports)
    detail["counterexamples"] = {k: v for k, v in closures.items() if k in detail["violated"]}
    return ok, detail


def _sufficiency(ctx) -> tuple[bool, dict]:
    ok, detail = _tally({p.name: check_clone_sufficiency(p.cert) for p in ctx.probes})
    detail["conflicts"] = {
        p.name: p.cert.closure.to_dict() for p in ctx.probes if p.cert.conflict and p.cert.closure
    }
    return ok, detail


def _boolean_classification(ctx) -> tuple[bool, dict]:
    ops = list(enumerate_pivotal(Domain(2)))
    ex01 = [pi for pi in ops if check_identity(pi, "ex01").holds]
    x, y, z = all_tuples(2, 3).T
    section_name = {(0, 1): "x", (1, 0): "not x", (0, 0): "0", (1, 1): "1"}
    named = {}
    ok = len(ops) == 16 and len(ex01) == 4
    mono = {n: monotone_fragment(n) for n in (1, 2, 3)}
    for name, (formula, section) in _CLOSED.items():
        pi = ctx.tables[name]
        cube = pi.table.reshape(2, 2, 2)
        got_section = section_name[tuple(int(v) for v in cube[:, 0, 1])]
        closed_ok = np.array_equal(pi.table, formula(x, y, z) & 1)
        frags = {}
        for n in (1, 2, 3):
            keys = lambda_fragment(pi, n, ctx.budget).keys
            if np.array_equal(keys, mono[n]):
                frags[n] = "monotone"
            elif keys.size == 2 ** (2**n):
                frags[n] = "all"
            else:
                frags[n] = "other"
        want = "all" if name == "pi1" else "monotone"
        row_ok = (
            closed_ok and got_section == section and pi in ex01 and all(v == want for v in frags.values())
        )
        ok &= row_ok
        named[name] = {"closed_form": closed_ok, "section": got_section, "fragments": frags, "ok": row_ok}
    sections = sorted(section_name[tuple(int(v) for v in pi.table.reshape(2, 2, 2)[:, 0, 1])] for pi in ex01)
    ok &= sections == sorted(section_name.values())
    return ok, {"pivotal": len(ops), "ex01": len(ex01), "sections": sections, "named": named}


def _derived(ctx) -> tuple[bool, dict]:
    reports = {p.name: check_derived_equations(p.pi) for p in ctx.probes}
    with_dec = Counter(r.with_decomposition for r in reports.values())
    as_stated = Counter(r.as_stated for r in reports.values())
    violated = sorted(k for k, r in reports.items() if r.with_decomposition == "violated")
    return not violated, {
        "counts": dict(sorted(with_dec.items())),
        "violated": violated,
        "without_self_decomposition": {
            "counts": dict(sorted(as_stated.items())),
            "violated": sorted(k for k, r in reports.items() if r.as_stated == "violated"),
        },
    }


def _delta_construction(ctx) -> tuple[bool, dict]:
    pi = ctx.tables["delta-zero"]
    d = pi.domain
    pairs = a_delta(d)
    # every map A_delta -> A gives a table satisfying both equations
    values = all_tuples(d.size, len(pairs))
    tables = np.stack(
        [from_delta_function(d, dict(zip(pairs, (int(v) for v in row)))).table for row in values]
    )
    ex01_all = bool(identity_mask(tables, d, "ex01").all())
    ex04_all = bool(identity_mask(tables, d, "ex04").all())
    lhs, rhs = decomposition_terms(pi, pi, 3, (1, 2, 2))
    zero_map = {p: 0 for p in pairs}
    facts = {
        "built_from_zero_map": pi == from_delta_function(d, zero_map),
        "ex01": check_identity(pi, "ex01").holds,
        "ex04": check_identity(pi, "ex04").holds,
        "not_self_decomposable": not is_self_decomposable(pi).member,
        "witness_differs": lhs != rhs and lhs == 2 and rhs == zero_map[(2, 0)],
        "every_map_ex01": ex01_all,
        "every_map_ex04": ex04_all,
    }
    return all(facts.values()), {
        "facts": facts,
        "maps": int(values.shape[0]),
        "witness": {"position": 3, "tuple": [1, 2, 2], "lhs": lhs, "rhs": rhs},
    }


def _clone_without_pivot(ctx) -> tuple[bool, dict]:
    pi = ctx.tables["example3elem"]
    cert = next(p.cert for p in ctx.probes if p.name == "example3elem")
    a = 1
    sd = cert.self_decomposable
    facts = {
        "ex01": cert.ex01.holds,
        "ex04": cert.ex04.holds,
        "not_self_decomposable": not sd.member,
        "witness_at_a_a_section": sd.witness is not None and tuple(sd.witness[1][1:]) == (a, a),
        "bounded_verified": cert.bounded == "bounded-verified",
    }
    return all(facts.values()), {
        "facts": facts,
        "ex04_witness": cert.ex04.to_dict()["witness"],
        "self_decomposable_witness": sd.to_dict()["witness"],
        "lambda_sizes": {str(k): v for k, v in cert.lambda_sizes.items()},
        "closure": None if cert.closure is None else cert.closure.to_dict(),
        "table": pi.table.tolist(),
    }


ROWS: list[tuple[str, str, Callable]] = [
    ("constants-decomposable", "every constant operation is decomposable", _constants),
    ("normal-form-roundtrip", "every decomposable operation equals its expanded normal form", _normal_forms),
    (
        "cyclic-symmetry",
        "self-decomposable, P(x,1,0)=x and cyclically symmetric imply symmetric",
        _per_probe(lambda ctx, p: check_cyclic_symmetry(p.pi)),
    ),
    (
        "symmetry-criterion",
        "self-decomposable with P(x,1,0)=x: symmetric iff the two constant equations hold",
        _per_probe(lambda ctx, p: check_symmetry_criterion(p.pi)),
    ),
    ("composition-preservation", "the distributive equation keeps compositions decomposable", _composition),
    (
        "projections-criterion",
        "P(x,1,0)=x iff the class holds the unary projection iff it holds every projection",
        _per_probe(lambda ctx, p: check_projection_criterion(p.pi, p.cap, ctx.budget)),
    ),
    ("clone-sufficiency", "with the distributive equation: clone iff P(x,1,0)=x", _sufficiency),
    (
        "boolean-classification",
        "four Boolean pivots satisfy P(x,1,0)=x; their classes are the monotone or the full clone",
        _boolean_classification,
    ),
    (
        "generation",
        "a clone containing P is generated by P and the constants",
        _per_probe(lambda ctx, p: check_generation(p.pi, p.cap, ctx.budget)),
    ),
    ("derived-equations", "P(x,1,0)=x with self-decomposability forces four derived equations", _derived),
    (
        "clone-characterization",
        "self-decomposable with both fine equations: clone iff P(x,1,0)=x and the distributive equation",
        _per_probe(lambda ctx, p: check_clone_characterization(p.cert)),
    ),
    (
        "clone-characterization-restated",
        "self-decomposable: clone with both fine equations iff P(x,1,0)=x and the distributive equation",
        _per_probe(lambda ctx, p: check_clone_characterization_restated(p.cert)),
    ),
    (
        "symmetric-characterization",
        "symmetric, self-decomposable, P(x,1,0)=x: clone iff the distributive equation",
        _per_probe(lambda ctx, p: check_symmetric_characterization(p.pi, p.cert)),
    ),
    (
        "delta-construction",
        "tables determined by a map on the off-diagonal pairs satisfy the distributive equation",
        _delta_construction,
    ),
    (
        "clone-without-pivot",
        "the three-element table yields a clone that does not contain it",
        _clone_without_pivot,
    ),
]

ROW_KEYS = tuple(key for key, _, _ in ROWS)


@dataclass
class _Context:
    tables: Mapping[str, PivotalOperation]
    budget: Budget
    probes: list[_Probe]


def run_suite(
    tables: Mapping[str, PivotalOperation] | None = None,
    *,
    inject_fault: bool = False,
    budget: Budget | None = None,
    only: tuple[str, ...] | None = None,
) -> list[SuiteRow]:
    if tables is None:
        tables = faulty_tables() if inject_fault else default_tables()
    budget = _budget(budget)
    ctx = _Context(tables, budget, _probes(tables, budget))
    rows = []
    for key, statement, check in ROWS:
        if only is not None and key not in only:
            continue
        t0 = time.perf_counter()
        passed, detail = check(ctx)
        rows.append(SuiteRow(key, statement, bool(passed), detail, time.perf_counter() - t0))
    return rows


def suite_payload(rows: list[SuiteRow]) -> dict:
    return {
        "passed": sum(r.passed for r in rows),
        "failed": sum(not r.passed for r in rows),
        "rows": [r.to_dict() for r in rows],
    }
