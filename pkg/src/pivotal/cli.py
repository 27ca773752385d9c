"""Command-line front end: ``pivotal <command> ...``.

Exit codes: 0 the property holds or the task finished, 1 the property fails
(a witness is printed), 2 usage or input error, 3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .census import (
    FLAGS,
    MAX_CENSUS_SIZE,
    DomainTooLarge,
    boolean_census,
    candidate_count,
    ternary_census,
)
from .clones import Budget, clone_certificate
from .decomposition import BudgetError, build_normal_form, format_nf, is_pi_decomposable, simplify
from .identities import BUILTIN_NAMES, Identity, NotPivotalError, PivotalOperation, builtin, check_identity
from .ops import ArityError, Domain, FormatError, Operation, load_table
from .suite import ROW_KEYS, run_suite, suite_payload

OK, FAILS, USAGE, BUDGET = 0, 1, 2, 3

log = logging.getLogger("pivotal")


class UsageError(Exception):
    pass


def _write_json(path: str | None, payload: dict) -> None:
    if path is None:
        return
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(path: str | None, name: str | None, what: str) -> Operation:
    if (path is None) == (name is None):
        raise UsageError(f"give exactly one of a table file or --builtin for {what}")
    if name is not None:
        try:
            return builtin(name)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    try:
        return load_table(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _pivotal(op: Operation) -> PivotalOperation:
    try:
        return PivotalOperation.from_operation(op)
    except ValueError as exc:
        raise UsageError(f"not a pivotal operation: {exc}") from None


def _budget(args) -> Budget:
    try:
        return Budget.from_env()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands ------------------------------------------------------------------------


def cmd_check_identity(args) -> int:
    try:
        ident = Identity(args.id)
    except ValueError:
        names = ", ".join(i.value for i in Identity)
        raise UsageError(f"unknown identity {args.id!r}; known: {names}") from None
    op = _load(args.op, args.builtin, "--op")
    if op.arity != 3:
        raise UsageError(f"identities are about ternary operations, got arity {op.arity}")
    report = check_identity(op, ident)
    if report.holds:
        print(f"{ident.value}: holds")
    else:
        vars_ = ", ".join(str(v) for v in report.witness)
        print(f"{ident.value}: fails")
        print(f"  equation: {report.equation}")
        print(f"  witness: ({vars_})")
    _write_json(args.json, report.to_dict())
    return OK if report.holds else FAILS


def _tup(x) -> str:
    return "(" + ", ".join(str(v) for v in x) + ")"


def cmd_decompose(args) -> int:
    f = _load(args.f, None, "--f")
    pi = _pivotal(_load(args.pi, args.builtin, "--pi"))
    if f.domain != pi.domain:
        raise UsageError("f and the pivot are defined on different domains")
    report = is_pi_decomposable(f, pi)
    payload = report.to_dict()
    if report.member:
        nf = format_nf(simplify(build_normal_form(f)))
        payload["normal_form"] = nf
        print("decomposable")
        print(f"  normal form: {nf}")
    else:
        i, x = report.witness
        hi, lo = list(x), list(x)
        hi[i - 1], lo[i - 1] = f.domain.one, f.domain.zero
        print("not decomposable")
        print(f"  witness: position {i}, tuple {_tup(x)}")
        print(f"  f{_tup(x)} = {f(*x)} but P({x[i - 1]}, f{_tup(hi)}, f{_tup(lo)}) = "
              f"{pi(x[i - 1], f(*hi), f(*lo))}")
    _write_json(args.json, payload)
    return OK if report.member else FAILS


def _describe_certificate(cert) -> list[str]:
    sd = cert.self_decomposable
    lines = [
        f"verdict: {cert.verdict}" + (" (conflict: equations hold but closure refuted)" if cert.conflict else ""),
        f"evidence: {' + '.join(cert.verdicts)}",
    ]
    for r in (cert.ex01, cert.ex04, cert.fine01, cert.fine02):
        extra = "" if r.holds else f" at {_tup(r.witness)}"
        lines.append(f"{r.identity.value}: {'holds' if r.holds else 'fails'}{extra}")
    lines.append(
        "self-decomposable: yes" if sd.member else f"self-decomposable: no (position {sd.witness[0]}, tuple {_tup(sd.witness[1])})"
    )
    if cert.lambda_sizes:
        sizes = ", ".join(f"{n}: {s}" for n, s in sorted(cert.lambda_sizes.items()))
        lines.append(f"decomposable class sizes by arity: {sizes}")
    if cert.closure is not None:
        c = cert.closure
        lines.append(f"closure: {'closed' if c.closed else 'not closed'} ({c.mode}, {c.checked} compositions)")
        if c.counterexample is not None:
            outer, inner = c.counterexample
            lines.append(f"  outer {outer.table.tolist()} applied to {[g.table.tolist() for g in inner]}")
    if cert.projections_present is False:
        lines.append("projections: missing")
    if cert.note:
        lines.append(f"note: {cert.note}")
    return lines


def cmd_clone(args) -> int:
    pi = _pivotal(_load(args.pi, args.builtin, "--pi"))
    if args.cap < 1:
        raise UsageError("--cap must be at least 1")
    cert = clone_certificate(pi, args.cap, _budget(args))
    for line in _describe_certificate(cert):
        print(line)
    if args.export and cert.bounded != "unverified":
        from .clones import lambda_fragment_upto

        out = lambda_fragment_upto(pi, args.cap, _budget(args)).export(args.export, cert.verdict)
        print(f"exported fragment to {out}")
    _write_json(args.json, cert.to_dict())
    if cert.bounded == "unverified":
        return BUDGET
    return OK if cert.bounded_clone and not cert.conflict else FAILS


def _parse_where(items: Sequence[str]) -> list[tuple[str, bool]]:
    out = []
    for item in items:
        want = not item.startswith("!")
        name = item.lstrip("!")
        if name not in FLAGS:
            raise UsageError(f"unknown flag {name!r} in --where; known: {', '.join(FLAGS)}")
        out.append((name, want))
    return out


@contextlib.contextmanager
def _sink(path: str | None, append: bool = False):
    if path is None:
        yield None
    elif path == "-":
        yield sys.stdout
    else:
        with open(path, "a" if append else "w") as fh:
            yield fh


def cmd_census(args) -> int:
    if args.m < 2 or args.m > MAX_CENSUS_SIZE:
        raise UsageError(f"censuses are supported for m = 2..{MAX_CENSUS_SIZE}, got {args.m}")
    try:
        domain = Domain(args.m, args.zero, args.one)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    require_ex01 = "ex01" in args.require
    where = _parse_where(args.where)
    # human-readable lines go to stderr when records are streamed to stdout
    out = sys.stderr if args.records == "-" else sys.stdout

    if args.m == 2 and not args.flags_only:
        if domain != Domain(2):
            raise UsageError("the Boolean census uses zero=0, one=1")
        if args.cap < 0:
            raise UsageError("--cap must be non-negative")
        report = boolean_census(args.cap, _budget(args))
        records = [r for r in report["records"] if not require_ex01 or r.flags["ex01"]]
        records = [r for r in records if all(r.flags[k] == v for k, v in where)]
        with _sink(args.records) as sink:
            for r in records:
                if sink is not None:
                    sink.write(r.to_json() + "\n")
        print(f"pivotal operations: {report['count']}", file=out)
        print(f"with P(x,1,0) = x: {report['ex01_count']}", file=out)
        for e in report["ex01"]:
            frag = ", ".join(f"{n}: {v}" for n, v in e["fragments"].items())
            name = "/".join(e["builtin"]) or "?"
            print(f"  #{e['id']} {name}: P(x,0,1) = {e['section_0_1']}; decomposable class {frag}", file=out)
        for r in records:
            sizes = ", ".join(str(v) for v in r.lambda_sizes.values())
            print(f"  #{r.id} {list(r.table)} clone={r.clone} sizes=({sizes})", file=out)
        summary = {"domain": {"size": 2, "zero": 0, "one": 1}, "require_ex01": require_ex01,
                   "start": 0, "cursor": report["count"], "total": report["count"], "complete": True,
                   "counts": report["summary"]}
        _write_json(args.summary, summary)
        return OK

    budget = _budget(args)
    total = candidate_count(domain, require_ex01)
    start = args.resume
    if start < 0 or start > total:
        raise UsageError(f"--resume must lie in 0..{total}")
    limit = total - start if args.limit is None else args.limit
    over_budget = limit > budget.max_candidates
    limit = min(limit, budget.max_candidates)

    # a resumed run appends to the records of the run it continues
    with _sink(args.records, append=start > 0) as sink:
        on_record = None if sink is None else (lambda line: sink.write(line + "\n"))
        try:
            summary = ternary_census(
                domain, require_ex01, start=start, limit=limit, workers=args.workers,
                on_record=on_record, where=where,
            )
        except DomainTooLarge as exc:
            raise UsageError(str(exc)) from None

    print(f"candidates {summary.start}..{summary.cursor} of {summary.total}", file=out)
    for k, v in sorted(summary.counts.items()):
        print(f"  {k}: {v}", file=out)
    if not summary.complete:
        print(f"partial: resume with --resume {summary.cursor}", file=out)
    _write_json(args.summary, summary.to_dict())
    if over_budget and not summary.complete:
        print("budget exceeded (PIVOTAL_BUDGET max_candidates)", file=sys.stderr)
        return BUDGET
    return OK


def cmd_paper_suite(args) -> int:
    only = tuple(args.only) if args.only else None
    if only:
        unknown = sorted(set(only) - set(ROW_KEYS))
        if unknown:
            raise UsageError(f"unknown rows {unknown}; known: {', '.join(ROW_KEYS)}")
    rows = run_suite(inject_fault=args.inject_fault, budget=_budget(args), only=only)
    width = max(len(r.key) for r in rows)
    for r in rows:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.key:<{width}}  {r.statement}")
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"\n{r.key}:")
        print("  " + json.dumps(r.detail, sort_keys=True)[:2000])
    print(f"\n{len(rows) - len(failed)}/{len(rows)} rows pass")
    _write_json(args.json, suite_payload(rows))
    return FAILS if failed else OK


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pivotal", description="Pivotal decompositions of finite operations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def table_source(sp, flag, help_):
        sp.add_argument(flag, metavar="FILE", help=help_)
        sp.add_argument("--builtin", choices=BUILTIN_NAMES, help="use a built-in table instead of a file")

    s = sub.add_parser("check-identity", help="check one equation on a ternary table")
    table_source(s, "--op", "ternary table file")
    s.add_argument("--id", required=True, help=", ".join(i.value for i in Identity))
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(run=cmd_check_identity)

    s = sub.add_parser("decompose", help="decide decomposability of f by a pivot")
    s.add_argument("--f", required=True, metavar="FILE", help="table file of f")
    table_source(s, "--pi", "pivot table file")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(run=cmd_decompose)

    s = sub.add_parser("clone", help="clone certificate for the decomposable class of a pivot")
    table_source(s, "--pi", "pivot table file")
    s.add_argument("--cap", type=int, default=2, help="largest arity inspected")
    s.add_argument("--export", metavar="DIR", help="write the fragment tables and a manifest")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(run=cmd_clone)

    s = sub.add_parser("census", help="classify every pivotal operation on a small domain")
    s.add_argument("--m", type=int, required=True, help="domain size (2 or 3)")
    s.add_argument("--zero", type=int, default=0)
    s.add_argument("--one", type=int, default=1)
    s.add_argument("--require", action="append", default=[], choices=["ex01"], help="fix P(x,1,0) = x")
    s.add_argument("--flags-only", action="store_true", help="skip the clone columns")
    s.add_argument("--cap", type=int, default=3, help="arity cap for the Boolean clone columns")
    s.add_argument("--resume", type=int, default=0, metavar="CURSOR", help="first candidate id")
    s.add_argument("--limit", type=int, help="classify at most this many candidates")
    s.add_argument("--workers", type=int, default=1, help="processes (0 = all cores)")
    s.add_argument("--records", metavar="PATH", help="write NDJSON records ('-' for stdout)")
    s.add_argument("--where", action="append", default=[], metavar="FLAG", help="keep records with FLAG (or !FLAG)")
    s.add_argument("--summary", metavar="PATH", help="write the aggregate summary as JSON")
    s.set_defaults(run=cmd_census)

    s = sub.add_parser("paper-suite", help="re-verify every statement at desk scale")
    s.add_argument("--json", metavar="PATH")
    s.add_argument("--inject-fault", action="store_true", help="negate one entry of med first")
    s.add_argument("--only", action="append", metavar="ROW", help="run only the named rows")
    s.set_defaults(run=cmd_paper_suite)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (FormatError, ArityError, NotPivotalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
