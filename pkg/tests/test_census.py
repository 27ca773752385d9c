import itertools
import json

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pivotal import load_schema
from pivotal.census import (
    FLAGS,
    ClassificationRecord,
    CensusSummary,
    DomainTooLarge,
    _single_flags,
    boolean_census,
    candidate_count,
    candidate_id,
    candidate_tables,
    classify,
    enumerate_pivotal,
    equational_verdict,
    flag_arrays,
    monotone_fragment,
    ternary_census,
)
from pivotal.identities import PivotalOperation, a_delta, builtin, from_delta_function, make_pivotal
from pivotal.ops import Domain, Operation

B = Domain(2)
T = Domain(3)


def brute_pivotal(domain, require_ex01):
    """Every pivotal table in lexicographic order, by filtering all m**(m**3) tables."""
    m = domain.size
    out = []
    for t in itertools.product(range(m), repeat=m**3):
        cube = np.array(t).reshape(m, m, m)
        if any(cube[x, y, y] != y for x in range(m) for y in range(m)):
            continue
        if require_ex01 and any(cube[x, domain.one, domain.zero] != x for x in range(m)):
            continue
        out.append(t)
    return out


# -- enumeration ---------------------------------------------------------------------------


def test_candidate_counts():
    assert candidate_count(B) == 16
    assert candidate_count(B, True) == 4
    assert candidate_count(T) == 3**18
    assert candidate_count(T, True) == 3**15 == 14_348_907
    assert candidate_count(Domain(3, 0, 2), True) == 3**15


@pytest.mark.parametrize("ex01", [False, True])
@pytest.mark.parametrize("d", [Domain(2), Domain(2, 1, 0)])
def test_boolean_enumeration_matches_brute_force(d, ex01):
    got = [tuple(p.table.tolist()) for p in enumerate_pivotal(d, ex01)]
    assert got == brute_pivotal(d, ex01)
    assert all(isinstance(p, PivotalOperation) for p in enumerate_pivotal(d, ex01))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([Domain(3), Domain(3, 0, 2), Domain(3, 2, 1)]), st.booleans(), st.data())
def test_candidate_ids_roundtrip(d, ex01, data):
    k = data.draw(st.integers(0, candidate_count(d, ex01) - 1))
    t = candidate_tables(d, ex01, k, k + 1)[0]
    pi = make_pivotal(Operation(d, 3, t))
    assert candidate_id(pi, ex01) == k
    if ex01:
        assert all(pi(x, d.one, d.zero) == x for x in range(3))


def test_candidate_order_is_lexicographic():
    tabs = candidate_tables(T, True, 10_000, 10_500)
    assert [tuple(r) for r in tabs] == sorted(tuple(r) for r in tabs)


def test_forced_entries_are_checked():
    pi = builtin("delta-zero")
    assert candidate_id(pi, True) < candidate_count(T, True)
    assert candidate_id(pi, False) < candidate_count(T, False)
    t = candidate_tables(T, False, 5, 6)[0]  # P(x,1,0) = 0 here
    with pytest.raises(ValueError):
        candidate_id(PivotalOperation(T, t), require_ex01=True)


def test_domain_too_large():
    with pytest.raises(DomainTooLarge):
        next(enumerate_pivotal(Domain(4)))
    with pytest.raises(DomainTooLarge):
        ternary_census(Domain(4))


# -- flags ---------------------------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([Domain(3), Domain(3, 0, 2)]), st.booleans(), st.data())
def test_batched_flags_match_single_checks(d, ex01, data):
    start = data.draw(st.integers(0, candidate_count(d, ex01) - 40))
    tabs = candidate_tables(d, ex01, start, start + 40)
    flags = flag_arrays(tabs, d)
    assert list(flags) == list(FLAGS)
    for j, t in enumerate(tabs):
        single = _single_flags(PivotalOperation(d, t))
        assert {k: bool(v[j]) for k, v in flags.items()} == single


def test_batched_flags_on_the_named_tables():
    for name in ("example3elem", "negation-compatible", "delta-zero"):
        pi = builtin(name)
        flags = flag_arrays(pi.table[None, :], pi.domain)
        assert {k: bool(v[0]) for k, v in flags.items()} == _single_flags(pi)


def test_three_element_table_in_the_census():
    pi = builtin("example3elem")
    d = pi.domain
    k = candidate_id(pi, require_ex01=True)
    assert np.array_equal(candidate_tables(d, True, k, k + 1)[0], pi.table)
    lines = []
    ternary_census(d, True, start=k, limit=1, on_record=lines.append)
    rec = ClassificationRecord.from_json(lines[0])
    assert rec.id == k and rec.table == tuple(pi.table.tolist())
    assert rec.flags["ex01"] and not rec.flags["self_decomposable"]
    # the table as printed fails the distributive equation
    assert not rec.flags["ex04"]
    k2 = candidate_id(builtin("negation-compatible"), require_ex01=True)
    lines.clear()
    ternary_census(d, True, start=k2, limit=1, on_record=lines.append)
    flags = json.loads(lines[0])["flags"]
    assert flags["ex01"] and flags["ex04"] and not flags["self_decomposable"]


def test_every_delta_shaped_candidate_has_the_distributive_equation():
    # oracle: build each table from a map on the off-diagonal pairs, then locate it
    d = T
    pairs = a_delta(d)
    ids = []
    for vals in itertools.product(range(3), repeat=len(pairs)):
        pi = from_delta_function(d, dict(zip(pairs, vals)))
        ids.append(candidate_id(pi, require_ex01=True))
    ids = np.array(sorted(ids))
    assert ids.size == len(set(ids.tolist())) == 243
    tabs = np.concatenate([candidate_tables(d, True, k, k + 1) for k in ids])
    flags = flag_arrays(tabs, d)
    assert flags["from_delta_shaped"].all() and flags["ex04"].all() and flags["ex01"].all()


def test_delta_shape_count_over_a_block():
    # in a block where only the (y, z) off-diagonal entries vary, count shaped tables directly
    tabs = candidate_tables(T, True, 0, 3**10)
    shaped = flag_arrays(tabs, T)["from_delta_shaped"]
    cubes = tabs.reshape(-1, 3, 3, 3)
    expect = np.ones(len(tabs), bool)
    for y, z in a_delta(T):
        expect &= (cubes[:, :, y, z] == cubes[:, :1, y, z]).all(axis=1)
    assert np.array_equal(shaped, expect)


# -- classification ------------------------------------------------------------------------


def test_equational_verdict():
    assert equational_verdict(2, False, True) == "refuted"
    assert equational_verdict(2, True, True) == "certified"
    assert equational_verdict(2, True, False) == "unverified"
    assert equational_verdict(3, True, True) == "unverified"
    assert equational_verdict(3, False, False) == "refuted"


def test_classify_is_deterministic():
    for pi in list(enumerate_pivotal(B))[:6] + [builtin("delta-zero")]:
        a, b = classify(pi, 2), classify(pi, 2)
        assert a == b and a.to_json() == b.to_json()


def test_record_json_roundtrip_and_schema():
    schema = load_schema("census-record")
    rec = classify(builtin("med"), 3, candidate=3)
    assert ClassificationRecord.from_json(rec.to_json()) == rec
    jsonschema.validate(json.loads(rec.to_json()), schema)
    assert rec.clone == "certified" and rec.lambda_sizes == {1: 3, 2: 6, 3: 20}
    rec = classify(builtin("example3elem"), 0)
    assert rec.clone == "unverified" and rec.lambda_sizes == {}
    jsonschema.validate(json.loads(rec.to_json()), schema)


def test_boolean_census_shape():
    report = boolean_census(3)
    assert report["count"] == 16 and report["ex01_count"] == 4
    by_section = {e["section_0_1"]: e for e in report["ex01"]}
    assert set(by_section) == {"x", "not x", "0", "1"}
    assert by_section["x"]["builtin"] == ["pi0"]
    assert by_section["not x"]["builtin"] == ["pi1"]
    assert by_section["0"]["builtin"] == ["pi2"]
    assert by_section["1"]["builtin"] == ["pi3"]
    for e in report["ex01"]:
        want = "all" if e["builtin"] == ["pi1"] else "monotone"
        assert e["fragments"] == {1: want, 2: want, 3: want}
    s = report["summary"]
    assert s["total"] == 16 and s["ex01"] == 4
    assert all(v == 0 for k, v in s.items() if k.startswith("viol_"))


def test_boolean_census_implications():
    for rec in boolean_census(2)["records"]:
        f = rec.flags
        if f["ex04"]:
            assert (rec.clone in ("certified", "bounded-verified")) == f["ex01"]
        if f["self_decomposable"] and f["ex01"] and f["sym01"]:
            assert f["symmetric"]
        if f["self_decomposable"] and f["ex01"]:
            assert f["symmetric"] == f["thm28"]


def test_monotone_fragment_sizes():
    assert [monotone_fragment(n).size for n in (0, 1, 2, 3)] == [2, 3, 6, 20]


# -- streamed census -----------------------------------------------------------------------


def test_resumed_halves_match_one_run():
    n = 3**9
    whole = ternary_census(T, True, limit=n)
    first = ternary_census(T, True, limit=n // 2 + 17)
    second = ternary_census(T, True, start=first.cursor, limit=n - first.cursor)
    merged = first.merge(second)
    assert merged.counts == whole.counts
    assert (merged.start, merged.cursor) == (0, n)
    assert not merged.complete
    with pytest.raises(ValueError):
        second.merge(first)


def test_worker_count_does_not_change_results():
    lines1, lines2 = [], []
    kw = dict(start=5_000_000, limit=3000, chunk=500, where=[("ex04", True)])
    one = ternary_census(T, True, workers=1, on_record=lines1.append, **kw)
    two = ternary_census(T, True, workers=2, on_record=lines2.append, **kw)
    assert one.counts == two.counts
    assert lines1 == lines2
    ids = [json.loads(x)["id"] for x in lines1]
    assert ids == sorted(ids)


def test_records_follow_the_filters_and_schema():
    schema = load_schema("census-record")
    lines = []
    s = ternary_census(T, True, start=100, limit=2000, on_record=lines.append,
                       where=[("ex04", True), ("self_decomposable", False)])
    assert len(lines) == s.counts["ex04_not_self_decomposable"]
    for line in lines:
        d = json.loads(line)
        jsonschema.validate(d, schema)
        assert d["flags"]["ex04"] and not d["flags"]["self_decomposable"]
        assert 100 <= d["id"] < 2100
        assert d["clone"] == "unverified"


def test_summary_schema_and_edges():
    schema = load_schema("census-summary")
    s = ternary_census(T, True, limit=50)
    jsonschema.validate(s.to_dict(), schema)
    assert s.counts["total"] == 50
    end = ternary_census(T, True, start=candidate_count(T, True))
    assert end.complete and end.counts["total"] == 0
    jsonschema.validate(end.to_dict(), schema)
    done = ternary_census(B, False)
    assert done.complete and done.counts["total"] == 16 and done.counts["ex01"] == 4
    assert isinstance(done, CensusSummary)


def test_no_implication_violations_on_a_slice():
    s = ternary_census(T, True, start=7_000_000, limit=3**10)
    for k, v in s.counts.items():
        if k.startswith("viol_") and k != "viol_derived_as_stated":
            assert v == 0, k
