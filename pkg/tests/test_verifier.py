import json

import pytest

from qtoroidal import verifier as VF

TINY = VF.Window(1, 0, 1, 0)
KEYS = {"suite", "item", "window", "vectorsChecked", "coefficientsChecked", "status"}


def test_window_validation_and_capping():
    with pytest.raises(ValueError):
        VF.Window(-1, 0, 1, 0)
    w = VF.DEFAULT_WINDOW
    assert (w.max_fock_degree, w.weight_radius, w.exponent_bound, w.u_bound) == (3, 2, 4, 3)
    c = w.capped(degree=2, bound=3)
    assert (c.max_fock_degree, c.exponent_bound, c.weight_radius) == (2, 3, 2)
    assert w.to_json() == {"maxFockDegree": 3, "weightRadius": 2, "exponentBound": 4, "uBound": 3}


def test_report_schema():
    reports = VF.relations_suite(TINY, ["Q5", "Q6", "GKV"])
    for r in reports:
        d = json.loads(VF.dumps([r]))[0]
        assert KEYS <= set(d) <= KEYS | {"counterexample", "calibration"}
        assert ("counterexample" in d) == (d["status"] == "fail")
    q5 = next(r for r in reports if r.item == "Q5")
    assert q5.to_json()["calibration"] == "x(z) = z^1 X(z)"


def test_exit_codes():
    good = VF.Report("relations", "Q1", TINY)
    bad = VF.Report("relations", "Q2", TINY, counterexample="x")
    control = VF.Report("relations", "GKV", TINY, counterexample="x", expected="fail")
    missed = VF.Report("relations", "GKV", TINY, expected="fail")
    noted = VF.Report("coproduct", "antipode", TINY, counterexample="x", informational=True)
    assert VF.exit_code([good, control, noted]) == 0
    assert VF.exit_code([good, bad]) == 1
    assert VF.exit_code([missed]) == 1


def test_counterexamples_are_clipped():
    r = VF.Report("x", "y", TINY)
    r.counterexample = VF._clip("a" * 2000)
    assert len(r.counterexample) <= VF.MAX_COUNTEREXAMPLE + 4


def test_serial_and_parallel_reports_are_identical():
    serial = VF.dumps(VF.relations_suite(VF.Window(1, 1, 2, 0), ["Q1", "Q6", "Q9", "GKV"], jobs=1))
    parallel = VF.dumps(VF.relations_suite(VF.Window(1, 1, 2, 0), ["Q1", "Q6", "Q9", "GKV"], jobs=2))
    assert serial == parallel


def test_unknown_relation_is_rejected():
    with pytest.raises(ValueError):
        VF.relations_suite(TINY, ["Q10"])


def test_identities_suite_reports():
    reports = VF.identities_suite()
    assert VF.exit_code(reports) == 0
    amended = [r for r in reports if r.item.endswith("(amended)")]
    assert amended and all(r.status == "pass" for r in amended)
    assert all(r.informational for r in reports if r.status == "fail")


def test_classical_suite_reports():
    reports = VF.classical_suite(2)
    assert VF.exit_code(reports) == 0
    items = {r.item for r in reports}
    assert {"L1", "L7", "Jacobi", "Heisenberg specialization"} <= items
