import pytest

from qtoroidal import verifier as VF
from qtoroidal._contract import supports
from qtoroidal.fields import Context
from qtoroidal.relations import RELATIONS, g_series
from qtoroidal.scalars import Q

SMALL = VF.Window(1, 1, 2, 1)


def test_mode_shift_calibration_is_unique():
    assert VF.calibrate_mode_shift() == (1,)


def test_g_series():
    assert list(g_series(2, 1, 2)) == [Q ** 2, Q ** 4 - 1, Q ** 6 - Q ** 2]
    inv = g_series(2, -1, 5)
    fwd = g_series(2, 1, 5)
    prod = [sum((fwd[j] * inv[n - j] for j in range(n + 1)), 0 * Q) for n in range(6)]
    assert prod[0] == 1 and all(p.is_zero() for p in prod[1:])


@pytest.fixture(scope="module")
def small_reports():
    return VF.relations_suite(SMALL, jobs=1)


def test_small_window_relations(small_reports):
    by_item = {r.item: r for r in small_reports}
    for item in RELATIONS:
        r = by_item[item]
        assert r.status == "pass", (item, r.counterexample)
        assert r.vectors_checked > 0 and r.coefficients_checked > 0
    assert sum(1 for r in small_reports if r.item.startswith("locality")) == 8


def test_gkv_control_fails_with_a_coefficient(small_reports):
    gkv = next(r for r in small_reports if r.item.startswith("GKV"))
    assert gkv.status == "fail" and gkv.expected == "fail" and gkv.as_expected
    assert "coefficient" in gkv.counterexample and "gives" in gkv.counterexample
    assert VF.exit_code(small_reports) == 0


def _direct_and_contracted(item, radius):
    sigma = VF._sigma()
    seen = []
    for idx, inst in enumerate(VF._instances("V", sigma, item)):
        if not supports(inst.shape, Context().cocycle):
            continue
        for betas, mult in VF._class_tasks(1, radius):
            kw = dict(module="V", item=item, index=idx, betas=betas, multiplicity=mult, degree=1, bound=2,
                      u_bound=None, sigma=sigma)
            fast = VF._run_task(VF._Task(**kw))
            slow = VF._run_task(VF._Task(**kw, use_contraction=False))
            seen.append((fast.counterexample is None, slow.counterexample is None))
    return seen


@pytest.mark.parametrize("item, radius", [("Q6", 1), ("Q8", 1), ("Q9", 0), ("GKV", 1)])
def test_contraction_agrees_with_direct_evaluation(item, radius):
    seen = _direct_and_contracted(item, radius)
    assert seen, "no instance took the contraction path"
    assert all(a == b for a, b in seen)
    if item == "GKV":
        assert not all(b for _a, b in seen)


def test_wrong_mode_shift_breaks_the_delta_relation():
    sigma = 0
    bad = False
    for idx in range(len(VF._instances("V", sigma, "Q5"))):
        for betas, mult in VF._class_tasks(1, 1):
            r = VF._run_task(VF._Task("V", "Q5", idx, betas, mult, 1, 2, None, sigma))
            bad = bad or r.counterexample is not None
    assert bad
