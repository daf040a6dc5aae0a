import itertools
import random
from fractions import Fraction

import pytest

from qtoroidal.identities import (
    ERRATA, PartitionScheme, ShuffleSet, build_P, build_T, p_decompositions, q_factor, t_identities,
)
from qtoroidal.polyalg import MultiPoly
from qtoroidal.scalars import qbinom

# numeric evaluation point: v = 3/2, so q = 9/4
VNUM = Fraction(3, 2)
QN = VNUM ** 2


def _num(poly, point):
    """Evaluate a MultiPoly at v = VNUM and the given variable values."""
    total = Fraction(0)
    for mono, c in poly.terms():
        term = c.evaluate(VNUM)
        for name, e in mono:
            term *= point[name] ** e
        total += term
    return total


def _qint(n, q):
    return sum((q ** (n - 1 - 2 * j) for j in range(n)), Fraction(0)) if n > 0 else Fraction(0)


def _qbin(s, k, q):
    fac = lambda n: Fraction(1) if n == 0 else fac(n - 1) * _qint(n, q)
    return fac(s) / (fac(k) * fac(s - k))


def _shuffles(s):
    return [p for p in itertools.permutations((1, 2, 3))
            if all(p[a] < p[b] for a in range(3) for b in range(a + 1, 3) if b < s or a >= s)]


def _blocks(family, s, sig):
    """Index blocks of {0,..,3}; ``sig`` maps 1..3 and fixes everything else."""
    f = lambda a: sig[a - 1] if 1 <= a <= 3 else a
    cuts = [f(s + k) for k in range(1, 3 - s + 1)] if family == 1 else [f(k) for k in range(1, s + 1)]
    edges = [0] + cuts + [4]
    return [set(range(edges[k], edges[k + 1])) for k in range(len(edges) - 1)]


def t_shuffle(family, s, k, z, w, q=QN):
    """The shuffle sum defining T, evaluated numerically."""
    total = Fraction(0)
    for sig in _shuffles(s):
        for r in _blocks(family, s, sig)[k]:
            term = _qbin(3, r, q) * (-1) ** r
            for a in range(1, s + 1):
                for b in range(s + 1, 4):
                    sa, sb = sig[a - 1], sig[b - 1]
                    term *= (q ** 2 * z[a] - z[b]) if sa < sb else (z[a] - q ** 2 * z[b])
            if family == 1:
                for a in range(1, s + 1):
                    term *= (z[a] / q ** 2 - w) if sig[a - 1] <= r else (z[a] - w / q ** 2)
            else:
                for a in range(s + 1, 4):
                    term *= (w / q ** 2 - z[a]) if sig[a - 1] > r else (w - z[a] / q ** 2)
            total += term
    return total


def _points(n, seed=3):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        z = {a: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for a in (1, 2, 3)}
        out.append((z, Fraction(rng.randint(-9, 9), rng.randint(1, 5))))
    return out


def test_shuffle_set_sizes():
    assert [len(ShuffleSet(s).elements) for s in range(4)] == [1, 3, 3, 1]
    assert [len(_shuffles(s)) for s in range(4)] == [1, 3, 3, 1]


def test_partition_families_cover():
    for s in range(4):
        for sig in ShuffleSet(s).elements:
            sch = PartitionScheme(s, sig)
            for fam in (sch.family1(), sch.family2()):
                flat = [p for block in fam for p in block]
                assert sorted(flat) == [0, 1, 2, 3]


@pytest.mark.parametrize("family, s", [(1, s) for s in range(4)] + [(2, s) for s in range(4)])
def test_build_T_matches_the_shuffle_sum(family, s):
    for k in range((3 - s if family == 1 else s) + 1):
        poly = build_T(family, s, k)
        for z, w in _points(4):
            pt = {"z1": z[1], "z2": z[2], "z3": z[3], "w": w}
            assert _num(poly, pt) == t_shuffle(family, s, k, z, w)


def test_build_T_range_check():
    with pytest.raises(ValueError):
        build_T(1, 2, 2)


def _b3():
    return QN ** 2 + 1 + QN ** -2


def closed_T11(z, w, q=QN):
    return (q ** 4 - 1) * z[1] * _b3() * ((z[1] - z[3]) * (z[2] - w / q ** 2) + (z[1] - z[2]) * (z[3] / q ** 2 - w))


def closed_T12(z, w, sign, q=QN):
    return (q ** 4 - 1) * z[1] * (-_b3() * (z[1] - z[2]) * (z[3] - w / q ** 2)
                                 + sign * (z[1] - w / q ** 4) * (z[2] - q ** 2 * z[3]))


def closed_T30(z, w, q=QN):
    return w * (1 - q ** -4) * (-(z[3] - w / q ** 4) * (z[1] - q ** 2 * z[2]) + (z[1] / q ** 4 - w) * (z[2] - q ** 2 * z[3]))


def test_closed_forms_numerically():
    for z, w in _points(6):
        assert t_shuffle(1, 1, 1, z, w) == closed_T11(z, w)
        assert t_shuffle(1, 3, 0, z, w) == closed_T30(z, w)
        assert t_shuffle(1, 3, 0, z, w) == -t_shuffle(2, 0, 0, z, w)


def test_T12_sign_erratum_numerically():
    """The printed T1[1,2] form is off by the sign of one term; the flipped form holds."""
    pts = _points(6)
    assert any(t_shuffle(1, 1, 2, z, w) != closed_T12(z, w, +1) for z, w in pts)
    assert all(t_shuffle(1, 1, 2, z, w) == closed_T12(z, w, -1) for z, w in pts)


def test_family_symmetry_numerically():
    """T2[s,k] = (-1)^(s+1) T1[3-s,k] with cyclically shifted z's; the printed rotation fails."""
    for z, w in _points(4):
        for s in range(3):
            for k in range(s + 1):
                shifted = {a: z[(a - 1 + s) % 3 + 1] for a in (1, 2, 3)}
                assert t_shuffle(2, s, k, z, w) == (-1) ** (s + 1) * t_shuffle(1, 3 - s, k, shifted, w)
    z, w = _points(1)[0]
    printed = {1: z[3], 2: z[1], 3: z[2]}
    assert t_shuffle(2, 1, 0, z, w) != -t_shuffle(1, 2, 0, printed, w)


def test_t_identity_outcomes():
    items = t_identities()
    assert {it.erratum for it in items} - {None} == set(ERRATA)
    for it in items:
        if it.erratum is None or it.variant == "amended":
            assert it.ok, it.name
        if it.ok:
            assert it.holds_at_q_one()
    failing = sorted({it.name for it in items if not it.ok})
    assert failing == sorted({it.name for it in items if it.informational and not it.ok})
    # the two printed T1[2,k] closed forms have no amended counterpart
    assert {it.name for it in items if it.erratum == "T1[2,k]-closed"} == {"T1[2,0] closed form", "T1[2,1] closed form"}


def test_constants():
    for k in range(4):
        assert build_T(1, 0, k) == build_T(2, 3, k)
        assert build_T(1, 0, k).coefficient_of({}) == qbinom(3, k) * (-1) ** k


def test_q_factor():
    assert all(c == 0 for c in q_factor().evaluate_q_at_one().values())
    q = QN
    assert _num(q_factor(), {"z1": Fraction(5)}) == 5 * (q ** -4 - q ** 4 + q ** -2 - q ** 2)


def p_numeric(r, z, w, q=QN):
    """The two-sum formula for P_r with a_ij = -2, evaluated numerically."""
    def chain(p):
        out = Fraction(1)
        for a in range(2, p + 1):
            out *= z[1] - q ** 2 * z[a]
        for a in range(p + 1, 4):
            out *= q ** 2 * z[1] - z[a]
        return out
    first = sum(chain(p) for p in range(1, r + 1)) * (z[1] / q ** 2 - w) * _qbin(3, r, q) * (-1) ** r
    second = sum(chain(p) for p in range(r, 4)) * (z[1] - w / q ** 2) * _qbin(3, r - 1, q) * (-1) ** (r - 1)
    return first + second


def test_P_against_the_formula():
    for r in (1, 2, 3):
        assert build_P(r).degree("w") == 1
        for z, w in _points(5):
            pt = {"z1": z[1], "z2": z[2], "z3": z[3], "w": w}
            assert _num(build_P(r), pt) == p_numeric(r, z, w)
            assert _num(build_P(r, -1), pt) == p_numeric(r, z, w, 1 / QN)


def test_P_decompositions():
    items = p_decompositions()
    assert len(items) == 6 and all(it.ok for it in items)
    # with nothing fixed, the solver lands on the stated f13 = Q(z1 - z3) by itself
    p1 = items[0]
    a0, a1 = MultiPoly.var("a0"), MultiPoly.var("a1")
    assert p1.solved["f13"] == q_factor().coefficient_of({"z1": 1}) * a0 * (a0 - a1)
