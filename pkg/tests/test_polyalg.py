import pytest
from hypothesis import given, settings, strategies as st

from qtoroidal.polyalg import MultiPoly, expand_rational, parse_mpoly
from qtoroidal.scalars import ONE, Q, Scalar, ZERO

z, w = MultiPoly.var("z"), MultiPoly.var("w")


def test_product_of_binomials():
    assert (z - w) * (z + w) == z ** 2 - w ** 2


def test_substitution_at_a_root():
    assert (z - Q ** -1 * w).subs("z", Q ** -1, "w").is_zero()


def test_coefficient_against_dense_expansion():
    p = (z - Q ** 2 * w) * (w - Q ** 2 * z)
    # dense oracle: z*w picks up 1*1 from z*w and (-q^2)(-q^2) from w*z
    assert p.coefficient({"z": 1, "w": 1}) == MultiPoly.const(1 + Q ** 4)
    assert p.coefficient({"z": 2}) == MultiPoly.const(-Q ** 2)
    assert p.coefficient({"z": 1}) == MultiPoly.const(1 + Q ** 4) * w


def _long_division(num, den, order):
    """Power-series quotient of coefficient lists, by hand."""
    out = []
    rem = list(num) + [ZERO] * (order + 1)
    for n in range(order + 1):
        c = rem[n] / den[0]
        out.append(c)
        for j, d in enumerate(den):
            if n + j < len(rem):
                rem[n + j] = rem[n + j] - c * d
    return out


def test_g_expansion_examples():
    s = expand_rational(Q ** 2 - z, 1 - Q ** 2 * z, 2)
    assert list(s.coeffs) == [Q ** 2, Q ** 4 - 1, Q ** 6 - Q ** 2]
    assert list(s.coeffs) == _long_division([Q ** 2, -ONE], [ONE, -Q ** 2], 2)
    assert list(expand_rational(Q ** -2 - z, 1 - Q ** -2 * z, 0).coeffs) == [Q ** -2]


def test_g_inverse_expansion():
    inv = expand_rational(1 - Q ** 2 * z, Q ** 2 - z, 1)
    assert list(inv.coeffs) == _long_division([ONE, -Q ** 2], [Q ** 2, -ONE], 1)


@pytest.mark.parametrize("a", [2, -2])
def test_g_times_inverse_is_one(a):
    g_num, g_den = Q ** a - z, 1 - Q ** a * z
    for order in range(13):
        g = expand_rational(g_num, g_den, order)
        gi = expand_rational(g_den, g_num, order)
        prod = [sum((g.coeffs[j] * gi.coeffs[n - j] for j in range(n + 1)), ZERO) for n in range(order + 1)]
        assert prod == [ONE] + [ZERO] * order


def test_expand_needs_constant_term():
    with pytest.raises(ZeroDivisionError):
        expand_rational(ONE + z, z - z ** 2, 3)


def test_parse_round_trip():
    p = (z - Q ** 2 * w) ** 2 * w ** -1
    assert parse_mpoly(p.render()) == p


mono = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2))
polys = st.lists(mono, max_size=4).map(
    lambda ts: sum((Q ** e * z ** a * w ** b for e, a, b in ts), MultiPoly()))


@settings(max_examples=150, deadline=None)
@given(polys, polys, st.integers(-2, 2))
def test_substitution_is_a_ring_homomorphism(p, r, e):
    f = lambda x: x.subs("z", Q ** e, "w")
    assert f(p * r) == f(p) * f(r)
    assert f(p + r) == f(p) + f(r)


@settings(max_examples=100, deadline=None)
@given(polys, st.integers(-2, 2), st.integers(-2, 2))
def test_substitution_composes(p, a, b):
    u = MultiPoly.var("u")
    two_steps = p.subs("z", Q ** a, "w").subs("w", Q ** b, "u")
    one_step = p.substitute({"z": Q ** (a + b) * u, "w": Q ** b * u})
    assert two_steps == one_step


@settings(max_examples=100, deadline=None)
@given(polys, polys, st.integers(0, 2))
def test_coefficient_is_linear(p, r, k):
    c = Q + 3
    assert (p + c * r).coefficient({"z": k}) == p.coefficient({"z": k}) + c * r.coefficient({"z": k})
