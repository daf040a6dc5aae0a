import itertools

from qtoroidal.lattice import ALPHA, DELTA, TRIVIAL_COCYCLE, Weight, cocycle, group_mult, pairing, parse_weight

a0, a1 = ALPHA
grid = lambda r: [Weight(m0, m1) for m0 in range(-r, r + 1) for m1 in range(-r, r + 1)]


def test_pairing_examples():
    assert pairing(a0, a1) == -2
    assert pairing(a0, a0) == 2 and pairing(a1, a1) == 2
    assert pairing(a0 + a1, Weight(3, -7)) == 0
    # bilinear expansion: 2<a0,a0> - <a1,a0>
    assert pairing(2 * a0 - a1, a0) == 2 * 2 - (-2) == 6


def test_null_direction():
    assert DELTA == a0 + a1
    assert all(pairing(DELTA, b) == 0 for b in grid(3))


def test_even_lattice():
    for b, c in itertools.product(grid(5), repeat=2):
        assert pairing(b, c) % 2 == 0
        assert pairing(b, c) == pairing(c, b)


def test_cocycle_values():
    assert cocycle(a0, a1) == 1
    assert cocycle(Weight(), Weight(2, -1)) == 1
    assert cocycle(a0, a0) == 1
    assert all(TRIVIAL_COCYCLE.commutator_ok(a, b) for a, b in itertools.product(grid(3), repeat=2))


def test_cocycle_identity():
    g = grid(3)
    for a, b, c in itertools.product(g, repeat=3):
        assert cocycle(a, b) * cocycle(a + b, c) == cocycle(b, c) * cocycle(a, b + c)


def test_group_multiplication():
    assert group_mult(a0, a1) == (1, a0 + a1)
    assert group_mult(Weight(), Weight(4, 1)) == (1, Weight(4, 1))
    s1, ab = group_mult(a0, a1)
    s2, abc = group_mult(ab, a0)
    t1, bc = group_mult(a1, a0)
    t2, abc2 = group_mult(a0, bc)
    assert abc == abc2 and s1 * s2 == t1 * t2


def test_parse_weight():
    assert parse_weight("(1,-2)") == Weight(1, -2)
    assert parse_weight(Weight(3, 0).render()) == Weight(3, 0)
