import itertools

import pytest

from qtoroidal.fock import (
    FockBasisVector, FockState, apply_h, colored_partitions, enumerate_basis, grade,
    heisenberg_constant, parse_basis_vector, parse_state,
)
from qtoroidal.lattice import Weight
from qtoroidal.scalars import Q, ZERO, qint


def test_h_examples():
    v = parse_state("h[0,-1] e(0,0)")
    assert apply_h(0, 1, v) == (Q + Q ** -1) * FockState.vacuum()
    assert apply_h(1, 1, v) == -(Q + Q ** -1) * FockState.vacuum()
    assert apply_h(0, 2, parse_state("h[0,-1]^2 e(1,0)")).is_zero()


def test_zero_mode_reads_the_lattice():
    v = parse_state("h[1,-2] e(2,-1)")
    assert apply_h(0, 0, v) == 6 * v
    assert apply_h(1, 0, v) == -6 * v


def test_enumeration_examples():
    assert enumerate_basis(0, 0) == [FockBasisVector((), Weight())]
    assert len(colored_partitions(2)) == 5
    assert len(enumerate_basis(1, 1)) == 27


def _brute_partitions(n):
    """All multisets of (color, depth) parts with total depth n."""
    parts = [(c, d) for c in (0, 1) for d in range(1, n + 1)]
    found = set()
    for k in range(n + 1):
        for combo in itertools.combinations_with_replacement(parts, k):
            if sum(d for _, d in combo) == n:
                found.add(tuple(sorted(combo)))
    return found


@pytest.mark.parametrize("n", range(5))
def test_partitions_against_brute_force(n):
    got = colored_partitions(n)
    assert len(got) == len(set(got))
    assert set(map(tuple, got)) == _brute_partitions(n)


def test_enumeration_is_complete_and_distinct():
    basis = enumerate_basis(3, 2)
    assert len(basis) == len(set(basis))
    assert len(basis) == 25 * sum(len(_brute_partitions(n)) for n in range(4))
    assert all(b.degree <= 3 and abs(b.beta.m0) <= 2 and abs(b.beta.m1) <= 2 for b in basis)


def test_grade():
    assert grade(FockBasisVector()) == (0, Weight())
    assert grade(parse_basis_vector("h[0,-3] h[1,-1] e(0,1)")) == (4, Weight(0, 1))
    v = parse_state("h[1,-1] e(1,1)")
    for b, _ in apply_h(0, -2, v).items():
        assert grade(b) == (3, Weight(1, 1))


def test_heisenberg_constant():
    assert heisenberg_constant(0, 0, 1) == qint(2) * qint(1)
    assert heisenberg_constant(0, 1, 2) == qint(-4) * qint(2) / 2


def test_heisenberg_relation_as_operators():
    basis = enumerate_basis(3, 0)
    for m, n, i, j in itertools.product(range(1, 5), range(1, 5), (0, 1), (0, 1)):
        for b in basis:
            v = FockState.basis(b)
            lhs = apply_h(i, m, apply_h(j, -n, v)) - apply_h(j, -n, apply_h(i, m, v))
            rhs = heisenberg_constant(i, j, m) * v if m == n else FockState()
            assert lhs == rhs


def test_same_sign_modes_commute():
    basis = enumerate_basis(3, 0)
    for m, n, i, j in itertools.product((1, 2, 3), (1, 2, 3), (0, 1), (0, 1)):
        for sgn in (1, -1):
            for b in basis:
                v = FockState.basis(b)
                assert apply_h(i, sgn * m, apply_h(j, sgn * n, v)) == apply_h(j, sgn * n, apply_h(i, sgn * m, v))


def test_mode_shifts_degree_and_keeps_weight():
    for b in enumerate_basis(2, 1):
        for m in (-2, -1, 1, 2):
            for c, _ in apply_h(1, m, FockState.basis(b)).items():
                assert c.degree == b.degree - m and c.beta == b.beta


def test_state_parse_round_trip():
    s = parse_state("(q + q^-1) h[0,-1] e(0,0) - h[1,-2] e(1,-1)")
    assert parse_state(s.render()) == s
    assert (s - s).is_zero() and s.coefficient(FockBasisVector()) == ZERO
