import pytest

from _oracles import phi_coefficient, x_coefficient
from qtoroidal.coproduct import (
    GENERATORS, counit_leg, delta_field, generator_field, identity_u, split_leg, specialize_u,
    tensor_product_coefficient, tensor_rep, tensor_state,
)
from qtoroidal.fock import FockBasisVector, FockState, parse_basis_vector
from qtoroidal.scalars import Q, V

vac = FockBasisVector()


def test_central_charge_of_the_square():
    assert tensor_rep(1).central == 2


def test_phi_constant_term_on_a_pair():
    a = parse_basis_vector("e(1,0)")
    got = tensor_product_coefficient([delta_field("phi0+")], [0], [a, vac])
    assert got == tensor_state({(): {(a, vac): Q ** 2}})


def test_left_term_reproduces_the_module_field():
    got = specialize_u(tensor_product_coefficient([delta_field("x0+")], [1], [vac, vac]))
    # x(z) = z X(z), so z^1 here is the z^0 coefficient of X
    assert got[(parse_basis_vector("e(1,0)"), vac)] == 1
    assert got[(vac, parse_basis_vector("e(1,0)"))] == Q


def _leg_x(sign, i, k, b):
    return x_coefficient(i, sign, k - 1, FockState.basis(b))


def _delta_x_plus_oracle(i, k, a, b, reach=12):
    """x(z) (x) 1 + phi^-(z q^{1/2}) (x) x(z q u^-1), expanded leg by leg."""
    raw = {}

    def put(left, right, ue, scal):
        for la, ca in left.items():
            for rb, cb in right.items():
                slot = raw.setdefault((ue,), {})
                slot[la, rb] = slot.get((la, rb), 0 * Q) + scal * ca * cb

    put(_leg_x(1, i, k, a), FockState.basis(b), 0, Q ** 0)
    for j in range(reach):
        left = phi_coefficient(i, -1, j, FockState.basis(a))
        if left.is_zero():
            continue
        m = k - j
        put(left, _leg_x(1, i, m, b), -m, V ** j * Q ** m)
    return tensor_state(raw)


@pytest.mark.parametrize("i", [0, 1])
def test_x_plus_coproduct_against_leg_oracle(i):
    vecs = [vac, parse_basis_vector("h[0,-1] e(1,-1)"), parse_basis_vector("h[1,-1] e(-1,0)")]
    for a in vecs:
        for b in vecs:
            for k in range(-2, 3):
                got = tensor_product_coefficient([delta_field(f"x{i}+")], [k], [a, b])
                assert got == _delta_x_plus_oracle(i, k, a, b)


@pytest.mark.parametrize("g", GENERATORS)
def test_counit_on_either_leg(g):
    d = delta_field(g)
    assert counit_leg(d, 0) == identity_u(g)
    assert counit_leg(d, 1) == generator_field(g)


@pytest.mark.parametrize("g", GENERATORS)
def test_coassociativity_symbolic(g):
    lhs = split_leg(delta_field(g, (1, 0)), 1, (0, 1))
    rhs = split_leg(delta_field(g, (1, 1)), 0, (1, 0))
    assert lhs == rhs


def test_coassociativity_detects_a_wrong_parameter():
    lhs = split_leg(delta_field("x0+", (1, 0)), 1, (0, 1))
    wrong = split_leg(delta_field("x0+", (1, 0)), 0, (1, 0))
    assert lhs != wrong


def test_coassociativity_on_a_vacuum_triple():
    lhs = split_leg(delta_field("x0+", (1, 0)), 1, (0, 1))
    rhs = split_leg(delta_field("x0+", (1, 1)), 0, (1, 0))
    for k in range(-1, 3):
        assert tensor_product_coefficient([lhs], [k], [vac] * 3) == \
            tensor_product_coefficient([rhs], [k], [vac] * 3)


def test_specialize_sums_u_powers():
    a = parse_basis_vector("e(1,0)")
    s = tensor_state({(2,): {(a, vac): Q}, (-1,): {(a, vac): Q ** 2}})
    assert specialize_u(s) == {(a, vac): Q + Q ** 2}


def test_argument_checks():
    with pytest.raises(ValueError):
        tensor_product_coefficient([delta_field("x0+")], [0, 1], [vac, vac])
    with pytest.raises(ValueError):
        tensor_product_coefficient([delta_field("x0+")], [0], [vac])
