"""Slow reference implementations, written independently of the kernel.

Currents are expanded straight from their exponential form using ``apply_h``
and explicit lattice shifts; nothing here touches ``qtoroidal._kernel``.
"""

from __future__ import annotations

from fractions import Fraction

from qtoroidal.fock import FockBasisVector, FockState, apply_h
from qtoroidal.lattice import ALPHA, Weight, pairing
from qtoroidal.scalars import ONE, V, Q, Scalar, qint


def _exp_coefficients(i: int, creation: bool, coeff, order: int, s: FockState) -> list[FockState]:
    """``[E_0 s, ..., E_order s]`` for ``exp(sum_m coeff(m) h_{i,-+m} z^{+-m})``.

    Uses ``p E_p = sum_m m c_m h E_{p-m}``, valid because the modes commute.
    """
    sign = -1 if creation else 1
    out = [s]
    for p in range(1, order + 1):
        acc = FockState()
        for m in range(1, p + 1):
            term = apply_h(i, sign * m, out[p - m])
            acc = acc + (coeff(m) * m) * term
        out.append(Scalar.from_int(Fraction(1, p)) * acc)
    return out


def _shift_lattice(s: FockState, beta: Weight) -> FockState:
    return FockState({FockBasisVector(b.partition, b.beta + beta): c for b, c in s.items()})


def x_coefficient(i: int, sign: int, k: int, s: FockState) -> FockState:
    """Coefficient of ``z^k`` in ``X_i^sign(z) s``, from the product of exponentials."""
    half = V ** (-sign)                      # q^{-+1/2}, the scaling of both exponentials
    out = FockState()
    for b, c in s.items():
        lat = sign * pairing(b.beta, ALPHA[i])
        vec = FockState.basis(b, c)
        # E^+ first: annihilation, powers z^{-n} for n up to the degree
        ann = _exp_coefficients(i, False, lambda m: -sign * half ** m / qint(m), b.degree, vec)
        for n, a in enumerate(ann):
            p = k - lat + n
            if p < 0 or a.is_zero():
                continue
            cre = _exp_coefficients(i, True, lambda m: sign * half ** m / qint(m), p, a)
            out = out + cre[p]
    return _shift_lattice(out, ALPHA[i] if sign > 0 else -ALPHA[i])


def phi_coefficient(i: int, sign: int, k: int, s: FockState) -> FockState:
    """Coefficient of ``z^k`` in ``phi_i^sign(z) s`` with central charge 1."""
    out = FockState()
    if sign * k > 0:
        return out
    n = -sign * k
    for b, c in s.items():
        lead = Q ** (sign * pairing(b.beta, ALPHA[i]))
        vec = FockState.basis(b, c)
        if sign > 0:
            terms = _exp_coefficients(i, False, lambda m: (Q - Q ** -1), n, vec)
        else:
            terms = _exp_coefficients(i, True, lambda m: -(Q - Q ** -1), n, vec)
        out = out + lead * terms[n]
    return out
