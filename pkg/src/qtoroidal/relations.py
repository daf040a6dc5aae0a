"""The defining relations as exact coefficient identities, evaluated on kernel states.

Every relation is brought to the form ``sum_terms c * Prod[t - shift] = 0`` where
``Prod`` is an ordered product of currents and ``t`` runs over a box of
exponent tuples.  Structure-function series are expanded in the direction in
which the sum is finite on each state, so every coefficient is an exact finite
combination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from qtoroidal import _kernel as K
from qtoroidal.lattice import CARTAN
from qtoroidal.polyalg import MultiPoly, expand_rational
from qtoroidal.scalars import ONE, ZERO, Scalar, qbinom, qpow, vpow

__all__ = [
    "Rep",
    "fock_rep",
    "Instance",
    "Shape",
    "RELATIONS",
    "instances",
    "gkv_instances",
    "g_series",
    "evaluate_instance",
]

RELATIONS = ("Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8", "Q9")


@dataclass(frozen=True)
class Rep:
    """Currents of a module, as kernel composites, and the central value."""

    x: dict                # (sign, color) -> Composite
    phi: dict              # (sign, color) -> Composite
    central: int
    legs: int = 1
    n_u: int = 0           # number of coproduct parameters tracked in state keys

    def X(self, sign: int, i: int, vshift: int = 0) -> K.Composite:
        c = self.x[(sign, i)]
        return c.rescaled(vshift) if vshift else c

    def PHI(self, sign: int, i: int, vshift: int = 0) -> K.Composite:
        c = self.phi[(sign, i)]
        return c.rescaled(vshift) if vshift else c


def fock_rep(mode_shift: int) -> Rep:
    """The vertex representation on V at central charge 1."""
    x, phi = {}, {}
    for i in (0, 1):
        x[(1, i)] = K.Composite.single(K.FieldSpec(K.XPLUS, i, mode_shift=mode_shift))
        x[(-1, i)] = K.Composite.single(K.FieldSpec(K.XMINUS, i, mode_shift=mode_shift))
        phi[(1, i)] = K.Composite.single(K.FieldSpec(K.PHIPLUS, i))
        phi[(-1, i)] = K.Composite.single(K.FieldSpec(K.PHIMINUS, i))
    return Rep(x, phi, central=1)


Term = tuple[Scalar, tuple[K.Composite, ...], tuple[int, ...]]


@dataclass
class Instance:
    """One relation with fixed signs and colors.

    ``terms(t)`` lists ``(coefficient, factors, exponents in factor order)``
    whose sum is the coefficient ``t`` of ``LHS - RHS``.
    """

    item: str
    label: str
    variables: tuple[str, ...]
    terms: Callable[[tuple[int, ...]], list[Term]]
    # x-only relations also keep a t-independent form: one current per
    # variable, and (coefficient, factor order, shift) per term
    shape: "Shape | None" = None


@dataclass(frozen=True)
class Shape:
    sign: int
    colors: tuple[int, ...]
    fields: tuple[K.Composite, ...]
    terms: tuple[tuple[Scalar, tuple[int, ...], tuple[int, ...]], ...]

    def at(self, t: tuple[int, ...]) -> list[Term]:
        out = []
        for c, perm, shift in self.terms:
            out.append((c, tuple(self.fields[p] for p in perm), tuple(t[p] - shift[p] for p in perm)))
        return out


def _shaped(item: str, label: str, variables, sign: int, colors, fields, parts) -> Instance:
    """``parts`` lists ``(poly, coefficient, perm)``; each monomial of poly is a term."""
    terms = []
    for poly, c, perm in parts:
        for shift, coeff in poly.items():
            terms.append((coeff * c, tuple(perm), tuple(shift)))
    shape = Shape(sign, tuple(colors), tuple(fields), tuple(terms))
    return Instance(item, label, tuple(variables), shape.at, shape)


# structure functions -----------------------------------------------------
@lru_cache(maxsize=None)
def g_series(a: int, power: int, order: int) -> tuple[Scalar, ...]:
    """Taylor coefficients of ``g(x)^power`` with ``g(x) = (q^a - x)/(1 - q^a x)``."""
    x = MultiPoly.var("x")
    num = MultiPoly.const(qpow(a)) - x
    den = MultiPoly.const(1) - x * qpow(a)
    if power < 0:
        num, den = den, num
    num, den = num ** abs(power), den ** abs(power)
    return expand_rational(num, den, order, "x").coeffs


def _prefactor(poly: dict[tuple[int, ...], Scalar], c: Scalar, factors, perm: Sequence[int], t: tuple[int, ...]) -> list[Term]:
    """Terms of ``poly(vars) * c * Prod`` at ``t``; ``perm[k]`` is the variable of factor k."""
    out = []
    for shift, coeff in poly.items():
        src = tuple(a - s for a, s in zip(t, shift))
        out.append((coeff * c, factors, tuple(src[p] for p in perm)))
    return out


def _lin(n: int, *pairs: tuple[int, Scalar]) -> dict[tuple[int, ...], Scalar]:
    """The linear form ``sum coeff * var_idx`` in n variables."""
    out: dict[tuple[int, ...], Scalar] = {}
    for idx, coeff in pairs:
        key = tuple(1 if k == idx else 0 for k in range(n))
        out[key] = out.get(key, ZERO) + coeff
    return out


def _mul(p: dict, r: dict) -> dict:
    out: dict = {}
    for a, ca in p.items():
        for b, cb in r.items():
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out.get(k, ZERO) + ca * cb
    return {k: v for k, v in out.items() if not v.is_zero()}


# the catalog -------------------------------------------------------------
def instances(item: str, rep: Rep) -> list[Instance]:
    """All sign/color variants of one relation on the given module."""
    c = rep.central
    out: list[Instance] = []
    signs = (1, -1)
    sgn = {1: "+", -1: "-"}
    if item == "Q1":
        for s in signs:
            for i in (0, 1):
                for j in (0, 1):
                    A, B = rep.PHI(s, i), rep.PHI(s, j)
                    def terms(t, A=A, B=B):
                        a, b = t
                        return [(ONE, (A, B), (a, b)), (-ONE, (B, A), (b, a))]
                    out.append(Instance(item, f"phi{i}{sgn[s]} phi{j}{sgn[s]}", ("z", "w"), terms))
    elif item == "Q2":
        for i in (0, 1):
            for j in (0, 1):
                A, B = rep.PHI(1, i), rep.PHI(-1, j)
                aij = CARTAN[i][j]
                def terms(t, A=A, B=B, aij=aij):
                    a, b = t
                    kmax = max(0, min(-a, b))
                    g1 = g_series(aij, -1, kmax)
                    g2 = g_series(aij, 1, kmax)
                    res = [(ONE, (A, B), (a, b))]
                    for k in range(kmax + 1):
                        # coefficient of x^k in g(q^c x)^-1 g(q^-c x), x = w/z
                        ck = ZERO
                        for m in range(k + 1):
                            ck = ck + g1[m] * qpow(c * m) * g2[k - m] * qpow(-c * (k - m))
                        if not ck.is_zero():
                            res.append((-ck, (B, A), (b - k, a + k)))
                    return res
                out.append(Instance(item, f"phi{i}+ phi{j}-", ("z", "w"), terms))
    elif item in ("Q3", "Q4"):
        for s in signs:
            for i in (0, 1):
                for j in (0, 1):
                    P = rep.PHI(1 if item == "Q3" else -1, i)
                    Xj = rep.X(s, j)
                    if item == "Q3":
                        aij, power = CARTAN[i][j], s
                    else:
                        aij, power = CARTAN[j][i], -s
                    # argument q^{-s c/2} (x/z or z/w): v^{-s c}
                    def terms(t, P=P, Xj=Xj, aij=aij, power=power, s=s, q3=(item == "Q3")):
                        a, b = t
                        kmax = max(0, -a) if q3 else max(0, a)
                        ser = g_series(aij, power, kmax)
                        res = [(ONE, (P, Xj), (a, b))]
                        for k in range(kmax + 1):
                            ck = ser[k] * vpow(-s * c * k)
                            if ck.is_zero():
                                continue
                            if q3:
                                res.append((-ck, (Xj, P), (b - k, a + k)))
                            else:
                                res.append((-ck, (Xj, P), (b + k, a - k)))
                        return res
                    name = "phi" + str(i) + ("+" if item == "Q3" else "-")
                    out.append(Instance(item, f"{name} x{j}{sgn[s]}", ("z", "w"), terms))
    elif item == "Q5":
        for i in (0, 1):
            for j in (0, 1):
                Xp, Xm = rep.X(1, i), rep.X(-1, j)
                Pp, Pm = rep.PHI(1, i, -c), rep.PHI(-1, i, c)
                qq = qpow(1) - qpow(-1)
                def terms(t, Xp=Xp, Xm=Xm, Pp=Pp, Pm=Pm, diag=(i == j)):
                    a, b = t
                    res = [(qq, (Xp, Xm), (a, b)), (-qq, (Xm, Xp), (b, a))]
                    if diag:
                        res.append((-qpow(c * b), (Pp,), (a + b,)))
                        res.append((qpow(-c * b), (Pm,), (a + b,)))
                    return res
                out.append(Instance(item, f"x{i}+ x{j}-", ("z", "w"), terms))
    elif item == "Q6":
        for s in signs:
            for i in (0, 1):
                X = rep.X(s, i)
                k2 = qpow(2 * s)
                left = _lin(2, (0, ONE), (1, -k2))       # z - q^{2s} w
                right = _lin(2, (0, k2), (1, -ONE))      # q^{2s} z - w
                out.append(_shaped(item, f"x{i}{sgn[s]} x{i}{sgn[s]}", ("z", "w"), s, (i, i), (X, X),
                                   [(left, ONE, (0, 1)), (right, -ONE, (1, 0))]))
    elif item == "Q7":
        for s in signs:
            for i, j in ((0, 1), (1, 0)):
                Xi, Xj = rep.X(s, i), rep.X(s, j)
                k2 = qpow(-2 * s)
                zw = _lin(2, (0, ONE), (1, -ONE))
                left = _mul(_lin(2, (0, ONE), (1, -k2)), zw)
                right = _mul(_lin(2, (0, k2), (1, -ONE)), zw)
                out.append(_shaped(item, f"x{i}{sgn[s]} x{j}{sgn[s]}", ("z", "w"), s, (i, j), (Xi, Xj),
                                   [(left, ONE, (0, 1)), (right, -ONE, (1, 0))]))
    elif item == "Q8":
        for s in signs:
            for i, j in ((0, 1), (1, 0)):
                Xi, Xj = rep.X(s, i), rep.X(s, j)
                k2 = qpow(-2 * s)
                # variables (z1, z2, w)
                left = _lin(3, (1, ONE), (2, -k2))       # z2 - q^{-2s} w
                right = _lin(3, (1, k2), (2, -ONE))      # q^{-2s} z2 - w
                out.append(_shaped(item, f"x{i}{sgn[s]} x{j}{sgn[s]}", ("z1", "z2", "w"), s, (i, i, j),
                                   (Xi, Xi, Xj),
                                   [(left, ONE, (0, 1, 2)), (right, -ONE, (0, 2, 1)),
                                    (left, -ONE, (1, 2, 0)), (right, ONE, (2, 1, 0))]))
    elif item == "Q9":
        coeffs = [(-1) ** r * qbinom(3, r) for r in range(4)]
        zero = {(0, 0, 0, 0): ONE}
        for s in signs:
            for i, j in ((0, 1), (1, 0)):
                Xi, Xj = rep.X(s, i), rep.X(s, j)
                parts = []
                for sig in itertools.permutations(range(3)):
                    for r in range(4):
                        parts.append((zero, coeffs[r], tuple(sig[:r]) + (3,) + tuple(sig[r:])))
                out.append(_shaped(item, f"x{i}{sgn[s]}^3 x{j}{sgn[s]}", ("z1", "z2", "z3", "w"), s,
                                   (i, i, i, j), (Xi, Xi, Xi, Xj), parts))
    else:
        raise ValueError(f"unknown relation {item!r}")
    return out


def gkv_instances(rep: Rep) -> list[Instance]:
    """The stronger mixed-color exchange relation, expected to fail on V."""
    out = []
    sgn = {1: "+", -1: "-"}
    for s in (1, -1):
        for i, j in ((0, 1), (1, 0)):
            Xi, Xj = rep.X(s, i), rep.X(s, j)
            k2 = qpow(-2 * s)
            left = _lin(2, (0, ONE), (1, -k2))
            right = _lin(2, (0, k2), (1, -ONE))
            out.append(_shaped("GKV", f"x{i}{sgn[s]} x{j}{sgn[s]}", ("z", "w"), s, (i, j), (Xi, Xj),
                               [(left, ONE, (0, 1)), (right, -ONE, (1, 0))]))
    return out


# evaluation ----------------------------------------------------------------
@dataclass
class Outcome:
    coefficients: int = 0
    failure: tuple | None = None   # (exponent tuple, difference KState)


def _in_u_window(uexps: tuple[int, ...], u_bound: int | None) -> bool:
    return u_bound is None or all(abs(e) <= u_bound for e in uexps)


def evaluate_instance(engine: K.Engine, inst: Instance, state: K.KState, box: Sequence[range],
                      u_bound: int | None = None, cache: K.ProductCache | None = None,
                      stop_at_first: bool = True, u_dims: int = 0) -> Outcome:
    """Check every coefficient in ``box`` of one relation on one state."""
    ring = engine.ring
    cache = cache or K.ProductCache(engine, state)
    plan = []
    needs: dict[tuple, set] = {}
    for t in itertools.product(*box):
        terms = inst.terms(t)
        plan.append((t, terms))
        for _c, f, e in terms:
            needs.setdefault(f, set()).add(e)
    values = cache.fill(needs)
    scal_cache: dict[Scalar, tuple[int, object]] = {}
    out = Outcome()
    for t, terms in plan:
        # sum terms sharing a coefficient before scaling
        grouped: dict[Scalar, K.KState] = {}
        for c, f, e in terms:
            val = values.get((f, e))
            if val is None:
                continue
            g = grouped.get(c)
            if g is None:
                grouped[c] = val.copy()
            else:
                g.iadd(val)
        acc = K.KState(ring)
        for c, g in grouped.items():
            sc = scal_cache.get(c)
            if sc is None:
                sc = scal_cache[c] = ring.laurent(c.laurent_terms())
            acc.iadd(g, sc)
        if u_bound is not None:
            acc.entries = {k: v for k, v in acc.entries.items() if _in_u_window(k[2], u_bound)}
        out.coefficients += (2 * u_bound + 1) ** u_dims if u_bound is not None else 1
        if not acc.is_zero() and out.failure is None:
            out.failure = (t, acc)
            if stop_at_first:
                break
    return out
