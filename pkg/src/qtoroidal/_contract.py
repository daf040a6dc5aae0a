"""State-independent vanishing test for relations among x-currents on V.

Contracting an ordered product of vertex operators gives

    X(z_1) ... X(z_r) = prod_{a<b} L_ab(z) * :X(z_1) ... X(z_r):

with ``L_ab = z_a^{a_ij} * sum_j c_j (z_b/z_a)^j``.  Collecting all terms of a
relation, the coefficient at ``t`` applied to ``f`` of weight beta is

    sum_{k, n >= 0} W(t'' - n) * prod_a cre_a(n_a) * S_k f,    t'' = t - sigma - lambda + k

where ``W`` is a scalar table, ``cre_a`` are creation coefficients and ``S_k``
joint annihilation slices.  Creation coefficients of one color commute, so the
relation holds on every state of the window as soon as each orbit sum
``Z(t'', nbar) = sum_{n in orbit(nbar)} W(t'' - n)`` vanishes.  On the vacuum
the condition is also necessary.

Scalars are evaluated at ``v = 2^bits`` with ``bits`` above a proven bound on
the integer coefficients that can meet in one orbit sum, so a zero test on the
evaluated value is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from flint import fmpq, fmpq_mpoly_ctx

from qtoroidal import _kernel as K
from qtoroidal.lattice import ALPHA, CARTAN, CocycleTable, Weight, pairing
from qtoroidal.scalars import Scalar

__all__ = ["ContractionCheck", "Verdict", "supports"]


@lru_cache(maxsize=None)
def _locality(sign: int, i: int, j: int, order: int) -> tuple[Scalar, ...]:
    from qtoroidal.fields import locality_factor
    return tuple(locality_factor(sign, i, j, order))


def _integral_terms(c: Scalar) -> dict[int, int]:
    out = {}
    for e, x in c.laurent_terms().items():
        if x.denominator != 1:
            raise ValueError("non-integral scalar in a contraction kernel")
        out[e] = int(x)
    return out


def _l1(c: Scalar) -> int:
    return sum(abs(x) for x in _integral_terms(c).values())


def supports(shape, cocycle: CocycleTable) -> bool:
    """Whether the test applies: bare vertex currents, one leg, trivial cocycle."""
    if shape is None or not cocycle.is_trivial():
        return False
    shifts = set()
    for comp in shape.fields:
        if len(comp.terms) != 1 or len(comp.terms[0]) != 1:
            return False
        spec = comp.terms[0][0]
        if spec.kind not in (K.XPLUS, K.XMINUS) or spec.vshift or spec.uexp or spec.leg:
            return False
        shifts.add(spec.mode_shift)
    return len(shifts) == 1


@dataclass
class Verdict:
    ok: bool
    points: int                      # t'' values examined
    failure: tuple | None = None     # (t'', nbar) with a nonzero orbit sum


class ContractionCheck:
    """The table ``W`` of one relation and the orbit-sum test on a window."""

    def __init__(self, shape, mode_shift: int):
        self.shape = shape
        self.sign = shape.sign
        self.colors = shape.colors
        self.r = len(self.colors)
        self.sigma = mode_shift
        a0 = sum(CARTAN[self.colors[a]][self.colors[b]] for a in range(self.r) for b in range(a + 1, self.r))
        totals = {sum(shift) for _c, _p, shift in shape.terms}
        if len(totals) != 1:
            raise ValueError("relation is not homogeneous")
        self.total = a0 + totals.pop()
        self.groups = [tuple(a for a in range(self.r) if self.colors[a] == col) for col in (0, 1)]
        self.groups = [g for g in self.groups if g]
        self._ctx = fmpq_mpoly_ctx.get([f"x{k}" for k in range(1, self.r)], "lex") if self.r > 1 else None

    # -- window geometry ---------------------------------------------------
    def lam(self, beta: Weight) -> tuple[int, ...]:
        return tuple(self.sign * pairing(beta, ALPHA[c]) for c in self.colors)

    def upper(self, beta: Weight, bound: int, deg: int) -> tuple[int, ...]:
        return tuple(bound - self.sigma - l + deg for l in self.lam(beta))

    def points(self, beta: Weight, bound: int, deg: int):
        """Every t'' = t - sigma - lambda + k with |t_a| <= bound, k >= 0, |k| <= deg."""
        base = tuple(-self.sigma - l for l in self.lam(beta))
        rng = range(-bound, bound + deg + 1)
        for p in itertools.product(rng, repeat=self.r):
            if sum(max(0, x - bound) for x in p) <= deg:
                yield tuple(x + b for x, b in zip(p, base))

    # -- the table ---------------------------------------------------------
    def _bits(self, J: int) -> int:
        worst = 0
        for c, _perm, _shift in self.shape.terms:
            worst += _l1(c)
        pair = 1
        for a in range(self.r):
            for b in range(a + 1, self.r):
                best = 0
                for i, j in ((self.colors[a], self.colors[b]), (self.colors[b], self.colors[a])):
                    best = max(best, sum(_l1(x) for x in _locality(self.sign, i, j, J)))
                pair *= best
        orbit = 1
        for g in self.groups:
            orbit *= len(list(itertools.permutations(g)))
        return (orbit * worst * pair).bit_length() + 2

    def table(self, upper: tuple[int, ...]) -> dict[tuple[int, ...], fmpq]:
        """Nonzero ``W(e)`` at ``v = 2^bits`` for all ``e <= upper`` with the fixed total."""
        plans = []
        J = 0
        for c, perm, shift in self.shape.terms:
            pref = [0] * self.r
            for x in range(self.r):
                for y in range(x + 1, self.r):
                    pref[perm[x]] += CARTAN[self.colors[perm[x]]][self.colors[perm[y]]]
            up = [upper[a] - shift[a] - pref[a] for a in range(self.r)]
            M = [None] + [sum(up[perm[k]] for k in range(j, self.r)) for j in range(1, self.r)]
            if any(m < 0 for m in M[1:]):
                continue
            plans.append((c, perm, shift, pref, M))
            J = max([J] + M[1:])
        if not plans:
            return {}
        self.bits = bits = self._bits(J)

        def kron(sc: Scalar) -> fmpq:
            tot = fmpq(0)
            for e, x in _integral_terms(sc).items():
                tot += x * (fmpq(2) ** (bits * e) if e >= 0 else fmpq(1, 2 ** (-bits * e)))
            return tot

        ser: dict = {}
        out: dict[tuple[int, ...], fmpq] = {}
        ctx = self._ctx
        for c, perm, shift, pref, M in plans:
            cval = kron(c)
            if ctx is None:
                key = tuple(shift[a] + pref[a] for a in range(self.r))
                out[key] = out.get(key, fmpq(0)) + cval
                continue
            gens = ctx.gens()
            P = ctx.from_dict({(0,) * (self.r - 1): 1})
            for x in range(self.r):
                for y in range(x + 1, self.r):
                    ci, cj = self.colors[perm[x]], self.colors[perm[y]]
                    jmax = min(M[k] for k in range(x + 1, y + 1))
                    key = (ci, cj, jmax)
                    if key not in ser:
                        ser[key] = [kron(s) for s in _locality(self.sign, ci, cj, jmax)]
                    d = {}
                    for j, val in enumerate(ser[key]):
                        if val != 0:
                            d[tuple(j if x <= m < y else 0 for m in range(self.r - 1))] = val
                    P = P * ctx.from_dict(d)
                    for m in range(x, y):
                        P = P % gens[m] ** (M[m + 1] + 1)
            for mon, val in zip(P.monoms(), P.coeffs()):
                m = [0] + [int(e) for e in mon] + [0]
                key = [0] * self.r
                for k in range(self.r):
                    a = perm[k]
                    key[a] = m[k] - m[k + 1] + pref[a] + shift[a]
                key = tuple(key)
                out[key] = out.get(key, fmpq(0)) + val * cval
        return {e: w for e, w in out.items() if w != 0 and all(x <= u for x, u in zip(e, upper))}

    # -- the test ----------------------------------------------------------
    def scan(self, beta: Weight, bound: int, deg: int):
        """Yield ``(t'', nbar)`` for every point carrying a nonzero orbit sum."""
        W = self.table(self.upper(beta, bound, deg))
        if not W:
            return
        keys = sorted(W)
        E = np.array(keys, dtype=np.int64)
        shift = max(int(W[k].q).bit_length() for k in keys)
        vals = np.empty(len(keys), dtype=object)
        for idx, k in enumerate(keys):
            w = W[k]
            vals[idx] = int(w.p) << (shift - int(w.q).bit_length())
        for t in self.points(beta, bound, deg):
            if sum(t) < self.total:
                continue
            tv = np.array(t, dtype=np.int64)
            mask = (E <= tv).all(axis=1)
            if not mask.any():
                continue
            N = tv - E[mask]
            for g in self.groups:
                if len(g) > 1:
                    N[:, g] = np.sort(N[:, g], axis=1)
            uniq, inv = np.unique(N, axis=0, return_inverse=True)
            sums = np.zeros(len(uniq), dtype=object)
            np.add.at(sums, inv.reshape(-1), vals[mask])
            bad = np.nonzero(sums != 0)[0]
            if len(bad):
                yield t, tuple(int(x) for x in uniq[bad[0]])

    def check(self, beta: Weight, bound: int, deg: int) -> Verdict:
        npts = sum(1 for _ in self.points(beta, bound, deg))
        for hit in self.scan(beta, bound, deg):
            return Verdict(False, npts, hit)
        return Verdict(True, npts)

    def source(self, beta: Weight, tpp: tuple[int, ...]) -> tuple[int, ...]:
        """The relation exponent ``t`` whose vacuum coefficient sits at ``t''``."""
        return tuple(x + self.sigma + l for x, l in zip(tpp, self.lam(beta)))
