"""Polynomial identities behind the Serre-relation arguments.

Two families are built literally from their definitions and compared with
closed forms and decompositions:

* ``P_r`` (r = 1, 2, 3), polynomials in ``z1, z2, z3, w`` produced when a
  phi-current is moved through a Serre word;
* ``T^1_{s,k}`` and ``T^2_{s,k}``, sums over (s, 3-s)-shuffles produced by
  expanding the coproduct of a Serre word.

Where a statement only asserts that some polynomials ``f`` exist, the ``f`` are
recovered by solving a linear system over Q(v) with the stated degree bounds;
the decomposition is then re-expanded and compared exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from qtoroidal.polyalg import Monomial, MultiPoly
from qtoroidal.scalars import ONE, ZERO, Scalar, qbinom, qint, qpow

__all__ = [
    "ShuffleSet",
    "PartitionScheme",
    "build_P",
    "build_T",
    "q_factor",
    "LinearSystem",
    "Unknown",
    "Identity",
    "p_decompositions",
    "t_identities",
    "ERRATA",
    "render_solutions",
]

VARS = ("z1", "z2", "z3", "w")
A_IJ = -2


def _v(name: str) -> MultiPoly:
    return MultiPoly.var(name)


def _c(x) -> MultiPoly:
    return MultiPoly.const(x)


def _lin(a, x: str, b, y: str) -> MultiPoly:
    """``a*x + b*y``."""
    return _c(a) * _v(x) + _c(b) * _v(y)


def permuted(p: MultiPoly, args: Sequence[str]) -> MultiPoly:
    """``p(args)``: the i-th formal variable of ``VARS`` is replaced by ``args[i]``."""
    tmp = p.rename({v: f"#{i}" for i, v in enumerate(VARS)})
    return tmp.rename({f"#{i}": a for i, a in enumerate(args)})


# shuffles ---------------------------------------------------------------------
@dataclass(frozen=True)
class ShuffleSet:
    """The (s, 3-s)-shuffles of S_3, each as ``(sigma(1), sigma(2), sigma(3))``."""

    s: int

    def __post_init__(self):
        if not 0 <= self.s <= 3:
            raise ValueError("s must lie in 0..3")

    @property
    def elements(self) -> tuple[tuple[int, int, int], ...]:
        out = []
        for perm in itertools.permutations((1, 2, 3)):
            sig = dict(zip((1, 2, 3), perm))
            if all(sig[a] < sig[b] for a in (1, 2, 3) for b in (1, 2, 3)
                   if a < b and (b <= self.s or self.s < a)):
                out.append(perm)
        return tuple(out)

    def __len__(self) -> int:
        return len(self.elements)


def _sigma(perm: Sequence[int], a: int) -> int:
    # identity outside 1..3
    return perm[a - 1] if 1 <= a <= 3 else a


@dataclass(frozen=True)
class PartitionScheme:
    """The two families of index blocks of {0,1,2,3} attached to a shuffle."""

    s: int
    sigma: tuple[int, int, int]

    def family1(self) -> list[tuple[int, ...]]:
        s, sg = self.s, self.sigma
        if s == 3:
            return [tuple(range(0, _sigma(sg, 4)))]
        blocks = [tuple(range(0, _sigma(sg, s + 1)))]
        for k in range(1, 3 - s):
            blocks.append(tuple(range(_sigma(sg, s + k), _sigma(sg, s + k + 1))))
        blocks.append(tuple(range(_sigma(sg, 3), 4)))
        return blocks

    def family2(self) -> list[tuple[int, ...]]:
        s, sg = self.s, self.sigma
        blocks = []
        if s > 0:
            blocks.append(tuple(range(0, _sigma(sg, 1))))
        for k in range(1, s):
            blocks.append(tuple(range(_sigma(sg, k), _sigma(sg, k + 1))))
        blocks.append(tuple(range(_sigma(sg, s), 4)))
        return blocks

    def block(self, family: int, k: int) -> tuple[int, ...]:
        blocks = self.family1() if family == 1 else self.family2()
        if not 0 <= k < len(blocks):
            raise ValueError(f"k={k} out of range for family {family} at s={self.s}")
        return blocks[k]


# P_r ------------------------------------------------------------------------
def build_P(r: int, base: int = 1) -> MultiPoly:
    """``P_r(z1, z2, z3, w)`` with ``q`` replaced by ``q^base``."""
    if r not in (1, 2, 3):
        raise ValueError("r must be 1, 2 or 3")
    if base not in (1, -1):
        raise ValueError("base must be 1 or -1")
    q2 = qpow(2 * base)
    qa = qpow(A_IJ * base)
    z = {a: _v(f"z{a}") for a in (1, 2, 3)}

    def chain(p: int) -> MultiPoly:
        acc = _c(ONE)
        for a in range(2, p + 1):
            acc = acc * (z[1] - z[a] * q2)
        for a in range(p + 1, 4):
            acc = acc * (z[1] * q2 - z[a])
        return acc

    first = sum((chain(p) for p in range(1, r + 1)), MultiPoly())
    second = sum((chain(p) for p in range(r, 4)), MultiPoly())
    out = first * (z[1] * qa - _v("w")) * (qbinom(3, r, base) * (-1) ** r)
    out = out + second * (z[1] - _v("w") * qa) * (qbinom(3, r - 1, base) * (-1) ** (r - 1))
    return out


def q_factor(base: int = 1) -> MultiPoly:
    """``(q^-4 - q^4 + q^-2 - q^2) z1`` with ``q`` replaced by ``q^base``."""
    return _v("z1") * (qpow(-4 * base) - qpow(4 * base) + qpow(-2 * base) - qpow(2 * base))


# T^a_{s,k} --------------------------------------------------------------------
def build_T(family: int, s: int, k: int) -> MultiPoly:
    """The shuffle sum ``T^family_{s,k}(z1, z2, z3, w)``."""
    if family not in (1, 2):
        raise ValueError("family must be 1 or 2")
    if not 0 <= s <= 3:
        raise ValueError("s must lie in 0..3")
    kmax = 3 - s if family == 1 else s
    if not 0 <= k <= kmax:
        raise ValueError(f"k must lie in 0..{kmax}")
    q2, qm2 = qpow(2), qpow(-2)
    z = {a: f"z{a}" for a in (1, 2, 3)}
    out = MultiPoly()
    for sg in ShuffleSet(s).elements:
        sig = dict(zip((1, 2, 3), sg))
        cross = _c(ONE)
        for a in range(1, s + 1):
            for b in range(s + 1, 4):
                if sig[a] < sig[b]:
                    cross = cross * _lin(q2, z[a], -1, z[b])
                else:
                    cross = cross * _lin(1, z[a], -q2, z[b])
        for r in PartitionScheme(s, sg).block(family, k):
            term = cross * (qbinom(3, r) * (-1) ** r)
            if family == 1:
                for a in range(1, s + 1):
                    term = term * (_lin(qm2, z[a], -1, "w") if sig[a] <= r else _lin(1, z[a], -qm2, "w"))
            else:
                for a in range(s + 1, 4):
                    term = term * (_lin(qm2, "w", -1, z[a]) if sig[a] > r else _lin(1, "w", -qm2, z[a]))
            out = out + term
    return out


# linear solving for unknown polynomials ---------------------------------------
@dataclass(frozen=True)
class Unknown:
    """An unknown homogeneous polynomial in ``arity`` formal arguments.

    ``max_each`` bounds the degree in every argument; ``symmetric`` names a pair
    of argument positions the polynomial must be invariant under.
    """

    name: str
    arity: int
    degree: int
    max_each: int | None = None
    symmetric: tuple[int, int] | None = None

    def basis(self) -> list[tuple[tuple[int, ...], ...]]:
        """Orbits of exponent vectors; one unknown coefficient per orbit."""
        cap = self.degree if self.max_each is None else min(self.degree, self.max_each)
        seen, out = set(), []
        for e in itertools.product(range(cap + 1), repeat=self.arity):
            if sum(e) != self.degree or e in seen:
                continue
            orbit = {e}
            if self.symmetric:
                a, b = self.symmetric
                f = list(e)
                f[a], f[b] = f[b], f[a]
                orbit.add(tuple(f))
            seen |= orbit
            out.append(tuple(sorted(orbit)))
        return out


def _monomial(args: Sequence[str], exps: Sequence[int]) -> MultiPoly:
    return MultiPoly.term(ONE, {a: e for a, e in zip(args, exps) if e})


class LinearSystem:
    """Unknown polynomials entering linearly, solved exactly over Q(v).

    An expression is ``{column: MultiPoly}``, meaning the sum of
    ``coefficient[column] * poly``.
    """

    def __init__(self):
        self.columns: list[tuple[str, int]] = []
        self._unknowns: dict[str, Unknown] = {}
        self._equations: list[tuple[dict[tuple[str, int], MultiPoly], MultiPoly]] = []

    def add_unknown(self, u: Unknown) -> Unknown:
        if u.name in self._unknowns:
            raise ValueError(f"unknown {u.name!r} already registered")
        self._unknowns[u.name] = u
        self.columns.extend((u.name, b) for b in range(len(u.basis())))
        return u

    def at(self, name: str, args: Sequence[str]) -> dict[tuple[str, int], MultiPoly]:
        """The unknown evaluated at actual variables."""
        u = self._unknowns[name]
        if len(args) != u.arity:
            raise ValueError(f"{name} takes {u.arity} arguments")
        return {(name, b): sum((_monomial(args, e) for e in orbit), MultiPoly())
                for b, orbit in enumerate(u.basis())}

    @staticmethod
    def scale(expr, poly: MultiPoly) -> dict:
        return {k: p * poly for k, p in expr.items()}

    @staticmethod
    def combine(*exprs) -> dict:
        out: dict = {}
        for e in exprs:
            for k, p in e.items():
                out[k] = out[k] + p if k in out else p
        return out

    def equate(self, expr, target: MultiPoly) -> None:
        self._equations.append((expr, target))

    def solve(self) -> dict[str, MultiPoly] | None:
        """A particular solution (free coefficients set to 0) as polynomials in
        formal arguments ``a0, a1, ...``, or None when inconsistent."""
        col_index = {c: n for n, c in enumerate(self.columns)}
        rows: list[list[Scalar]] = []
        for expr, target in self._equations:
            monos = {m for p in expr.values() for m, _c in p.terms()} | {m for m, _c in target.terms()}
            for m in sorted(monos):
                exps = dict(m)
                row = [ZERO] * (len(self.columns) + 1)
                for k, p in expr.items():
                    row[col_index[k]] = row[col_index[k]] + p.coefficient_of(exps)
                row[-1] = target.coefficient_of(exps)
                rows.append(row)
        sol = _gauss_jordan(rows, len(self.columns))
        if sol is None:
            return None
        out = {}
        for name, u in self._unknowns.items():
            formal = [f"a{k}" for k in range(u.arity)]
            poly = MultiPoly()
            for b, orbit in enumerate(u.basis()):
                c = sol[col_index[(name, b)]]
                if not c.is_zero():
                    poly = poly + sum((_monomial(formal, e) for e in orbit), MultiPoly()) * c
            out[name] = poly
        return out


def _gauss_jordan(rows: list[list[Scalar]], ncols: int) -> list[Scalar] | None:
    rows = [r[:] for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if not rows[r][col].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [x * inv if not x.is_zero() else x for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [x - f * y if not y.is_zero() else x for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(rows)):
        if not rows[r][-1].is_zero():
            return None
    sol = [ZERO] * ncols
    for r, col in enumerate(pivots):
        sol[col] = rows[r][-1]
    return sol


def instantiate(poly: MultiPoly, args: Sequence[str]) -> MultiPoly:
    """Evaluate a solved polynomial in formal arguments ``a0, a1, ...`` at variables."""
    tmp = poly.rename({f"a{k}": f"#{k}" for k in range(len(args))})
    return tmp.rename({f"#{k}": a for k, a in enumerate(args)})


# checks -------------------------------------------------------------------------
ERRATA: dict[str, str] = {
    "T1[1,2]-sign": "closed form of T1[1,2]: the (z1 - q^-4 w)(z2 - q^2 z3) term enters with a minus sign",
    "T1[2,k]-closed": "closed forms of T1[2,0], T1[2,1]: the bracket multiplying (z1 - q^2 z2) does not match "
                      "the shuffle sum; superseded by the T1[2,k] decomposition",
    "T1[2,k]-rotation": "T1[2,k] = T2[1,k](z3, z1, z2, w); the rotation goes the other way",
    "T1[2,k]-factor": "T1[2,k] decomposition: the f21 term carries (z3 - w), not (z3 - z2)",
    "T1[3,0]-factor": "T1[3,0] decomposition: the f31 term carries (z2 - q^2 z3), not (z2 - q^2 w)",
    "T2-cyclic": "T2[s,k](z1, z2, z3, w) = (-1)^(s+1) T1[3-s,k](z_{1+s}, z_{2+s}, z_{3+s}, w), indices mod 3",
}

# [3] in the closed forms is the symmetric q-integer q^2 + 1 + q^-2.
_BRACKET3 = qint(3)


@dataclass
class Identity:
    """One polynomial identity, ``residual = lhs - rhs``."""

    name: str
    residual: MultiPoly
    coefficients: int
    variant: str = "stated"            # "stated" or "amended"
    erratum: str | None = None         # ERRATA key this item is affected by
    solved: dict[str, MultiPoly] | None = None

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    @property
    def informational(self) -> bool:
        """A stated form known to be misprinted; reported but not gating."""
        return self.variant == "stated" and self.erratum is not None

    def holds_at_q_one(self) -> bool:
        return all(c == 0 for c in self.residual.evaluate_q_at_one().values())


def _support(*polys: MultiPoly) -> int:
    return len({m for p in polys for m, _c in p.terms()})


def _equality(name: str, lhs: MultiPoly, rhs: MultiPoly, **kw) -> Identity:
    return Identity(name, lhs - rhs, _support(lhs, rhs), **kw)


Part = tuple[str, Sequence[str], MultiPoly]   # unknown name, arguments, cofactor


def _decomposition(name: str, equations: Sequence[tuple[MultiPoly, Sequence[Part]]],
                   unknowns: Sequence[Unknown], stated: Mapping[str, MultiPoly] | None = None,
                   **kw) -> Identity:
    """Solve ``target = sum cofactor * f(args)`` for the unknowns not fixed by ``stated``.

    ``stated`` values are polynomials in formal arguments ``a0, a1, ...``.  The
    residual is what the best solution leaves over; an inconsistent system
    reports the target minus its stated part.
    """
    stated = dict(stated or {})
    ls = LinearSystem()
    for u in unknowns:
        if u.name not in stated:
            ls.add_unknown(u)
    rests = []
    for target, parts in equations:
        known = MultiPoly()
        exprs = []
        for uname, args, cof in parts:
            if uname in stated:
                known = known + instantiate(stated[uname], args) * cof
            else:
                exprs.append(LinearSystem.scale(ls.at(uname, args), cof))
        rest = target - known
        rests.append((rest, parts))
        if exprs:
            ls.equate(LinearSystem.combine(*exprs), rest)
    sol = ls.solve() if ls.columns else {}
    residual = MultiPoly()
    for rest, parts in rests:
        if sol is None:
            residual = residual + rest
            continue
        fit = sum((instantiate(sol[u], args) * cof for u, args, cof in parts if u not in stated), MultiPoly())
        residual = residual + (rest - fit)
    support = _support(*(t for t, _p in equations))
    solved = None if sol is None else {**stated, **sol}
    return Identity(name, residual, support, solved=solved, **kw)


def _formal(k: int) -> MultiPoly:
    return _v(f"a{k}")


def _T_table() -> dict[tuple[int, int, int], MultiPoly]:
    return {(f, s, k): build_T(f, s, k)
            for f in (1, 2) for s in range(4) for k in range((3 - s if f == 1 else s) + 1)}


def _rot(p: MultiPoly, shift: int) -> MultiPoly:
    """``p(z_{1+shift}, z_{2+shift}, z_{3+shift}, w)`` with indices mod 3."""
    zs = ("z1", "z2", "z3")
    return permuted(p, [zs[(a + shift) % 3] for a in range(3)] + ["w"])


def t_identities() -> list[Identity]:
    """Every closed form, decomposition and symmetry of the shuffle polynomials."""
    T = _T_table()
    z1, z2, z3, w = (_v(x) for x in VARS)
    q = qpow
    b3 = _BRACKET3
    out: list[Identity] = []

    for k in range(4):
        const = _c(qbinom(3, k) * (-1) ** k)
        out.append(_equality(f"T1[0,{k}] constant", T[1, 0, k], const))
        out.append(_equality(f"T2[3,{k}] constant", T[2, 3, k], const))

    # decompositions
    f2 = lambda n: Unknown(n, 2, 2)
    out.append(_decomposition("T1[1,k] decomposition", [
        (T[1, 1, 0], [("f10", ("z1", "w"), z2 - z3 * q(2)), ("f11", ("z1", "z3"), w - z2 * q(-2))]),
        (T[1, 1, 1], [("f11", ("z1", "z3"), z2 - w * q(-2)), ("f11", ("z1", "z2"), z3 * q(-2) - w)]),
        (T[1, 1, 2], [("f11", ("z1", "z2"), w * q(-2) - z3), ("f12", ("z1", "w"), z2 - z3 * q(2))]),
    ], [f2("f10"), f2("f11"), f2("f12")]))

    f20, f22 = Unknown("f20", 4, 3, symmetric=(0, 1)), Unknown("f22", 4, 3, symmetric=(0, 1))
    for variant, cross in (("stated", z3 - z2), ("amended", z3 - w)):
        out.append(_decomposition("T1[2,k] decomposition", [
            (T[1, 2, 0], [("f20", VARS, z1 - z2 * q(2)), ("f21", ("z1", "z2"), cross * (z3 * q(-2) - w))]),
            (T[1, 2, 1], [("f22", VARS, z1 - z2 * q(2)), ("f21", ("z1", "z2"), -cross * (z3 - w * q(-2)))]),
        ], [f20, f2("f21"), f22], variant=variant, erratum="T1[2,k]-factor"))

    for variant, tail in (("stated", z2 - w * q(2)), ("amended", z2 - z3 * q(2))):
        out.append(_decomposition("T1[3,0] decomposition", [
            (T[1, 3, 0], [("f30", ("z3", "w"), z1 - z2 * q(2)), ("f31", ("z1", "w"), tail)]),
        ], [f2("f30"), f2("f31")], variant=variant, erratum="T1[3,0]-factor"))

    # symmetries between the two families
    for s in range(4):
        for k in range(s + 1):
            if s < 3:
                stated = (-1) ** s * permuted(T[1, 3 - s, k], ("z3", "z1", "z2", "w"))
                out.append(_equality(f"T2[{s},{k}] symmetry", T[2, s, k], stated, erratum="T2-cyclic"))
            out.append(_equality(f"T2[{s},{k}] symmetry", T[2, s, k], (-1) ** (s + 1) * _rot(T[1, 3 - s, k], s),
                                 variant="amended", erratum="T2-cyclic"))
    out.append(_equality("T1[3,0] = -T2[0,0]", T[1, 3, 0], -T[2, 0, 0]))

    # explicit closed forms
    cf10 = z1 * (q(4) - 1) * ((z1 * q(-4) - w) * (z2 - z3 * q(2)) - (z1 - z3) * (z2 * q(-2) - w) * b3)
    cf11 = z1 * (q(4) - 1) * b3 * ((z1 - z3) * (z2 - w * q(-2)) + (z1 - z2) * (z3 * q(-2) - w))
    left12 = -(z1 - z2) * (z3 - w * q(-2)) * b3
    right12 = (z1 - w * q(-4)) * (z2 - z3 * q(2))
    out.append(_equality("T1[1,0] closed form", T[1, 1, 0], cf10))
    out.append(_equality("T1[1,1] closed form", T[1, 1, 1], cf11))
    out.append(_equality("T1[1,2] closed form", T[1, 1, 2], z1 * (q(4) - 1) * (left12 + right12),
                         erratum="T1[1,2]-sign"))
    out.append(_equality("T1[1,2] closed form", T[1, 1, 2], z1 * (q(4) - 1) * (left12 - right12),
                         variant="amended", erratum="T1[1,2]-sign"))
    lead = z1 * z2 * (ONE - q(-2)) * (q(4) - 1) * b3 * (z3 - w)
    cf20 = lead * (z3 * q(-2) - w) + (z1 - z2 * q(2)) * (ONE - q(-4)) * (
        (z3 - w) * (z1 * z2 * q(4) - z3 * w) * (q(2) * b3) - z3 * (ONE + q(-2)) * (z1 * q(2) - z3) * (z2 * q(2) - z3))
    cf21 = -lead * (z3 - w * q(-2)) - (z1 - z2 * q(2)) * (ONE - q(-4)) * (
        (z3 - w) * (z1 * z2 - z3 * w * q(4)) * (q(2) * b3) - z3 * (ONE + q(-2)) * (z1 - z3 * q(2)) * (z2 - z3 * q(2)))
    out.append(_equality("T1[2,0] closed form", T[1, 2, 0], cf20, erratum="T1[2,k]-closed"))
    out.append(_equality("T1[2,1] closed form", T[1, 2, 1], cf21, erratum="T1[2,k]-closed"))
    cf30 = w * (ONE - q(-4)) * (-(z3 - w * q(-4)) * (z1 - z2 * q(2)) + (z1 * q(-4) - w) * (z2 - z3 * q(2)))
    out.append(_equality("T1[3,0] closed form", T[1, 3, 0], cf30))

    # rotations between the families used alongside the closed forms
    for k in range(3):
        out.append(_equality(f"T1[1,{k}] = -T2[2,{k}] rotated", T[1, 1, k],
                             -permuted(T[2, 2, k], ("z2", "z3", "z1", "w"))))
    for k in range(2):
        out.append(_equality(f"T1[2,{k}] = T2[1,{k}] rotated", T[1, 2, k],
                             permuted(T[2, 1, k], ("z2", "z3", "z1", "w")), erratum="T1[2,k]-rotation"))
        out.append(_equality(f"T1[2,{k}] = T2[1,{k}] rotated", T[1, 2, k],
                             permuted(T[2, 1, k], ("z3", "z1", "z2", "w")),
                             variant="amended", erratum="T1[2,k]-rotation"))
    return out


def p_decompositions() -> list[Identity]:
    """The three ``P_r`` splittings, for ``q`` and ``q^-1``.

    Stated cofactors are fixed and the rest solved; the free solve (every
    cofactor unknown) is kept in ``solved`` for inspection.
    """
    out = []
    a0, a1 = _formal(0), _formal(1)
    z2, z3, w = _v("z2"), _v("z3"), _v("w")
    for base in (1, -1):
        qq = lambda k: qpow(k * base)
        coef = q_factor(base).coefficient_of({"z1": 1})
        q_minus_13 = a0 * (a0 - a1) * coef          # Q(z1 - z3) in formal arguments
        unk = lambda n, ar: Unknown(n, ar, 2)
        specs = {
            1: ([("f13", ("z1", "z3", "w"), z2 - w * qq(2)), ("f12", ("z1", "w"), z3 - z2 * qq(-2))],
                [unk("f12", 2), unk("f13", 3)], {"f13": q_minus_13}),
            2: ([("f22", ("z1", "z3", "w"), w - z2 * qq(2)), ("f23", ("z1", "z2", "w"), z3 - w * qq(2))],
                [unk("f22", 3), unk("f23", 3)], {"f22": q_minus_13, "f23": -q_minus_13}),
            3: ([("f33", ("z1", "z2", "w"), w - z3 * qq(2)), ("f32", ("z1", "w"), z3 - z2 * qq(-2))],
                [unk("f32", 2), unk("f33", 3)], {"f33": -q_minus_13}),
        }
        label = "q" if base == 1 else "q^-1"
        for r, (parts, unknowns, stated) in specs.items():
            target = build_P(r, base)
            item = _decomposition(f"P{r} decomposition ({label})", [(target, parts)], unknowns, stated)
            free = _decomposition("", [(target, parts)], unknowns)
            item.solved = free.solved
            out.append(item)
    return out


def render_solutions(items: Sequence[Identity]) -> str:
    """Recovered cofactors, one ``name: f = poly`` line each."""
    lines = []
    for it in items:
        for fname, poly in sorted((it.solved or {}).items()):
            lines.append(f"{it.name} [{it.variant}]: {fname} = {poly.render()}")
    return "\n".join(lines) + ("\n" if lines else "")
