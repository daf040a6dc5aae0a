"""Vertex operators and currents on the Fock space, with exact coefficient extraction.

Public functions take and return :class:`~qtoroidal.fock.FockState` values.
The heavy lifting happens in :mod:`qtoroidal._kernel`; this module converts
between the two representations and offers an independent normal-ordered
evaluator used for the locality check.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from qtoroidal import _kernel as K
from qtoroidal.fock import FockBasisVector, FockState
from qtoroidal.lattice import ALPHA, TRIVIAL_COCYCLE, CocycleTable, Weight, pairing
from qtoroidal.scalars import ONE, Scalar, qint

__all__ = [
    "XPLUS",
    "XMINUS",
    "PHIPLUS",
    "PHIMINUS",
    "FieldHandle",
    "CoefficientRequest",
    "apply_field_coefficient",
    "product_coefficient",
    "phi_inverse_coefficient",
    "normal_ordered_coefficient",
    "normal_ordered_kstate",
    "locality_factor",
    "to_kstate",
    "from_kstate",
    "basis_kstate",
    "Context",
]

XPLUS = "Xplus"
XMINUS = "Xminus"
PHIPLUS = "PhiPlus"
PHIMINUS = "PhiMinus"

_KIND_TO_KERNEL = {XPLUS: K.XPLUS, XMINUS: K.XMINUS, PHIPLUS: K.PHIPLUS, PHIMINUS: K.PHIMINUS}
_LABEL_RE = re.compile(r"^\s*(X|x|phi|Phi)\s*([01])\s*([+-])\s*(\^-1|inv)?\s*$")


@dataclass(frozen=True)
class FieldHandle:
    """A current evaluated at ``scale * u^u_exponent * z``.

    ``mode_shift`` s turns ``X(z)`` into ``z^s X(z)`` (x-kinds only).  ``inverse``
    selects the inverse current (phi-kinds only).  ``u_exponent`` may be an int
    or a tuple when several coproduct parameters are in play.
    """

    kind: str
    color: int
    scale: Scalar = ONE
    u_exponent: int | tuple[int, ...] = 0
    mode_shift: int = 0
    inverse: bool = False

    def __post_init__(self):
        if self.kind not in _KIND_TO_KERNEL:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.color not in (0, 1):
            raise ValueError("color must be 0 or 1")
        if self.scale.is_zero():
            raise ValueError("argument scale must be nonzero")
        if self.inverse and self.kind in (XPLUS, XMINUS):
            raise ValueError("inverse is only defined for phi currents")
        if self.mode_shift and self.kind in (PHIPLUS, PHIMINUS):
            raise ValueError("mode shifts apply to x currents only")

    @classmethod
    def parse(cls, label: str) -> "FieldHandle":
        """``"X0+"``, ``"phi1-"``, ``"phi0+^-1"``."""
        m = _LABEL_RE.match(label)
        if not m:
            raise ValueError(f"cannot parse field label {label!r}")
        head, color, sign, inv = m.groups()
        if head.lower() == "x":
            kind = XPLUS if sign == "+" else XMINUS
        else:
            kind = PHIPLUS if sign == "+" else PHIMINUS
        return cls(kind, int(color), inverse=bool(inv))

    @property
    def label(self) -> str:
        head = "X" if self.kind in (XPLUS, XMINUS) else "phi"
        sign = "+" if self.kind in (XPLUS, PHIPLUS) else "-"
        return f"{head}{self.color}{sign}" + ("^-1" if self.inverse else "")

    @property
    def u_tuple(self) -> tuple[int, ...]:
        e = self.u_exponent
        return (e,) if isinstance(e, int) else tuple(e)

    def rescaled(self, scale: Scalar = ONE, u_exponent: int | tuple[int, ...] = 0) -> "FieldHandle":
        """Compose a further argument scaling ``z -> scale * u^e * z``."""
        mine, other = self.u_tuple, ((u_exponent,) if isinstance(u_exponent, int) else tuple(u_exponent))
        n = max(len(mine), len(other))
        mine += (0,) * (n - len(mine))
        other += (0,) * (n - len(other))
        summed = tuple(a + b for a, b in zip(mine, other))
        ue: int | tuple[int, ...] = summed[0] if isinstance(self.u_exponent, int) and isinstance(u_exponent, int) else summed
        return FieldHandle(self.kind, self.color, self.scale * scale, ue, self.mode_shift, self.inverse)

    def v_shift(self) -> int | None:
        """``t`` when ``scale == v^t``, else None."""
        terms = self.scale.laurent_terms()
        if terms is None or len(terms) != 1:
            return None
        (e, c), = terms.items()
        return e if c == 1 else None

    def to_spec(self, leg: int = 0, uexp: tuple[int, ...] | None = None) -> K.FieldSpec:
        t = self.v_shift()
        if t is None:
            raise ValueError("kernel fields need a pure power of v as argument scale")
        ue = self.u_tuple if uexp is None else uexp
        if all(x == 0 for x in ue):
            ue = () if uexp is None else ue
        return K.FieldSpec(_KIND_TO_KERNEL[self.kind], self.color, leg, t, tuple(ue), self.mode_shift, self.inverse)


class Context:
    """A kernel ring plus engine, grown on demand when deeper modes are needed."""

    def __init__(self, depth: int = 16, legs: int = 1, cocycle: CocycleTable = TRIVIAL_COCYCLE):
        self.legs = legs
        self.cocycle = cocycle
        self._make(depth)

    def _make(self, depth: int) -> None:
        self.ring = K.Ring(depth, self.legs)
        self.engine = K.Engine(self.ring, self.cocycle)

    def grow(self, needed: int) -> None:
        depth = self.ring.depth
        while depth < needed:
            depth *= 2
        self._make(depth)

    def run(self, fn):
        """Call ``fn(ctx)``, retrying in a deeper ring if a mode overflows."""
        while True:
            try:
                return fn(self)
            except K.DepthExceeded as exc:
                self.grow(int(exc.args[0]) + 1)


_DEFAULT = Context()


# conversions ----------------------------------------------------------
def basis_kstate(ring: K.Ring, vectors: Sequence[FockBasisVector], uexps: tuple[int, ...] = ()) -> K.KState:
    """A pure tensor of basis vectors (one per leg) with coefficient 1."""
    poly = ring.one
    off = 0
    for leg, b in enumerate(vectors):
        for c, n in b.partition:
            # h_{c,-n} = [n] p_{c,n}
            o, qn = ring.laurent(qint(n).laurent_terms())
            poly = poly * ring.p(leg, c, n) * qn
            off += o
    key = (tuple(b.beta for b in vectors), tuple(b.degree for b in vectors), uexps)
    return K.KState(ring, {key: (off, poly)})


def to_kstate(ring: K.Ring, state: FockState) -> K.KState:
    """Kernel form of a single-leg state whose coefficients are Laurent polynomials in v."""
    out = K.KState(ring)
    for b, c in state.items():
        terms = c.laurent_terms()
        if terms is None:
            raise ValueError("kernel states need Laurent-polynomial coefficients")
        scal = ring.laurent(terms)
        out.iadd(basis_kstate(ring, [b]), scal)
    return out


def _decode_monomial(ring: K.Ring, exps: Sequence[int]) -> tuple[list[tuple[tuple[int, int], ...]], Scalar, int]:
    """Split a kernel monomial into per-leg partitions, the 1/prod[n] factor and the v exponent."""
    depth = ring.depth
    legs: list[list[tuple[int, int]]] = [[] for _ in range(ring.legs)]
    factor = ONE
    for idx, e in enumerate(exps[:-1]):
        e = int(e)
        if not e:
            continue
        leg, rest = divmod(idx, 2 * depth)
        color, m1 = divmod(rest, depth)
        n = m1 + 1
        legs[leg].extend([(color, n)] * e)
        factor = factor * qint(n) ** (-e)
    return [tuple(x) for x in legs], factor, int(exps[-1])


def from_kstate(state: K.KState) -> dict[tuple, dict[tuple, Scalar]]:
    """``{uexps: {(basis vectors per leg): Scalar}}``."""
    ring = state.ring
    out: dict[tuple, dict[tuple, dict]] = {}
    for (betas, _degs, uexps), (off, poly) in state.entries.items():
        bucket = out.setdefault(uexps, {})
        for exps, c in zip(poly.monoms(), poly.coeffs()):
            parts, factor, ve = _decode_monomial(ring, exps)
            vecs = tuple(FockBasisVector(p, b) for p, b in zip(parts, betas))
            slot = bucket.setdefault(vecs, {})
            fac = slot.setdefault(factor, {})
            e = ve - off
            fac[e] = fac.get(e, Fraction(0)) + Fraction(int(c.p), int(c.q))
    result: dict[tuple, dict[tuple, Scalar]] = {}
    for uexps, bucket in out.items():
        res = {}
        for vecs, by_factor in bucket.items():
            total = Scalar.from_int(0)
            for factor, terms in by_factor.items():
                total = total + Scalar.from_laurent(terms) * factor
            if not total.is_zero():
                res[vecs] = total
        if res:
            result[uexps] = res
    return result


def _single_leg(result: dict[tuple, dict[tuple, Scalar]]) -> FockState:
    terms: dict[FockBasisVector, Scalar] = {}
    for bucket in result.values():
        for (b,), c in bucket.items():
            prev = terms.get(b)
            terms[b] = c if prev is None else prev + c
    return FockState(terms)


# public operations ----------------------------------------------------
def _scale_power(f: FieldHandle, k: int) -> Scalar:
    return f.scale ** k


def apply_field_coefficient(f: FieldHandle, k: int, s: FockState, *,
                            cocycle: CocycleTable = TRIVIAL_COCYCLE) -> FockState:
    """Coefficient of ``z^k`` in ``f(z) s``, exactly."""
    return product_coefficient(CoefficientRequest([(f, "z")], {"z": k}, s), cocycle=cocycle)


@dataclass
class CoefficientRequest:
    """One coefficient of ``F_1(z_1) ... F_r(z_r)`` applied to a state."""

    fields: list[tuple[FieldHandle, str]]
    exponents: dict[str, int]
    state: FockState = field(default_factory=FockState)

    def __post_init__(self):
        names = [n for _, n in self.fields]
        if len(set(names)) != len(names):
            raise ValueError("each variable must appear exactly once")
        if set(names) != set(self.exponents):
            raise ValueError("exponents must be given for exactly the field variables")
        if len(self.fields) > 4:
            raise ValueError("at most four fields per request")


def product_coefficient(req: CoefficientRequest, *, cocycle: CocycleTable = TRIVIAL_COCYCLE) -> FockState:
    """Nested exact extraction, rightmost field first."""
    ctx = _DEFAULT if cocycle == TRIVIAL_COCYCLE else Context(cocycle=cocycle)
    out = FockState()
    scal = ONE
    specs = []
    for f, name in req.fields:
        k = req.exponents[name]
        plain = FieldHandle(f.kind, f.color, ONE, 0, f.mode_shift, f.inverse)
        specs.append((plain.to_spec(), k))
        scal = scal * _scale_power(f, k)
    for b, c in req.state.items():
        def run(cx: Context, b=b):
            st = basis_kstate(cx.ring, [b])
            for spec, k in reversed(specs):
                res = cx.engine.apply(st, spec, [k])
                st = res.get(k)
                if st is None:
                    return FockState()
            return _single_leg(from_kstate(st))
        out = out + ctx.run(run).scale(c * scal)
    return out


def phi_inverse_coefficient(f: FieldHandle, k: int, s: FockState, *,
                            cocycle: CocycleTable = TRIVIAL_COCYCLE) -> FockState:
    """Coefficient of ``z^k`` of the inverse current ``phi(z)^-1`` applied to ``s``."""
    if f.kind not in (PHIPLUS, PHIMINUS):
        raise ValueError("phi_inverse_coefficient needs a phi current")
    g = FieldHandle(f.kind, f.color, f.scale, f.u_exponent, 0, not f.inverse)
    return apply_field_coefficient(g, k, s, cocycle=cocycle)


# locality ---------------------------------------------------------------
def locality_factor(sign: int, i: int, j: int, order: int) -> list[Scalar]:
    """Coefficients of ``x^t``, ``t <= order``, in ``(1 - q^{-sign} x)^{a_ij}_{q^2}``.

    ``(1-x)^2_{q^2} = (1 - q^-1 x)(1 - q x)``; negative powers are inverses.
    """
    from qtoroidal.lattice import CARTAN
    from qtoroidal.polyalg import MultiPoly, expand_rational
    from qtoroidal.scalars import qpow

    a = CARTAN[i][j]
    x = MultiPoly.var("x")
    shift = qpow(-sign)
    base = (MultiPoly.const(1) - x * (qpow(-1) * shift)) * (MultiPoly.const(1) - x * (qpow(1) * shift))
    n = abs(a) // 2
    prod = base ** n
    if a >= 0:
        ser = expand_rational(prod, MultiPoly.const(1), order, "x")
    else:
        ser = expand_rational(MultiPoly.const(1), prod, order, "x")
    return list(ser.coeffs)


def normal_ordered_coefficient(sign: int, i: int, j: int, a: int, b: int, s: FockState, *,
                               cocycle: CocycleTable = TRIVIAL_COCYCLE) -> FockState:
    """Coefficient of ``z^a w^b`` in ``:X_i^s(z) X_j^s(w):`` applied to ``s``.

    Creation parts to the left, annihilation parts to the right, lattice part
    ``e_{s alpha_i} e_{s alpha_j} z^{s h_i} w^{s h_j}``; no contraction factor.
    """
    ctx = _DEFAULT if cocycle == TRIVIAL_COCYCLE else Context(cocycle=cocycle)
    out = FockState()
    for vec, c in s.items():
        def run(cx: Context, vec=vec):
            return _normal_ordered_basis(cx, sign, i, j, a, b, vec)
        out = out + ctx.run(run).scale(c)
    return out


def _normal_ordered_basis(cx: Context, sign: int, i: int, j: int, a: int, b: int, vec: FockBasisVector) -> FockState:
    st = normal_ordered_kstate(cx, sign, i, j, a, b, vec)
    return FockState() if st is None else _single_leg(from_kstate(st))


def normal_ordered_kstate(cx: Context, sign: int, i: int, j: int, a: int, b: int,
                          vec: FockBasisVector) -> K.KState | None:
    """Kernel form of :func:`normal_ordered_coefficient` on one basis vector; None when zero."""
    ring = cx.ring
    st = basis_kstate(ring, [vec])
    ((key, (off, poly)),) = st.entries.items()
    beta = vec.beta
    fam = K.GAMMA_PLUS if sign > 0 else K.GAMMA_MINUS
    si, sj = (ALPHA[i], ALPHA[j]) if sign > 0 else (-ALPHA[i], -ALPHA[j])
    # z^{s h_i} w^{s h_j} on e_beta, then e_{s alpha_i} e_{s alpha_j}
    ga = a - pairing(beta, si)
    gb = b - pairing(beta, sj)
    eps = cx.cocycle(sj, beta) * cx.cocycle(si, sj + beta)
    newbeta = beta + si + sj
    deg = vec.degree
    # joint annihilation: slices in z then in w (they commute)
    sl_z = ring.slices(fam, 0, i, poly, deg)
    total = ring.zero
    tot_off = None
    pieces = []
    for n1, s1 in enumerate(sl_z):
        if s1.is_zero():
            continue
        sl_w = ring.slices(fam, 0, j, s1, deg - n1)
        for n2, s2 in enumerate(sl_w):
            if s2.is_zero():
                continue
            m1, m2 = ga + n1, gb + n2
            if m1 < 0 or m2 < 0:
                continue
            c1 = ring.creation(fam, 0, i, m1)
            c2 = ring.creation(fam, 0, j, m2)
            aoff = K._ANN_OFF[fam] * (n1 + n2) + K._CRE_OFF[fam] * (m1 + m2)
            pieces.append((aoff, s2 * c1 * c2))
    if not pieces:
        return None
    hi = max(o for o, _ in pieces)
    for o, p in pieces:
        total += p * ring.vpow(hi - o)
    if total.is_zero():
        return None
    if eps < 0:
        total = -total
    newdeg = deg + ga + gb
    return K.KState(ring, {((newbeta,), (newdeg,), ()): (off + hi, total)})
