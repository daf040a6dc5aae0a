"""The deformed Drinfeld coproduct on generating currents and its action on tensor powers of V.

A current's argument is ``z * v^shift * prod_legs v^(b_l * c_l) * prod_vars u_var^e``,
so central charges stay symbolic until a module fixes them.  With ``q = v^2``,
``q^{c/2} = v^c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from qtoroidal import _kernel as K
from qtoroidal.fields import PHIMINUS, PHIPLUS, XMINUS, XPLUS, Context, FieldHandle, basis_kstate, from_kstate
from qtoroidal.fock import FockBasisVector
from qtoroidal.polyalg import MultiPoly
from qtoroidal.scalars import ONE, Scalar, vpow

__all__ = [
    "LegField",
    "CoproductTerm",
    "CoproductField",
    "GENERATORS",
    "generator_field",
    "delta_field",
    "split_leg",
    "counit_leg",
    "identity_u",
    "TensorState",
    "tensor_state",
    "specialize_u",
    "tensor_product_coefficient",
    "tensor_rep",
    "U_NAMES",
    "hopf_pairing",
    "counit_value",
    "product_composite",
]

U_NAMES = ("u", "u2")   # names of the coproduct parameters, in tensor-key order


@dataclass(frozen=True, order=True)
class LegField:
    """One current on one leg, with a symbolic argument scaling."""

    kind: str
    color: int
    inverse: bool = False
    shift: int = 0                                  # constant v-power
    central: tuple[tuple[int, int], ...] = ()       # (leg, b): factor v^(b * c_leg)
    u: tuple[int, ...] = ()                         # exponent per coproduct parameter

    def scaled(self, shift: int = 0, central: Mapping[int, int] | None = None,
               u: Sequence[int] = ()) -> "LegField":
        cen = dict(self.central)
        for leg, b in (central or {}).items():
            cen[leg] = cen.get(leg, 0) + b
        n = max(len(self.u), len(u))
        mine = tuple(self.u) + (0,) * (n - len(self.u))
        other = tuple(u) + (0,) * (n - len(u))
        return replace(self, shift=self.shift + shift,
                       central=tuple(sorted((l, b) for l, b in cen.items() if b)),
                       u=_trim(tuple(a + b for a, b in zip(mine, other))))

    def vshift(self, charges: Mapping[int, int]) -> int:
        return self.shift + sum(b * charges[leg] for leg, b in self.central)

    def label(self) -> str:
        head = "x" if self.kind in (XPLUS, XMINUS) else "phi"
        sign = "+" if self.kind in (XPLUS, PHIPLUS) else "-"
        bits = []
        if self.shift:
            bits.append(f"v^{self.shift}")
        for leg, b in self.central:
            bits.append(f"v^({b}c{leg})")
        for name, e in zip(U_NAMES, self.u):
            if e:
                bits.append(f"{name}^{e}")
        arg = "*".join(["z"] + bits)
        return f"{head}{self.color}{sign}({arg})" + ("^-1" if self.inverse else "")


def _trim(u: tuple[int, ...]) -> tuple[int, ...]:
    while u and u[-1] == 0:
        u = u[:-1]
    return u


# a term is a coefficient and one optional LegField per leg (None acts as 1)
CoproductTerm = tuple[int, tuple[LegField | None, ...]]


@dataclass(frozen=True)
class CoproductField:
    """A signed sum of tensor products of currents on ``legs`` legs."""

    legs: int
    terms: tuple[CoproductTerm, ...]

    def normalized(self) -> "CoproductField":
        acc: dict[tuple, int] = {}
        for c, fs in self.terms:
            acc[fs] = acc.get(fs, 0) + c
        items = sorted(((c, fs) for fs, c in acc.items() if c), key=lambda t: repr(t[1]))
        return CoproductField(self.legs, tuple(items))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoproductField):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.legs == b.legs and a.terms == b.terms

    def __hash__(self) -> int:
        n = self.normalized()
        return hash((n.legs, n.terms))

    def render(self) -> str:
        parts = []
        for c, fs in self.normalized().terms:
            body = " (x) ".join("1" if f is None else f.label() for f in fs)
            parts.append(("- " if c < 0 else "+ ") + (f"{abs(c)} " if abs(c) != 1 else "") + body)
        return " ".join(parts).lstrip("+ ") if parts else "0"

    def to_composite(self, charges: Mapping[int, int], mode_shift: int) -> K.Composite:
        """Kernel composite with central charges evaluated; coefficients must all be 1."""
        out = []
        for c, fs in self.normalized().terms:
            if c != 1:
                raise ValueError("kernel composites carry unit coefficients only")
            specs = []
            for leg, f in enumerate(fs):
                if f is None:
                    continue
                xk = f.kind in (XPLUS, XMINUS)
                handle = FieldHandle(f.kind, f.color, vpow(f.vshift(charges)), f.u or 0,
                                     mode_shift if xk else 0, f.inverse)
                specs.append(handle.to_spec(leg, f.u))
            # legs commute, so apply in the cheapest order: phi+ has few modes,
            # x needs annihilation slices, phi- only creates
            specs.sort(key=lambda sp: _APPLY_ORDER[sp.kind])
            out.append(tuple(specs))
        return K.Composite(tuple(out))


_APPLY_ORDER = {K.PHIPLUS: 0, K.XPLUS: 1, K.XMINUS: 1, K.PHIMINUS: 2}

GENERATORS = tuple(f"{h}{i}{s}" for h in ("x", "phi") for i in (0, 1) for s in ("+", "-"))


def _kind(name: str) -> tuple[str, int]:
    head, color, sign = name[:-2], int(name[-2]), name[-1]
    if head == "x":
        return (XPLUS if sign == "+" else XMINUS), color
    return (PHIPLUS if sign == "+" else PHIMINUS), color


def generator_field(name: str) -> CoproductField:
    """The generating current itself, on one leg."""
    kind, color = _kind(name)
    return CoproductField(1, ((1, (LegField(kind, color),)),))


def delta_field(name: str, var: Sequence[int] = (1,)) -> CoproductField:
    """The image of a generating current under the deformed coproduct.

    ``var`` is the exponent vector of the deformation parameter (``(1,)`` for u,
    ``(1, 1)`` for u*u2); the formulas use its inverse.  Leg 0 carries ``c_1``,
    leg 1 carries ``c_2``.
    """
    kind, i = _kind(name)
    inv = tuple(-e for e in var)
    if kind in (PHIPLUS, PHIMINUS):
        s = 1 if kind == PHIPLUS else -1
        left = LegField(kind, i).scaled(central={1: s})
        right = LegField(kind, i).scaled(central={0: -s}, u=inv)
        return CoproductField(2, ((1, (left, right)),))
    if kind == XPLUS:
        return CoproductField(2, (
            (1, (LegField(XPLUS, i), None)),
            (1, (LegField(PHIMINUS, i).scaled(central={0: 1}), LegField(XPLUS, i).scaled(central={0: 2}, u=inv))),
        ))
    return CoproductField(2, (
        (1, (None, LegField(XMINUS, i).scaled(u=inv))),
        (1, (LegField(XMINUS, i).scaled(central={1: 2}), LegField(PHIPLUS, i).scaled(central={1: 1}, u=inv))),
    ))


def _name(f: LegField) -> str:
    head = "x" if f.kind in (XPLUS, XMINUS) else "phi"
    sign = "+" if f.kind in (XPLUS, PHIPLUS) else "-"
    return f"{head}{f.color}{sign}"


def split_leg(cf: CoproductField, leg: int, var: Sequence[int]) -> CoproductField:
    """Apply the coproduct with parameter ``var`` to one leg of every term."""

    def relabel(f: LegField | None, inner: Mapping[int, int] | None = None) -> LegField | None:
        if f is None:
            return None
        cen: dict[int, int] = {}
        for l, b in f.central:
            if l < leg:
                cen[l] = cen.get(l, 0) + b
            elif l == leg:
                cen[leg] = cen.get(leg, 0) + b       # c_leg = c_leg' + c_leg''
                cen[leg + 1] = cen.get(leg + 1, 0) + b
            else:
                cen[l + 1] = cen.get(l + 1, 0) + b
        for l, b in (inner or {}).items():
            cen[l] = cen.get(l, 0) + b
        return replace(f, central=tuple(sorted((l, b) for l, b in cen.items() if b)))

    out = []
    for c, fs in cf.terms:
        head = tuple(relabel(f) for f in fs[:leg])
        tail = tuple(relabel(f) for f in fs[leg + 1:])
        f = fs[leg]
        if f is None:
            out.append((c, head + (None, None) + tail))
            continue
        outer = relabel(f)
        image = delta_field(_name(f), var)
        if f.inverse:
            raise ValueError("coproduct of an inverse current is not modeled")
        for c2, pair in image.terms:
            new = []
            for pos, g in enumerate(pair):
                if g is None:
                    new.append(None)
                    continue
                # formula charges refer to the two new legs
                cen = {leg + l: b for l, b in g.central}
                g2 = replace(g, central=()).scaled(shift=outer.shift, central=dict(outer.central), u=outer.u)
                g2 = g2.scaled(central=cen)
                new.append(g2)
            out.append((c * c2, head + tuple(new) + tail))
    return CoproductField(cf.legs + 1, tuple(out)).normalized()


def counit_leg(cf: CoproductField, leg: int) -> CoproductField:
    """Apply the counit to one leg: phi -> 1, x -> 0, and c on that leg -> 0."""
    out = []
    for c, fs in cf.terms:
        f = fs[leg]
        if f is not None and f.kind in (XPLUS, XMINUS):
            continue
        rest = []
        for g in fs[:leg] + fs[leg + 1:]:
            if g is None:
                rest.append(None)
                continue
            cen = tuple((l if l < leg else l - 1, b) for l, b in g.central if l != leg)
            rest.append(replace(g, central=cen))
        out.append((c, tuple(rest)))
    return CoproductField(cf.legs - 1, tuple(out)).normalized()


def identity_u(name: str) -> CoproductField:
    """The generating current at ``z u^-1``."""
    kind, color = _kind(name)
    return CoproductField(1, ((1, (LegField(kind, color).scaled(u=(-1,)),)),))


# tensor states ---------------------------------------------------------------
@dataclass
class TensorState:
    """Basis-vector tuples mapped to Laurent polynomials in the coproduct parameters."""

    terms: dict[tuple[FockBasisVector, ...], MultiPoly] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for vecs, poly in self.items():
            out.append(f"({poly.render()}) " + " (x) ".join(v.render() for v in vecs))
        return " + ".join(out)


def tensor_state(raw: Mapping[tuple, Mapping[tuple, Scalar]]) -> TensorState:
    """From ``{u exponents: {vector tuple: Scalar}}``."""
    out: dict = {}
    for uexps, comp in raw.items():
        mono = {U_NAMES[k]: e for k, e in enumerate(uexps) if e}
        for vecs, c in comp.items():
            term = MultiPoly.term(c, mono)
            out[vecs] = out[vecs] + term if vecs in out else term
    return TensorState({k: p for k, p in out.items() if not p.is_zero()})


def specialize_u(s: TensorState) -> dict[tuple[FockBasisVector, ...], Scalar]:
    """Set every coproduct parameter to 1."""
    out = {}
    for vecs, poly in s.terms.items():
        tot = Scalar.from_int(0)
        for _m, c in poly.terms():
            tot = tot + c
        if not tot.is_zero():
            out[vecs] = tot
    return out


def tensor_product_coefficient(fields: Sequence[CoproductField], exponents: Sequence[int],
                               vectors: Sequence[FockBasisVector], *, mode_shift: int = 1,
                               charges: Mapping[int, int] | None = None) -> TensorState:
    """Coefficient ``z_1^{e_1} ... z_r^{e_r}`` of ``F_1(z_1) ... F_r(z_r)`` on a basis tensor."""
    if len(fields) != len(exponents) or not 1 <= len(fields) <= 4:
        raise ValueError("need between one and four fields with one exponent each")
    legs = len(vectors)
    if any(f.legs != legs for f in fields):
        raise ValueError("field and vector leg counts differ")
    charges = charges or {l: 1 for l in range(legs)}
    comps = tuple(f.to_composite(charges, mode_shift) for f in fields)
    n_u = max((len(lf.u) for f in fields for _c, fs in f.terms for lf in fs if lf is not None), default=0)

    def run(cx: Context):
        ring = cx.ring
        base = basis_kstate(ring, list(vectors), (0,) * n_u)
        cache = K.ProductCache(cx.engine, base)
        res = cache.fill({comps: {tuple(exponents)}})
        val = res.get((comps, tuple(exponents)))
        return K.KState(ring) if val is None else val

    ctx = Context(legs=legs)
    val = ctx.run(run)
    return tensor_state(from_kstate(val))


def tensor_rep(mode_shift: int, legs: int = 2):
    """The module V (x) V through the coproduct, central charge 2."""
    from qtoroidal.relations import Rep
    charges = {0: 1, 1: 1}
    x, phi = {}, {}
    for i in (0, 1):
        for s, sg in ((1, "+"), (-1, "-")):
            x[(s, i)] = delta_field(f"x{i}{sg}").to_composite(charges, mode_shift)
            phi[(s, i)] = delta_field(f"phi{i}{sg}").to_composite(charges, mode_shift)
    return Rep(x, phi, central=2, legs=2, n_u=1)


# antipode ----------------------------------------------------------------------
def _numeric(f: LegField, charges: Mapping[int, int], extra: int = 0, inverse: bool | None = None) -> LegField:
    return LegField(f.kind, f.color, f.inverse if inverse is None else inverse, f.vshift(charges) + extra)


def _antipode_of(f: LegField, charges: Mapping[int, int], amended: bool) -> list[tuple[int, tuple[LegField, ...]]]:
    """``S(f)`` as products written left to right; the image's own central charge is 1.

    ``amended`` inverts the phi+ factor in the image of x-, the form forced by the
    antipode axiom on the first tensor leg.
    """
    if f.kind == XPLUS:
        return [(-1, (_numeric(LegField(PHIMINUS, f.color, shift=f.shift, central=f.central), charges, -1, True),
                      _numeric(f, charges, -2)))]
    if f.kind == XMINUS:
        return [(-1, (_numeric(f, charges, -2),
                      _numeric(LegField(PHIPLUS, f.color, shift=f.shift, central=f.central), charges, -1, amended)))]
    return [(1, (_numeric(f, charges, 0, not f.inverse),))]


def hopf_pairing(name: str, first_leg_charge: int = 1, amended: bool = False) -> list[tuple[int, tuple[LegField, ...]]]:
    """``m (S (x) Id) Delta_1`` of a generating current on one module, as signed products.

    ``first_leg_charge`` is the value taken by central factors that ``S`` acts on:
    1 evaluates everything at ``c = 1``, -1 applies ``S(c) = -c`` first.  The
    second leg keeps ``c = 1`` and coproduct parameters are set to 1.
    """
    charges = {0: first_leg_charge, 1: 1}
    out = []
    for c, (left, right) in delta_field(name).normalized().terms:
        first = [(1, ())] if left is None else _antipode_of(left, charges, amended)
        tail = () if right is None else (_numeric(right, charges),)
        for c2, prod in first:
            out.append((c * c2, prod + tail))
    return out


def counit_value(name: str) -> int:
    return 1 if name.startswith("phi") else 0


def product_composite(prod: Sequence[LegField], mode_shift: int) -> K.Composite:
    """A same-leg ordered product as a one-term composite (rightmost applied first)."""
    specs = []
    for f in reversed(prod):
        xk = f.kind in (XPLUS, XMINUS)
        specs.append(FieldHandle(f.kind, f.color, vpow(f.shift), 0, mode_shift if xk else 0, f.inverse).to_spec(0))
    return K.Composite((tuple(specs),))
