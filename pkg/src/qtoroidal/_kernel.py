"""Exact engine for vertex operators on (tensor powers of) the Fock space.

Representation
--------------
Fock vectors are polynomials in ``p_{j,m} = h_{j,-m}/[m]_q``.  In this basis the
annihilators ``h_{i,m}/[m]_q`` act as derivations with Laurent-polynomial
constants, so every exponential factor of a vertex operator has coefficients in
``Q[v, v^-1]``.  A state component is stored as ``v^(-offset) * P`` where ``P``
is a flint polynomial in the ``p`` variables and ``v`` with non-negative
exponents.

Components are keyed by ``(weights, degrees, u_exponents)``: one lattice weight
and one Fock degree per tensor leg, plus the exponents of the coproduct
parameters.  All operators used here map such homogeneous components to
homogeneous components.

Exponentials
------------
For an operator ``C(z) A(z)`` with ``A`` a product of annihilation exponentials
and ``C`` of creation exponentials:

* ``A(z) f(p) = f(p + tau z^-*)`` (translation).  Its ``z^-n`` slices obey
  ``n S_n = sum_{j,m} m tau_{j,m} d/dp_{j,m} S_{n-m}``.
* ``C(z) = exp(sum rho_m p_{i,m} z^m)`` has coefficients ``c_M`` with
  ``M c_M = sum_m m rho_m p_{i,m} c_{M-m}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx

from qtoroidal.lattice import ALPHA, TRIVIAL_COCYCLE, CocycleTable, Weight, pairing

# operator families on one leg and one color
GAMMA_PLUS = "G+"      # E^-(v^-1 z) E^+(v z)
GAMMA_MINUS = "G-"     # E^-(v z)^-1 E^+(v^-1 z)^-1
PHI_PLUS = "P+"        # exp((q - q^-1) sum h_n z^-n)
PHI_PLUS_INV = "P+i"
PHI_MINUS = "P-"       # exp(-(q - q^-1) sum h_-n z^n)
PHI_MINUS_INV = "P-i"

# offset (in powers of v^-1) per unit of annihilated / created degree
_ANN_OFF = {GAMMA_PLUS: 3, GAMMA_MINUS: 1, PHI_PLUS: 4, PHI_PLUS_INV: 4}
_CRE_OFF = {GAMMA_PLUS: 1, GAMMA_MINUS: -1, PHI_MINUS: 2, PHI_MINUS_INV: 2}

# field kinds
XPLUS = "X+"
XMINUS = "X-"
PHIPLUS = "phi+"
PHIMINUS = "phi-"
KINDS = (XPLUS, XMINUS, PHIPLUS, PHIMINUS)


class DepthExceeded(RuntimeError):
    """A creation operator needed a mode deeper than the ring provides."""


def _sign(i: int, j: int) -> int:
    return 1 if i == j else -1


class Ring:
    """Polynomial ring Q[p_{l,j,m}, v] for ``legs`` tensor factors."""

    def __init__(self, depth: int, legs: int = 1):
        self.depth = depth
        self.legs = legs
        names = [f"p{l}_{c}_{m}" for l in range(legs) for c in (0, 1) for m in range(1, depth + 1)]
        names.append("v")
        self.ctx = fmpq_mpoly_ctx.get(names, "degrevlex")
        self.gens = self.ctx.gens()
        self.V = self.gens[-1]
        self.v_index = len(names) - 1
        self.one = self.ctx.from_dict({(0,) * len(names): 1})
        self.zero = self.ctx.from_dict({})
        self._vpow: list[fmpq_mpoly] = [self.one]
        self._cre: dict[tuple[str, int, int], list[fmpq_mpoly]] = {}
        self._ann: dict[tuple[str, int], list[tuple[fmpq_mpoly, fmpq_mpoly]]] = {}

    def index(self, leg: int, color: int, m: int) -> int:
        return (2 * leg + color) * self.depth + m - 1

    def p(self, leg: int, color: int, m: int) -> fmpq_mpoly:
        if m > self.depth:
            raise DepthExceeded(m)
        return self.gens[self.index(leg, color, m)]

    def vpow(self, e: int) -> fmpq_mpoly:
        if e < 0:
            raise ValueError("negative power of v in a stored polynomial")
        while len(self._vpow) <= e:
            self._vpow.append(self._vpow[-1] * self.V)
        return self._vpow[e]

    def laurent(self, terms: Mapping[int, object]) -> tuple[int, fmpq_mpoly]:
        """``{v_exp: rational}`` -> ``(offset, poly)``."""
        if not terms:
            return 0, self.zero
        off = max(0, -min(terms))
        n = len(self.gens)
        d = {}
        for e, c in terms.items():
            key = [0] * n
            key[-1] = e + off
            d[tuple(key)] = fmpq(c.numerator, c.denominator) if hasattr(c, "denominator") else c
        return off, self.ctx.from_dict(d)

    # exponential data ------------------------------------------------
    def _ann_table(self, fam: str, color: int, upto: int) -> list[tuple[fmpq_mpoly, fmpq_mpoly]]:
        """``m * tau_{j,m}`` for j = 0, 1 (index 0 unused)."""
        key = (fam, color)
        tab = self._ann.get(key)
        if tab is None:
            tab = [(self.zero, self.zero)]
            self._ann[key] = tab
        while len(tab) <= upto:
            m = len(tab)
            row = []
            for j in (0, 1):
                s = _sign(color, j)
                if fam == GAMMA_PLUS:
                    row.append(-s * (self.vpow(4 * m) + self.one))
                elif fam == GAMMA_MINUS:
                    row.append(s * (self.vpow(4 * m) + self.one))
                elif fam == PHI_PLUS:
                    row.append(s * (self.vpow(8 * m) - self.one))
                elif fam == PHI_PLUS_INV:
                    row.append(-s * (self.vpow(8 * m) - self.one))
                else:
                    raise ValueError(fam)
            tab.append((row[0], row[1]))
        return tab

    def _rho(self, fam: str, m: int) -> fmpq_mpoly:
        if fam == GAMMA_PLUS:
            return self.one
        if fam == GAMMA_MINUS:
            return -self.one
        if fam == PHI_MINUS:
            return self.one - self.vpow(4 * m)
        if fam == PHI_MINUS_INV:
            return self.vpow(4 * m) - self.one
        raise ValueError(fam)

    def creation(self, fam: str, leg: int, color: int, M: int) -> fmpq_mpoly:
        """Coefficient of ``y^M`` in ``exp(sum_m rho_m p_{leg,color,m} y^m)``."""
        key = (fam, leg, color)
        tab = self._cre.get(key)
        if tab is None:
            tab = [self.one]
            self._cre[key] = tab
        while len(tab) <= M:
            n = len(tab)
            acc = self.zero
            for m in range(1, n + 1):
                acc += (m * self._rho(fam, m)) * self.p(leg, color, m) * tab[n - m]
            tab.append(acc * fmpq(1, n))
        return tab[M]

    def slices(self, fam: str, leg: int, color: int, poly: fmpq_mpoly, upto: int) -> list[fmpq_mpoly]:
        """Degree-n parts ``S_0..S_upto`` of the annihilation exponential applied to ``poly``."""
        out = [poly]
        if upto <= 0:
            return out
        tab = self._ann_table(fam, color, upto)
        idx0 = self.index(leg, 0, 1)
        idx1 = self.index(leg, 1, 1)
        for n in range(1, upto + 1):
            acc = self.zero
            for m in range(1, min(n, self.depth) + 1):
                src = out[n - m]
                if src.is_zero():
                    continue
                t0, t1 = tab[m]
                d = src.derivative(idx0 + m - 1)
                if not d.is_zero():
                    acc += d * t0
                d = src.derivative(idx1 + m - 1)
                if not d.is_zero():
                    acc += d * t1
            if acc.is_zero():
                out.append(acc)
            else:
                out.append(acc * fmpq(1, n))
        return out

    def vertex_coefficients(self, fam_ann: str | None, fam_cre: str | None, leg: int, color: int,
                            poly: fmpq_mpoly, deg: int, ks: Iterable[int]) -> dict[int, tuple[int, fmpq_mpoly]]:
        """Coefficients ``z^k`` of ``C(z) A(z)`` on a degree-``deg`` component.

        Returns ``{k: (extra_offset, poly)}`` for the non-zero ones.
        """
        ks = sorted(set(ks))
        if not ks:
            return {}
        a = _ANN_OFF[fam_ann] if fam_ann else 0
        b = _CRE_OFF[fam_cre] if fam_cre else 0
        if fam_ann is None:
            top = 0
        elif fam_cre is None:
            top = min(deg, -ks[0])
        else:
            top = deg
        sl = self.slices(fam_ann, leg, color, poly, top) if fam_ann else [poly]
        live = [n for n in range(len(sl)) if not sl[n].is_zero()]
        out: dict[int, tuple[int, fmpq_mpoly]] = {}
        c = a + b
        for k in ks:
            if fam_cre is None:
                n = -k
                if n < 0 or n >= len(sl) or sl[n].is_zero():
                    continue
                out[k] = (a * n, sl[n])
                continue
            ns = [n for n in live if k + n >= 0]
            if fam_ann is None:
                ns = [0] if k >= 0 else []
            if not ns:
                continue
            if k + ns[-1] > self.depth:
                raise DepthExceeded(k + ns[-1])
            if c >= 0:
                nref = ns[-1]
            else:
                nref = ns[0]
            acc = self.zero
            for n in ns:
                cre = self.creation(fam_cre, leg, color, k + n)
                shift = c * (nref - n)
                if shift:
                    cre = cre * self.vpow(shift)
                acc += sl[n] * cre
            if not acc.is_zero():
                out[k] = (b * k + c * nref, acc)
        return out


@dataclass(frozen=True)
class FieldSpec:
    """A current on one tensor leg, evaluated at ``v^vshift * u^uexp * z``.

    For the X kinds ``mode_shift`` s means the handle stands for ``y^s X(y)``.
    """

    kind: str
    color: int
    leg: int = 0
    vshift: int = 0
    uexp: tuple[int, ...] = ()
    mode_shift: int = 0
    inverse: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.inverse and self.kind in (XPLUS, XMINUS):
            raise ValueError("only phi currents have inverses here")


Key = tuple  # (weights tuple, degrees tuple, uexps tuple)


class KState:
    """Sparse exact state: ``{key: (offset, poly)}``."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: Ring, entries: dict | None = None):
        self.ring = ring
        self.entries: dict[Key, tuple[int, fmpq_mpoly]] = entries if entries is not None else {}

    def copy(self) -> "KState":
        return KState(self.ring, dict(self.entries))

    def add_entry(self, key: Key, off: int, poly: fmpq_mpoly) -> None:
        if poly.is_zero():
            return
        cur = self.entries.get(key)
        if cur is None:
            self.entries[key] = (off, poly)
            return
        o0, p0 = cur
        if o0 == off:
            s = p0 + poly
            o = off
        elif o0 > off:
            s = p0 + poly * self.ring.vpow(o0 - off)
            o = o0
        else:
            s = p0 * self.ring.vpow(off - o0) + poly
            o = off
        if s.is_zero():
            del self.entries[key]
        else:
            self.entries[key] = (o, s)

    def iadd(self, other: "KState", scalar: tuple[int, fmpq_mpoly] | None = None) -> None:
        for key, (o, p) in other.entries.items():
            if scalar is not None:
                so, sp = scalar
                self.add_entry(key, o + so, p * sp)
            else:
                self.add_entry(key, o, p)

    def is_zero(self) -> bool:
        return all(p.is_zero() for _, p in self.entries.values())

    def size(self) -> int:
        return sum(len(p) for _, p in self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)


def field_range(spec: FieldSpec, beta: Weight, deg: int) -> tuple[int, int | None]:
    """Exponent range outside which the field's coefficients vanish on the component."""
    if spec.kind == XPLUS:
        return spec.mode_shift + pairing(beta, ALPHA[spec.color]) - deg, None
    if spec.kind == XMINUS:
        return spec.mode_shift - pairing(beta, ALPHA[spec.color]) - deg, None
    if spec.kind == PHIPLUS:
        return -deg, 0
    return 0, None


class Engine:
    """Applies currents to KStates."""

    def __init__(self, ring: Ring, cocycle: CocycleTable = TRIVIAL_COCYCLE):
        self.ring = ring
        self.cocycle = cocycle

    def state_range(self, state: KState, spec: FieldSpec) -> tuple[int, int | None]:
        lo: int | None = None
        hi: int | None = -10 ** 9
        for (betas, degs, _), _e in state.entries.items():
            l, h = field_range(spec, betas[spec.leg], degs[spec.leg])
            lo = l if lo is None else min(lo, l)
            if h is None or hi is None:
                hi = None
            else:
                hi = max(hi, h)
        if lo is None:
            return 0, -1
        return lo, hi

    def apply(self, state: KState, spec: FieldSpec, ks: Iterable[int]) -> dict[int, KState]:
        """``{k: coefficient of z^k of spec applied to state}`` (zero results omitted)."""
        ks = sorted(set(ks))
        ring = self.ring
        out: dict[int, KState] = {}
        leg = spec.leg
        i = spec.color
        for (betas, degs, uexps), (off, poly) in state.entries.items():
            beta = betas[leg]
            deg = degs[leg]
            p = pairing(beta, ALPHA[i])
            if spec.kind in (XPLUS, XMINUS):
                plus = spec.kind == XPLUS
                lat = p if plus else -p
                # coefficient a of y^s X(y)  <->  Gamma exponent a - s - lat
                base = spec.mode_shift + lat
                gks = [k - base for k in ks]
                lo = -deg
                gks = [g for g in gks if g >= lo]
                if not gks:
                    continue
                fam = GAMMA_PLUS if plus else GAMMA_MINUS
                res = ring.vertex_coefficients(fam, fam, leg, i, poly, deg, gks)
                step = ALPHA[i] if plus else -ALPHA[i]
                sign = self.cocycle(step, beta)
                nb = list(betas)
                nb[leg] = beta + step
                nb = tuple(nb)
                for g, (extra, q) in res.items():
                    k = g + base
                    nd = list(degs)
                    nd[leg] = deg + g
                    if sign < 0:
                        q = -q
                    self._emit(out, spec, k, (nb, tuple(nd), uexps), off + extra, q)
            else:
                if spec.kind == PHIPLUS:
                    fam_ann, fam_cre = (PHI_PLUS_INV if spec.inverse else PHI_PLUS), None
                    lat_off = 2 * p if spec.inverse else -2 * p
                    kk = [k for k in ks if -deg <= k <= 0]
                else:
                    fam_ann, fam_cre = None, (PHI_MINUS_INV if spec.inverse else PHI_MINUS)
                    lat_off = -2 * p if spec.inverse else 2 * p
                    kk = [k for k in ks if k >= 0]
                if not kk:
                    continue
                res = ring.vertex_coefficients(fam_ann, fam_cre, leg, i, poly, deg, kk)
                for k, (extra, q) in res.items():
                    nd = list(degs)
                    nd[leg] = deg + k
                    self._emit(out, spec, k, (betas, tuple(nd), uexps), off + extra + lat_off, q)
        return out

    def _emit(self, out: dict[int, KState], spec: FieldSpec, k: int, key: Key, off: int, poly: fmpq_mpoly) -> None:
        # z -> v^t u^e z multiplies the z^k coefficient by v^(t k) u^(e k)
        if spec.vshift:
            off -= spec.vshift * k
        if spec.uexp:
            betas, degs, uexps = key
            ue = spec.uexp
            if len(ue) > len(uexps):
                raise ValueError("field carries more coproduct parameters than the state")
            key = (betas, degs, tuple(a + (ue[n] * k if n < len(ue) else 0) for n, a in enumerate(uexps)))
        st = out.get(k)
        if st is None:
            st = out[k] = KState(self.ring)
        st.add_entry(key, off, poly)


@dataclass(frozen=True, eq=True, unsafe_hash=False)
class Composite:
    """A sum of products of currents living on distinct tensor legs."""

    terms: tuple[tuple[FieldSpec, ...], ...]

    def __hash__(self) -> int:
        try:
            return self._hash
        except AttributeError:
            h = hash(self.terms)
            object.__setattr__(self, "_hash", h)
            return h

    @classmethod
    def single(cls, spec: FieldSpec) -> "Composite":
        return cls(((spec,),))

    def rescaled(self, vshift: int) -> "Composite":
        """Argument ``z -> v^vshift z`` on every constituent."""
        from dataclasses import replace
        return Composite(tuple(tuple(replace(s, vshift=s.vshift + vshift) for s in t) for t in self.terms))


def apply_composite(engine: Engine, state: KState, comp: Composite, ks: Iterable[int]) -> dict[int, KState]:
    """Coefficients of a composite current; each leg split is a finite convolution."""
    ks = sorted(set(ks))
    if not ks:
        return {}
    kmin, kmax = ks[0], ks[-1]
    wanted = set(ks)
    out: dict[int, KState] = {}

    def merge(k: int, st: KState) -> None:
        cur = out.get(k)
        if cur is None:
            out[k] = st.copy()
        else:
            cur.iadd(st)

    for term in comp.terms:
        if len(term) == 1:
            for k, st in engine.apply(state, term[0], ks).items():
                merge(k, st)
            continue
        partial: dict[int, KState] = {0: state}
        for idx, spec in enumerate(term):
            rest = term[idx + 1:]
            new: dict[int, KState] = {}
            for s, st in partial.items():
                lo_r, hi_r = 0, 0
                for r in rest:
                    lo, hi = engine.state_range(st, r)
                    lo_r += lo
                    hi_r = None if (hi is None or hi_r is None) else hi_r + hi
                lo_e, hi_e = engine.state_range(st, spec)
                e_lo = lo_e if hi_r is None else max(lo_e, kmin - s - hi_r)
                e_hi = kmax - s - lo_r
                if hi_e is not None:
                    e_hi = min(e_hi, hi_e)
                if e_lo > e_hi:
                    continue
                for e, st2 in engine.apply(st, spec, range(e_lo, e_hi + 1)).items():
                    cur = new.get(s + e)
                    if cur is None:
                        new[s + e] = st2
                    else:
                        cur.iadd(st2)
            partial = new
        for k, st in partial.items():
            if k in wanted and not st.is_zero():
                merge(k, st)
    return {k: st for k, st in out.items() if not st.is_zero()}


class ProductCache:
    """Memoized coefficients of ordered products of composites applied to one state.

    Products sharing a right-hand factor sequence share the intermediate states.
    """

    def __init__(self, engine: Engine, state: KState):
        self.engine = engine
        self.memo: dict[tuple, KState | None] = {((), ()): state}

    def fill(self, needs: Mapping[tuple[Composite, ...], Iterable[tuple[int, ...]]]) -> dict[tuple, KState | None]:
        out: dict[tuple, KState | None] = {}
        memo = self.memo
        for factors, exps_iter in needs.items():
            exps_set = set(exps_iter)
            n = len(factors)
            for level in range(1, n + 1):
                pos = n - level
                spec = factors[pos]
                fkey = factors[pos:]
                pkey = factors[pos + 1:]
                groups: dict[tuple[int, ...], set[int]] = {}
                for e in exps_set:
                    groups.setdefault(e[pos + 1:], set()).add(e[pos])
                for suf in sorted(groups):
                    parent = memo.get((pkey, suf))
                    if parent is None:
                        continue
                    missing = sorted(k for k in groups[suf] if (fkey, (k,) + suf) not in memo)
                    if not missing:
                        continue
                    res = apply_composite(self.engine, parent, spec, missing)
                    for k in missing:
                        memo[(fkey, (k,) + suf)] = res.get(k)
            for e in exps_set:
                out[(factors, e)] = memo.get((factors, e))
        return out
