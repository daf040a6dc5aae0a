"""The toroidal Lie algebra of sl2 and its Moody-Rao-Yokonuma presentation.

Elements are finite rational combinations of loop symbols ``x (x) t1^m1 t2^m2``
(``x`` one of ``e+``, ``e-``, ``a`` for the Cartan element) and central symbols
``t1^m1 t2^m2 k_i``.  Central symbols are kept reduced modulo
``m1 k1 + m2 k2 = 0`` at every bidegree:

* ``(0, 0)``: both ``k1`` and ``k2`` survive;
* ``m1 != 0``: ``k1`` is rewritten as ``-(m2/m1) k2``;
* ``m1 == 0, m2 != 0``: ``k2`` vanishes and ``k1`` is kept.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

__all__ = [
    "TorElement",
    "loop",
    "central",
    "bracket",
    "mry_generators",
    "Check",
    "verify_mry",
    "calibrate_center",
    "jacobi_sample",
    "antisymmetry_sample",
    "remark_nonvanishing",
    "CARTAN",
]

CARTAN = ((2, -2), (-2, 2))

# sl2 structure: [e+, e-] = a, [a, e+-] = +-2 e+-
_SL2 = {
    ("e+", "e-"): {"a": 1}, ("e-", "e+"): {"a": -1},
    ("a", "e+"): {"e+": 2}, ("e+", "a"): {"e+": -2},
    ("a", "e-"): {"e-": -2}, ("e-", "a"): {"e-": 2},
}
# trace form of the defining representation
_FORM = {("e+", "e-"): 1, ("e-", "e+"): 1, ("a", "a"): 2}

Key = tuple  # ("L", x, m1, m2) or ("K", i, m1, m2)


def _reduce_central(i: int, m1: int, m2: int, c: Fraction) -> Iterator[tuple[Key, Fraction]]:
    if m1 == 0 and m2 == 0:
        yield ("K", i, 0, 0), c
    elif m1 != 0:
        yield ("K", 2, m1, m2), c if i == 2 else -c * Fraction(m2, m1)
    elif i == 1:
        yield ("K", 1, 0, m2), c


class TorElement:
    """An element of the toroidal algebra, always in reduced form."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict[Key, Fraction] | None = None):
        self._c: dict[Key, Fraction] = {}
        for k, v in (coeffs or {}).items():
            self._add(k, Fraction(v))

    def _add(self, key: Key, c: Fraction) -> None:
        parts = _reduce_central(*key[1:], c) if key[0] == "K" else [(key, c)]
        for k, v in parts:
            s = self._c.get(k, 0) + v
            if s:
                self._c[k] = s
            else:
                self._c.pop(k, None)

    def items(self):
        return sorted(self._c.items(), key=lambda kv: (kv[0][0], str(kv[0][1]), kv[0][2], kv[0][3]))

    def is_zero(self) -> bool:
        return not self._c

    def is_central(self) -> bool:
        return all(k[0] == "K" for k in self._c)

    def __add__(self, other: "TorElement") -> "TorElement":
        out = TorElement(self._c)
        for k, v in other._c.items():
            out._add(k, v)
        return out

    def __neg__(self) -> "TorElement":
        return TorElement({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "TorElement") -> "TorElement":
        return self + (-other)

    def __rmul__(self, c) -> "TorElement":
        c = Fraction(c)
        return TorElement({k: c * v for k, v in self._c.items()}) if c else TorElement()

    def __eq__(self, other) -> bool:
        return isinstance(other, TorElement) and self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def render(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (kind, x, m1, m2), v in self.items():
            sym = f"{x}({m1},{m2})" if kind == "L" else f"K{x}({m1},{m2})"
            parts.append(sym if v == 1 else f"{v}*{sym}")
        return " + ".join(parts)

    __repr__ = render


def loop(x: str, m1: int, m2: int, c=1) -> TorElement:
    if x not in ("e+", "e-", "a"):
        raise ValueError(f"unknown loop symbol {x!r}")
    return TorElement({("L", x, m1, m2): c})


def central(i: int, m1: int, m2: int, c=1) -> TorElement:
    if i not in (1, 2):
        raise ValueError("central direction must be 1 or 2")
    return TorElement({("K", i, m1, m2): c})


def bracket(a: TorElement, b: TorElement) -> TorElement:
    out = TorElement()
    for (ka, xa, a1, a2), ca in a._c.items():
        if ka == "K":
            continue
        for (kb, xb, b1, b2), cb in b._c.items():
            if kb == "K":
                continue
            c = ca * cb
            n1, n2 = a1 + b1, a2 + b2
            for y, s in _SL2.get((xa, xb), {}).items():
                out._add(("L", y, n1, n2), c * s)
            form = _FORM.get((xa, xb), 0)
            if form:
                out._add(("K", 1, n1, n2), c * form * a1)
                out._add(("K", 2, n1, n2), c * form * a2)
    return out


# generators ------------------------------------------------------------------
def mry_generators() -> dict[str, Callable[..., TorElement]]:
    """``alpha(i, m)``, ``e(i, m, sign)`` and ``k1`` of the presentation."""

    def alpha(i: int, m: int) -> TorElement:
        return loop("a", 0, m) if i == 1 else central(1, 0, m) - loop("a", 0, m)

    def e(i: int, m: int, sign: int) -> TorElement:
        if i == 1:
            return loop("e+" if sign > 0 else "e-", 0, m)
        return loop("e-" if sign > 0 else "e+", sign, m)

    return {"alpha": alpha, "e": e, "k1": lambda: central(1, 0, 0)}


# checks ----------------------------------------------------------------------
@dataclass
class Check:
    relation: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    calibration: str | None = None
    informational: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, label: str, got: TorElement, want: TorElement | None = None) -> None:
        self.checked += 1
        diff = got if want is None else got - want
        if not diff.is_zero():
            self.failures.append(f"{label}: {diff.render()}")


def calibrate_center() -> TorElement:
    """The degree-(0,0) central element the loop brackets actually produce.

    ``[alpha_{1,1}, alpha_{1,-1}] = a_11 * K`` determines ``K``.
    """
    g = mry_generators()
    got = bracket(g["alpha"](1, 1), g["alpha"](1, -1))
    if not got.is_central():
        raise AssertionError("zero-mode bracket left a loop part")
    return Fraction(1, CARTAN[1][1]) * got


def _label(k: TorElement) -> str:
    (key, c), = k.items()
    if c != 1:
        raise AssertionError(f"unexpected normalization {k.render()}")
    return f"K{key[1]}({key[2]},{key[3]})"


def _window(bound: int, n: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(-bound, bound + 1), repeat=n)


def verify_mry(index_bound: int = 3) -> list[Check]:
    """(L1)-(L7) on ``|indices| <= index_bound``, central element calibrated."""
    if index_bound < 1:
        raise ValueError("index_bound must be at least 1")
    g = mry_generators()
    al, e = g["alpha"], g["e"]
    K = calibrate_center()
    cal = _label(K)
    B = index_bound
    checks = {f"L{n}": Check(f"L{n}", calibration=cal if n <= 3 else None) for n in range(1, 8)}
    pairs = [(i, j) for i in (0, 1) for j in (0, 1)]
    zero = TorElement()

    L1 = checks["L1"]
    L1.expect("[K, alpha]", bracket(K, al(0, 1)))
    for i, j in pairs:
        for m, n in _window(B, 2):
            want = (CARTAN[i][j] * m if m + n == 0 else 0) * K
            L1.expect(f"[alpha{i}({m}), alpha{j}({n})]", bracket(al(i, m), al(j, n)), want)
            L1.expect(f"[K, e{j}+({n})]", bracket(K, e(j, n, 1)))
            for sg in (1, -1):
                checks["L2"].expect(f"[alpha{i}({m}), e{j}{'+' if sg > 0 else '-'}({n})]",
                                    bracket(al(i, m), e(j, n, sg)), sg * CARTAN[i][j] * e(j, m + n, sg))
            want = zero
            if i == j:
                want = al(j, m + n) + (m if m + n == 0 else 0) * K
            checks["L3"].expect(f"[e{i}+({m}), e{j}-({n})]", bracket(e(i, m, 1), e(j, n, -1)), want)

    def cur2(i, j, sg, m, n, powers):
        """Coefficient of z^-m w^-n in (z-w)^p [e_i(z), e_j(w)]; powers = binomial row."""
        out = TorElement()
        p = len(powers) - 1
        for r, c in enumerate(powers):
            # (z - w)^p = sum_r c_r z^(p-r) (-w)^r
            out = out + ((-1) ** r * c) * bracket(e(i, m + p - r, sg), e(j, n + r, sg))
        return out

    for sg in (1, -1):
        s = "+" if sg > 0 else "-"
        for i, j in pairs:
            for m, n in _window(B, 2):
                if i == j:
                    checks["L4"].expect(f"e{i}{s} ({m},{n})", cur2(i, j, sg, m, n, (1, 1)))
                else:
                    checks["L5"].expect(f"e{i}{s}e{j}{s} ({m},{n})", cur2(i, j, sg, m, n, (1, 2, 1)))
            if i == j:
                continue
            for l, m, n in _window(B, 3):
                # (z2 - w)[e_i(z1), [e_i(z2), e_j(w)]]
                inner = bracket(e(i, m + 1, sg), e(j, n, sg)) - bracket(e(i, m, sg), e(j, n + 1, sg))
                checks["L6"].expect(f"e{i}{s}e{j}{s} ({l},{m},{n})", bracket(e(i, l, sg), inner))
            for a, b, c, n in _window(B, 4):
                val = bracket(e(i, a, sg), bracket(e(i, b, sg), bracket(e(i, c, sg), e(j, n, sg))))
                checks["L7"].expect(f"e{i}{s}e{j}{s} ({a},{b},{c},{n})", val)
    return list(checks.values())


def _basis_sample(rng: random.Random, bound: int) -> TorElement:
    if rng.random() < 0.85:
        return loop(rng.choice(("e+", "e-", "a")), rng.randint(-bound, bound), rng.randint(-bound, bound))
    return central(rng.choice((1, 2)), rng.randint(-bound, bound), rng.randint(-bound, bound))


def jacobi_sample(n: int = 200, bound: int = 3, seed: int = 0) -> Check:
    rng = random.Random(seed)
    chk = Check("Jacobi")
    for _ in range(n):
        x, y, z = (_basis_sample(rng, bound) for _ in range(3))
        val = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        chk.expect(f"({x.render()}, {y.render()}, {z.render()})", val)
    return chk


def antisymmetry_sample(n: int = 200, bound: int = 3, seed: int = 1) -> Check:
    rng = random.Random(seed)
    chk = Check("antisymmetry")
    for _ in range(n):
        x, y = _basis_sample(rng, bound), _basis_sample(rng, bound)
        chk.expect(f"({x.render()}, {y.render()})", bracket(x, y) + bracket(y, x))
    return chk


def _in_span(x: TorElement, pred: Callable[[int, int, int], bool]) -> bool:
    """Whether ``x`` lies in the span of reduced central symbols accepted by ``pred(i, m1, m2)``."""
    return all(kind == "K" and pred(i, m1, m2) for (kind, i, m1, m2), _c in x.items())


def _k1_symbol_nonzero(m1: int, m2: int) -> bool:
    # t1^m1 t2^m2 k1 is nonzero iff m1 == 0 or m2 != 0
    return m1 == 0 or m2 != 0


def remark_nonvanishing(bound: int = 3) -> list[Check]:
    """Components of ``(z - w)[e_0(z), e_1(w)]`` for both signs.

    Returns three checks: at least one component is nonzero; every component is
    central of t1-degree +-1; and, informationally, whether every component lies
    in the span of ``t1^m1 t2^{+-1} k1``.
    """
    g = mry_generators()
    e = g["e"]
    nonzero = Check("remark: nonzero")
    t1_span = Check("remark: components central of t1-degree +-1")
    t2_span = Check("remark: components in span t1^m t2^{+-1} k1", informational=True)
    found = 0
    for sg in (1, -1):
        s = "+" if sg > 0 else "-"
        for m, n in _window(bound, 2):
            comp = bracket(e(0, m + 1, sg), e(1, n, sg)) - bracket(e(0, m, sg), e(1, n + 1, sg))
            label = f"e0{s}e1{s} ({m},{n})"
            nonzero.checked += 1
            if comp.is_zero():
                continue
            found += 1
            t1_span.checked += 1
            if not _in_span(comp, lambda i, m1, m2: m1 in (1, -1)):
                t1_span.failures.append(f"{label}: {comp.render()}")
            t2_span.checked += 1
            # k2 at m1 != 0 equals -(m1/m2) k1 when m2 != 0
            ok = comp.is_central() and all(m2 in (1, -1) and _k1_symbol_nonzero(m1, m2)
                                           for (_k, _i, m1, m2), _c in comp.items())
            if not ok:
                t2_span.failures.append(f"{label}: {comp.render()}")
    if not found:
        nonzero.failures.append("every component vanishes")
    return [nonzero, t1_span, t2_span]
