"""Sparse multivariate Laurent polynomials over :class:`Scalar`.

Monomials are stored as sorted tuples of ``(variable, exponent)`` pairs, so
a polynomial only pays for the variables it actually uses.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from qtoroidal._expr import parse_expression
from qtoroidal.scalars import ONE, ZERO, Scalar, parse_scalar, render_scalar

__all__ = ["MultiPoly", "SeriesExpansion", "expand_rational", "parse_mpoly", "Monomial"]

Monomial = tuple  # tuple[tuple[str, int], ...], sorted by variable name


def _mono(exps: Mapping[str, int]) -> Monomial:
    return tuple(sorted((sys.intern(k), e) for k, e in exps.items() if e != 0))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        d[k] = d.get(k, 0) + e
    return _mono(d)


def _as_scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar.from_int(c)


class MultiPoly:
    """A finitely supported Laurent polynomial in named variables."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        self._terms: dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    self._terms[m] = c

    # constructors
    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({(): _as_scalar(c)})

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "MultiPoly":
        return cls({_mono({name: exponent}): ONE})

    @classmethod
    def term(cls, coeff, exps: Mapping[str, int]) -> "MultiPoly":
        return cls({_mono(exps): _as_scalar(coeff)})

    # inspection
    def terms(self) -> Iterator[tuple[Monomial, Scalar]]:
        return iter(self._terms.items())

    def coefficient_of(self, exps: Mapping[str, int]) -> Scalar:
        return self._terms.get(_mono(exps), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set[str]:
        return {k for m in self._terms for k, _ in m}

    def degree(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    # arithmetic
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (Scalar, int, Fraction)):
            return MultiPoly.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            s = _as_scalar(other)
            if s.is_zero():
                return MultiPoly()
            return MultiPoly._raw({m: c * s for m, c in self._terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Scalar] = {}
        for ma, ca in self._terms.items():
            for mb, cb in o._terms.items():
                m = _mono_mul(ma, mb)
                s = out.get(m)
                p = ca * cb
                out[m] = p if s is None else s + p
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (m, c), = self._terms.items()
            return MultiPoly._raw({tuple((k, e * n) for k, e in m): c ** n})
        acc = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    @classmethod
    def _raw(cls, terms: dict[Monomial, Scalar]) -> "MultiPoly":
        p = cls.__new__(cls)
        p._terms = terms
        return p

    # structural operations
    def subs(self, name: str, coeff, target: str | None = None, exponent: int = 1) -> "MultiPoly":
        """Substitute ``name -> coeff * target**exponent`` (exponent in {1, -1}).

        With ``target`` None the variable is replaced by the scalar ``coeff``.
        """
        coeff = _as_scalar(coeff)
        acc: dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.pop(name, 0)
            if e == 0:
                key = m
                val = c
            else:
                val = c * coeff ** e
                if target is not None:
                    d[target] = d.get(target, 0) + exponent * e
                key = _mono(d)
            s = acc.get(key)
            acc[key] = val if s is None else s + val
        return MultiPoly(acc)

    def substitute(self, mapping: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomials (non-negative exponents
        only, or monomials for negative exponents)."""
        out = MultiPoly()
        for m, c in self._terms.items():
            t = MultiPoly.const(c)
            for k, e in m:
                t = t * (mapping[k] ** e if k in mapping else MultiPoly.var(k, e))
            out = out + t
        return out

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        acc: dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            d: dict[str, int] = {}
            for k, e in m:
                k2 = mapping.get(k, k)
                d[k2] = d.get(k2, 0) + e
            key = _mono(d)
            s = acc.get(key)
            acc[key] = c if s is None else s + c
        return MultiPoly(acc)

    def coefficient(self, exps: Mapping[str, int]) -> "MultiPoly":
        """Coefficient of the given partial monomial, as a polynomial in the other variables."""
        names = set(exps)
        out: dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            d = dict(m)
            if all(d.get(k, 0) == e for k, e in exps.items()):
                rest = tuple((k, e) for k, e in m if k not in names)
                out[rest] = c
        return MultiPoly(out)

    def map_coefficients(self, f) -> "MultiPoly":
        return MultiPoly({m: f(c) for m, c in self._terms.items()})

    def evaluate_q_at_one(self) -> dict[Monomial, Fraction]:
        return {m: c.evaluate(1) for m, c in self._terms.items()}

    # rendering
    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        names = sorted(self.variables())
        def key(item):
            d = dict(item[0])
            return tuple(-d.get(k, 0) for k in names)
        return sorted(self._terms.items(), key=key)

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(k if e == 1 else f"{k}^{e}" for k, e in m)
            cs = render_scalar(c)
            if not mono:
                body = cs
            elif c.is_one():
                body = mono
            elif (-c).is_one():
                body = f"-{mono}"
            else:
                body = f"({cs})*{mono}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r})"

    __str__ = render


def parse_mpoly(text: str) -> MultiPoly:
    """Parse the rendering grammar; ``q`` and ``v`` are scalars, other names are variables."""

    def atom(name: str) -> MultiPoly:
        if name in ("q", "v"):
            return MultiPoly.const(parse_scalar(name))
        return MultiPoly.var(name)

    result = parse_expression(text, lambda n: _Div(atom(n)), lambda f: _Div(MultiPoly.const(f)))
    return result.value


class _Div:
    """Parser-side wrapper allowing division by scalar polynomials."""

    __slots__ = ("value",)

    def __init__(self, value: MultiPoly):
        self.value = value

    def __add__(self, o):
        return _Div(self.value + o.value)

    def __sub__(self, o):
        return _Div(self.value - o.value)

    def __mul__(self, o):
        return _Div(self.value * o.value)

    def __neg__(self):
        return _Div(-self.value)

    def __truediv__(self, o):
        if o.value.variables():
            if len(o.value) == 1:
                return _Div(self.value * o.value ** -1)
            raise ValueError("division by a non-monomial polynomial")
        c = o.value.coefficient_of({})
        return _Div(self.value * c.inverse())

    def __pow__(self, n):
        return _Div(self.value ** n)


@dataclass(frozen=True)
class SeriesExpansion:
    """Truncated Taylor expansion ``c_0 + c_1 x + ... + c_N x^N``."""

    variable: str
    order: int
    coeffs: tuple[Scalar, ...]

    def as_mpoly(self) -> MultiPoly:
        return MultiPoly({_mono({self.variable: k}): c for k, c in enumerate(self.coeffs)})

    def __mul__(self, other: "SeriesExpansion") -> "SeriesExpansion":
        if self.variable != other.variable:
            raise ValueError("series in different variables")
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = ZERO
            for j in range(k + 1):
                acc = acc + self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return SeriesExpansion(self.variable, n, tuple(out))


def _univariate(p: MultiPoly, name: str) -> dict[int, Scalar]:
    out: dict[int, Scalar] = {}
    for m, c in p.terms():
        d = dict(m)
        if set(d) - {name}:
            raise ValueError(f"expected a polynomial in {name} only")
        e = d.get(name, 0)
        if e < 0:
            raise ValueError("negative exponent in series numerator/denominator")
        out[e] = c
    return out


def expand_rational(numer: MultiPoly, denom: MultiPoly, order: int, variable: str | None = None) -> SeriesExpansion:
    """Taylor expansion of ``numer/denom`` at 0 up to ``x**order``."""
    names = (numer.variables() | denom.variables())
    if variable is None:
        if len(names) > 1:
            raise ValueError("ambiguous expansion variable")
        variable = next(iter(names)) if names else "x"
    a = _univariate(numer, variable)
    b = _univariate(denom, variable)
    b0 = b.get(0, ZERO)
    if b0.is_zero():
        raise ZeroDivisionError("denominator has zero constant term")
    inv_b0 = b0.inverse()
    coeffs: list[Scalar] = []
    for k in range(order + 1):
        acc = a.get(k, ZERO)
        for j in range(1, k + 1):
            bj = b.get(j)
            if bj is not None:
                acc = acc - bj * coeffs[k - j]
        coeffs.append(acc * inv_b0)
    return SeriesExpansion(variable, order, tuple(coeffs))
