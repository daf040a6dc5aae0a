"""Exact arithmetic in the rational function field Q(v), with q = v^2.

A :class:`Scalar` is a reduced fraction of integer polynomials in ``v``.
Canonical form: numerator and denominator coprime in Z[v], denominator
with positive leading coefficient.  Structural equality is therefore
mathematical equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from flint import fmpz_poly

from qtoroidal._expr import parse_expression

__all__ = [
    "Scalar",
    "ScalarDivisionByZero",
    "ScalarPoleError",
    "V",
    "Q",
    "ONE",
    "ZERO",
    "qint",
    "qfactorial",
    "qbinom",
    "qpow",
    "vpow",
    "eval_at_one",
    "parse_scalar",
]

Number = Union[int, Fraction]


class ScalarDivisionByZero(ZeroDivisionError):
    """Raised when dividing by the zero Scalar."""


class ScalarPoleError(ArithmeticError):
    """Raised when a Scalar is evaluated at a pole."""


def _poly(coeffs: Iterable[int]) -> fmpz_poly:
    return fmpz_poly(list(coeffs))


class Scalar:
    """An element of Q(v)."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num: fmpz_poly, den: fmpz_poly | None = None, *, _reduced: bool = False):
        if den is None:
            den = fmpz_poly([1])
        if den.is_zero():
            raise ScalarDivisionByZero("zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self._num = num
        self._den = den
        self._hash = None

    # construction helpers
    @classmethod
    def from_int(cls, n: Number) -> "Scalar":
        f = Fraction(n)
        return cls(fmpz_poly([f.numerator]), fmpz_poly([f.denominator]))

    @classmethod
    def monomial(cls, coeff: Number, exponent: int) -> "Scalar":
        """``coeff * v**exponent``."""
        f = Fraction(coeff)
        if f == 0:
            return ZERO
        num = [0] * max(exponent, 0) + [f.numerator]
        den = [0] * max(-exponent, 0) + [f.denominator]
        return cls(_poly(num), _poly(den))

    @classmethod
    def from_laurent(cls, terms: dict[int, Number]) -> "Scalar":
        """Build from ``{v_exponent: rational coefficient}``."""
        terms = {e: Fraction(c) for e, c in terms.items() if c != 0}
        if not terms:
            return ZERO
        low = min(terms)
        den_lcm = 1
        for c in terms.values():
            den_lcm = den_lcm * c.denominator // _gcd(den_lcm, c.denominator)
        coeffs = [0] * (max(terms) - low + 1)
        for e, c in terms.items():
            coeffs[e - low] = int(c * den_lcm)
        if low >= 0:
            return cls(_poly([0] * low + coeffs), _poly([den_lcm]))
        return cls(_poly(coeffs), _poly([0] * (-low) + [den_lcm]))

    # accessors
    @property
    def numerator(self) -> list[int]:
        return [int(c) for c in self._num.coeffs()]

    @property
    def denominator(self) -> list[int]:
        return [int(c) for c in self._den.coeffs()]

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_one(self) -> bool:
        return self._num == self._den

    def laurent_terms(self) -> dict[int, Fraction] | None:
        """Return ``{exponent: coefficient}`` if this is a Laurent polynomial, else None."""
        den = self.denominator
        shift = 0
        while den[shift] == 0:
            shift += 1
        if len(den) != shift + 1:
            return None
        scale = den[shift]
        out: dict[int, Fraction] = {}
        for e, c in enumerate(self.numerator):
            if c:
                out[e - shift] = Fraction(int(c), scale)
        return out

    def is_laurent(self) -> bool:
        return self.laurent_terms() is not None

    # arithmetic
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.from_int(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self._den == o._den:
            return Scalar(self._num + o._num, self._den)
        return Scalar(self._num * o._den + o._num * self._den, self._den * o._den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self._num, self._den, _reduced=True)

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
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self._num * o._num, self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ScalarDivisionByZero("inverse of zero Scalar")
        return Scalar(self._den, self._num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return Scalar(self._num ** n, self._den ** n, _reduced=True)

    # comparison
    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._num == o._num and self._den == o._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self.numerator), tuple(self.denominator)))
        return self._hash

    def cross_equal(self, other: "Scalar") -> bool:
        """Equality by cross-multiplication, independent of canonical form."""
        return self._num * other._den == other._num * self._den

    # evaluation / rendering
    def evaluate(self, value: Number) -> Fraction:
        x = Fraction(value)
        den = _eval(self.denominator, x)
        if den == 0:
            raise ScalarPoleError(f"pole at v={value}")
        return _eval(self.numerator, x) / den

    def __repr__(self) -> str:
        return f"Scalar({render_scalar(self)!r})"

    def __str__(self) -> str:
        return render_scalar(self)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _eval(coeffs: list[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _reduce(num: fmpz_poly, den: fmpz_poly) -> tuple[fmpz_poly, fmpz_poly]:
    if num.is_zero():
        return fmpz_poly([]), fmpz_poly([1])
    g = num.gcd(den)
    if not g.is_one():
        num = num / g
        den = den / g
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return num, den


ZERO = Scalar(fmpz_poly([]), fmpz_poly([1]), _reduced=True)
ONE = Scalar(fmpz_poly([1]), fmpz_poly([1]), _reduced=True)
V = Scalar(fmpz_poly([0, 1]), fmpz_poly([1]), _reduced=True)
Q = Scalar(fmpz_poly([0, 0, 1]), fmpz_poly([1]), _reduced=True)


def vpow(k: int) -> Scalar:
    """``v**k``."""
    return Scalar.monomial(1, k)


def qpow(k: int) -> Scalar:
    """``q**k`` (that is, ``v**(2k)``)."""
    return Scalar.monomial(1, 2 * k)


@lru_cache(maxsize=None)
def _qint_base(n: int, base: int) -> Scalar:
    # [n] in the variable q**base: sum of q**(base*(n-1-2k))
    if n == 0:
        return ZERO
    sign = 1 if n > 0 else -1
    m = abs(n)
    terms = {2 * base * (m - 1 - 2 * k): sign for k in range(m)}
    return Scalar.from_laurent(terms)


def qint(n: int, base: int = 1) -> Scalar:
    """The quantum integer ``[n]`` in the variable ``q**base``."""
    if base == 0:
        raise ValueError("base exponent must be nonzero")
    return _qint_base(n, base)


def qfactorial(n: int, base: int = 1) -> Scalar:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    acc = ONE
    for k in range(1, n + 1):
        acc = acc * qint(k, base)
    return acc


@lru_cache(maxsize=None)
def qbinom(s: int, k: int, base: int = 1) -> Scalar:
    """Gaussian binomial ``[s]!/([k]![s-k]!)`` in the variable ``q**base``."""
    if s < 0 or k < 0 or k > s:
        raise ValueError(f"qbinom requires 0 <= k <= s, got s={s}, k={k}")
    if base == 0:
        raise ValueError("base exponent must be nonzero")
    return qfactorial(s, base) / (qfactorial(k, base) * qfactorial(s - k, base))


def eval_at_one(a: Scalar) -> Fraction:
    """Specialize ``v -> 1`` (so ``q -> 1``)."""
    return a.evaluate(1)


# rendering -------------------------------------------------------------

def _render_laurent(terms: dict[int, Fraction], var: str, step: int) -> str:
    if not terms:
        return "0"
    parts: list[str] = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        k = e // step
        neg = c < 0
        mag = -c if neg else c
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def _render_poly(coeffs: list[int]) -> tuple[str, bool]:
    terms = {e: Fraction(c) for e, c in enumerate(coeffs) if c}
    even = all(e % 2 == 0 for e in terms)
    return _render_laurent(terms, "q" if even else "v", 2 if even else 1), even


def render_scalar(a: Scalar) -> str:
    """Render as a Laurent polynomial in q (or v), or as a fraction."""
    lt = a.laurent_terms()
    if lt is not None:
        if all(e % 2 == 0 for e in lt):
            return _render_laurent(lt, "q", 2)
        return _render_laurent(lt, "v", 1)
    num = {e: Fraction(c) for e, c in enumerate(a.numerator) if c}
    den = {e: Fraction(c) for e, c in enumerate(a.denominator) if c}
    even = all(e % 2 == 0 for e in list(num) + list(den))
    var, step = ("q", 2) if even else ("v", 1)
    return f"({_render_laurent(num, var, step)})/({_render_laurent(den, var, step)})"


Scalar.render = render_scalar  # type: ignore[attr-defined]


def _scalar_atom(name: str) -> Scalar:
    if name == "q":
        return Q
    if name == "v":
        return V
    raise ValueError(f"unknown symbol {name!r} in scalar expression")


def parse_scalar(text: str) -> Scalar:
    """Parse the rendering grammar (and ordinary arithmetic) in q and v."""
    return parse_expression(text, _scalar_atom, Scalar.from_int)
