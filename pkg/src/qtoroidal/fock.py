"""The Fock space: polynomials in the creation modes h_{i,-n} tensored with the
twisted group algebra of the root lattice, at central charge 1."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from qtoroidal.lattice import ALPHA, CARTAN, Weight, pairing, parse_weight
from qtoroidal.scalars import ONE, ZERO, Scalar, parse_scalar, qint, render_scalar

__all__ = [
    "FockBasisVector",
    "FockState",
    "heisenberg_constant",
    "apply_h",
    "colored_partitions",
    "enumerate_basis",
    "grade",
    "parse_basis_vector",
    "parse_state",
]

Part = tuple[int, int]  # (color, depth)


@dataclass(frozen=True, order=True)
class FockBasisVector:
    """A monomial ``prod h_{i,-n}`` tensored with ``e_beta``.

    ``partition`` is kept sorted (color-major, depth-minor) so equality is structural.
    """

    partition: tuple[Part, ...] = ()
    beta: Weight = field(default_factory=Weight)

    def __post_init__(self):
        parts = tuple(sorted(self.partition))
        for c, n in parts:
            if c not in (0, 1) or n < 1:
                raise ValueError(f"invalid part {(c, n)}")
        object.__setattr__(self, "partition", parts)

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.partition)

    def multiplicities(self) -> Counter:
        return Counter(self.partition)

    def with_partition(self, parts: Iterable[Part]) -> "FockBasisVector":
        return FockBasisVector(tuple(parts), self.beta)

    def render(self) -> str:
        items = []
        for (c, n), k in sorted(self.multiplicities().items()):
            items.append(f"h[{c},-{n}]" + (f"^{k}" if k > 1 else ""))
        items.append(f"e{self.beta.render()}")
        return " ".join(items)

    def __str__(self) -> str:
        return self.render()


def grade(v: FockBasisVector) -> tuple[int, Weight]:
    return v.degree, v.beta


_PART_RE = re.compile(r"h\[\s*([01])\s*,\s*-\s*(\d+)\s*\](?:\^(\d+))?")


def parse_basis_vector(text: str) -> FockBasisVector:
    """Parse ``"h[0,-1]^2 h[1,-2] e(1,0)"``; a missing ``e(..)`` means ``e(0,0)``."""
    text = text.strip()
    parts: list[Part] = []
    beta = Weight()
    for tok in text.split():
        if tok.startswith("e("):
            beta = parse_weight(tok)
            continue
        if tok in ("1", "vac"):
            continue
        m = _PART_RE.fullmatch(tok)
        if not m:
            raise ValueError(f"cannot parse Fock monomial token {tok!r}")
        k = int(m.group(3)) if m.group(3) else 1
        parts.extend([(int(m.group(1)), int(m.group(2)))] * k)
    return FockBasisVector(tuple(parts), beta)


class FockState:
    """A finite Scalar-linear combination of basis vectors."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[FockBasisVector, Scalar] | None = None):
        self._terms: dict[FockBasisVector, Scalar] = {}
        if terms:
            for b, c in terms.items():
                c = c if isinstance(c, Scalar) else Scalar.from_int(c)
                if not c.is_zero():
                    self._terms[b] = c

    @classmethod
    def basis(cls, b: FockBasisVector, coeff: Scalar = ONE) -> "FockState":
        return cls({b: coeff})

    @classmethod
    def vacuum(cls, beta: Weight = Weight()) -> "FockState":
        return cls({FockBasisVector((), beta): ONE})

    def items(self) -> Iterator[tuple[FockBasisVector, Scalar]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, b: FockBasisVector) -> Scalar:
        return self._terms.get(b, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "FockState") -> "FockState":
        out = dict(self._terms)
        for b, c in other._terms.items():
            s = out.get(b)
            out[b] = c if s is None else s + c
        return FockState(out)

    def __neg__(self) -> "FockState":
        return FockState({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "FockState") -> "FockState":
        return self + (-other)

    def scale(self, c) -> "FockState":
        c = c if isinstance(c, Scalar) else Scalar.from_int(c)
        return FockState({b: x * c for b, x in self._terms.items()})

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockState):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def weights(self) -> set[Weight]:
        return {b.beta for b in self._terms}

    def max_degree(self) -> int:
        return max((b.degree for b in self._terms), default=0)

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for b, c in self.items():
            if c.is_one():
                parts.append(b.render())
            else:
                parts.append(f"({render_scalar(c)}) {b.render()}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FockState({self.render()!r})"

    __str__ = render


def parse_state(text: str) -> FockState:
    """Parse a state rendered by :meth:`FockState.render`."""
    text = text.strip()
    if text == "0":
        return FockState()
    out = FockState()
    if text.startswith("-"):
        text = " - " + text[1:].lstrip()
    for sign, chunk in _split_top(text):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff = ONE if sign > 0 else -ONE
        if chunk.startswith("("):
            depth = 0
            for idx, ch in enumerate(chunk):
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0:
                    break
            coeff = coeff * parse_scalar(chunk[1:idx])
            chunk = chunk[idx + 1:]
        out = out + FockState.basis(parse_basis_vector(chunk), coeff)
    return out


def _split_top(text: str) -> list[tuple[int, str]]:
    """Split at top-level `` + `` and `` - ``, keeping each term's sign."""
    parts, depth, cur, sign = [], 0, [], 1
    i = 0
    while i < len(text):
        ch = text[i]
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and text[i:i + 3] in (" + ", " - "):
            parts.append((sign, "".join(cur)))
            sign = 1 if text[i + 1] == "+" else -1
            cur = []
            i += 3
            continue
        cur.append(ch)
        i += 1
    parts.append((sign, "".join(cur)))
    return parts


@lru_cache(maxsize=None)
def heisenberg_constant(i: int, j: int, m: int) -> Scalar:
    """``[h_{i,m}, h_{j,-m}] = (1/m) [m a_ij]_q [m]_q`` at central charge 1."""
    return qint(m * CARTAN[i][j]) * qint(m) * Scalar.from_int(Fraction(1, m))


def apply_h(i: int, m: int, s: FockState) -> FockState:
    """Action of ``h_{i,m}`` on a state."""
    out: dict[FockBasisVector, Scalar] = {}

    def add(b: FockBasisVector, c: Scalar) -> None:
        prev = out.get(b)
        out[b] = c if prev is None else prev + c

    for b, c in s._terms.items():
        if m < 0:
            add(b.with_partition(b.partition + ((i, -m),)), c)
        elif m == 0:
            k = pairing(b.beta, ALPHA[i])
            if k:
                add(b, c * k)
        else:
            mult = b.multiplicities()
            for (j, n), k in mult.items():
                if n != m:
                    continue
                parts = list(b.partition)
                parts.remove((j, n))
                add(b.with_partition(parts), c * heisenberg_constant(i, j, m) * k)
    return FockState(out)


def _partitions(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


def colored_partitions(n: int) -> list[tuple[Part, ...]]:
    """All two-colored partitions of ``n`` in canonical sorted form."""
    out = set()
    for k in range(n + 1):
        for p0 in _partitions(k, k):
            for p1 in _partitions(n - k, n - k):
                out.add(tuple(sorted([(0, x) for x in p0] + [(1, x) for x in p1])))
    return sorted(out)


def enumerate_basis(max_degree: int, weight_radius: int) -> list[FockBasisVector]:
    """Every basis vector with degree <= max_degree and |m0|, |m1| <= weight_radius."""
    if max_degree < 0 or weight_radius < 0:
        raise ValueError("bounds must be non-negative")
    weights = [Weight(a, b) for a in range(-weight_radius, weight_radius + 1)
               for b in range(-weight_radius, weight_radius + 1)]
    out = []
    for d in range(max_degree + 1):
        for part in colored_partitions(d):
            for w in weights:
                out.append(FockBasisVector(part, w))
    return out
