"""The rank-2 root lattice with Gram matrix [[2, -2], [-2, 2]] and its 2-cocycle."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "CARTAN",
    "Weight",
    "ALPHA",
    "DELTA",
    "pairing",
    "CocycleTable",
    "TRIVIAL_COCYCLE",
    "cocycle",
    "group_mult",
    "parse_weight",
]

CARTAN: tuple[tuple[int, int], tuple[int, int]] = ((2, -2), (-2, 2))


@dataclass(frozen=True, order=True)
class Weight:
    """``m0*alpha_0 + m1*alpha_1``."""

    m0: int = 0
    m1: int = 0

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.m0 + other.m0, self.m1 + other.m1)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.m0 - other.m0, self.m1 - other.m1)

    def __neg__(self) -> "Weight":
        return Weight(-self.m0, -self.m1)

    def __rmul__(self, k: int) -> "Weight":
        return Weight(k * self.m0, k * self.m1)

    def coord(self, i: int) -> int:
        return self.m1 if i else self.m0

    def norm(self) -> int:
        return pairing(self, self)

    def render(self) -> str:
        return f"({self.m0},{self.m1})"

    def __str__(self) -> str:
        return self.render()


ALPHA: tuple[Weight, Weight] = (Weight(1, 0), Weight(0, 1))
DELTA = Weight(1, 1)


def pairing(a: Weight, b: Weight) -> int:
    """The symmetric bilinear form with ``<alpha_i, alpha_j> = a_ij``."""
    return 2 * (a.m0 - a.m1) * (b.m0 - b.m1)


class CocycleTable:
    """A bimultiplicative sign function fixed by its values on basis pairs.

    ``values[i][j]`` is ``eps(alpha_i, alpha_j)``.  Bimultiplicativity makes the
    2-cocycle identity automatic.
    """

    __slots__ = ("values",)

    def __init__(self, values: tuple[tuple[int, int], tuple[int, int]] = ((1, 1), (1, 1))):
        for row in values:
            for x in row:
                if x not in (1, -1):
                    raise ValueError("cocycle values must be +1 or -1")
        self.values = (tuple(values[0]), tuple(values[1]))

    def __call__(self, a: Weight, b: Weight) -> int:
        ca = (a.m0, a.m1)
        cb = (b.m0, b.m1)
        sign = 1
        for i in range(2):
            for j in range(2):
                if self.values[i][j] == -1 and (ca[i] * cb[j]) % 2:
                    sign = -sign
        return sign

    def is_trivial(self) -> bool:
        return self.values == ((1, 1), (1, 1))

    def commutator_ok(self, a: Weight, b: Weight) -> bool:
        """Check ``eps(a,b) eps(b,a)^{-1} = (-1)^{<a,b>}``."""
        return self(a, b) * self(b, a) == (-1) ** (pairing(a, b) % 2)

    def __eq__(self, other) -> bool:
        return isinstance(other, CocycleTable) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"CocycleTable({self.values})"


TRIVIAL_COCYCLE = CocycleTable()


def cocycle(a: Weight, b: Weight, table: CocycleTable = TRIVIAL_COCYCLE) -> int:
    return table(a, b)


def group_mult(a: Weight, b: Weight, table: CocycleTable = TRIVIAL_COCYCLE) -> tuple[int, Weight]:
    """``e_a * e_b = eps(a, b) e_{a+b}``."""
    return table(a, b), a + b


_WEIGHT_RE = re.compile(r"^\s*(?:e)?\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def parse_weight(text: str) -> Weight:
    m = _WEIGHT_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse weight {text!r}")
    return Weight(int(m.group(1)), int(m.group(2)))


SignFunction = Callable[[Weight, Weight], int]
