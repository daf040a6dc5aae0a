"""A small recursive-descent parser shared by the text grammars.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/')? factor)*      # juxtaposition multiplies
    factor := ('-' | '+') factor | power
    power  := atom ('^' signed_int)?
    atom   := INT | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, TypeVar

T = TypeVar("T")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|/|\+|-|\(|\)))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        if m.group(1):
            out.append(("int", m.group(1)))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            out.append(("op", m.group(3)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_expression(text: str, atom: Callable[[str], T], number: Callable[[Fraction], T]) -> T:
    """Parse ``text`` into a ring element built from ``atom`` and ``number``."""
    toks = _tokenize(text)
    i = 0

    def peek() -> tuple[str, str] | None:
        return toks[i] if i < len(toks) else None

    def take() -> tuple[str, str]:
        nonlocal i
        if i >= len(toks):
            raise ValueError(f"unexpected end of input in {text!r}")
        t = toks[i]
        i += 1
        return t

    def expr():
        val = term()
        while (t := peek()) is not None and t[0] == "op" and t[1] in "+-":
            take()
            rhs = term()
            val = val + rhs if t[1] == "+" else val - rhs
        return val

    def starts_factor(t) -> bool:
        return t is not None and (t[0] in ("int", "name") or t == ("op", "("))

    def term():
        val = factor()
        while True:
            t = peek()
            if t is not None and t[0] == "op" and t[1] in "*/":
                take()
                rhs = factor()
                val = val * rhs if t[1] == "*" else val / rhs
            elif starts_factor(t):
                val = val * factor()
            else:
                return val

    def factor():
        t = peek()
        if t is not None and t[0] == "op" and t[1] in "+-":
            take()
            val = factor()
            return -val if t[1] == "-" else val
        return power()

    def power():
        base = atom_()
        t = peek()
        if t is not None and t == ("op", "^"):
            take()
            sign = 1
            s = peek()
            if s is not None and s[0] == "op" and s[1] in "+-":
                take()
                sign = -1 if s[1] == "-" else 1
            n = take()
            if n[0] != "int":
                raise ValueError(f"integer exponent expected in {text!r}")
            return base ** (sign * int(n[1]))
        return base

    def atom_():
        t = take()
        if t[0] == "int":
            return number(Fraction(int(t[1])))
        if t[0] == "name":
            return atom(t[1])
        if t == ("op", "("):
            val = expr()
            if take() != ("op", ")"):
                raise ValueError(f"missing ')' in {text!r}")
            return val
        raise ValueError(f"unexpected token {t[1]!r} in {text!r}")

    result = expr()
    if i != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return result
