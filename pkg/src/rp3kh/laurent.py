"""Integer Laurent polynomials in t and q.

Poincare polynomials, Euler characteristics and brackets all live here.
A one-variable polynomial in q is just a polynomial whose t-exponents are
all zero.
"""

from __future__ import annotations

import re
from collections import defaultdict
from typing import Iterable, Mapping


class Laurent:
    """Finitely supported map (t_exp, q_exp) -> nonzero int."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None):
        c: dict[tuple[int, int], int] = {}
        if coeffs:
            for key, v in coeffs.items():
                v = int(v)
                if v:
                    c[(int(key[0]), int(key[1]))] = v
        self._c = c

    @classmethod
    def const(cls, v: int) -> "Laurent":
        return cls({(0, 0): v})

    @classmethod
    def monomial(cls, t: int = 0, q: int = 0, c: int = 1) -> "Laurent":
        return cls({(t, q): c})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, int]]) -> "Laurent":
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for i, m, c in terms:
            acc[(i, m)] += c
        return cls(acc)

    @property
    def coeffs(self) -> dict[tuple[int, int], int]:
        return dict(self._c)

    def terms(self) -> list[tuple[int, int, int]]:
        return [(i, m, c) for (i, m), c in sorted(self._c.items())]

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self._c.get(key, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent.const(other)
        return isinstance(other, Laurent) and self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other) -> "Laurent":
        if isinstance(other, int):
            other = Laurent.const(other)
        acc = defaultdict(int, self._c)
        for k, v in other._c.items():
            acc[k] += v
        return Laurent(acc)

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent({k: -v for k, v in self._c.items()})

    def __sub__(self, other) -> "Laurent":
        if isinstance(other, int):
            other = Laurent.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Laurent":
        return (-self) + other

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, int):
            return Laurent({k: v * other for k, v in self._c.items()})
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for (a, b), u in self._c.items():
            for (c, d), v in other._c.items():
                acc[(a + c, b + d)] += u * v
        return Laurent(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Laurent":
        if e < 0:
            raise ValueError("negative powers are only defined for monomials")
        out = Laurent.const(1)
        for _ in range(e):
            out = out * self
        return out

    def at_t(self, t: int) -> "Laurent":
        """Substitute an integer for t; the result is a polynomial in q."""
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for (i, m), c in self._c.items():
            if i < 0 and t not in (1, -1):
                raise ValueError("t must be a unit to evaluate negative powers")
            acc[(0, m)] += c * t ** i if i >= 0 else c * t ** (-i)
        return Laurent(acc)

    def euler(self) -> "Laurent":
        return self.at_t(-1)

    def min_coefficient(self) -> int:
        return min(self._c.values(), default=0)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Laurent({format_poly(self)!r})"


def q_poly(coeffs: Mapping[int, int]) -> Laurent:
    return Laurent({(0, m): c for m, c in coeffs.items()})


Q = Laurent.monomial(q=1)
Q_INV = Laurent.monomial(q=-1)
T = Laurent.monomial(t=1)
QUANTUM_CIRCLE = Q + Q_INV


def _var(name: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return name
    return f"{name}^{e}"


def format_poly(p: Laurent) -> str:
    """Canonical text: ascending (t, q), unit coefficients omitted."""
    terms = p.terms()
    if not terms:
        return "0"
    out = []
    for idx, (i, m, c) in enumerate(terms):
        mono = " ".join(s for s in (_var("t", i), _var("q", m)) if s)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag} {mono}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


_TERM = re.compile(
    r"^(?:(\d+)\s*)?(?:t(?:\^(-?\d+))?)?\s*(?:q(?:\^(-?\d+))?)?$"
)


def parse_poly(text: str) -> Laurent:
    """Inverse of :func:`format_poly`."""
    s = text.strip()
    if s == "0":
        return Laurent()
    tokens = re.split(r"\s+([+-])\s+", s)
    signs = [1]
    parts = [tokens[0]]
    for k in range(1, len(tokens), 2):
        signs.append(1 if tokens[k] == "+" else -1)
        parts.append(tokens[k + 1])
    terms = []
    for sign, part in zip(signs, parts):
        part = part.strip()
        if part.startswith("-"):
            sign, part = -sign, part[1:]
        mt = _TERM.match(part)
        if not mt or not part:
            raise ValueError(f"cannot parse term {part!r}")
        coef = int(mt.group(1)) if mt.group(1) else 1
        has_t = "t" in part
        has_q = "q" in part
        i = int(mt.group(2)) if mt.group(2) else (1 if has_t else 0)
        m = int(mt.group(3)) if mt.group(3) else (1 if has_q else 0)
        terms.append((i, m, sign * coef))
    return Laurent.from_terms(terms)
