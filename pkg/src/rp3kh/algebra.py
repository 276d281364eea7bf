"""Graded F2 spaces, the Frobenius algebra V, and dyads.

A dyad is a pair of graded spaces ``V0``, ``V1`` with maps ``f: V0 -> V1``
and ``g: V1 -> V0`` of quantum degree -1 whose composites vanish.  It is the
coefficient data of the complexes built in :mod:`rp3kh.complex`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .laurent import Laurent


class DyadError(ValueError):
    pass


@dataclass(frozen=True)
class GradedSpaceF2:
    generators: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        gens = tuple((str(n), int(q)) for n, q in self.generators)
        object.__setattr__(self, "generators", gens)
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            raise DyadError(f"duplicate generator names in {names}")

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    @property
    def qdegs(self) -> np.ndarray:
        return np.array([q for _, q in self.generators], dtype=np.int64)

    def index(self, name: str) -> int:
        return self.names.index(name)


def qdim(space: GradedSpaceF2) -> Laurent:
    """Graded dimension, sum of q^deg over generators."""
    acc: dict[tuple[int, int], int] = {}
    for _, q in space.generators:
        acc[(0, q)] = acc.get((0, q), 0) + 1
    return Laurent(acc)


@dataclass(frozen=True, eq=False)
class LinearMapF2:
    """Matrix over F2, rows indexed by codomain generators."""

    domain: GradedSpaceF2
    codomain: GradedSpaceF2
    matrix: np.ndarray
    shift: int = -1

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.uint8).reshape(
            self.codomain.dim, self.domain.dim
        ) & 1
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, domain, codomain, shift=-1):
        return cls(domain, codomain, np.zeros((codomain.dim, domain.dim), np.uint8), shift)

    @classmethod
    def from_images(cls, domain, codomain, images: Mapping[str, Iterable[str]], shift=-1):
        m = np.zeros((codomain.dim, domain.dim), np.uint8)
        for src, targets in images.items():
            j = domain.index(src)
            for t in targets:
                m[codomain.index(t), j] ^= 1
        return cls(domain, codomain, m, shift)

    def images(self) -> dict[str, list[str]]:
        out = {}
        for j, src in enumerate(self.domain.names):
            tgt = [self.codomain.names[i] for i in np.flatnonzero(self.matrix[:, j])]
            if tgt:
                out[src] = tgt
        return out

    def degree_violations(self) -> list[tuple[str, str]]:
        src_q = self.domain.qdegs
        dst_q = self.codomain.qdegs
        bad = []
        for i, j in zip(*np.nonzero(self.matrix)):
            if dst_q[i] != src_q[j] + self.shift:
                bad.append((self.domain.names[j], self.codomain.names[i]))
        return bad

    def compose(self, first: "LinearMapF2") -> "LinearMapF2":
        """self after first."""
        prod = (self.matrix.astype(np.int64) @ first.matrix.astype(np.int64)) & 1
        return LinearMapF2(first.domain, self.codomain, prod, self.shift + first.shift)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearMapF2)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.shift == other.shift
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.shift, self.matrix.tobytes()))


@dataclass(frozen=True)
class Dyad:
    name: str
    V0: GradedSpaceF2
    V1: GradedSpaceF2
    f: LinearMapF2
    g: LinearMapF2

    def space(self, parity: int) -> GradedSpaceF2:
        return self.V1 if parity else self.V0

    def map_from(self, parity: int) -> LinearMapF2:
        """f leaves V0, g leaves V1."""
        return self.g if parity else self.f

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "V0": [list(x) for x in self.V0.generators],
            "V1": [list(x) for x in self.V1.generators],
            "f": self.f.images(),
            "g": self.g.images(),
        }


def dyad_validate(a: Dyad) -> list[str]:
    problems = []
    if a.f.domain != a.V0 or a.f.codomain != a.V1:
        problems.append("f must map V0 to V1")
    if a.g.domain != a.V1 or a.g.codomain != a.V0:
        problems.append("g must map V1 to V0")
    if problems:
        return problems
    for label, m in (("f", a.f), ("g", a.g)):
        if m.shift != -1:
            problems.append(f"{label} declared with shift {m.shift}, expected -1")
        for src, dst in m.degree_violations():
            problems.append(f"{label}({src}) hits {dst} outside degree -1")
    if not a.f.compose(a.g).is_zero():
        problems.append("f o g is nonzero")
    if not a.g.compose(a.f).is_zero():
        problems.append("g o f is nonzero")
    return problems


def make_dyad(name, V0, V1, f_images=None, g_images=None) -> Dyad:
    V0 = V0 if isinstance(V0, GradedSpaceF2) else GradedSpaceF2(tuple(V0))
    V1 = V1 if isinstance(V1, GradedSpaceF2) else GradedSpaceF2(tuple(V1))
    f = LinearMapF2.from_images(V0, V1, f_images or {})
    g = LinearMapF2.from_images(V1, V0, g_images or {})
    return Dyad(name, V0, V1, f, g)


def dual_dyad(a: Dyad) -> Dyad:
    name = a.name[:-1] if a.name.endswith("*") else a.name + "*"
    return Dyad(name, a.V1, a.V0, a.g, a.f)


def builtin_dyads() -> dict[str, Dyad]:
    one = [("1", 0)]
    W = [("a", 1), ("b", 0), ("c", 0), ("d", -1)]
    Vbar = [("vbar+", 1), ("vbar-", -1)]
    return {
        "aps": make_dyad("aps", one, one),
        "a0": make_dyad("a0", one, []),
        "a1": make_dyad("a1", [], one),
        "hf": make_dyad(
            "hf", W, Vbar, {"b": ["vbar-"], "c": ["vbar-"]}, {"vbar+": ["b", "c"]}
        ),
        "hfprime": make_dyad("hfprime", W, Vbar),
    }


def dyad_from_json(obj: Mapping) -> Dyad:
    try:
        return make_dyad(
            obj.get("name", "custom"),
            [tuple(x) for x in obj["V0"]],
            [tuple(x) for x in obj["V1"]],
            obj.get("f", {}),
            obj.get("g", {}),
        )
    except (KeyError, TypeError) as exc:
        raise DyadError(f"malformed dyad: {exc}") from exc


def get_dyad(spec: str) -> Dyad:
    """A builtin name or a path to a dyad JSON file."""
    table = builtin_dyads()
    if spec in table:
        return table[spec]
    if spec.endswith("*") and spec[:-1] in table:
        return dual_dyad(table[spec[:-1]])
    path = Path(spec)
    if not path.exists():
        raise DyadError(f"unknown dyad {spec!r}; builtins are {sorted(table)}")
    return dyad_from_json(json.loads(path.read_text()))


def random_dyad(rng: np.random.Generator, max_dim: int = 4, tries: int = 200) -> Dyad:
    """A random valid dyad with at most ``max_dim`` generators per side."""
    for _ in range(tries):
        d0, d1 = rng.integers(0, max_dim + 1, size=2)
        q0 = rng.integers(-2, 3, size=d0)
        q1 = rng.integers(-2, 3, size=d1)
        V0 = GradedSpaceF2(tuple((f"x{i}", int(q)) for i, q in enumerate(q0)))
        V1 = GradedSpaceF2(tuple((f"y{i}", int(q)) for i, q in enumerate(q1)))
        f_allowed = (q1[:, None] == q0[None, :] - 1).astype(np.uint8)
        g_allowed = (q0[:, None] == q1[None, :] - 1).astype(np.uint8)
        f = rng.integers(0, 2, size=(d1, d0), dtype=np.uint8) & f_allowed
        g = rng.integers(0, 2, size=(d0, d1), dtype=np.uint8) & g_allowed
        a = Dyad("random", V0, V1, LinearMapF2(V0, V1, f), LinearMapF2(V1, V0, g))
        if not dyad_validate(a):
            return a
    return Dyad("random", V0, V1, LinearMapF2.zero(V0, V1), LinearMapF2.zero(V1, V0))


# The Frobenius algebra V = <v+, v->, indices 0 and 1.
V_PLUS, V_MINUS = 0, 1
V_SPACE = GradedSpaceF2((("v+", 1), ("v-", -1)))
V_QDEG = (1, -1)


def frob_m(x: int, y: int) -> int | None:
    """Product of two basis vectors; None stands for zero."""
    if x == V_PLUS:
        return y
    if y == V_PLUS:
        return x
    return None


def frob_delta(x: int) -> list[tuple[int, int]]:
    if x == V_PLUS:
        return [(V_PLUS, V_MINUS), (V_MINUS, V_PLUS)]
    return [(V_MINUS, V_MINUS)]


def trivial_module_m(y, x: int):
    """V_i tensor V -> V_i: v+ acts by identity, v- by zero."""
    return y if x == V_PLUS else None


def trivial_comodule_delta(y) -> list[tuple[object, int]]:
    if y is None:
        return []
    return [(y, V_MINUS)]


def frob_tables() -> tuple[np.ndarray, np.ndarray]:
    """m as a 2x4 matrix on basis (xy) and delta as a 4x2 matrix, over F2."""
    m = np.zeros((2, 4), np.uint8)
    for x in (0, 1):
        for y in (0, 1):
            z = frob_m(x, y)
            if z is not None:
                m[z, 2 * x + y] ^= 1
    d = np.zeros((4, 2), np.uint8)
    for x in (0, 1):
        for a, b in frob_delta(x):
            d[2 * a + b, x] ^= 1
    return m, d
