"""Link diagrams on RP^2 in the disk model.

A diagram is a 4-valent combinatorial map drawn in a closed disk whose
boundary points are glued antipodally: boundary point ``j`` is identified
with ``j + k`` (mod ``2k``).  Crossing slots are numbered 0..3
counterclockwise in the disk chart.  An arc joins two endpoints, each either
a crossing slot ``("x", c, s)`` or a boundary point ``("b", j)``.

Crossingless, boundary-free circles are stored as a count of ``loops``; they
are only supported when the rest of the diagram is empty.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

Endpoint = tuple  # ("x", crossing, slot) | ("b", index)

# slot pairs joined by each resolution, for a crossing whose over-strand is 1-3
_JOINS_13 = (((0, 1), (2, 3)), ((0, 3), (1, 2)))


class DiagramError(ValueError):
    """Raised for malformed diagrams or inputs outside an operation's domain."""


@dataclass(frozen=True)
class Crossing:
    over_pair: str = "13"

    def toggled(self) -> "Crossing":
        return Crossing("02" if self.over_pair == "13" else "13")


@dataclass(frozen=True)
class Circle:
    """One circle of a smoothing: a cyclic sequence of arc ids."""

    arcs: tuple[int, ...]
    crosscap_parity: int

    @property
    def arc_set(self) -> frozenset[int]:
        return frozenset(self.arcs)


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    boundary_points: int
    arcs: tuple[tuple[Endpoint, Endpoint], ...]
    loops: int = 0
    orientation_seeds: tuple[int, ...] | None = None
    name: str = ""
    basepoint_face: int | None = field(default=None, compare=False)
    marked_arc: int | None = field(default=None, compare=False)

    # ------------------------------------------------------------------ basics
    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def k(self) -> int:
        return self.boundary_points // 2

    @property
    def arc_count(self) -> int:
        """Number of arcs including the pseudo-arcs standing for free loops."""
        return len(self.arcs) + self.loops

    def is_loop(self, a: int) -> bool:
        return a >= len(self.arcs)

    @cached_property
    def _incidence(self) -> dict:
        inc: dict = {}
        for a, (e0, e1) in enumerate(self.arcs):
            for end, e in enumerate((e0, e1)):
                e = _norm_endpoint(e)
                if e in inc:
                    raise DiagramError(f"endpoint {e} used twice")
                inc[e] = (a, end)
        return inc

    def arc_at(self, e: Endpoint) -> tuple[int, int]:
        """(arc id, end index) of the arc end sitting at endpoint ``e``."""
        return self._incidence[_norm_endpoint(e)]

    def endpoint(self, a: int, end: int) -> Endpoint:
        return _norm_endpoint(self.arcs[a][end])

    def joins(self, c: int, bit: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """Slot pairs joined at crossing ``c`` by resolution ``bit``."""
        flip = self.crossings[c].over_pair == "02"
        return _JOINS_13[bit ^ flip]

    def resolution_type(self, c: int, bit: int) -> int:
        """0 if the resolution joins 0-1/2-3, 1 if it joins 0-3/1-2."""
        return bit ^ (self.crossings[c].over_pair == "02")

    # -------------------------------------------------------------- traversal
    def _step(self, a: int, d: int, through) -> tuple[int, int, int]:
        """Follow dart (a, d) to its head and continue.

        ``through(c, s)`` gives the slot by which the path leaves crossing
        ``c`` after entering at slot ``s``.  Returns the next dart and the
        number of boundary passages made (0 or 1).
        """
        if self.is_loop(a):
            return a, d, 0
        head = self.endpoint(a, 1 - d)
        if head[0] == "x":
            _, c, s = head
            na, nend = self.arc_at(("x", c, through(c, s)))
            return na, nend, 0
        j = (head[1] + self.k) % self.boundary_points
        na, nend = self.arc_at(("b", j))
        return na, nend, 1

    def _trace(self, a: int, d: int, through) -> tuple[list[tuple[int, int]], int]:
        darts = []
        passages = 0
        cur = (a, d)
        while True:
            darts.append(cur)
            na, nd, p = self._step(cur[0], cur[1], through)
            passages += p
            cur = (na, nd)
            if cur == (a, d):
                return darts, passages
            if len(darts) > 2 * self.arc_count + 2:
                raise DiagramError("arc traversal does not close up")

    def _straight(self, c: int, s: int) -> int:
        return (s + 2) % 4

    @cached_property
    def components(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Link components as oriented dart cycles, one per component."""
        seeds = self.orientation_seeds
        seen: set[int] = set()
        comps = []
        if seeds is not None:
            order = [(a, 0) for a in seeds]
        else:
            order = []
        order += [(a, 0) for a in range(self.arc_count)]
        for a, d in order:
            if a in seen:
                continue
            darts, _ = self._trace(a, d, self._straight)
            seen.update(x for x, _ in darts)
            comps.append(tuple(darts))
        return tuple(comps)

    @cached_property
    def component_classes(self) -> tuple[int, ...]:
        """Z/2 homology class of each component (boundary passages mod 2)."""
        out = []
        for comp in self.components:
            passages = 0
            for a, d in comp:
                passages += self._step(a, d, self._straight)[2]
            out.append(passages % 2)
        return tuple(out)

    @property
    def link_class(self) -> int:
        return sum(self.component_classes) % 2

    @cached_property
    def arc_direction(self) -> tuple[int, ...]:
        """Orientation of each arc: 0 if traversed from end 0 to end 1."""
        out = [0] * self.arc_count
        for comp in self.components:
            for a, d in comp:
                out[a] = d
        return tuple(out)

    # ------------------------------------------------------------------ signs
    def _incoming_slots(self, c: int) -> tuple[int, int]:
        """(incoming over slot, incoming under slot) at crossing ``c``."""
        over = (1, 3) if self.crossings[c].over_pair == "13" else (0, 2)
        inc_over = inc_under = None
        for s in range(4):
            a, end = self.arc_at(("x", c, s))
            # the arc's head is this slot iff its direction leaves from the other end
            if self.arc_direction[a] == 1 - end:
                if s in over:
                    inc_over = s
                else:
                    inc_under = s
        if inc_over is None or inc_under is None:
            raise DiagramError(f"inconsistent orientation at crossing {c}")
        return inc_over, inc_under

    def crossing_sign(self, c: int) -> int:
        o, u = self._incoming_slots(c)
        return 1 if (u - o) % 4 == 1 else -1

    @cached_property
    def signs(self) -> tuple[int, ...]:
        return tuple(self.crossing_sign(c) for c in range(self.n))

    def crossing_signs(self) -> tuple[int, int]:
        """(n_plus, n_minus)."""
        s = self.signs
        return sum(1 for x in s if x > 0), sum(1 for x in s if x < 0)

    def seifert_state(self) -> tuple[int, ...]:
        """The state resolving every crossing along the orientation."""
        bits = []
        for c in range(self.n):
            o, u = self._incoming_slots(c)
            want = {frozenset((o, (u + 2) % 4)), frozenset((u, (o + 2) % 4))}
            for bit in (0, 1):
                if {frozenset(p) for p in self.joins(c, bit)} == want:
                    bits.append(bit)
                    break
            else:
                raise DiagramError(f"no oriented resolution at crossing {c}")
        return tuple(bits)

    # -------------------------------------------------------------- smoothing
    def resolve(self, state: Sequence[int]) -> "Smoothing":
        state = tuple(int(b) for b in state)
        if len(state) != self.n:
            raise DiagramError(f"state has length {len(state)}, expected {self.n}")
        partner = []
        for c, bit in enumerate(state):
            p = [0] * 4
            for x, y in self.joins(c, bit):
                p[x], p[y] = y, x
            partner.append(p)
        seen = [False] * self.arc_count
        circles = []
        for a in range(self.arc_count):
            if seen[a]:
                continue
            darts, passages = self._trace(a, 0, lambda c, s: partner[c][s])
            for x, _ in darts:
                seen[x] = True
            circles.append(Circle(tuple(x for x, _ in darts), passages % 2))
        return Smoothing(self, state, tuple(circles))

    def mirror(self) -> "Diagram":
        return replace(self, crossings=tuple(x.toggled() for x in self.crossings),
                       name=self.name + "*" if self.name else "")

    # --------------------------------------------------------------------- io
    def to_json(self) -> dict:
        out: dict = {
            "name": self.name,
            "boundary_points": self.boundary_points,
            "crossings": [{"over_pair": x.over_pair} for x in self.crossings],
            "arcs": [[list(e) for e in arc] for arc in self.arcs],
        }
        if self.loops:
            out["loops"] = self.loops
        if self.orientation_seeds is not None:
            out["orientation_seeds"] = list(self.orientation_seeds)
        if self.basepoint_face is not None:
            out["basepoint_face"] = self.basepoint_face
        if self.marked_arc is not None:
            out["marked_arc"] = self.marked_arc
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class Smoothing:
    diagram: Diagram
    state: tuple[int, ...]
    circles: tuple[Circle, ...]

    @property
    def k_s(self) -> int:
        return len(self.circles)

    @cached_property
    def circle_of_arc(self) -> tuple[int, ...]:
        out = [0] * self.diagram.arc_count
        for i, c in enumerate(self.circles):
            for a in c.arcs:
                out[a] = i
        return tuple(out)


def _norm_endpoint(e) -> Endpoint:
    if e[0] == "x":
        return ("x", int(e[1]), int(e[2]))
    if e[0] == "b":
        return ("b", int(e[1]))
    raise DiagramError(f"bad endpoint {e!r}")


def from_json(obj: dict) -> Diagram:
    try:
        crossings = []
        for x in obj.get("crossings", []):
            op = str(x["over_pair"]) if isinstance(x, dict) else str(x)
            crossings.append(Crossing(op))
        arcs = tuple((_norm_endpoint(a), _norm_endpoint(b)) for a, b in obj.get("arcs", []))
        seeds = obj.get("orientation_seeds")
        return Diagram(
            crossings=tuple(crossings),
            boundary_points=int(obj.get("boundary_points", 0)),
            arcs=arcs,
            loops=int(obj.get("loops", 0)),
            orientation_seeds=None if seeds is None else tuple(int(s) for s in seeds),
            name=str(obj.get("name", "")),
            basepoint_face=obj.get("basepoint_face"),
            marked_arc=obj.get("marked_arc"),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise DiagramError(f"malformed diagram: {exc}") from exc


def load(path: str | Path) -> Diagram:
    with open(path) as fh:
        return from_json(json.load(fh))


def validate(d: Diagram) -> list[str]:
    """Return a list of violations; empty iff the diagram is well formed.

    Structural checks only; the embedding check lives in
    :func:`rp3kh.surface.embedding_problems` and is folded in here.
    """
    problems: list[str] = []
    if d.boundary_points % 2:
        problems.append("boundary_points must be even")
    for c, x in enumerate(d.crossings):
        if x.over_pair not in ("02", "13"):
            problems.append(f"crossing {c}: over_pair ill-formed ({x.over_pair!r})")
    if problems:
        return problems
    expected = {("x", c, s) for c in range(d.n) for s in range(4)}
    expected |= {("b", j) for j in range(d.boundary_points)}
    used: list = []
    for a, arc in enumerate(d.arcs):
        if len(arc) != 2:
            problems.append(f"arc {a}: needs two endpoints")
            continue
        used.extend(_norm_endpoint(e) for e in arc)
    seen: set = set()
    for e in used:
        if e in seen:
            problems.append(f"endpoint {e} used more than once")
        seen.add(e)
    for e in sorted(seen - expected):
        problems.append(f"endpoint {e} does not exist")
    for e in sorted(expected - seen):
        problems.append(f"endpoint {e} unused")
    if d.loops and (d.n or d.boundary_points):
        problems.append("free loops are only supported in otherwise empty diagrams")
    if d.orientation_seeds is not None:
        for a in d.orientation_seeds:
            if not 0 <= a < d.arc_count:
                problems.append(f"orientation seed {a} is not an arc")
    if problems:
        return problems
    try:
        comps = d.components
    except DiagramError as exc:
        return [str(exc)]
    if d.orientation_seeds is not None and len(d.orientation_seeds) != len(comps):
        problems.append("orientation_seeds must name one arc per component")
    if d.n and not _connected(d):
        problems.append("diagram is not connected")
    if not problems:
        from .surface import embedding_problems

        problems.extend(embedding_problems(d))
    return problems


def _connected(d: Diagram) -> bool:
    # crossings and boundary points linked by arcs; the boundary circle counts as one node
    parent = list(range(d.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def node(e):
        return e[1] if e[0] == "x" else d.n

    for e0, e1 in d.arcs:
        parent[find(node(_norm_endpoint(e0)))] = find(node(_norm_endpoint(e1)))
    nodes = set(range(d.n)) | ({d.n} if d.boundary_points else set())
    return len({find(x) for x in nodes}) <= 1


def link_class_report(d: Diagram) -> dict:
    return {"components": list(d.component_classes), "link": d.link_class}


def from_pd(pd: Iterable[Sequence[int]], name: str = "") -> Diagram:
    """Build an affine diagram from a planar-diagram code.

    Each crossing ``[a, b, c, d]`` lists edge labels counterclockwise starting
    from the incoming under-strand, so the over-strand occupies slots 1-3.
    Edge labels increase along the orientation.
    """
    pd = [tuple(x) for x in pd]
    where: dict[int, list] = {}
    for c, labels in enumerate(pd):
        for s, lab in enumerate(labels):
            where.setdefault(lab, []).append(("x", c, s))
    arcs = []
    for lab in sorted(where):
        ends = where[lab]
        if len(ends) != 2:
            raise DiagramError(f"PD label {lab} appears {len(ends)} times")
        # orient the arc from the slot where it leaves to the slot where it enters
        (_, c0, s0), (_, c1, s1) = ends
        if _pd_incoming(pd, c0, s0, lab):
            ends = [ends[1], ends[0]]
        arcs.append(tuple(ends))
    d = Diagram(tuple(Crossing("13") for _ in pd), 0, tuple(arcs), name=name)
    seeds = tuple(comp[0][0] for comp in d.components)
    return replace(d, orientation_seeds=seeds)


def _pd_incoming(pd, c: int, s: int, lab: int) -> bool:
    labels = pd[c]
    if s == 0:
        return True
    if s == 2:
        return False
    # over-strand: incoming end carries the smaller label, except at the wrap-around
    other = labels[(s + 2) % 4]
    if abs(lab - other) == 1:
        return lab < other
    return lab > other
