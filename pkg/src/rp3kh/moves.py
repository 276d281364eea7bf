"""Reidemeister moves on disk-model diagrams.

Move names: ``R1+``/``R1-`` (add or remove a kink), ``R2+``/``R2-`` (add or
remove a bigon), ``R3`` (invert a triangle), ``R4+``/``R4-`` (push an arc
through the boundary circle, adding or removing four boundary points) and
``R5`` (slide a crossing through the boundary circle).  The last two only
change the chart; over and under swap when a crossing passes the boundary
because the interval bundle over RP^2 is twisted.

Arcs that a move leaves alone keep their ids, so faces away from the site
can be followed with :func:`track_face`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from . import surface
from .diagram import Crossing, Diagram, DiagramError, validate

MOVES = ("R1+", "R1-", "R2+", "R2-", "R3", "R4+", "R4-", "R5")


class MoveError(DiagramError):
    pass


# ------------------------------------------------------------ chart faces
Dart = tuple[int, int]  # (arc, dir): dir 0 runs from end 0 to end 1


@dataclass(frozen=True)
class ChartFace:
    darts: tuple[Dart, ...]  # boundary darts with the face on their left
    segments: tuple[int, ...]  # boundary segments (j, j + 1) on the face


def _tail(d: Diagram, dart: Dart):
    return d.endpoint(dart[0], dart[1])


def _head(d: Diagram, dart: Dart):
    return d.endpoint(dart[0], 1 - dart[1])


def _leaving(d: Diagram, e) -> Dart:
    a, end = d.arc_at(e)
    return a, end


def _next_item(d: Diagram, dart: Dart):
    h = _head(d, dart)
    if h[0] == "x":
        return None, _leaving(d, ("x", h[1], (h[2] - 1) % 4))
    j = h[1]
    return j, _leaving(d, ("b", (j + 1) % d.boundary_points))


def chart_faces(d: Diagram) -> list[ChartFace]:
    """Faces of the diagram drawn in the disk, before boundary gluing."""
    if d.loops:
        return []
    seen: set[Dart] = set()
    out = []
    for a in range(len(d.arcs)):
        for di in (0, 1):
            start = (a, di)
            if start in seen:
                continue
            darts, segs = [], []
            cur = start
            while cur not in seen:
                seen.add(cur)
                darts.append(cur)
                seg, cur = _next_item(d, cur)
                if seg is not None:
                    segs.append(seg)
            out.append(ChartFace(tuple(darts), tuple(segs)))
    return out


def _face_of(d: Diagram, dart: Dart) -> ChartFace:
    for f in chart_faces(d):
        if dart in f.darts:
            return f
    raise MoveError(f"dart {dart} not found")


def _over(d: Diagram, c: int, s: int) -> bool:
    return (s % 2 == 1) == (d.crossings[c].over_pair == "13")


def _far(d: Diagram, e):
    """Endpoint at the other end of the arc sitting at ``e``."""
    a, end = d.arc_at(e)
    return d.endpoint(a, 1 - end)


# --------------------------------------------------------------- editing
class _Edit:
    def __init__(self, d: Diagram):
        self.d = d
        self.crossings: list[Crossing | None] = list(d.crossings)
        self.arcs: list[list | None] = [list(a) for a in d.arcs]
        self.clean = [True] * len(d.arcs)  # direction along the strand preserved
        self.pristine = [True] * len(d.arcs)  # endpoints untouched
        self.boundary_points = d.boundary_points
        self.relabel: Callable[[int], int] = lambda j: j

    def add_crossing(self, over_pair: str) -> int:
        self.crossings.append(Crossing(over_pair))
        return len(self.crossings) - 1

    def add_arc(self, e0, e1) -> int:
        self.arcs.append([e0, e1])
        self.clean.append(False)
        self.pristine.append(False)
        return len(self.arcs) - 1

    def set_end(self, a: int, end: int, e) -> None:
        self.arcs[a][end] = e
        self.pristine[a] = False

    def replace(self, a: int, old, new) -> None:
        """Swap endpoint ``old`` of arc ``a`` for ``new``; the other end stays put."""
        ends = self.arcs[a]
        hits = [i for i, e in enumerate(ends) if tuple(e) == tuple(old)]
        if not hits:
            raise MoveError(f"arc {a} has no endpoint {old}")
        self.set_end(a, hits[0], new)

    def rebuild(self, a: int, e0, e1) -> None:
        self.arcs[a] = [e0, e1]
        self.clean[a] = False
        self.pristine[a] = False

    def kill_arc(self, a: int) -> None:
        self.arcs[a] = None

    def kill_crossing(self, c: int) -> None:
        self.crossings[c] = None

    def finish(self, loops: int = 0) -> tuple[Diagram, dict[int, int], set[int]]:
        cmap, crossings = {}, []
        for c, x in enumerate(self.crossings):
            if x is not None:
                cmap[c] = len(crossings)
                crossings.append(x)

        def fix(e):
            if e[0] == "x":
                if e[1] not in cmap:
                    raise MoveError(f"arc still attached to removed crossing {e[1]}")
                return ("x", cmap[e[1]], e[2])
            return ("b", self.relabel(e[1]))

        amap, arcs = {}, []
        for a, arc in enumerate(self.arcs):
            if arc is not None:
                amap[a] = len(arcs)
                arcs.append(tuple(fix(e) for e in arc))
        if loops:
            arcs = []
            amap = {}
        out = Diagram(tuple(crossings), self.boundary_points, tuple(arcs), loops=loops,
                      name=self.d.name)
        out = self._orient(out, amap)
        pristine = {amap[a] for a in amap if a < len(self.pristine) and self.pristine[a]}
        return out, amap, pristine

    def _orient(self, out: Diagram, amap: dict[int, int]) -> Diagram:
        old_dir = self.d.arc_direction
        inverse = {v: k for k, v in amap.items()}
        arcs = [list(a) for a in out.arcs]
        seeds = []
        for comp in out.components:
            cands = [a for a, _ in comp
                     if a in inverse and inverse[a] < len(self.d.arcs) and self.clean[inverse[a]]]
            if not cands:
                seeds.append(comp[0][0])
                continue
            a = min(cands)
            if old_dir[inverse[a]]:
                arcs[a] = arcs[a][::-1]
            seeds.append(a)
        return replace(out, arcs=tuple(tuple(x) for x in arcs), orientation_seeds=tuple(seeds))


# ------------------------------------------------------------ the moves
def _r1_insert(d: Diagram, site):
    arc, side, over_pair = site
    ed = _Edit(d)
    if d.is_loop(arc):
        if d.loops != 1:
            raise MoveError("kinks on free loops need a single loop")
        ed.arcs, ed.clean, ed.pristine = [], [], []
        x = ed.add_crossing(over_pair)
        ed.add_arc(("x", x, 3 if side == "right" else 1), ("x", x, 0))
        if side == "right":
            ed.add_arc(("x", x, 2), ("x", x, 1))
        else:
            ed.add_arc(("x", x, 2), ("x", x, 3))
        out = Diagram(tuple(ed.crossings), 0, tuple(tuple(a) for a in ed.arcs), name=d.name)
        seeds = tuple(comp[0][0] for comp in out.components)
        return replace(out, orientation_seeds=seeds), {}, set()
    e0, e1 = d.arcs[arc]
    x = ed.add_crossing(over_pair)
    ed.replace(arc, e1, ("x", x, 0))
    exit_slot = 3 if side == "right" else 1
    loop_end = 1 if side == "right" else 3
    # keep the arc's stored order so the strand direction carries over
    ed.add_arc(("x", x, 2), ("x", x, loop_end))
    ed.add_arc(("x", x, exit_slot), e1)
    ed.clean[-1] = False
    return ed.finish()


def r1_insert_sites(d: Diagram) -> list:
    if d.loops and d.loops != 1:
        return []
    arcs = range(d.arc_count)
    return [(a, side, op) for a in arcs for side in ("left", "right") for op in ("13", "02")]


def _r1_delete(d: Diagram, site):
    c, s = site
    loop, _ = d.arc_at(("x", c, s))
    if {tuple(e) for e in d.arcs[loop]} != {("x", c, s), ("x", c, (s + 1) % 4)}:
        raise MoveError("slots are not joined by a kink")
    if len(_face_of(d, _leaving(d, ("x", c, s))).darts) != 1:
        raise MoveError("kink does not bound a monogon")
    A = _far(d, ("x", c, (s + 2) % 4))
    B = _far(d, ("x", c, (s + 3) % 4))
    ed = _Edit(d)
    if A[0] == "x" and A[1] == c:
        if d.n == 1 and not d.boundary_points:
            return ed.finish(loops=1)
        raise MoveError("removing this kink leaves a free circle")
    a_arc, _ = d.arc_at(("x", c, (s + 2) % 4))
    b_arc, _ = d.arc_at(("x", c, (s + 3) % 4))
    ed.replace(a_arc, ("x", c, (s + 2) % 4), B)
    ed.kill_arc(b_arc)
    ed.kill_arc(loop)
    ed.kill_crossing(c)
    return ed.finish()


def r1_delete_sites(d: Diagram) -> list:
    out = []
    for c in range(d.n):
        for s in range(4):
            try:
                _r1_delete(d, (c, s))
            except (MoveError, DiagramError):
                continue
            out.append((c, s))
    return out


def _r2_insert(d: Diagram, site):
    da, db, a_over = site
    fa = _face_of(d, tuple(da))
    if tuple(db) not in fa.darts:
        raise MoveError("darts do not share a face")
    if da[0] == db[0]:
        raise MoveError("finger must cross a different arc")
    a, dir_a = da
    b, dir_b = db
    q = d.endpoint(a, 1 - dir_a)
    s = d.endpoint(b, 1 - dir_b)
    op = "13" if a_over else "02"
    ed = _Edit(d)
    X = ed.add_crossing(op)
    Y = ed.add_crossing(op)
    ed.replace(a, q, ("x", X, 1))
    ed.add_arc(("x", X, 3), ("x", Y, 3))
    ed.add_arc(("x", Y, 1), q)
    ed.replace(b, s, ("x", Y, 2))
    ed.add_arc(("x", Y, 0), ("x", X, 2))
    ed.add_arc(("x", X, 0), s)
    return ed.finish()


def r2_insert_sites(d: Diagram) -> list:
    out = []
    for f in chart_faces(d):
        for da in f.darts:
            for db in f.darts:
                if da[0] != db[0]:
                    out.append((da, db, True))
                    out.append((da, db, False))
    return out


def _r2_delete(d: Diagram, site):
    u = tuple(site)
    f = _face_of(d, u)
    if len(f.darts) != 2 or f.segments:
        raise MoveError("not a bigon")
    v = f.darts[1] if f.darts[0] == u else f.darts[0]
    tu, hu = _tail(d, u), _head(d, u)
    tv, hv = _tail(d, v), _head(d, v)
    if tu[0] != "x" or hu[0] != "x":
        raise MoveError("bigon corners must be crossings")
    X, Y = tu[1], hu[1]
    if X == Y or hv[1] != X or tv[1] != Y:
        raise MoveError("bigon corners must be two distinct crossings")
    xu, yu, xv, yv = tu[2], hu[2], hv[2], tv[2]
    if _over(d, X, xu) != _over(d, Y, yu):
        raise MoveError("bigon strands alternate; not a Reidemeister II bigon")
    outer = [("x", X, (xu + 2) % 4), ("x", Y, (yu + 2) % 4),
             ("x", Y, (yv + 2) % 4), ("x", X, (xv + 2) % 4)]
    fars = [_far(d, e) for e in outer]
    if any(e[0] == "x" and e[1] in (X, Y) for e in fars):
        raise MoveError("outer strands return to the bigon")
    ed = _Edit(d)
    for start, stop in ((0, 1), (2, 3)):
        keep, _ = d.arc_at(outer[start])
        drop, _ = d.arc_at(outer[stop])
        ed.replace(keep, outer[start], fars[stop])
        ed.kill_arc(drop)
    ed.kill_arc(u[0])
    ed.kill_arc(v[0])
    ed.kill_crossing(X)
    ed.kill_crossing(Y)
    return ed.finish()


def r2_delete_sites(d: Diagram) -> list:
    out = []
    for f in chart_faces(d):
        if len(f.darts) == 2 and not f.segments:
            try:
                _r2_delete(d, f.darts[0])
            except (MoveError, DiagramError):
                continue
            out.append(f.darts[0])
    return out


def _r3(d: Diagram, site):
    start = tuple(site)
    f = _face_of(d, start)
    if len(f.darts) != 3 or f.segments:
        raise MoveError("not a triangle")
    i0 = f.darts.index(start)
    darts = f.darts[i0:] + f.darts[:i0]
    corners = [_tail(d, x) for x in darts]
    if any(e[0] != "x" for e in corners):
        raise MoveError("triangle corners must be crossings")
    X, Y, Z = (e[1] for e in corners)
    if len({X, Y, Z}) != 3:
        raise MoveError("triangle corners must be distinct")
    # at each corner: slot toward the next corner and toward the previous one
    nxt = [_tail(d, x)[2] for x in darts]
    prv = [_head(d, darts[(i - 1) % 3])[2] for i in range(3)]
    cs = (X, Y, Z)
    # strands: side i runs from corner i to corner i+1
    over_side = []
    for i in range(3):
        j = (i + 1) % 3
        over_side.append((_over(d, cs[i], nxt[i]), _over(d, cs[j], prv[j])))
    if not any(a == b for a, b in over_side):
        raise MoveError("cyclic triangle; no strand passes over or under both others")
    # outer ends in counterclockwise order: corner i gives (side i, side i-1)
    ends = []
    for i in range(3):
        ends.append(("x", cs[i], (nxt[i] + 2) % 4))
        ends.append(("x", cs[i], (prv[i] + 2) % 4))
    fars = [_far(d, e) for e in ends]
    if any(e[0] == "x" and e[1] in cs for e in fars):
        raise MoveError("outer strands return to the triangle")
    side_of_end = [0, 2, 1, 0, 2, 1]  # strand (side index) leaving through each end
    # after the move the corner between ends (2m+1, 2m+2) joins the strands of
    # those two ends; it is the crossing that used to join the same strands
    pair_crossing = {frozenset((i, (i - 1) % 3)): cs[i] for i in range(3)}
    new_corners = []
    for m in range(3):
        e1, e2 = 2 * m + 1, (2 * m + 2) % 6
        s1, s2 = side_of_end[e1], side_of_end[e2]
        new_corners.append((pair_crossing[frozenset((s1, s2))], e1, e2, s1, s2))
    ed = _Edit(d)
    side_over = {}  # (crossing, strand side) -> over?
    for i in range(3):
        side_over[(cs[i], i)] = over_side[i][0]
        side_over[(cs[(i + 1) % 3], i)] = over_side[i][1]
    for c, e1, e2, s1, s2 in new_corners:
        # slots: 0 toward next corner (strand s1), 1 toward previous (s2), 2 -> e1, 3 -> e2
        ed.crossings[c] = Crossing("02" if side_over[(c, s1)] else "13")
    for idx, (c, e1, e2, _, _) in enumerate(new_corners):
        for slot, e in ((2, e1), (3, e2)):
            a, _ = d.arc_at(ends[e])
            ed.replace(a, ends[e], ("x", c, slot))
    sides = [x[0] for x in darts]
    for idx in range(3):
        c, _, _, s1, _ = new_corners[idx]
        c2 = new_corners[(idx + 1) % 3][0]
        ed.rebuild(sides[s1], ("x", c, 0), ("x", c2, 1))
    return ed.finish()


def r3_sites(d: Diagram) -> list:
    out = []
    for f in chart_faces(d):
        if len(f.darts) == 3 and not f.segments:
            try:
                _r3(d, f.darts[0])
            except (MoveError, DiagramError):
                continue
            out.append(f.darts[0])
    return out


def _r4_insert(d: Diagram, site):
    j, dart = site
    dart = tuple(dart)
    k = d.k
    if k == 0:
        raise MoveError("no boundary segment to push through")
    f = _face_of(d, dart)
    if j not in f.segments:
        raise MoveError("dart and segment are not on one face")
    nb = d.boundary_points
    if j >= k:
        # relabel so the segment sits in the first half; rotations keep antipodes
        d = _rotate_boundary(d, -k)
        j -= k
    a, di = dart
    y = d.endpoint(a, 1 - di)
    ed = _Edit(d)
    ed.boundary_points = nb + 4

    def relabel(i):
        if i <= j:
            return i
        if i <= j + k:
            return i + 2
        return i + 4

    ed.relabel = relabel
    # new points carry final labels under a separate tag so relabel skips them
    p1, p2, p3, p4 = j + 1, j + 2, j + k + 3, j + k + 4
    ed.replace(a, y, ("B", p2))
    ed.add_arc(("B", p4), ("B", p3))
    tail_arc = ed.add_arc(("B", p1), y) if not di else ed.add_arc(y, ("B", p1))
    ed.clean[tail_arc] = False
    return _finish_with_fresh_boundary(ed)


def _finish_with_fresh_boundary(ed: _Edit):
    old = ed.relabel
    for arc in ed.arcs:
        if arc is None:
            continue
        for i, e in enumerate(arc):
            if e[0] == "b":
                arc[i] = ("B", old(e[1]))
    ed.relabel = lambda j: j
    for arc in ed.arcs:
        if arc is None:
            continue
        for i, e in enumerate(arc):
            if e[0] == "B":
                arc[i] = ("b", e[1])
    return ed.finish()


def _rotate_boundary(d: Diagram, r: int) -> Diagram:
    nb = d.boundary_points

    def rot(e):
        return ("b", (e[1] + r) % nb) if e[0] == "b" else e

    return replace(d, arcs=tuple(tuple(rot(e) for e in arc) for arc in d.arcs))


def r4_insert_sites(d: Diagram) -> list:
    out = []
    for f in chart_faces(d):
        for j in f.segments:
            for dart in f.darts:
                out.append((j, dart))
    return out


def _r4_delete(d: Diagram, site):
    p3 = site
    nb = d.boundary_points
    kk = d.k
    if kk < 3:
        raise MoveError("too few boundary points to remove four")
    p4 = (p3 + 1) % nb
    hug, _ = d.arc_at(("b", p3))
    if {tuple(e) for e in d.arcs[hug]} != {("b", p3), ("b", p4)}:
        raise MoveError("no arc hugging the boundary here")
    p1, p2 = (p3 + kk) % nb, (p4 + kk) % nb
    A, _ = d.arc_at(("b", p2))
    B, _ = d.arc_at(("b", p1))
    if A == B or A == hug or B == hug:
        raise MoveError("degenerate boundary bump")
    y = _far(d, ("b", p1))
    ed = _Edit(d)
    ed.replace(A, ("b", p2), y)
    ed.kill_arc(B)
    ed.kill_arc(hug)
    removed = sorted({p1, p2, p3, p4})
    ed.boundary_points = nb - 4
    ed.relabel = lambda i: i - sum(1 for r in removed if r < i)
    return ed.finish()


def r4_delete_sites(d: Diagram) -> list:
    out = []
    for p in range(d.boundary_points):
        try:
            _r4_delete(d, p)
        except (MoveError, DiagramError):
            continue
        out.append(p)
    return out


def _r5(d: Diagram, site):
    c, sigma, j = site
    nb, k = d.boundary_points, d.k
    if k < 2:
        raise MoveError("crossing slides need at least four boundary points")
    bj, bj1 = ("b", j % nb), ("b", (j + 1) % nb)
    bk, bk1 = ("b", (j + k) % nb), ("b", (j + k + 1) % nb)
    s = [("x", c, (sigma + i) % 4) for i in range(4)]
    if _far(d, s[0]) != bj or _far(d, s[1]) != bj1:
        raise MoveError("crossing is not attached to adjacent boundary points")
    P2, P1 = _far(d, bk), _far(d, bk1)
    Q, Q2 = _far(d, s[2]), _far(d, s[3])
    bset = {bj, bj1, bk, bk1}
    for e in (P1, P2, Q, Q2):
        if (e[0] == "x" and e[1] == c) or e in bset:
            raise MoveError("slide site is degenerate")
    A0, _ = d.arc_at(s[0])
    A1, _ = d.arc_at(s[1])
    C0, _ = d.arc_at(bk)
    C1, _ = d.arc_at(bk1)
    D0, _ = d.arc_at(s[2])
    D1, _ = d.arc_at(s[3])
    s1 = (sigma + 1) % 4
    ed = _Edit(d)
    ed.crossings[c] = d.crossings[c].toggled()
    ed.replace(C1, bk1, ("x", c, s1))
    ed.replace(C0, bk, ("x", c, (s1 + 1) % 4))
    ed.replace(D0, s[2], bj1)
    ed.replace(D1, s[3], bj)
    ed.rebuild(A0, ("x", c, (s1 + 2) % 4), bk)
    ed.rebuild(A1, ("x", c, (s1 + 3) % 4), bk1)
    return ed.finish()


def r5_sites(d: Diagram) -> list:
    out = []
    for c in range(d.n):
        for sigma in range(4):
            e = _far(d, ("x", c, sigma))
            if e[0] != "b":
                continue
            site = (c, sigma, e[1])
            try:
                _r5(d, site)
            except (MoveError, DiagramError):
                continue
            out.append(site)
    return out


_APPLY = {
    "R1+": _r1_insert,
    "R1-": _r1_delete,
    "R2+": _r2_insert,
    "R2-": _r2_delete,
    "R3": _r3,
    "R4+": _r4_insert,
    "R4-": _r4_delete,
    "R5": _r5,
}

_SITES = {
    "R1+": r1_insert_sites,
    "R1-": r1_delete_sites,
    "R2+": r2_insert_sites,
    "R2-": r2_delete_sites,
    "R3": r3_sites,
    "R4+": r4_insert_sites,
    "R4-": r4_delete_sites,
    "R5": r5_sites,
}


@dataclass(frozen=True)
class MoveResult:
    diagram: Diagram
    arc_map: dict[int, int]  # surviving old arc id -> new arc id
    pristine: frozenset[int]  # new ids of arcs whose endpoints were untouched


def apply_move(d: Diagram, move: str, site) -> MoveResult:
    if move not in _APPLY:
        raise MoveError(f"unknown move {move!r}; expected one of {MOVES}")
    try:
        out, amap, pristine = _APPLY[move](d, site)
    except MoveError:
        raise
    except (DiagramError, KeyError, IndexError, ValueError) as exc:
        raise MoveError(f"{move} does not apply at {site!r}: {exc}") from exc
    problems = validate(out)
    if problems:
        raise MoveError(f"{move} at {site!r} produced an invalid diagram: {problems[0]}")
    return MoveResult(out, amap, frozenset(pristine))


def apply_reidemeister(d: Diagram, move: str, site) -> Diagram:
    return apply_move(d, move, site).diagram


def sites(d: Diagram, move: str) -> list:
    return _SITES[move](d)


def track_face(d: Diagram, result: MoveResult, face: int) -> int | None:
    """Face of the new diagram holding a point of ``face`` near an untouched arc."""
    for dart in surface.faces(d)[face].darts:
        a, side = divmod(dart, 2)
        if a in result.arc_map and result.arc_map[a] in result.pristine:
            return surface.face_of_dart(result.diagram, result.arc_map[a], left=side == 0)
    return None
