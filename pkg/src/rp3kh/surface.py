"""Orientation double cover of a diagram and region queries on it.

Every RP^2 question (faces, which side of a circle a point lies on) is
answered on the sphere that double covers the disk model.  The sphere carries
a connected combinatorial map built from

* two lifts of every crossing (copy 0 keeps the disk orientation, copy 1 is
  mirrored),
* the equator, subdivided at the boundary points (copy-0 position ``j`` and
  copy-1 position ``j + k`` coincide there),
* two lifts of every arc, and
* bridge edges that tie affine pieces to the equator.

Faces are traced with the usual rotation-system rule, and regions of the
sphere minus a chosen set of lifted circles are unions of faces obtained by
connected components.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .diagram import Diagram, DiagramError, Smoothing

LINK, EQUATOR, BRIDGE = 0, 1, 2


@dataclass
class SphereMap:
    """Connected combinatorial map of the double cover.

    Darts are ``2 * edge`` (tail to head) and ``2 * edge + 1`` (reversed).
    """

    edge_kind: np.ndarray  # per edge
    edge_arc: np.ndarray  # arc id for link edges, else -1
    edge_copy: np.ndarray  # copy for link/bridge edges, else -1
    rotation: list  # per vertex: ccw list of darts leaving it
    dart_vertex: np.ndarray  # tail vertex of each dart
    deck_dart: np.ndarray
    corner_dart: np.ndarray  # (n, 2, 4): dart whose left face is the corner between slots s, s+1

    @cached_property
    def next_dart(self) -> np.ndarray:
        nd = np.empty(len(self.dart_vertex), dtype=np.int64)
        for rot in self.rotation:
            m = len(rot)
            for i, h in enumerate(rot):
                # the dart arriving along h ^ 1 continues clockwise from h
                nd[h ^ 1] = rot[(i - 1) % m]
        return nd

    @cached_property
    def dart_face(self) -> np.ndarray:
        face = np.full(len(self.dart_vertex), -1, dtype=np.int64)
        nd = self.next_dart
        f = 0
        for d in range(len(face)):
            if face[d] >= 0:
                continue
            x = d
            while face[x] < 0:
                face[x] = f
                x = nd[x]
            f += 1
        return face

    @property
    def face_count(self) -> int:
        return int(self.dart_face.max()) + 1 if len(self.dart_face) else 1

    @property
    def vertex_count(self) -> int:
        return len(self.rotation)

    @property
    def edge_count(self) -> int:
        return len(self.edge_kind)

    @cached_property
    def deck_face(self) -> np.ndarray:
        out = np.empty(self.face_count, dtype=np.int64)
        for d in range(len(self.dart_face)):
            # orientation reversing: the left of d maps to the right of deck(d)
            out[self.dart_face[d]] = self.dart_face[self.deck_dart[d] ^ 1]
        return out

    @cached_property
    def corner_face(self) -> np.ndarray:
        return self.dart_face[self.corner_dart]

    @cached_property
    def link_sides(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(left face, right face, arc) for every link edge."""
        e = np.nonzero(self.edge_kind == LINK)[0]
        return self.dart_face[2 * e], self.dart_face[2 * e + 1], self.edge_arc[e]

    @cached_property
    def free_pairs(self) -> np.ndarray:
        """Face pairs glued across equator and bridge edges."""
        e = np.nonzero(self.edge_kind != LINK)[0]
        return np.stack([self.dart_face[2 * e], self.dart_face[2 * e + 1]], axis=1)

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count


def build_sphere(d: Diagram) -> SphereMap:
    n, k, nb = d.n, d.k, d.boundary_points
    kv = k if k else 1  # the equator always has at least two vertices
    edges: list[tuple[int, int, int, int, int]] = []  # kind, arc, copy, tail, head
    n_arcs = len(d.arcs)

    # vertex numbering: crossings (c, t) -> 2c + t; equator E_j -> 2n + j; loops after
    def xv(c, t):
        return 2 * c + t

    def ev(j):
        return 2 * n + j

    def lv(i, t):
        return 2 * n + 2 * kv + 2 * i + t

    n_vertices = 2 * n + 2 * kv + 2 * d.loops
    rot: list[list[int]] = [[] for _ in range(n_vertices)]

    # slot darts at crossings, and copy0/copy1 attachments at equator vertices
    slot_dart = np.full((n, 2, 4), -1, dtype=np.int64)
    eq_in: dict[int, list[int]] = {j: [] for j in range(2 * kv)}  # copy-0 side
    eq_out: dict[int, list[int]] = {j: [] for j in range(2 * kv)}  # copy-1 side

    def place(e, end, t, dart):
        if e[0] == "x":
            slot_dart[e[1], t, e[2]] = dart
        elif t == 0:
            eq_in[e[1]].append(dart)
        else:
            eq_out[(e[1] + k) % nb].append(dart)

    def vertex_of(e, t):
        if e[0] == "x":
            return xv(e[1], t)
        return ev(e[1] if t == 0 else (e[1] + k) % nb)

    for a in range(n_arcs):
        e0, e1 = d.endpoint(a, 0), d.endpoint(a, 1)
        for t in (0, 1):
            idx = len(edges)
            edges.append((LINK, a, t, vertex_of(e0, t), vertex_of(e1, t)))
            place(e0, 0, t, 2 * idx)
            place(e1, 1, t, 2 * idx + 1)

    seg_dart = []
    for j in range(2 * kv):
        idx = len(edges)
        edges.append((EQUATOR, -1, -1, ev(j), ev((j + 1) % (2 * kv))))
        seg_dart.append(2 * idx)

    bridge_at: dict[tuple[int, int], int] = {}
    bridge_pairs: list[tuple[int, int]] = []
    if k == 0 and n > 0:
        # the crosscap sits in the face at the corner between slots 0 and 1 of crossing 0
        pair = []
        for t in (0, 1):
            idx = len(edges)
            edges.append((BRIDGE, -1, t, ev(t), xv(0, t)))
            (eq_in[0] if t == 0 else eq_out[1]).append(2 * idx)
            bridge_at[(0, t)] = 2 * idx + 1
            pair.append(idx)
        bridge_pairs.append(tuple(pair))
    for i in range(d.loops):
        pair = []
        for t in (0, 1):
            b = len(edges)
            edges.append((BRIDGE, -1, t, ev(t), lv(i, t)))
            (eq_in[0] if t == 0 else eq_out[1]).append(2 * b)
            le = len(edges)
            edges.append((LINK, n_arcs + i, t, lv(i, t), lv(i, t)))
            if t == 0:
                rot[lv(i, t)] = [2 * b + 1, 2 * le, 2 * le + 1]
            else:
                rot[lv(i, t)] = [2 * b + 1, 2 * le + 1, 2 * le]
            pair.append(b)
        bridge_pairs.append(tuple(pair))
    if d.loops:
        # copy-1 attachments appear in reverse order under the mirror
        eq_out[1].reverse()

    for c in range(n):
        for t in (0, 1):
            order = [0, 1, 2, 3] if t == 0 else [0, 3, 2, 1]
            r = [int(slot_dart[c, t, s]) for s in order]
            if (c, t) in bridge_at:
                # insert between slot 0 and slot 1 of the disk chart
                pos = 1 if t == 0 else 4
                r.insert(pos, bridge_at[(c, t)])
            rot[xv(c, t)] = r

    for j in range(2 * kv):
        r = list(eq_out[j]) + [seg_dart[j]] + list(eq_in[j]) + [seg_dart[(j - 1) % (2 * kv)] ^ 1]
        rot[ev(j)] = r

    kind = np.array([e[0] for e in edges], dtype=np.int64)
    arc = np.array([e[1] for e in edges], dtype=np.int64)
    copy = np.array([e[2] for e in edges], dtype=np.int64)
    dart_vertex = np.empty(2 * len(edges), dtype=np.int64)
    for i, e in enumerate(edges):
        dart_vertex[2 * i], dart_vertex[2 * i + 1] = e[3], e[4]

    # deck transformation on darts
    deck_edge = np.empty(len(edges), dtype=np.int64)
    link_index = {(e[1], e[2]): i for i, e in enumerate(edges) if e[0] == LINK}
    for i, e in enumerate(edges):
        if e[0] == LINK:
            deck_edge[i] = link_index[(e[1], 1 - e[2])]
    for j in range(2 * kv):
        deck_edge[seg_dart[j] // 2] = seg_dart[(j + kv) % (2 * kv)] // 2
    for b0, b1 in bridge_pairs:
        deck_edge[b0], deck_edge[b1] = b1, b0
    deck = np.empty(2 * len(edges), dtype=np.int64)
    deck[0::2] = 2 * deck_edge
    deck[1::2] = 2 * deck_edge + 1

    corner_dart = np.empty((n, 2, 4), dtype=np.int64)
    for c in range(n):
        for s in range(4):
            corner_dart[c, 0, s] = slot_dart[c, 0, s]
            corner_dart[c, 1, s] = slot_dart[c, 1, (s + 1) % 4]

    return SphereMap(kind, arc, copy, rot, dart_vertex, deck, corner_dart)


def embedding_problems(d: Diagram) -> list[str]:
    sm = sphere(d)
    chi = sm.euler_characteristic()
    if chi != 2:
        return [f"not embeddable in RP^2: double cover has Euler characteristic {chi}"]
    return []


_SPHERES: dict[int, tuple[Diagram, SphereMap]] = {}


def sphere(d: Diagram) -> SphereMap:
    """Cached double cover of ``d``."""
    key = id(d)
    hit = _SPHERES.get(key)
    if hit is not None and hit[0] is d:
        return hit[1]
    sm = build_sphere(d)
    if len(_SPHERES) > 512:
        _SPHERES.clear()
    _SPHERES[key] = (d, sm)
    return sm


# --------------------------------------------------------------------- regions
def _components(n_nodes: int, pairs: list[np.ndarray]) -> np.ndarray:
    p = np.concatenate([x.reshape(-1, 2) for x in pairs if x.size]) if pairs else np.empty((0, 2))
    if p.size == 0:
        return np.arange(n_nodes)
    g = coo_matrix((np.ones(len(p), dtype=np.int8), (p[:, 0], p[:, 1])), shape=(n_nodes, n_nodes))
    return connected_components(g, directed=False)[1]


def region_labels(sm_obj: Smoothing, barrier: np.ndarray | None = None) -> np.ndarray:
    """Label each sphere face by its region in the complement of lifted circles.

    ``barrier`` is a boolean mask over the smoothing's circles; circles outside
    the mask are erased.  ``None`` keeps every circle.
    """
    d = sm_obj.diagram
    sm = sphere(d)
    coa = np.asarray(sm_obj.circle_of_arc, dtype=np.int64)
    if barrier is None:
        barrier = np.ones(sm_obj.k_s, dtype=bool)
    pairs = [sm.free_pairs]
    left, right, arcs = sm.link_sides
    open_edge = ~barrier[coa[arcs]]
    pairs.append(np.stack([left[open_edge], right[open_edge]], axis=1))
    if d.n:
        cf = sm.corner_face  # (n, 2, 4)
        types = np.array([d.resolution_type(c, b) for c, b in enumerate(sm_obj.state)])
        # type 0 hugs corners 0 and 2 (strands 0-1, 2-3); type 1 hugs corners 1 and 3
        hug = np.where(types[:, None] == 0, [[0, 2]], [[1, 3]])
        mid = np.where(types[:, None] == 0, [[1, 3]], [[0, 2]])
        cidx = np.arange(d.n)
        for t in (0, 1):
            a = cf[cidx, t, mid[:, 0]]
            b = cf[cidx, t, mid[:, 1]]
            pairs.append(np.stack([a, b], axis=1))
            for h in (0, 1):
                slot = hug[:, h]
                strand_arc = np.array([d.arc_at(("x", c, int(s)))[0] for c, s in zip(cidx, slot)])
                keep = ~barrier[coa[strand_arc]]
                pairs.append(np.stack([cf[cidx, t, slot][keep], a[keep]], axis=1))
    return _components(sm.face_count, pairs)


def encircles(sm_obj: Smoothing, circle: int, face: int) -> bool:
    """Whether face ``face`` lies on the disk side of ``circle``.

    Decided by flood fill: the two lifts of a point are separated by the two
    lifts of the circle exactly when the point is on the disk side.
    """
    c = sm_obj.circles[circle]
    if c.crosscap_parity:
        raise DiagramError(f"circle {circle} is one-sided; it has no disk side")
    mask = np.zeros(sm_obj.k_s, dtype=bool)
    mask[circle] = True
    lab = region_labels(sm_obj, mask)
    f0, f1 = face_lifts(sm_obj.diagram, face)
    return bool(lab[f0] != lab[f1])


def encircling_number(sm_obj: Smoothing, face: int) -> int:
    """Parity of the number of null-homologous circles whose disk contains ``face``.

    Regions of the sphere minus all lifted circles form a tree; the path
    between the two lifts of a point crosses each lifted circle that encircles
    it twice and each one-sided circle once.
    """
    d = sm_obj.diagram
    if sm_obj.k_s == 0:
        return 0
    sm = sphere(d)
    lab = region_labels(sm_obj)
    left, right, _ = sm.link_sides
    a, b = lab[left], lab[right]
    adj: dict[int, set[int]] = {}
    for x, y in zip(a.tolist(), b.tolist()):
        if x != y:
            adj.setdefault(x, set()).add(y)
            adj.setdefault(y, set()).add(x)
    f0, f1 = face_lifts(d, face)
    src, dst = int(lab[f0]), int(lab[f1])
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        if x == dst:
            break
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    special = sum(c.crosscap_parity for c in sm_obj.circles)
    return ((dist[dst] - special) // 2) % 2


# ----------------------------------------------------------------------- faces
@dataclass(frozen=True)
class FaceInfo:
    lifts: tuple[int, int]  # representative sphere faces for the two lifts
    darts: tuple[int, ...]  # RP^2 darts (2 * arc + direction) on its boundary


_FACES: dict[int, tuple[Diagram, tuple[FaceInfo, ...]]] = {}


def faces(d: Diagram) -> tuple[FaceInfo, ...]:
    """Regions of RP^2 minus the diagram, ordered by minimal incident dart."""
    hit = _FACES.get(id(d))
    if hit is not None and hit[0] is d:
        return hit[1]
    sm = sphere(d)
    lab = _components(sm.face_count, [sm.free_pairs])
    groups: dict[int, list[int]] = {}
    for f in range(sm.face_count):
        groups.setdefault(int(lab[f]), []).append(f)
    # deck acts on regions; pair them into orbits
    region_deck = {int(lab[f]): int(lab[sm.deck_face[f]]) for f in range(sm.face_count)}
    darts_of: dict[int, set[int]] = {}
    for e in np.nonzero(sm.edge_kind == LINK)[0]:
        a = int(sm.edge_arc[e])
        for side in (0, 1):
            r = int(lab[sm.dart_face[2 * e + side]])
            orbit = min(r, region_deck[r])
            # copy 1 is mirrored, so its left side is the chart's right side
            chart_side = side if sm.edge_copy[e] == 0 else 1 - side
            darts_of.setdefault(orbit, set()).add(2 * a + chart_side)
    orbits = sorted({min(r, region_deck[r]) for r in groups})
    infos = []
    for o in orbits:
        darts = tuple(sorted(darts_of.get(o, ())))
        infos.append(FaceInfo((groups[o][0], groups[region_deck[o]][0]), darts))
    infos.sort(key=lambda fi: fi.darts[0] if fi.darts else -1)
    out = tuple(infos)
    if len(_FACES) > 512:
        _FACES.clear()
    _FACES[id(d)] = (d, out)
    return out


def face_lifts(d: Diagram, face: int) -> tuple[int, int]:
    fs = faces(d)
    if not 0 <= face < len(fs):
        raise DiagramError(f"face {face} out of range (diagram has {len(fs)} faces)")
    return fs[face].lifts


def face_of_dart(d: Diagram, arc: int, left: bool = True) -> int:
    """Face of RP^2 to the left (or right) of ``arc`` read from end 0 to end 1 in the disk chart."""
    sm = sphere(d)
    e = int(np.nonzero((sm.edge_kind == LINK) & (sm.edge_arc == arc) & (sm.edge_copy == 0))[0][0])
    f = sm.dart_face[2 * e + (0 if left else 1)]
    lab = _components(sm.face_count, [sm.free_pairs])
    for i, fi in enumerate(faces(d)):
        if lab[fi.lifts[0]] == lab[f] or lab[fi.lifts[1]] == lab[f]:
            return i
    raise DiagramError("face lookup failed")


def region_parity(d: Diagram, face: int) -> int:
    """Parity of the linking number of the link with the fiber over ``face``."""
    if d.link_class:
        raise DiagramError("region parity needs a null-homologous link")
    return encircling_number(d.resolve(d.seifert_state()), face)


def canonical_base_face(d: Diagram) -> int:
    for i in range(len(faces(d))):
        if region_parity(d, i) == 0:
            return i
    raise DiagramError("no face with even linking parity")


def base_face(d: Diagram) -> int:
    """Explicit override if present, else the canonical face."""
    if d.basepoint_face is not None:
        return int(d.basepoint_face)
    return canonical_base_face(d)


def unencircled_faces(d: Diagram) -> list[int]:
    """Faces lying on both sides of some arc.

    A path joining the two lifts of such a face crosses the lifted diagram
    once, so no null-homologous circle of any smoothing can separate them:
    the face is never encircled.
    """
    out = []
    for i, fi in enumerate(faces(d)):
        darts = set(fi.darts)
        if any(x ^ 1 in darts for x in darts):
            out.append(i)
    return out


def class1_base_face(d: Diagram) -> int:
    """Default P for links that are nontrivial in homology.

    At a face some trivial circle can encircle, a trivial circle merging
    into the special circle and then splitting off again gives a square whose
    two paths disagree, so the first never-encircled face is used.
    """
    if d.basepoint_face is not None:
        return int(d.basepoint_face)
    found = unencircled_faces(d)
    return found[0] if found else 0


def smoothing_euler_ok(sm_obj: Smoothing) -> bool:
    """Jordan check on the lifted smoothing.

    ``m`` disjoint embedded circles cut the sphere into exactly ``m + 1``
    regions.  Put one vertex on each circle and join the circles by ``m - 1``
    bridges through the regions; then V - E + F = m - (2m - 1) + (m + 1) = 2,
    so the region count is the Euler characteristic check.
    """
    lab = region_labels(sm_obj)
    regions = len(np.unique(lab))
    lifted = sum(1 if c.crosscap_parity else 2 for c in sm_obj.circles)
    return regions == lifted + 1
