"""Cube of resolutions and the dyad-valued chain complexes.

Three flavours share one engine:

``reduced``
    the marked circle carries ``V_e`` (``e`` the encircling number of the
    base face), every other circle carries ``V``.
``unreduced``
    every circle carries ``V`` and ``V_e`` rides along as a background factor.
``class1``
    for links that are nontrivial in homology; the one-sided circle carries
    ``V_e``.

Generators of a state are indexed in mixed radix with the distinguished
factor most significant, followed by one binary digit per remaining circle
(0 for v+, 1 for v-).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from . import surface
from .algebra import Dyad, LinearMapF2
from .diagram import Diagram, DiagramError, Smoothing

VARIANTS = ("reduced", "unreduced", "class1")


class ComplexError(ValueError):
    pass


# ------------------------------------------------------------------ edges
@dataclass(frozen=True)
class EdgeKind:
    """How one bit flip changes the circles.

    ``source`` and ``target`` list touched circle ids (indices into the
    smoothings' circle tuples); ``carry`` maps every untouched source circle
    to its target circle.
    """

    kind: str  # "merge" | "split" | "twist"
    source: tuple[int, ...]
    target: tuple[int, ...]
    carry: tuple[tuple[int, int], ...]


def _touched(sm: Smoothing, crossing: int) -> list[int]:
    d = sm.diagram
    arcs = {d.arc_at(("x", crossing, s))[0] for s in range(4)}
    return sorted({sm.circle_of_arc[a] for a in arcs})


def classify_edge(sm: Smoothing, sm2: Smoothing, crossing: int) -> EdgeKind:
    diff = [c for c, (a, b) in enumerate(zip(sm.state, sm2.state)) if a != b]
    if diff != [crossing] or sm.state[crossing] != 0:
        raise ComplexError(f"states {sm.state} -> {sm2.state} are not an edge at {crossing}")
    src = _touched(sm, crossing)
    dst = _touched(sm2, crossing)
    carry = []
    by_arcs = {sm2.circles[j].arc_set: j for j in range(sm2.k_s)}
    for i in range(sm.k_s):
        if i in src:
            continue
        carry.append((i, by_arcs[sm.circles[i].arc_set]))
    if len(src) == 2 and len(dst) == 1:
        kind = "merge"
    elif len(src) == 1 and len(dst) == 2:
        kind = "split"
    elif len(src) == 1 and len(dst) == 1:
        kind = "twist"
    else:
        raise ComplexError(f"unexpected bifurcation {len(src)} -> {len(dst)}")
    return EdgeKind(kind, tuple(src), tuple(dst), tuple(carry))


# ------------------------------------------------------------- state data
@dataclass(frozen=True)
class StateBlock:
    """Generators of one vertex of the cube."""

    state: tuple[int, ...]
    smoothing: Smoothing
    parity: int  # encircling number of the base face
    labels: tuple[int, ...]  # circle id -> tensor position (0 = distinguished)
    base_dim: int  # dimension of the distinguished factor
    free: int  # number of binary digits
    level: int  # homological degree
    offset: int  # first index inside its level

    @property
    def size(self) -> int:
        return self.base_dim << self.free

    def index(self, digits: np.ndarray) -> np.ndarray:
        """Mixed-radix index of rows of digits (column 0 is the base factor)."""
        idx = digits[:, 0].astype(np.int64)
        for j in range(1, self.free + 1):
            idx = (idx << 1) | digits[:, j]
        return idx

    def digits(self) -> np.ndarray:
        n = self.size
        idx = np.arange(n, dtype=np.int64)
        out = np.empty((n, self.free + 1), dtype=np.int64)
        for j in range(self.free, 0, -1):
            out[:, j] = idx & 1
            idx >>= 1
        out[:, 0] = idx
        return out


def _circle_order(sm: Smoothing, first: int | None) -> tuple[int, ...]:
    """Label circles by minimal arc id, moving ``first`` to the front."""
    order = sorted(range(sm.k_s), key=lambda c: min(sm.circles[c].arcs))
    if first is not None:
        order.remove(first)
        order.insert(0, first)
    labels = [0] * sm.k_s
    for pos, c in enumerate(order):
        labels[c] = pos
    return tuple(labels)


@dataclass(eq=False)
class ChainComplex:
    diagram: Diagram
    dyad: Dyad
    variant: str
    face: int
    marked_arc: int | None
    n_plus: int
    n_minus: int
    blocks: tuple[StateBlock, ...]
    differentials: dict[int, sp.csr_matrix] = field(default_factory=dict)
    edges: dict[tuple[tuple[int, ...], int], EdgeKind] = field(default_factory=dict)

    @cached_property
    def levels(self) -> dict[int, list[StateBlock]]:
        out: dict[int, list[StateBlock]] = {}
        for b in self.blocks:
            out.setdefault(b.level, []).append(b)
        return out

    def level_dim(self, i: int) -> int:
        return sum(b.size for b in self.levels.get(i, ()))

    @cached_property
    def qdegs(self) -> dict[int, np.ndarray]:
        """Shifted quantum degree of every generator, per homological level."""
        out = {}
        for i, blocks in self.levels.items():
            parts = []
            for b in blocks:
                space = self.dyad.space(b.parity)
                dig = b.digits()
                q = space.qdegs[dig[:, 0]] if space.dim else np.zeros(0, np.int64)
                q = q + (b.free - 2 * dig[:, 1:].sum(axis=1))
                parts.append(q + i + self.n_plus - self.n_minus)
            out[i] = np.concatenate(parts) if parts else np.zeros(0, np.int64)
        return out

    def d(self, i: int) -> sp.csr_matrix:
        if i in self.differentials:
            return self.differentials[i]
        return sp.csr_matrix((self.level_dim(i + 1), self.level_dim(i)), dtype=np.uint8)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.levels)

    def chain_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for i, q in self.qdegs.items():
            vals, counts = np.unique(q, return_counts=True)
            for v, c in zip(vals.tolist(), counts.tolist()):
                out[(i, v)] = c
        return out

    def is_q_homogeneous(self) -> bool:
        for i, m in self.differentials.items():
            coo = m.tocoo()
            if np.any(self.qdegs[i + 1][coo.row] != self.qdegs[i][coo.col]):
                return False
        return True

    def locate(self, i: int, index: int) -> tuple[tuple[int, ...], int]:
        """State and local index of a generator."""
        for b in self.levels[i]:
            if b.offset <= index < b.offset + b.size:
                return b.state, index - b.offset
        raise IndexError(index)

    def to_json(self) -> dict:
        gens = []
        for i in self.degrees:
            q = self.qdegs[i]
            for b in self.levels[i]:
                for local in range(b.size):
                    gens.append({"i": i, "q": int(q[b.offset + local]),
                                 "state": "".join(map(str, b.state)), "index": local})
        entries = []
        for i, m in sorted(self.differentials.items()):
            coo = m.tocoo()
            for r, c in sorted(zip(coo.row.tolist(), coo.col.tolist())):
                entries.append([i, c, r])
        return {
            "variant": self.variant,
            "dyad": self.dyad.name,
            "face": self.face,
            "marked_arc": self.marked_arc,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "generators": gens,
            "differential": entries,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ------------------------------------------------------------ construction
def _all_states(n: int):
    return itertools.product((0, 1), repeat=n)


def _expand_base(rows, digits, lin: LinearMapF2 | None):
    """Apply ``lin`` to the distinguished digit; returns new (rows, digits)."""
    if lin is None:
        return rows, digits
    r_out, d_out = [], []
    mat = lin.matrix
    for tgt, src in zip(*np.nonzero(mat)):
        sel = digits[:, 0] == src
        if sel.any():
            dd = digits[sel].copy()
            dd[:, 0] = tgt
            r_out.append(rows[sel])
            d_out.append(dd)
    if not r_out:
        return rows[:0], digits[:0]
    return np.concatenate(r_out), np.concatenate(d_out)


def _edge_block(cx: ChainComplex, b: StateBlock, b2: StateBlock, edge: EdgeKind, crossing: int):
    """Sparse block from ``b`` to ``b2`` as (target index, source index) arrays."""
    dyad = cx.dyad
    variant = cx.variant
    src_dig = b.digits()
    rows = np.arange(b.size, dtype=np.int64)
    width = b2.free + 1
    base = np.zeros((b.size, width), dtype=np.int64)
    base[:, 0] = src_dig[:, 0]
    for s, t in edge.carry:
        base[:, b2.labels[t]] = src_dig[:, b.labels[s]]
    pos = b.labels
    pos2 = b2.labels
    outs = []  # list of (rows, digits, linear map on base factor or None)

    def encircled(sm, circle):
        return surface.encircles(sm, circle, cx.face)

    if edge.kind == "twist":
        (s,), (t,) = edge.source, edge.target
        dig = base.copy()
        if pos2[t]:
            dig[:, pos2[t]] = src_dig[:, pos[s]]
        outs.append((rows, dig, dyad.map_from(b.parity)))
    elif edge.kind == "merge":
        s1, s2 = edge.source
        (t,) = edge.target
        p1, p2 = pos[s1], pos[s2]
        if p1 and p2:
            x, y = src_dig[:, p1], src_dig[:, p2]
            ok = (x & y) == 0
            dig = base[ok].copy()
            dig[:, pos2[t]] = (x | y)[ok]
            outs.append((rows[ok], dig, None))
        else:
            other, other_circle = (p2, s2) if p1 == 0 else (p1, s1)
            ok = src_dig[:, other] == 0
            lin = None
            if variant == "class1" and encircled(b.smoothing, other_circle):
                lin = dyad.map_from(b.parity)
            outs.append((rows[ok], base[ok], lin))
    else:  # split
        (s,) = edge.source
        t1, t2 = edge.target
        if pos[s]:
            x = src_dig[:, pos[s]]
            plus = x == 0
            for a, c in ((0, 1), (1, 0)):
                dig = base[plus].copy()
                dig[:, pos2[t1]] = a
                dig[:, pos2[t2]] = c
                outs.append((rows[plus], dig, None))
            dig = base[~plus].copy()
            dig[:, pos2[t1]] = 1
            dig[:, pos2[t2]] = 1
            outs.append((rows[~plus], dig, None))
        else:
            new = t2 if pos2[t1] == 0 else t1
            dig = base.copy()
            dig[:, pos2[new]] = 1
            lin = None
            if variant == "class1" and encircled(b2.smoothing, new):
                lin = dyad.map_from(b.parity)
            outs.append((rows, dig, lin))

    r_all, c_all = [], []
    for r, dig, lin in outs:
        r, dig = _expand_base(r, dig, lin)
        if len(r):
            r_all.append(b2.offset + b2.index(dig))
            c_all.append(b.offset + r)
    if not r_all:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate(r_all), np.concatenate(c_all)


def _mod2(rows, cols, shape) -> sp.csr_matrix:
    m = sp.coo_matrix((np.ones(len(rows), np.int64), (rows, cols)), shape=shape).tocsr()
    m.sum_duplicates()
    m.data %= 2
    m.eliminate_zeros()
    return m.astype(np.uint8)


_CUBES: dict[tuple[int, int], tuple] = {}


def _cube(d: Diagram, face: int):
    """Smoothings, encircling numbers and edge kinds; shared by every dyad."""
    key = (id(d), face)
    hit = _CUBES.get(key)
    if hit is not None and hit[0] is d:
        return hit[1], hit[2]
    cube = {}
    for state in _all_states(d.n):
        sm = d.resolve(state)
        cube[state] = (sm, surface.encircling_number(sm, face))
    edges = {}
    for state, (sm, _) in cube.items():
        for c in range(d.n):
            if not state[c]:
                s2 = state[:c] + (1,) + state[c + 1:]
                edges[(state, c)] = classify_edge(sm, cube[s2][0], c)
    if len(_CUBES) > 64:
        _CUBES.clear()
    _CUBES[key] = (d, cube, edges)
    return cube, edges


def build_complex(
    d: Diagram,
    dyad: Dyad,
    variant: str = "reduced",
    face: int | None = None,
    marked_arc: int | None = None,
) -> ChainComplex:
    if variant not in VARIANTS:
        raise ComplexError(f"unknown variant {variant!r}")
    cls = d.link_class
    if variant == "class1":
        if cls != 1:
            raise ComplexError("class1 variant needs a link that is nontrivial in homology")
        if marked_arc is not None:
            raise ComplexError("class1 variant takes no marked point")
        if face is None:
            face = surface.class1_base_face(d)
    else:
        if cls != 0:
            raise ComplexError("this variant needs a null-homologous link")
        if face is None:
            face = surface.base_face(d)
    surface.face_lifts(d, face)  # range check
    if variant == "reduced":
        if marked_arc is None:
            marked_arc = d.marked_arc if d.marked_arc is not None else 0
        if not 0 <= marked_arc < d.arc_count:
            raise ComplexError(f"marked arc {marked_arc} out of range")
    else:
        marked_arc = None
    n_plus, n_minus = d.crossing_signs() if d.n else (0, 0)

    cube, edges = _cube(d, face)
    blocks = []
    offsets: dict[int, int] = {}
    for state in _all_states(d.n):
        sm, e = cube[state]
        if variant == "reduced":
            labels = _circle_order(sm, sm.circle_of_arc[marked_arc])
            free = sm.k_s - 1
        elif variant == "class1":
            special = [c for c, ci in enumerate(sm.circles) if ci.crosscap_parity]
            if len(special) != 1:
                raise ComplexError(f"state {state} has {len(special)} one-sided circles")
            labels = _circle_order(sm, special[0])
            free = sm.k_s - 1
        else:
            labels = tuple(x + 1 for x in _circle_order(sm, None))
            free = sm.k_s
        level = sum(state) - n_minus
        base_dim = dyad.space(e).dim
        blk = StateBlock(state, sm, e, labels, base_dim, free, level, offsets.get(level, 0))
        offsets[level] = blk.offset + blk.size
        blocks.append(blk)

    cx = ChainComplex(d, dyad, variant, face, marked_arc, n_plus, n_minus, tuple(blocks))
    by_state = {b.state: b for b in blocks}
    parts: dict[int, tuple[list, list]] = {}
    for b in blocks:
        for c in range(d.n):
            if b.state[c]:
                continue
            s2 = b.state[:c] + (1,) + b.state[c + 1:]
            b2 = by_state[s2]
            edge = edges[(b.state, c)]
            cx.edges[(b.state, c)] = edge
            if not b.size or not b2.size:
                continue
            r, col = _edge_block(cx, b, b2, edge, c)
            acc = parts.setdefault(b.level, ([], []))
            acc[0].append(r)
            acc[1].append(col)
    for i in cx.levels:
        if i + 1 not in cx.levels:
            continue
        rows, cols = parts.get(i, ([], []))
        shape = (cx.level_dim(i + 1), cx.level_dim(i))
        if rows:
            cx.differentials[i] = _mod2(np.concatenate(rows), np.concatenate(cols), shape)
        else:
            cx.differentials[i] = _mod2(np.zeros(0, np.int64), np.zeros(0, np.int64), shape)
    return cx


def build_reduced_complex(d, dyad, face=None, marked_arc=None) -> ChainComplex:
    return build_complex(d, dyad, "reduced", face, marked_arc)


def build_unreduced_complex(d, dyad, face=None) -> ChainComplex:
    return build_complex(d, dyad, "unreduced", face)


def build_class1_complex(d, dyad, face=None) -> ChainComplex:
    return build_complex(d, dyad, "class1", face)


# --------------------------------------------------------------- checks
def d_squared_witness(cx: ChainComplex):
    """First nonzero entry of d o d as (level, source state, target state), or None."""
    for i in cx.degrees:
        if i + 1 not in cx.differentials or i not in cx.differentials:
            continue
        prod = (cx.differentials[i + 1].astype(np.int64) @ cx.differentials[i].astype(np.int64)).tocoo()
        bad = prod.data % 2 != 0
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            src, _ = cx.locate(i, int(prod.col[k]))
            dst, _ = cx.locate(i + 2, int(prod.row[k]))
            return i, src, dst
    return None


def verify_d_squared(cx: ChainComplex) -> bool:
    return d_squared_witness(cx) is None


def parity_transport_violations(d: Diagram, face: int) -> list[tuple[tuple[int, ...], int, str]]:
    """Cube edges where the encircling number fails to flip exactly on twists."""
    bad = []
    sms = {s: d.resolve(s) for s in _all_states(d.n)}
    es = {s: surface.encircling_number(sm, face) for s, sm in sms.items()}
    for s, sm in sms.items():
        for c in range(d.n):
            if s[c]:
                continue
            s2 = s[:c] + (1,) + s[c + 1:]
            kind = classify_edge(sm, sms[s2], c).kind
            flipped = es[s] != es[s2]
            if flipped != (kind == "twist"):
                bad.append((s, c, kind))
    return bad


# ------------------------------------------------- marked point transport
def _eta_image(free_set: frozenset[int], pivot: int) -> dict[frozenset[int], int]:
    """Image of the monomial prod_{c in free_set} S_c under the substitution
    S_pivot -> S_pivot, S_c -> S_pivot + S_c, modulo S^2 = 0."""
    if pivot in free_set:
        return {free_set: 1}
    out: dict[frozenset[int], int] = {free_set: 1}
    for c in free_set:
        m = (free_set - {c}) | {pivot}
        out[m] = out.get(m, 0) ^ 1
    return {m: v for m, v in out.items() if v}


def remark_isomorphism(cx: ChainComplex, cx2: ChainComplex) -> dict[int, sp.csr_matrix]:
    """Per-level map from the complex marked at ``cx.marked_arc`` to the one marked
    at ``cx2.marked_arc``.

    On a state where both marks share a circle the map is the identity.
    Otherwise the free variables are rewritten with the target circle as pivot
    and the two marked circles trade places.
    """
    if cx.variant != "reduced" or cx2.variant != "reduced":
        raise ComplexError("marked point transport needs reduced complexes")
    if cx.diagram is not cx2.diagram or cx.dyad != cx2.dyad or cx.face != cx2.face:
        raise ComplexError("complexes differ in more than the marked point")
    by_state2 = {b.state: b for b in cx2.blocks}
    parts: dict[int, tuple[list, list]] = {}
    for b in cx.blocks:
        b2 = by_state2[b.state]
        sm = b.smoothing
        old = sm.circle_of_arc[cx.marked_arc]
        new = sm.circle_of_arc[cx2.marked_arc]
        circle_at = {p: c for c, p in enumerate(b.labels)}
        rows, cols = [], []
        dig = b.digits()
        for local in range(b.size):
            y = int(dig[local, 0])
            minus = frozenset(circle_at[p] for p in range(1, b.free + 1) if dig[local, p])
            image = {minus: 1} if old == new else _eta_image(minus, new)
            for mono in image:
                if old != new and new in mono:
                    mono = (mono - {new}) | {old}
                out = np.zeros((1, b2.free + 1), np.int64)
                out[0, 0] = y
                for c in mono:
                    out[0, b2.labels[c]] = 1
                rows.append(int(b2.offset + b2.index(out)[0]))
                cols.append(b.offset + local)
        acc = parts.setdefault(b.level, ([], []))
        acc[0].extend(rows)
        acc[1].extend(cols)
    out = {}
    for i, (r, c) in parts.items():
        n = cx.level_dim(i)
        out[i] = _mod2(np.asarray(r, np.int64), np.asarray(c, np.int64), (n, n))
    return out


def is_chain_isomorphism(cx: ChainComplex, cx2: ChainComplex, phi: dict[int, sp.csr_matrix]) -> bool:
    from ._gf2 import rank_gf2

    for i in cx.degrees:
        m = phi[i]
        if m.shape[0] and rank_gf2(m.toarray()) != m.shape[0]:
            return False
        if i + 1 in cx.levels:
            lhs = (phi[i + 1].astype(np.int64) @ cx.d(i).astype(np.int64))
            rhs = (cx2.d(i).astype(np.int64) @ phi[i].astype(np.int64))
            diff = (lhs - rhs).tocoo()
            if np.any(diff.data % 2):
                return False
    return True
