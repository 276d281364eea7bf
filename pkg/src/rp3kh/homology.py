"""Bigraded homology over F2 of complexes built in :mod:`rp3kh.complex`."""

from __future__ import annotations

import json
from typing import Mapping

import numpy as np

from ._gf2 import rank_gf2
from .complex import ChainComplex, ComplexError, d_squared_witness
from .laurent import Laurent

DEBUG_CHECK_MAX_CROSSINGS = 12


def _block_rank(cx: ChainComplex, i: int, q: int | None) -> int:
    m = cx.d(i)
    if m.nnz == 0:
        return 0
    if q is None:
        return rank_gf2(m.toarray())
    rows = np.flatnonzero(cx.qdegs[i + 1] == q)
    cols = np.flatnonzero(cx.qdegs[i] == q)
    if not len(rows) or not len(cols):
        return 0
    sub = m[rows][:, cols]
    if sub.nnz == 0:
        return 0
    return rank_gf2(sub.toarray())


def homology_dims(cx: ChainComplex, check: bool | None = None, graded: bool | None = None) -> dict[tuple[int, int], int]:
    """Map (i, q) -> dim H.

    With a differential that does not preserve q (possible only for the
    class-1 variant with f or g nonzero) pass ``graded=False``; then all
    homology is reported at q = 0.
    """
    if check is None:
        check = cx.diagram.n <= DEBUG_CHECK_MAX_CROSSINGS
    if check:
        w = d_squared_witness(cx)
        if w is not None:
            raise ComplexError(f"d^2 != 0 at level {w[0]}: state {w[1]} -> {w[2]}")
    if graded is None:
        graded = True
    if graded and not cx.is_q_homogeneous():
        raise ComplexError("differential does not preserve the quantum grading")
    out: dict[tuple[int, int], int] = {}
    if graded:
        dims = cx.chain_dims()
        for (i, q), n in sorted(dims.items()):
            h = n - _block_rank(cx, i, q) - _block_rank(cx, i - 1, q)
            if h:
                out[(i, q)] = h
    else:
        for i in cx.degrees:
            h = cx.level_dim(i) - _block_rank(cx, i, None) - _block_rank(cx, i - 1, None)
            if h:
                out[(i, 0)] = h
    return out


def poincare(dims: Mapping[tuple[int, int], int]) -> Laurent:
    return Laurent(dict(dims))


def euler_characteristic(p: Laurent) -> Laurent:
    return p.at_t(-1)


def chain_euler(cx: ChainComplex) -> Laurent:
    return euler_characteristic(poincare(cx.chain_dims()))


def terms_json(dims: Mapping[tuple[int, int], int]) -> str:
    return json.dumps({"terms": [[i, q, n] for (i, q), n in sorted(dims.items())]})


def dims_from_json(text: str) -> dict[tuple[int, int], int]:
    return {(int(i), int(q)): int(n) for i, q, n in json.loads(text)["terms"]}


def compute(d, dyad, variant="reduced", face=None, marked_arc=None) -> Laurent:
    """Poincare polynomial of one diagram in one line."""
    from .complex import build_complex

    cx = build_complex(d, dyad, variant, face, marked_arc)
    graded = cx.is_q_homogeneous() if variant == "class1" else True
    return poincare(homology_dims(cx, graded=graded))
