"""Rank over F2 on bit-packed rows.

The numba kernel is used when numba imports and ``RP3KH_NO_NUMBA`` is unset
or ``0``; otherwise a vectorised numpy elimination runs.  Both operate on the
same packed layout: one row per uint64 array, bit ``j % 64`` of word
``j // 64`` holding column ``j``.
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("RP3KH_NO_NUMBA", "0") in ("", "0")

try:  # pragma: no cover - exercised through BACKEND
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into uint64 words, little-endian within each word."""
    dense = np.asarray(dense, dtype=np.uint8) & 1
    rows, cols = dense.shape
    words = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = dense
    as_bytes = np.packbits(padded.reshape(rows, words * 8, 8), axis=2, bitorder="little")
    return np.ascontiguousarray(as_bytes.reshape(rows, words * 8)).view(np.uint64).copy()


def rank_packed_numpy(packed: np.ndarray, ncols: int) -> int:
    m = packed.copy()
    rows = m.shape[0]
    rank = 0
    for col in range(ncols):
        if rank == rows:
            break
        w, bit = divmod(col, 64)
        mask = np.uint64(1) << np.uint64(bit)
        hits = np.flatnonzero(m[rank:, w] & mask)
        if hits.size == 0:
            continue
        p = rank + int(hits[0])
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        below = rank + 1 + np.flatnonzero(m[rank + 1:, w] & mask)
        if below.size:
            m[below, w:] ^= m[rank, w:]
        rank += 1
    return rank


if njit is not None:

    @njit(cache=True)
    def _rank_packed_numba(m, ncols):  # pragma: no cover - compiled
        rows, words = m.shape
        rank = 0
        one = np.uint64(1)
        for col in range(ncols):
            if rank == rows:
                break
            w = col // 64
            mask = one << np.uint64(col % 64)
            p = -1
            for r in range(rank, rows):
                if m[r, w] & mask:
                    p = r
                    break
            if p < 0:
                continue
            if p != rank:
                for k in range(w, words):
                    tmp = m[rank, k]
                    m[rank, k] = m[p, k]
                    m[p, k] = tmp
            for r in range(rank + 1, rows):
                if m[r, w] & mask:
                    for k in range(w, words):
                        m[r, k] ^= m[rank, k]
            rank += 1
        return rank

    def rank_packed(packed: np.ndarray, ncols: int) -> int:
        return int(_rank_packed_numba(packed.copy(), ncols))

else:
    rank_packed = rank_packed_numpy


def rank_gf2(dense: np.ndarray, backend: str | None = None) -> int:
    dense = np.asarray(dense)
    if dense.size == 0:
        return 0
    # eliminate along the shorter side
    if dense.shape[1] > dense.shape[0]:
        dense = dense.T
    packed = pack_rows(dense)
    if backend == "numpy":
        return rank_packed_numpy(packed, dense.shape[1])
    return rank_packed(packed, dense.shape[1])
