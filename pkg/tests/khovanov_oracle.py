"""Brute-force reduced Khovanov homology over F2 straight from a PD code.

Shares no code with the package: smoothings come from union-find on PD edge
labels, generators are enumerated as label tuples, and ranks come from
Gaussian elimination on Python integers used as bit rows.
"""

from __future__ import annotations

import itertools
from collections import Counter


def crossing_is_positive(x) -> bool:
    i, j, k, l = x
    return j - l == 1 or l - j > 1


def _circles(pd, state):
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for x, bit in zip(pd, state):
        i, j, k, l = x
        if bit == 0:
            union(i, j), union(k, l)
        else:
            union(i, l), union(j, k)
    roots = sorted({find(a) for x in pd for a in x})
    return {lab: roots.index(find(lab)) for x in pd for lab in x}, len(roots)


def _rank(rows: list[int]) -> int:
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                break
    return len(basis)


def reduced_khovanov(pd, marked_label: int = 1) -> Counter:
    """Counter mapping (i, q) to the rank of reduced Khovanov homology over F2.

    The reduced complex is the quotient by the submodule where the marked
    circle carries x; its basis is the set of generators with the marked
    circle labelled 1.
    """
    n = len(pd)
    n_plus = sum(crossing_is_positive(x) for x in pd)
    n_minus = n - n_plus
    gens: dict[int, list] = {}
    index: dict[tuple, int] = {}
    info = {}
    for state in itertools.product((0, 1), repeat=n):
        where, k = _circles(pd, state)
        info[state] = where
        marked = where[marked_label]
        r = sum(state)
        for labels in itertools.product((0, 1), repeat=k):  # 0 = 1, 1 = x
            if labels[marked]:
                continue
            q = sum(1 - 2 * v for v in labels) + r + n_plus - 2 * n_minus - 1
            key = (state, labels)
            lst = gens.setdefault(r, [])
            index[key] = len(lst)
            lst.append((key, q))

    def image(state, labels, c):
        """Ordinary Khovanov edge map at crossing c, projected to the quotient."""
        s2 = state[:c] + (1,) + state[c + 1:]
        w1, w2 = info[state], info[s2]
        x = pd[c]
        old = sorted({w1[a] for a in x})
        new = sorted({w2[a] for a in x})
        # circles away from the crossing keep their labels
        k2 = max(w2.values()) + 1
        base = [None] * k2
        for lab in w1:
            if w1[lab] not in old:
                base[w2[lab]] = labels[w1[lab]]
        outs = []
        if len(old) == 2:  # merge
            a, b = labels[old[0]], labels[old[1]]
            if a + b <= 1:
                t = list(base)
                t[new[0]] = a + b
                outs.append(t)
        else:  # split
            a = labels[old[0]]
            if a == 0:
                for u, v in ((0, 1), (1, 0)):
                    t = list(base)
                    t[new[0]], t[new[1]] = u, v
                    outs.append(t)
            else:
                t = list(base)
                t[new[0]] = t[new[1]] = 1
                outs.append(t)
        marked = w2[marked_label]
        return [(s2, tuple(t)) for t in outs if t[marked] == 0]

    ranks = {}
    for r in range(n):
        rows = []
        for (state, labels), q in gens.get(r, []):
            row = 0
            for c in range(n):
                if state[c] == 0:
                    for key in image(state, labels, c):
                        row ^= 1 << index[key]
            rows.append((row, q))
        # the differential preserves q, so rank splits by q
        by_q: dict[int, list[int]] = {}
        for row, q in rows:
            by_q.setdefault(q, []).append(row)
        ranks[r] = {q: _rank(v) for q, v in by_q.items()}
    out = Counter()
    for r, lst in gens.items():
        dims = Counter(q for _, q in lst)
        for q, dim in dims.items():
            h = dim - ranks.get(r, {}).get(q, 0) - ranks.get(r - 1, {}).get(q, 0)
            if h:
                out[(r - n_minus, q)] = h
    return out
