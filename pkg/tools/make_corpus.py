"""Regenerate the bundled projective-plane diagrams.

Run from the repository root:  python3 tools/make_corpus.py
Output is deterministic; files go to src/rp3kh/data/diagrams/.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import replace
from pathlib import Path

from rp3kh import moves, surface
from rp3kh.diagram import Crossing, Diagram, DiagramError, from_json, from_pd, load, validate

OUT = Path(__file__).resolve().parents[1] / "src" / "rp3kh" / "data" / "diagrams"
TREFOIL = [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]
PROJECTIVE_LINE = {"name": "rp1_line", "boundary_points": 2, "crossings": [],
                   "arcs": [[["b", 0], ["b", 1]]]}


def walk(d: Diagram, seed: int, steps: int, max_n: int, want) -> Diagram | None:
    """Random Reidemeister walk; returns the last diagram satisfying ``want``."""
    rng = random.Random(seed)
    best = None
    for _ in range(steps):
        opts = [(mv, s) for mv in moves.MOVES for s in moves.sites(d, mv)]
        if not opts:
            break
        mv, site = rng.choice(opts)
        if d.n >= max_n and mv.endswith("+"):
            continue
        try:
            d = moves.apply_move(d, mv, site).diagram
        except moves.MoveError:
            continue
        if want(d):
            best = d
    return best


def _endpoint_matchings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        b = items[i]
        if a[0] == "b" and b[0] == "b":
            continue
        rest = items[1:i] + items[i + 1:]
        for m in _endpoint_matchings(rest):
            yield [(a, b)] + m


def cube_signature(d: Diagram):
    face = surface.base_face(d) if d.link_class == 0 else surface.class1_base_face(d)
    sig = []
    for st in itertools.product((0, 1), repeat=d.n):
        sm = d.resolve(st)
        par = surface.encircling_number(sm, face) if d.link_class == 0 else 0
        sig.append((sm.k_s, par))
    return d.link_class, d.k, tuple(sig)


def two_crossing_configurations(nb: int, cls: int, limit: int):
    """All valid connected two-crossing diagrams with ``nb`` boundary points, one per cube signature."""
    eps = [("x", c, s) for c in range(2) for s in range(4)] + [("b", j) for j in range(nb)]
    seen = {}
    for m in _endpoint_matchings(eps):
        d = Diagram((Crossing("13"), Crossing("13")), nb, tuple(tuple(a) for a in m))
        try:
            if validate(d) or d.link_class != cls:
                continue
            d = replace(d, orientation_seeds=tuple(c[0][0] for c in d.components))
            if validate(d):
                continue
            key = cube_signature(d)
        except DiagramError:
            continue
        seen.setdefault(key, d)
    return [seen[k] for k in sorted(seen, key=repr)][:limit]


def named(d: Diagram, name: str) -> Diagram:
    return replace(d, name=name)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    p1 = load(OUT / "p1knot.json")
    out: dict[str, Diagram] = {"p1knot_mirror": named(p1.mirror(), "p1knot_mirror")}

    trefoil = from_pd(TREFOIL, "trefoil")
    count, seed = 0, 0
    while count < 6:
        seed += 1
        start = p1 if seed % 2 else trefoil
        got = walk(start, seed, 14, 6, lambda d: d.k > 0 and 2 <= d.n <= 6)
        if got is not None:
            out[f"rp2_walk_{count}"] = named(got, f"rp2_walk_{count}")
            count += 1

    for nb in (4,):
        for j, d in enumerate(two_crossing_configurations(nb, 0, 16)):
            out[f"config_k{nb // 2}_{j}"] = named(d, f"config_k{nb // 2}_{j}")

    line = from_json(PROJECTIVE_LINE)
    out["rp1_line"] = line
    for j, d in enumerate(two_crossing_configurations(2, 1, 8)):
        out[f"class1_config_{j}"] = named(d, f"class1_config_{j}")
    for i, seed in enumerate(range(10, 15)):
        got = walk(line, seed, 12, 5, lambda d: 3 <= d.n <= 5)
        if got is not None:
            out[f"class1_walk_{i}"] = named(got, f"class1_walk_{i}")

    for name, d in sorted(out.items()):
        problems = validate(d)
        if problems:
            raise SystemExit(f"{name}: {problems[0]}")
        (OUT / f"{name}.json").write_text(json.dumps(d.to_json(), indent=None) + "\n")
        print(f"{name:20s} n={d.n} k={d.k} class={d.link_class}")


if __name__ == "__main__":
    main()
