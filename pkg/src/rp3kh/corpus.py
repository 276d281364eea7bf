"""Bundled verification corpus.

Affine knots are stored as planar-diagram codes; projective-plane diagrams
ship as JSON under ``rp3kh/data/diagrams`` (regenerate with
``tools/make_corpus.py``).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .diagram import Diagram, DiagramError, from_json, from_pd, load

AFFINE_PD: dict[str, list[list[int]]] = {
    "trefoil": [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]],
    "figure8": [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]],
    "5_1": [[1, 6, 2, 7], [3, 8, 4, 9], [5, 10, 6, 1], [7, 2, 8, 3], [9, 4, 10, 5]],
    "5_2": [[1, 4, 2, 5], [3, 8, 4, 9], [5, 10, 6, 1], [9, 6, 10, 7], [7, 2, 8, 3]],
    "6_1": [[1, 4, 2, 5], [7, 10, 8, 11], [3, 9, 4, 8], [9, 3, 10, 2], [5, 12, 6, 1], [11, 6, 12, 7]],
    "6_2": [[1, 4, 2, 5], [5, 10, 6, 11], [3, 9, 4, 8], [9, 3, 10, 2], [7, 12, 8, 1], [11, 6, 12, 7]],
    "6_3": [[4, 2, 5, 1], [8, 4, 9, 3], [12, 9, 1, 10], [10, 5, 11, 6], [6, 11, 7, 12], [2, 8, 3, 7]],
    "7_1": [[1, 8, 2, 9], [3, 10, 4, 11], [5, 12, 6, 13], [7, 14, 8, 1], [9, 2, 10, 3], [11, 4, 12, 5], [13, 6, 14, 7]],
    "hopf": [[4, 1, 3, 2], [2, 3, 1, 4]],
}

FAMILIES = ("affine", "rp2", "config", "class1")


@dataclass(frozen=True)
class Entry:
    name: str
    family: str
    diagram: Diagram


def _family(name: str, d: Diagram) -> str:
    if d.link_class:
        return "class1"
    if name.startswith("config"):
        return "config"
    return "rp2"


def bundled_names() -> list[str]:
    root = resources.files("rp3kh") / "data" / "diagrams"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled(name: str) -> Diagram:
    """A bundled diagram by name (``p1knot``, ``rp1_line``, an affine knot name, ...)."""
    if name == "unknot":
        return from_json({"name": "unknot", "loops": 1})
    if name in AFFINE_PD:
        return from_pd(AFFINE_PD[name], name)
    if name.endswith("*"):
        return bundled(name[:-1]).mirror()
    path = resources.files("rp3kh") / "data" / "diagrams" / f"{name}.json"
    if not path.is_file():
        raise DiagramError(f"no bundled diagram named {name!r}")
    with resources.as_file(path) as p:
        return load(p)


def entries(families=None, max_crossings: int | None = None) -> list[Entry]:
    fams = set(FAMILIES if families is None else families)
    out = []
    if "affine" in fams:
        out.append(Entry("unknot", "affine", bundled("unknot")))
        for name in AFFINE_PD:
            out.append(Entry(name, "affine", bundled(name)))
        out.append(Entry("trefoil*", "affine", bundled("trefoil").mirror()))
    for name in bundled_names():
        d = bundled(name)
        fam = _family(name, d)
        if fam in fams:
            out.append(Entry(name, fam, d))
    if max_crossings is not None:
        out = [e for e in out if e.diagram.n <= max_crossings]
    return out
