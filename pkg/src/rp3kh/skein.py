"""Even and odd Kauffman brackets by skein recursion.

This is the slow, independent side of the Euler characteristic identity:
it never builds a chain complex.
"""

from __future__ import annotations

from . import surface
from .algebra import Dyad, qdim
from .diagram import Diagram, DiagramError
from .laurent import QUANTUM_CIRCLE, Laurent

_MINUS_Q = Laurent.monomial(q=1, c=-1)


def _recurse(d: Diagram, prefix: tuple[int, ...], leaf) -> Laurent:
    if len(prefix) == d.n:
        return leaf(prefix)
    zero = _recurse(d, prefix + (0,), leaf)
    one = _recurse(d, prefix + (1,), leaf)
    return zero + _MINUS_Q * one


def count_leaves(d: Diagram) -> int:
    """Number of leaves the recursion visits."""
    seen = []

    def leaf(state):
        seen.append(state)
        return Laurent()

    _recurse(d, (), leaf)
    return len(seen)


def bracket(d: Diagram, face: int, parity: int) -> Laurent:
    """<L>_parity: smoothings whose encircling number differs from ``parity`` drop out."""
    if d.link_class:
        raise DiagramError("brackets are defined for null-homologous links only")

    def leaf(state):
        sm = d.resolve(state)
        if surface.encircling_number(sm, face) != parity:
            return Laurent()
        return QUANTUM_CIRCLE ** (sm.k_s - 1)

    return _recurse(d, (), leaf)


def total_bracket(d: Diagram) -> Laurent:
    """Bracket with the unconditional base case (q + 1/q)^(k-1)."""

    def leaf(state):
        return QUANTUM_CIRCLE ** (d.resolve(state).k_s - 1)

    return _recurse(d, (), leaf)


def normalisation(d: Diagram) -> Laurent:
    n_plus, n_minus = d.crossing_signs() if d.n else (0, 0)
    return Laurent.monomial(q=n_plus - 2 * n_minus, c=(-1) ** n_minus)


def jones(d: Diagram, parity: int, face: int | None = None) -> Laurent:
    if face is None:
        face = surface.base_face(d)
    return normalisation(d) * bracket(d, face, parity)


def predicted_euler(d: Diagram, dyad: Dyad, face: int | None = None) -> Laurent:
    return qdim(dyad.V0) * jones(d, 0, face) + qdim(dyad.V1) * jones(d, 1, face)


def check_euler(d: Diagram, dyad: Dyad, face: int | None = None) -> bool:
    """Compare the Euler characteristic of homology with the Jones side."""
    from .complex import build_reduced_complex
    from .homology import euler_characteristic, homology_dims, poincare

    cx = build_reduced_complex(d, dyad, face)
    chi = euler_characteristic(poincare(homology_dims(cx)))
    return chi == predicted_euler(d, dyad, cx.face)
