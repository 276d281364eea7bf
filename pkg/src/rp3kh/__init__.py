"""Khovanov-type homology for null-homologous links in RP^3 with dyad coefficients."""

from .algebra import Dyad, builtin_dyads, get_dyad
from .complex import build_complex, build_reduced_complex, build_unreduced_complex
from .diagram import Diagram, from_json, from_pd, load
from .homology import compute, homology_dims, poincare
from .laurent import Laurent, format_poly, parse_poly
from .skein import jones

__all__ = [
    "Diagram", "Dyad", "Laurent", "build_complex", "build_reduced_complex", "build_unreduced_complex",
    "builtin_dyads", "compute", "format_poly", "from_json", "from_pd", "get_dyad", "homology_dims",
    "jones", "load", "parse_poly", "poincare",
]
__version__ = "0.1.0"
