"""lipgerm: Lipschitz geometry of polygonal surface germs in R^3.

Represents surface germs as polygonal germs over truncated Puiseux arc
parametrizations, computes outer/inner tangency orders and LNE verdicts,
runs a certified reduction pipeline to canonical Hölder-triangle / horn
forms, and decides ambient bi-Lipschitz equivalence through labeled
canonical trees of the plane-link complement.
"""

from .germ import (
    ArcGerm,
    PolygonalGerm,
    arc,
    make_polygonal_germ,
    parse_germ,
    plane_link,
    write_germ,
)
from .linktopo import decide_equivalence, extended_tree, tree_isomorphic
from .metric import is_lne, tord, tord_inner
from .puiseux import PuiseuxSeries, parse_series
from .reduce import CanonicalForm, classify_connected

__version__ = "0.1.0"

__all__ = [
    "ArcGerm",
    "CanonicalForm",
    "PolygonalGerm",
    "PuiseuxSeries",
    "arc",
    "classify_connected",
    "decide_equivalence",
    "extended_tree",
    "is_lne",
    "make_polygonal_germ",
    "parse_germ",
    "parse_series",
    "plane_link",
    "tord",
    "tord_inner",
    "tree_isomorphic",
    "write_germ",
]
