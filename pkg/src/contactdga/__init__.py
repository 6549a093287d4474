"""Legendrian contact homology of knot diagrams and positive braid closures:
Chekanov-Eliashberg DGAs, exact area LPs, Reidemeister holonomies and the
monodromy of loops of torus knots."""

from .algebra import (DGA, LAURENT, Z2, ChainMap, Derivation, Poly, Report, P,
                      check_chain_homotopy, check_chain_map, check_d_squared, extend_diff)
from .braid import Braid, closure_dga
from .diagram import Diagram, build_diagram
from .augment import construct_augmentation
from .lp import cone_feasible
from .monodromy import orbit_sequence, torus_monodromy

__all__ = ["DGA", "LAURENT", "Z2", "ChainMap", "Derivation", "Poly", "Report", "P",
           "check_chain_homotopy", "check_chain_map", "check_d_squared", "extend_diff",
           "Braid", "closure_dga", "Diagram", "build_diagram", "construct_augmentation",
           "cone_feasible", "orbit_sequence", "torus_monodromy"]
__version__ = "0.1.0"
