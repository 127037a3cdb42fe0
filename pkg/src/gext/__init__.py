"""Exact toolkit for equivariant extensions of G_a-torsors over punctured surfaces."""
from .polycore import Polynomial, RingDescriptor
from .ideals import Ideal, groebner, ideal_equality, ideal_membership, reduction_budget
from .lnd import (CoAction, Derivation, PresentedAlgebra, RingMorphism, check_locally_nilpotent,
                  check_well_defined, exponential)
from .cech import Cocycle, classify_extension, reduce_bundle_cocycle, torsor_datum
from .blowup import Tower, build_tower, chain_tower, dual_graph, fork_tower, open_surface
from .affext import certify_extension, synthesize_extension

__version__ = "0.1.0"

__all__ = [
    "Polynomial", "RingDescriptor", "Ideal", "groebner", "ideal_equality", "ideal_membership",
    "reduction_budget", "CoAction", "Derivation", "PresentedAlgebra", "RingMorphism",
    "check_locally_nilpotent", "check_well_defined", "exponential", "Cocycle",
    "classify_extension", "reduce_bundle_cocycle", "torsor_datum", "Tower", "build_tower",
    "chain_tower", "dual_graph", "fork_tower", "open_surface", "certify_extension",
    "synthesize_extension",
]
