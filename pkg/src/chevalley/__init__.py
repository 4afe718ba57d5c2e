"""Chevalley groups over commutative rings with exact arithmetic."""

from .autos import (AutomorphismPresentation, CentralAuto, Composite, DecompositionResult, GraphAuto,
                    InnerAuto, RingAuto, conjugator_solve, decompose, graph_variants, random_standard,
                    ring_variants, theorem_gate)
from .chevbasis import ChevalleyBasis, build_chevalley_basis
from .groupcore import (GroupContext, RelationReport, TorusCharacter, Undecided, commutator_constants,
                        verify_relations)
from .reps import Representation, WeightDiagram, build_weight_diagram, get_representation
from .rings import GF, ZZ, FiniteRing, IntegerMod, parse_ring, product_ring, quotient_extension
from .rootsys import RootSystem, build_root_system, parse_system

__all__ = [
    "AutomorphismPresentation", "CentralAuto", "ChevalleyBasis", "Composite", "DecompositionResult",
    "FiniteRing", "GF", "GraphAuto", "GroupContext", "InnerAuto", "IntegerMod", "RelationReport",
    "Representation", "RingAuto", "RootSystem", "TorusCharacter", "Undecided", "WeightDiagram", "ZZ",
    "build_chevalley_basis", "build_root_system", "build_weight_diagram", "commutator_constants",
    "conjugator_solve", "decompose", "get_representation", "graph_variants", "parse_ring", "parse_system",
    "product_ring", "quotient_extension", "random_standard", "ring_variants", "theorem_gate",
    "verify_relations",
]
