"""Semi-biproducts of finite monoids and the pseudo-actions that classify them."""
from .equivalence import (extract, extract_morphism, roundtrip_action, roundtrip_diagram,
                          synthesize, synthesize_morphism)
from .errors import BudgetExceeded, ContractError, SbpError, SizeLimitError, StructuralError
from .monoid import (FiniteMonoid, Homomorphism, MapKind, PointedMap, classify_map,
                     congruence_closure, enumerate_homs, enumerate_monoids, quotient,
                     validate_monoid)
from .pseudoaction import (PaMorphism, PseudoAction, check_derived_identities,
                           enumerate_pseudo_actions, verify_pseudo_action)
from .report import Failure, LawReport
from .search import (RelationSeed, build_from_relation, complete_extension,
                     enumerate_semibiproducts, nat_order_demo)
from .semibiproduct import (SbpMorphism, SemiBiproduct, check_cokernel, check_kernel,
                            image_of_beta, is_schreier, pullback, verify, verify_morphism)

__all__ = [
    "BudgetExceeded", "ContractError", "Failure", "FiniteMonoid", "Homomorphism", "LawReport",
    "MapKind", "PaMorphism", "PointedMap", "PseudoAction", "RelationSeed", "SbpError",
    "SbpMorphism", "SemiBiproduct", "SizeLimitError", "StructuralError",
    "build_from_relation", "check_cokernel", "check_derived_identities", "check_kernel",
    "classify_map", "complete_extension", "congruence_closure", "enumerate_homs",
    "enumerate_monoids", "enumerate_pseudo_actions", "enumerate_semibiproducts", "extract",
    "extract_morphism", "image_of_beta", "is_schreier", "nat_order_demo", "pullback",
    "quotient", "roundtrip_action", "roundtrip_diagram", "synthesize", "synthesize_morphism",
    "validate_monoid", "verify", "verify_morphism", "verify_pseudo_action",
]
