"""Tangent structures induced by linear assignments on finite algebras."""
from .algebra import (AlgebraError, FiniteAlgebra, FiniteFunction, Homomorphism, Signature,
                      product, terminal)
from .bundles import (DifferentialBundle, DifferentialObject, LAlgebra, build_diff_bundle,
                      build_diff_object, canonical_l_algebra, diff_bundle_to_l_algebra,
                      diff_object_to_l_algebra, roundtrip_check, verify_diff_bundle)
from .catalog import GeneratorSpec, catalog, generate, parse, serialize
from .congruence import brute_force_least_congruence, generate_congruence, quotient
from .reflect import AssignmentEngine, reflect, verify_assignment
from .report import AxiomReport
from .tangent import TangentSpace, build_tangent, verify_tangent

__all__ = [
    "AlgebraError", "FiniteAlgebra", "FiniteFunction", "Homomorphism", "Signature", "product",
    "terminal", "DifferentialBundle", "DifferentialObject", "LAlgebra", "build_diff_bundle",
    "build_diff_object", "canonical_l_algebra", "diff_bundle_to_l_algebra",
    "diff_object_to_l_algebra", "roundtrip_check", "verify_diff_bundle", "GeneratorSpec",
    "catalog", "generate", "parse", "serialize", "brute_force_least_congruence",
    "generate_congruence", "quotient", "AssignmentEngine", "reflect", "verify_assignment",
    "AxiomReport", "TangentSpace", "build_tangent", "verify_tangent",
]
