"""Topology of Gelfand-Zeitlin fibers.

Given a point of a unitary or orthogonal GZ polytope (a staircase of
eigenvalue rows), compute the pattern graph of the face containing it, the
balanced-product / biquotient presentation of the fiber over that point, its
direct-factor decomposition and torus factor, homotopy groups pi_1..pi_3,
cohomology models, numeric matrix oracles, and the combinatorial skeleton of
the toric degeneration.
"""

from gzfiber.staircase import (
    Staircase,
    ValidationReport,
    Violation,
    SchemaError,
    StructureError,
    StaircaseError,
    parse_staircase,
    validate,
    random_staircase,
)
from gzfiber.pattern import Pattern, Component, Shape, build_pattern, components, classify_shapes, pattern_from_merges
from gzfiber.groupexpr import (
    Atom,
    Point,
    Torus,
    Sphere,
    Product,
    Balanced,
    Quotient,
    Biquotient,
    group_dim,
    stabilizer_H,
    stabilizer_L,
    balanced_product,
    factorize,
    telescope,
    split_stiefel,
    torus_rank,
    extract_torus,
    to_biquotient,
    fiber_presentation,
    FiberPresentation,
)
from gzfiber.invariants import (
    HomotopyProfile,
    ExteriorModel,
    StiefelCohomology,
    OrthogonalCohomologyModel,
    homotopy_unitary,
    homotopy_orthogonal,
    homotopy,
    cohomology_unitary,
    cohomology_orthogonal,
    stiefel_cohomology,
    poincare_polynomial,
)
from gzfiber.oracle import XiMatrix, EigencheckReport, r_squared, build_xi, eigencheck, conjugator_a, sphere_tower
from gzfiber.degeneration import Face, FaceLattice, TorusMap, enumerate_faces, torus_map, check_coherence, x0_skeleton

__version__ = "0.1.0"

__all__ = [
    "Staircase",
    "ValidationReport",
    "Violation",
    "SchemaError",
    "StructureError",
    "StaircaseError",
    "parse_staircase",
    "validate",
    "random_staircase",
    "Pattern",
    "Component",
    "Shape",
    "build_pattern",
    "components",
    "classify_shapes",
    "pattern_from_merges",
    "Atom",
    "Point",
    "Torus",
    "Sphere",
    "Product",
    "Balanced",
    "Quotient",
    "Biquotient",
    "group_dim",
    "stabilizer_H",
    "stabilizer_L",
    "balanced_product",
    "factorize",
    "telescope",
    "split_stiefel",
    "torus_rank",
    "extract_torus",
    "to_biquotient",
    "fiber_presentation",
    "FiberPresentation",
    "HomotopyProfile",
    "ExteriorModel",
    "StiefelCohomology",
    "OrthogonalCohomologyModel",
    "homotopy_unitary",
    "homotopy_orthogonal",
    "homotopy",
    "cohomology_unitary",
    "cohomology_orthogonal",
    "stiefel_cohomology",
    "poincare_polynomial",
    "XiMatrix",
    "EigencheckReport",
    "r_squared",
    "build_xi",
    "eigencheck",
    "conjugator_a",
    "sphere_tower",
    "Face",
    "FaceLattice",
    "TorusMap",
    "enumerate_faces",
    "torus_map",
    "check_coherence",
    "x0_skeleton",
]
