"""Reflective hyperbolic lattices of rank 4: invariants, anisotropy, Vinberg's algorithm."""
from .analysis import Budget, ClassificationReport, Status, classify_lattice
from .coxeter import (
    CoxeterDiagram,
    FiniteVolumeResult,
    bad_reflections_finite,
    build_diagram,
    diagram_criterion,
    emit_dot,
    finite_volume_check,
    polyhedron_combinatorics,
)
from .enumeration import candidate_table, frames_to_candidates
from .errors import (
    ConditionsNotMet,
    DegenerateFrame,
    LatticeMismatch,
    NotHyperbolic,
    RankNotFour,
    VinbergLabError,
)
from .geometry import LatticeVector, Root, facet_relation, reflect
from .lattice import (
    QuadraticLattice,
    discriminant,
    invariant_factors,
    is_isomorphic,
    is_maximal,
    maximal_overlattices,
    signature,
)
from .local import hilbert_symbol, is_anisotropic_global, local_anisotropy
from .vinberg import RunStatus, VinbergConfig, VinbergRun, run

__all__ = [
    "Budget", "ClassificationReport", "ConditionsNotMet", "CoxeterDiagram", "DegenerateFrame",
    "FiniteVolumeResult", "LatticeMismatch", "LatticeVector", "NotHyperbolic", "QuadraticLattice",
    "RankNotFour", "Root", "RunStatus", "Status", "VinbergConfig", "VinbergLabError", "VinbergRun",
    "bad_reflections_finite", "build_diagram", "candidate_table", "classify_lattice",
    "diagram_criterion", "discriminant", "emit_dot", "facet_relation", "finite_volume_check",
    "frames_to_candidates", "hilbert_symbol", "invariant_factors", "is_anisotropic_global",
    "is_isomorphic", "is_maximal", "local_anisotropy", "maximal_overlattices",
    "polyhedron_combinatorics", "reflect", "run", "signature",
]
