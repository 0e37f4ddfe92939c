"""Exact invariants of divisor complements: parabolic Picard groups, jump loci and abelian covers."""

from .covers import (
    BuildingData,
    CharacterSubgroup,
    building_data,
    congruence_hodge,
    congruence_hodge_qp,
    cover_hodge,
    pushforward_decomposition,
    riemann_hurwitz_genus,
)
from .errors import InputError, InvariantError, PictauError, SpecParseError, SymbolicRegimeError
from .exact import Lattice, ZMatrix, hnf, kernel_lattice, lattice_intersect_subspace, snf, solve_affine
from .geometry import (
    BlowupSurface,
    CurveModel,
    LineArrangement,
    ResolvedGeometry,
    build_log_resolution,
    euler_char,
    h0_blowup,
    hq_blowup,
    hq_curve,
    resolve,
    singular_points,
)
from .parabolic import (
    P1,
    P2,
    BoundaryDecomposition,
    BoundaryRealization,
    DivisorSet,
    ResolutionData,
    VarietyModel,
    decompose_boundaries,
    deligne_extension_class,
    group_law,
    identity,
    inverse,
    monodromy_pullback,
    power,
    pullback_parabolic,
    refine_by_resolution,
    torsion_order,
    torsion_points,
)
from .polytopes import (
    HalfOpenPolytope,
    QuasiPolynomial,
    coset_count_qp,
    ehrhart_qp,
    lattice_points,
    project,
    scale_by_torus_rank,
    vertices,
)
from .strata import (
    StrataTable,
    compute_strata,
    count_stratum_torsion,
    floor_constancy_check,
    stratum_torsion_qp,
)

__version__ = "0.1.0"

__all__ = [
    "BlowupSurface",
    "BoundaryDecomposition",
    "BoundaryRealization",
    "BuildingData",
    "CharacterSubgroup",
    "CurveModel",
    "DivisorSet",
    "HalfOpenPolytope",
    "InputError",
    "InvariantError",
    "Lattice",
    "LineArrangement",
    "P1",
    "P2",
    "PictauError",
    "QuasiPolynomial",
    "ResolutionData",
    "ResolvedGeometry",
    "SpecParseError",
    "StrataTable",
    "SymbolicRegimeError",
    "VarietyModel",
    "ZMatrix",
    "build_log_resolution",
    "building_data",
    "compute_strata",
    "congruence_hodge",
    "congruence_hodge_qp",
    "coset_count_qp",
    "count_stratum_torsion",
    "cover_hodge",
    "decompose_boundaries",
    "deligne_extension_class",
    "ehrhart_qp",
    "euler_char",
    "floor_constancy_check",
    "group_law",
    "h0_blowup",
    "hnf",
    "hq_blowup",
    "hq_curve",
    "identity",
    "inverse",
    "kernel_lattice",
    "lattice_intersect_subspace",
    "lattice_points",
    "monodromy_pullback",
    "power",
    "project",
    "pullback_parabolic",
    "pushforward_decomposition",
    "refine_by_resolution",
    "resolve",
    "riemann_hurwitz_genus",
    "scale_by_torus_rank",
    "singular_points",
    "snf",
    "solve_affine",
    "stratum_torsion_qp",
    "torsion_order",
    "torsion_points",
    "vertices",
]

