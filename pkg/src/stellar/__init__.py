"""Stellar representations of spin-s k-planes.

Majorana constellations of spin states, principal constellations of planes
(three independent routes), SU(2) block structure of wedge powers, and
gauge-fixed multiconstellations with their spectator state.
"""

from .spin_rep import (
    INF,
    RotationSpec,
    SpinLabel,
    SpinOperators,
    SpinState,
    build_generators,
    coherent_state,
    geodesic_rotation,
    so3_matrix,
    wigner_d,
)
from .majorana import (
    ComplexPolynomial,
    Constellation,
    Star,
    antipodal_constellation,
    antipode,
    constellation_from_roots,
    constellation_match_angle,
    constellation_of_polynomial,
    constellation_of_state,
    majorana_polynomial,
    poly_roots,
    projective_distance,
    projective_normalize,
    rotate_constellation,
    stereo_from_sphere,
    stereo_to_sphere,
)
from .grassmann import (
    KFrame,
    KPlane,
    PluckerVector,
    coherent_plane,
    frame_inner,
    multi_indices,
    orthogonal_complement,
    plane_inner,
    plucker,
    plucker_residual,
    rotate_frame,
    rotate_plane,
    sev,
    standard_form,
)
from .decomp import (
    BDBasis,
    ComponentState,
    Multiplet,
    MultiplicityTable,
    WedgeGenerators,
    bd_basis,
    canonical_degenerate_basis,
    char_sk,
    char_spin,
    decompose_plane,
    multiplicities_char,
    multiplicities_from_basis,
    multiplicities_genfun,
    partition_multiplicities,
    two_s_max,
    wedge_generators,
    wedge_rep,
)
from .principal import (
    PrincipalResult,
    planes_from_quartic_32,
    principal,
    principal_all,
    principal_sampled,
    principal_top_component,
    principal_wronskian,
    schubert_count,
)
from .multicon import (
    ComponentReport,
    GaugeFixed,
    Multiconstellation,
    PolarizationComponents,
    clebsch_gordan,
    gauge_fix_component,
    multiconstellation,
    polarization_components,
    spectator_constellation,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "RotationSpec",
    "SpinLabel",
    "SpinOperators",
    "SpinState",
    "build_generators",
    "coherent_state",
    "geodesic_rotation",
    "so3_matrix",
    "wigner_d",
    "ComplexPolynomial",
    "Constellation",
    "Star",
    "antipodal_constellation",
    "antipode",
    "constellation_from_roots",
    "constellation_match_angle",
    "constellation_of_polynomial",
    "constellation_of_state",
    "majorana_polynomial",
    "poly_roots",
    "projective_distance",
    "projective_normalize",
    "rotate_constellation",
    "stereo_from_sphere",
    "stereo_to_sphere",
    "KFrame",
    "KPlane",
    "PluckerVector",
    "coherent_plane",
    "frame_inner",
    "multi_indices",
    "orthogonal_complement",
    "plane_inner",
    "plucker",
    "plucker_residual",
    "rotate_frame",
    "rotate_plane",
    "sev",
    "standard_form",
    "BDBasis",
    "ComponentState",
    "Multiplet",
    "MultiplicityTable",
    "WedgeGenerators",
    "bd_basis",
    "canonical_degenerate_basis",
    "char_sk",
    "char_spin",
    "decompose_plane",
    "multiplicities_char",
    "multiplicities_from_basis",
    "multiplicities_genfun",
    "partition_multiplicities",
    "two_s_max",
    "wedge_generators",
    "wedge_rep",
    "PrincipalResult",
    "planes_from_quartic_32",
    "principal",
    "principal_all",
    "principal_sampled",
    "principal_top_component",
    "principal_wronskian",
    "schubert_count",
    "ComponentReport",
    "GaugeFixed",
    "Multiconstellation",
    "PolarizationComponents",
    "clebsch_gordan",
    "gauge_fix_component",
    "multiconstellation",
    "polarization_components",
    "spectator_constellation",
]
