"""Isoperimetric quotients of convex polytopes.

Exact geometry for low-dimensional polytopes (vertex/facet enumeration,
volumes, surface areas), constructions that minimize the isoperimetric
quotient under facet- or vertex-count budgets, the surface-minimizing
linear position, symmetric normal forms with sharp volume bounds, first
Dirichlet eigenvalue certificates, and deterministic verification
campaigns over parameter grids.
"""

from .errors import (
    ConvergenceError,
    DegeneracyError,
    DimensionError,
    GeometryError,
    InternalError,
    IsoperilabError,
    NotPSDError,
    SamplingError,
    SingularMatrixError,
    SpecError,
    StructuralError,
    TangencyError,
)
from .polytope import (
    AreaMeasure,
    FacetData,
    Geometry,
    HPolytope,
    VolumeEstimate,
    VPolytope,
    analyze,
    apply_map,
    area_measure,
    ball_iq_lower_bound,
    bounding_box,
    centroid,
    chebyshev_center,
    contains,
    covariance,
    facet_enumeration,
    gauge,
    hpolytope_from_inequalities,
    inradius_origin,
    iq,
    iq_circumscribed,
    load_polytope,
    mc_volume,
    pushforward_area_measure,
    save_polytope,
    simplex_volume,
    surface_area,
    translate,
    vertex_enumeration,
    volume,
)
from .constructions import (
    ClosedForms,
    Construction,
    PaddingResult,
    SymmetrizationResult,
    build_recipe,
    cartesian_product,
    central_symmetrize,
    cross_polytope,
    cube,
    extremal_facet_polytope,
    extremal_vertex_polytope,
    l1_sum,
    lindelof_body,
    measured_forms,
    pad_facets,
    pad_vertices,
    scale_body,
    simplex_regular,
)
from .positions import (
    BLDecomposition,
    BLVolumeCheck,
    PositionResult,
    SchattenCheck,
    bl_transform,
    bl_volume_bound_check,
    isotropy_residual,
    petty_minimize,
    schatten_bound_check,
    surface_area_of_image,
)
from .spectral import (
    ScalingLawReport,
    SpectralBound,
    SpectralCertificate,
    TestFunction,
    box_lambda_reference,
    phi_eval,
    phi_grad,
    rayleigh_bound,
    scaling_law_check,
    spectral_certificate,
    test_function_from_bl,
)
from .harness import (
    CampaignCell,
    CampaignReport,
    canonical_json,
    canonical_report_dict,
    report_to_csv,
    save_report,
    verify_spectral,
    verify_theorem1,
    verify_theorem2,
)

__version__ = "0.1.0"

__all__ = [
    "AreaMeasure",
    "BLDecomposition",
    "BLVolumeCheck",
    "CampaignCell",
    "CampaignReport",
    "ClosedForms",
    "Construction",
    "ConvergenceError",
    "DegeneracyError",
    "DimensionError",
    "FacetData",
    "Geometry",
    "GeometryError",
    "HPolytope",
    "InternalError",
    "IsoperilabError",
    "NotPSDError",
    "PaddingResult",
    "PositionResult",
    "SamplingError",
    "ScalingLawReport",
    "SchattenCheck",
    "SingularMatrixError",
    "SpecError",
    "SpectralBound",
    "SpectralCertificate",
    "StructuralError",
    "SymmetrizationResult",
    "TangencyError",
    "TestFunction",
    "VPolytope",
    "VolumeEstimate",
    "analyze",
    "apply_map",
    "area_measure",
    "ball_iq_lower_bound",
    "bl_transform",
    "bl_volume_bound_check",
    "bounding_box",
    "box_lambda_reference",
    "build_recipe",
    "canonical_json",
    "canonical_report_dict",
    "cartesian_product",
    "central_symmetrize",
    "centroid",
    "chebyshev_center",
    "contains",
    "covariance",
    "cross_polytope",
    "cube",
    "extremal_facet_polytope",
    "extremal_vertex_polytope",
    "facet_enumeration",
    "gauge",
    "hpolytope_from_inequalities",
    "inradius_origin",
    "iq",
    "iq_circumscribed",
    "isotropy_residual",
    "l1_sum",
    "lindelof_body",
    "load_polytope",
    "mc_volume",
    "measured_forms",
    "pad_facets",
    "pad_vertices",
    "petty_minimize",
    "phi_eval",
    "phi_grad",
    "pushforward_area_measure",
    "rayleigh_bound",
    "report_to_csv",
    "save_polytope",
    "save_report",
    "scale_body",
    "scaling_law_check",
    "schatten_bound_check",
    "simplex_regular",
    "simplex_volume",
    "spectral_certificate",
    "surface_area",
    "surface_area_of_image",
    "test_function_from_bl",
    "translate",
    "verify_spectral",
    "verify_theorem1",
    "verify_theorem2",
    "vertex_enumeration",
    "volume",
]
