"""Exact translation-surface toolkit for unfolded rational triangles.

Builds the reflection unfolding of a rational triangle over Q(sqrt(3)),
computes directional cylinder decompositions and their parabolic
automorphisms exactly, assembles the generators of the affine
automorphism group, and certifies the lattice property through the
hyperbolic Gauss-Bonnet index bound.
"""

from .errors import (
    BudgetExceeded,
    IncommensurableModuli,
    InvalidSurface,
    InvalidTriangle,
    MembershipFailed,
    NonHyperbolic,
    NotAReflection,
    NotAnInvolution,
    NotParallelDecomposable,
    NotUnimodular,
    RequiresExactRational,
    SchemaError,
    UnsupportedAngle,
    UnsupportedField,
    VeechKitError,
    ZeroDirection,
)
from .field import (
    AngleMultiple,
    FieldElem,
    Mat2,
    Rational,
    Vec2,
    is_rational_ratio,
    parse_field_elem,
)
from .surface import (
    ConePointReport,
    EdgeRef,
    PlanarPolygon,
    TranslationSurface,
    apply_matrix,
    canonical_form,
    cone_points,
    euclidean_isometry_group,
    is_translation_equivalent,
    unfold_triangle,
)
from .cylinders import (
    Cylinder,
    CylinderDecomposition,
    DEFAULT_BUDGET,
    Direction,
    commensurability_class,
    decompose,
    parabolic_for_direction,
    width_ratio_invariant,
)
from .veech import (
    CuspInvariant,
    GeneratorSet,
    GroupElement,
    build_generators,
    cusp_invariants,
    is_dihedral_group,
    right_angle_check,
    verify_membership,
)
from .hyperbolic import (
    BoundaryPoint,
    CertificateReport,
    Geodesic,
    HypPolygon,
    INFINITY,
    OrbifoldData,
    UHPoint,
    fixed_geodesic,
    gauss_bonnet_area,
    incidence_check,
    interior_angle,
    intersect,
    lattice_certificate,
    moebius_apply,
    polygon_area,
)
from .report import PaperReport, ReportEntry, run_report

__version__ = "0.1.0"
