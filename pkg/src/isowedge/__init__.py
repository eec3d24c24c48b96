"""Metric projection onto finitely generated wedges and isotonicity checks."""
from .isotone import (
    IsotoneReport,
    OrderPair,
    SampleReport,
    Verdict,
    check_isotone_cone,
    check_isotone_wedge,
    find_violation_witness,
    sample_isotonicity,
)
from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    SubspaceBasis,
    Tolerance,
    complement_basis,
    orthonormal_basis,
    project_subspace,
)
from .monotone import (
    MonotoneBasis,
    MonotoneCoefficients,
    build_monotone_wedge,
    coefficients,
    is_monotone,
    monotone_isotone_selfcheck,
    pava_project,
)
from .projection import (
    FaceOracle,
    KktCertificate,
    ProjectionError,
    ProjectionResult,
    WedgeProjector,
    moreau_check,
    project_cone_oracle,
    project_wedge,
    verify_projection,
)
from .wedge import (
    GeneratedWedge,
    MembershipCertificate,
    PolarNotPointedError,
    ScaleLimitError,
    WedgeDecomposition,
    contains,
    decompose,
    is_generating,
    is_pointed,
    lineality_space,
    polar_generators,
)

__version__ = "0.1.0"
