"""Coatom search and certification for lattices of ground projectors of
local Hamiltonians, via extreme points of the dual spectrahedron."""

__version__ = "0.1.0"

from .hermitian import (  # noqa: F401
    EigenDecomposition,
    Projector,
    eig_hermitian,
    ground_projector,
    hs_inner,
    kron,
    numerical_rank,
    real_nullspace,
    support_projector,
)
from .local_space import (  # noqa: F401
    AlgebraKind,
    Hypergraph,
    LocalSpaceBasis,
    factor_interaction_basis,
    marginal_map,
    model_space,
    partial_trace,
    project_onto_space,
    space_dimension,
)
from .spectra import (  # noqa: F401
    LmiSpectrahedron,
    PointClass,
    cayley_cubic,
    classify_point,
    duality_residual,
    from_local_space,
)
from .sdp import SdpOptions, SdpSolution, SolveStatus, dual_residuals, minimize  # noqa: F401
from .search import (  # noqa: F401
    CoatomCertificate,
    SampleRecord,
    SampleReport,
    Verdict,
    coatom_certificate,
    exposed_point_from_coatom,
    quick_reject,
    random_direction,
    sample_extreme_points,
)
from .classical import (  # noqa: F401
    ClassicalModel,
    MMatrix,
    SupportSet,
    enumerate_coatoms,
    ff_ground_projector_form,
    is_m_feasible,
    k44_edge,
    lattice_membership,
    m_matrix,
)
from .family import (  # noqa: F401
    FamilyPoint,
    certify_family,
    family_kernel_basis,
    m_family,
    special_values_report,
)
