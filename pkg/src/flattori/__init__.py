"""Numerics on the Teichmüller space of unit-volume flat tori."""
from .boundary import (
    Boundary,
    BoundaryForm,
    Interior,
    MeasuredFlatFoliation,
    NoLimit,
    boundary_act,
    foliation_from_form,
    foliation_measure,
    form_from_foliation,
    sequence_limit,
)
from .errors import *  # noqa: F401,F403
from .geodesics import GeodesicPath, finsler_length, geodesic_path, geodesic_point
from .lipschitz import (
    AffineMapReport,
    PiecewiseLinearTorusMap,
    evaluate_plmap,
    extremal_affine,
    nonunique_family_member,
    product_extend,
)
from .metrics import (
    TangentVector,
    d_teichmuller,
    d_thurston,
    d_weil_petersson,
    finsler_norm,
    kappa_lower_bound,
    kappa_search,
)
from .numkernel import (
    EigenDecomposition,
    cholesky,
    jacobi_eig,
    relative_eigenvalues,
    sym_exp,
    sym_log,
)
from .polytope import FlatVector, HPolytope, gauge, negated_dual_polytope, projected_weights
from .space import (
    HomotopyClass,
    MarkedBasis,
    SpdForm,
    class_length,
    gram_of,
    group_act,
    normalize_volume,
)

__version__ = "0.1.0"
