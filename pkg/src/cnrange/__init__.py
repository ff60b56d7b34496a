"""Classical and C-numerical ranges of small complex matrices."""

from .crange import (
    Budget,
    CanonicalPair,
    DilationParts,
    Region,
    bordered_region,
    bordered_trace,
    canonical_pair,
    canonicalize_2x2,
    compress,
    dilation_decompose,
    haar_cloud,
    nakasato_cnr_2x2,
    pair_scale,
    scale_offdiag,
)
from .hull import hull_gap, hull_vertices, support_hausdorff
from .lab import (
    CASES,
    CHECKS,
    Certificate,
    CheckReport,
    alpha_star,
    certify_equality,
    check_c1,
    check_c2,
    check_c3,
    check_c4,
    check_lemma5_zero,
    check_m0,
    check_m1,
    check_m2,
    check_m3,
    check_m4,
    reproduce,
    witness_unitary,
)
from .linalg import (
    DomainError,
    MatrixFormatError,
    SpectralData,
    direct_sum_zero,
    haar_unitaries,
    haar_unitary,
    herm_eig,
    is_contraction,
    is_hermitian,
    is_unitary,
    load_matrix,
    make_rng,
    matrix_from_json,
    matrix_to_json,
    svd_2x2,
    trace_zero_part,
)
from .numrange import (
    Ellipse,
    boundary_points,
    containment_margin,
    ellipse_2x2,
    numerical_radius,
    support_classical,
)

__version__ = "0.1.0"
