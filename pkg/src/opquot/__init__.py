"""Left and right quotients of matrices via the Moore-Penrose inverse."""

from .errors import *  # noqa: F401,F403
from .numkernel import (
    ToleranceConfig,
    adjoint,
    hermitian_psd_sqrt,
    kernel_included,
    loewner_leq,
    projector_onto_corange,
    projector_onto_range,
    pseudoinverse,
    range_included,
    subspace_equal_ranges,
    svd,
)
from .quotient import (
    LeftQuotient,
    RightQuotient,
    adjoint_left,
    adjoint_right,
    apply_left,
    apply_right,
    closedness_certificate,
    graph,
    invert_left,
    invert_right,
    j_isometry_defect,
    left_norm,
    left_quotient,
    r_operator,
    right_quotient,
)
from .algebra import (
    ProductWitness,
    auto_witness_left,
    auto_witness_right,
    canonical_decomposition,
    parallel_sum,
    pinv_product,
    product_left,
    product_right,
    simplify_left,
    simplify_right,
    sum_left,
    sum_left_same_denominator,
    sum_right,
    sum_right_same_denominator,
)

__version__ = "0.1.0"
