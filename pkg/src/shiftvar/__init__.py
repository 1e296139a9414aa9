"""Shift invariance and discrete neighborhoods of varieties over prime fields."""

from .enumeration import (
    DEFAULT_BUDGET,
    Metadata,
    NeighborhoodReport,
    PointSet,
    VarietyInstance,
    ball,
    bound_report,
    closed_under_shifts_to_zero,
    compute_delta,
    difference_set,
    overlap_upper_bound,
    pair_overlap_sum,
    rational_points,
    sumset,
)
from .field import FieldElement, PrimeField, balanced, field_new, field_op, is_prime
from .linalg import MatrixFp, kernel_basis
from .poly import (
    MPoly,
    evaluate,
    gradient,
    hasse_derivative,
    hasse_multi,
    homogeneous_component,
    parse_poly,
    poly_arith,
    shift,
    taylor_reconstruct,
)
from .shifts import (
    CylinderForm,
    ShiftKernel,
    cylinder_normalize,
    full_cylinder_reduction,
    gradient_orthogonality_check,
    is_shift_invariant,
    shift_kernel,
)

__version__ = "0.1.0"
