"""spincover: spin-group rotor pairs from pseudo-orthogonal matrices.

Unit even elements S of the real Clifford algebra Cl(p,q) double-cover the
matrix group SO+(p,q) through S e_a S^-1 = p_a^b e_b. This package computes
both directions of that covering for any signature with p + q <= 12, with
specialized first-order and (split-)quaternion forms at n = 3.
"""

from .clifford_core import (
    MAX_DIMENSION,
    Multivector,
    Signature,
    blade_from_name,
    blade_grade,
    blade_inverse,
    blade_name,
    blade_product,
    exp_bivector,
    geometric_product,
    grade_masks,
    squared_norm,
)
from .covering import (
    CandidateElement,
    Frame,
    NoCandidateError,
    Rotor,
    candidate_general,
    candidate_n3,
    even_blades,
    forward_map,
    iter_candidates,
    matrix_to_rotor,
    rotor_from_frames,
    select_candidate,
)
from .division_algebras import (
    Quaternion,
    SplitQuaternion,
    qmul,
    quaternion_to_rotor,
    quaternion_to_su2,
    rotor_to_quaternion,
    rotor_to_split,
    so21_to_split_quaternion_candidates,
    so21_to_unit_split_quaternion,
    so3_to_quaternion_candidates,
    so3_to_unit_quaternion,
    split_to_rotor,
    split_to_su11,
    sqmul,
)
from .matrix_group import (
    DEFAULT_TOLERANCE,
    MembershipError,
    MembershipReport,
    OrthoMatrix,
    check_membership,
    metric_matrix,
    minor,
    project_to_group,
    require_membership,
)
from .oracle import (
    SplitMix64,
    corollary_expansion,
    frame_from_rotor,
    rotor_distance,
    run_selfcheck,
    sample_matrix,
    sample_rotor,
    verify_covering,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_DIMENSION",
    "DEFAULT_TOLERANCE",
    "Signature",
    "Multivector",
    "Rotor",
    "CandidateElement",
    "Frame",
    "OrthoMatrix",
    "MembershipReport",
    "MembershipError",
    "NoCandidateError",
    "Quaternion",
    "SplitQuaternion",
    "SplitMix64",
    "blade_product",
    "blade_inverse",
    "blade_grade",
    "blade_name",
    "blade_from_name",
    "grade_masks",
    "even_blades",
    "geometric_product",
    "squared_norm",
    "exp_bivector",
    "metric_matrix",
    "check_membership",
    "require_membership",
    "project_to_group",
    "minor",
    "forward_map",
    "candidate_general",
    "candidate_n3",
    "iter_candidates",
    "select_candidate",
    "matrix_to_rotor",
    "rotor_from_frames",
    "qmul",
    "sqmul",
    "so3_to_quaternion_candidates",
    "so3_to_unit_quaternion",
    "so21_to_split_quaternion_candidates",
    "so21_to_unit_split_quaternion",
    "quaternion_to_su2",
    "split_to_su11",
    "quaternion_to_rotor",
    "rotor_to_quaternion",
    "split_to_rotor",
    "rotor_to_split",
    "sample_rotor",
    "sample_matrix",
    "verify_covering",
    "frame_from_rotor",
    "corollary_expansion",
    "rotor_distance",
    "run_selfcheck",
]
