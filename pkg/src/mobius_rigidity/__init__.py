"""Mobius-invariant rigidity for configurations of balls and points in R^N u {inf}."""

from .errors import *  # noqa: F401,F403
from .inversive import (
    ExtendedPoint,
    HalfSpace,
    Side,
    Sphere,
    absolute_cross_ratio,
    apply_to_ball,
    apply_to_point,
    ball_model_to_hyperboloid,
    lift_ball,
    lift_point,
    lightray_cross_ratio,
    relation_of_balls,
    signed_inversive_distance,
    unlift_ball,
    unlift_point,
    unsigned_inversive_distance,
)
from .kernels import BACKEND
from .minkowski import (
    CausalClass,
    LorentzMap,
    canonicalize_subspace,
    causal_class,
    classify_span,
    complete_to_lorentz_basis,
    gram_matrix,
    hyperbolic_distance,
    lorentz_complement,
    lorentz_inner,
    random_lorentz,
    validate_lorentz,
)
from .solver import (
    Configuration,
    Kind,
    Mode,
    Uniqueness,
    classify_uniqueness,
    detect_common_boundary,
    full_cross_ratio_check,
    match_frames,
    solve_balls,
    solve_points,
    verify_correspondence,
)

__version__ = "0.1.0"
