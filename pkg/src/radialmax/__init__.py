"""Numerical laboratory for centered maximal operators under radial power-law measures."""

from .bounds import (
    BoundCertificate,
    BoundMethod,
    Part1Geometry,
    cp_lower_bound,
    delta_lower_bound,
    g_eval,
    part1_geometry,
)
from .maximal1d import (
    GridConfig,
    LevelSetResult,
    RadialProfile,
    WeightedLineMeasure,
    gamma0_interval,
    level_set_measure,
    uncentered_max,
    weak_type_quotient_1d,
)
from .measure import (
    BallSpec,
    PowerLawMeasure,
    QuadratureConfig,
    QuadratureError,
    cap_angle,
    log_ball_centered,
    log_ball_offcenter,
    log_ball_offcenter_shell,
    log_ball_offcenter_unit_closed,
    log_cap_area,
    log_intersection_with_centered,
    log_unit_ball_volume,
    shift_condition_ratio,
    shift_condition_ratios,
)
from .radial import (
    MaximalConfig,
    ball_average,
    centered_max_radial,
    mc_ball_average,
    pointwise_domination_check,
    weak_type_quotient_radial,
)
from .specfun import (
    CancellationError,
    LogValue,
    log_gamma,
    log_reg_inc_beta,
    log_sphere_area,
    reg_inc_beta,
    sin_power_integral,
    stirling_bounds,
)

__version__ = "0.1.0"
