"""Best-Sobolev-inequality curves of the half-space and the unit ball.

Computes the constrained minimization curves generated by the explicit
extremal profile families, extracts their Lagrange multipliers by two
independent routes, and numerically certifies the comparison inequalities
and the first-order boundary-concentration expansion.
"""

from .errors import (
    BracketError,
    BscError,
    ChartDomainError,
    ConditioningError,
    ConstancyError,
    DomainError,
    FitDegeneracyError,
    QuadratureError,
    UnsupportedRegimeError,
    ValidationError,
)
from .profiles import (
    Exponents,
    ProfileFamily,
    TranslatedProfile,
    decay_envelope,
    derived_exponents,
    profile_slope,
    profile_value,
)
from .quadrature import (
    HalfSpaceMoments,
    QuadratureConfig,
    ball_moment,
    ball_trace_volume_ratio,
    cap_polar_limit,
    cap_sign_integrals,
    fullspace_moment,
    halfspace_moment,
    halfspace_moments,
    lambda_functional,
    sin_power_integral,
)
from .curves import (
    CurvePoint,
    SpecialConstants,
    log_grid,
    multipliers,
    solve_curve,
    solve_phi_B,
    solve_phi_H,
    special_constants,
    trace_volume_ratio,
)
from .verify import (
    VerificationReport,
    comparison_report,
    interpolation_spot_checks,
    key_inequality_margin,
    key_report,
)
from .expansion import (
    ExpansionConfig,
    ExpansionRun,
    assemble_and_measure,
    ball_chart_factors,
    beta_window,
    epsilon_slope_check,
)

__version__ = "0.1.0"
