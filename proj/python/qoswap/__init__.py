"""Exact statistics of a two-qudit swap engine.

Closed-form moments and joint work-heat distribution, fluctuation-theorem
checks, uncertainty-ratio diagnostics, efficiency-at-maximum-work
optimization, a deterministic validation sampler, and finite-time limit
cycles. Everything is a thin wrapper over the C++ core; see the `qoswap`
command-line tool for the table-producing front end.
"""

from ._core import (
    DetailedFtReport,
    EfficiencyFluctuationReport,
    EfficiencyResult,
    EmpiricalStats,
    EngineParams,
    FiniteTimeParams,
    MaxWorkResult,
    MomentSet,
    OptimalPower,
    Regime,
    SteadyMoments,
    SteadyState,
    TurCheck,
    ViolationSearch,
    WorkHeatDistribution,
    carnot_cop,
    carnot_efficiency,
    characteristic_function,
    classify_regime,
    curzon_ahlborn_efficiency,
    efficiency_at_max_work,
    efficiency_is_nonfluctuating,
    entropy_production,
    enumerate_joint,
    joint_distribution,
    mean_occupation,
    mean_occupation_inverse,
    moments,
    occupation_variance,
    optimal_power,
    otto_cop,
    otto_efficiency,
    partition_function,
    power,
    power_zero_stroke_limit,
    regime_name,
    sample,
    snr_identity_rhs,
    steady_moments,
    steady_state,
    strongest_standard_violation,
    transition_probability,
    tur_bound_check,
    ultimate_snr_limit,
    verify_detailed_ft,
)

__all__ = [
    "DetailedFtReport",
    "EfficiencyFluctuationReport",
    "EfficiencyResult",
    "EmpiricalStats",
    "EngineParams",
    "FiniteTimeParams",
    "MaxWorkResult",
    "MomentSet",
    "OptimalPower",
    "Regime",
    "SteadyMoments",
    "SteadyState",
    "TurCheck",
    "ViolationSearch",
    "WorkHeatDistribution",
    "carnot_cop",
    "carnot_efficiency",
    "characteristic_function",
    "classify_regime",
    "curzon_ahlborn_efficiency",
    "efficiency_at_max_work",
    "efficiency_is_nonfluctuating",
    "entropy_production",
    "enumerate_joint",
    "joint_distribution",
    "mean_occupation",
    "mean_occupation_inverse",
    "moments",
    "occupation_variance",
    "optimal_power",
    "otto_cop",
    "otto_efficiency",
    "partition_function",
    "power",
    "power_zero_stroke_limit",
    "regime_name",
    "sample",
    "snr_identity_rhs",
    "steady_moments",
    "steady_state",
    "strongest_standard_violation",
    "transition_probability",
    "tur_bound_check",
    "ultimate_snr_limit",
    "verify_detailed_ft",
]

__version__ = "1.0.0"
