"""Rate regions and minimum-power allocation for mixed semantic/bit downlinks.

A base station serves one user that consumes semantic content (scored by
a similarity measure that saturates with SNR) and one that consumes plain
bits, out of a shared band and power budget.  This package models the
similarity S-curve, traces the achievable (semantic rate, bit rate)
region boundary for orthogonal, overlay, and hybrid multiplexing, solves
the dual minimum-power problem, and runs seeded fading sweeps.
"""

from .boundary import (
    BoundaryPoint,
    Containment,
    Extremes,
    RegionBoundary,
    check_containment,
    lemma1_bounds,
    noma_boundary,
    noma_power_floor,
    noma_sigma_min,
    oma_boundary_point,
    oma_extremes,
    semi_boundary_point,
    solve_noma_point,
    solve_oma_point,
    solve_semi_point,
    sweep_boundary,
    water_fill_max,
)
from .channel import (
    ChannelRealization,
    Scenario,
    dbm_to_watt,
    derive_seed,
    path_loss,
    sample_realization,
    watt_to_dbm,
)
from .errors import (
    DegenerateData,
    DistanceBelowReference,
    DomainMismatch,
    EmptyRegion,
    Infeasible,
    InfeasibleBandwidth,
    InfeasibleTarget,
    InsufficientData,
    RateUnreachable,
    SembitError,
    TargetBelowFloor,
    TargetUnreachable,
)
from .montecarlo import SweepResult, SweepRow, SweepSpec, run_sweep
from .power import (
    PowerSolution,
    PowerTargets,
    noma_min_power,
    oma_min_power,
    semi_min_power,
    solve_noma_min_power,
    solve_oma_min_power,
    solve_semi_min_power,
    water_fill_min,
)
from .rates import (
    Allocation,
    RatePair,
    Scheme,
    noma_rates,
    oma_rates,
    rates_for,
    semi_rates,
    shannon_rate,
    snr_db,
)
from .similarity import (
    LogisticParams,
    ParamTable,
    SimilaritySample,
    default_table,
    eval_similarity,
    fit_logistic,
    fit_mse,
    invert_similarity,
    power_for_similarity_grid,
    read_samples_csv,
    required_power_for_semantic_rate,
    required_power_for_similarity,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "BoundaryPoint",
    "ChannelRealization",
    "Containment",
    "DegenerateData",
    "DistanceBelowReference",
    "DomainMismatch",
    "EmptyRegion",
    "Extremes",
    "Infeasible",
    "InfeasibleBandwidth",
    "InfeasibleTarget",
    "InsufficientData",
    "LogisticParams",
    "ParamTable",
    "PowerSolution",
    "PowerTargets",
    "RatePair",
    "RateUnreachable",
    "RegionBoundary",
    "Scenario",
    "Scheme",
    "SembitError",
    "SimilaritySample",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "TargetBelowFloor",
    "TargetUnreachable",
    "check_containment",
    "dbm_to_watt",
    "default_table",
    "derive_seed",
    "eval_similarity",
    "fit_logistic",
    "fit_mse",
    "invert_similarity",
    "lemma1_bounds",
    "noma_boundary",
    "noma_min_power",
    "noma_power_floor",
    "noma_rates",
    "noma_sigma_min",
    "oma_boundary_point",
    "oma_extremes",
    "oma_min_power",
    "oma_rates",
    "path_loss",
    "power_for_similarity_grid",
    "rates_for",
    "read_samples_csv",
    "required_power_for_semantic_rate",
    "required_power_for_similarity",
    "run_sweep",
    "sample_realization",
    "semi_boundary_point",
    "semi_min_power",
    "semi_rates",
    "shannon_rate",
    "snr_db",
    "solve_noma_min_power",
    "solve_noma_point",
    "solve_oma_min_power",
    "solve_oma_point",
    "solve_semi_min_power",
    "solve_semi_point",
    "sweep_boundary",
    "water_fill_max",
    "water_fill_min",
    "watt_to_dbm",
]
