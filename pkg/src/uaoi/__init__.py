"""Optimal waiting policies minimizing urgency-aware age of information (U-AoI)."""

from .distribution import TransmissionTimeDistribution, exp_moment, expect_policy, expected_beta, mean
from .model import (
    ChannelModel,
    EhModel,
    EnergyConstraintSpec,
    PenaltySpec,
    UpdateSpec,
    beta,
    compute_omega,
    energy_per_update,
    harvested_power,
    penalty,
    received_power,
    trapezoid_area,
)
from .simulator import Metrics, Trajectory, empirical_vs_analytic, measure, simulate
from .solver import (
    SolverConfig,
    SolverResult,
    WaitingPolicy,
    bisect_eta,
    closed_form_wait,
    evaluate_F,
    evaluate_policy_uaoi,
    solve,
)

__version__ = "0.1.0"
