"""Simulation and planning toolkit for entangled-frequency-comb CVQKD networks.

A type-II below-threshold parametric cavity emits a comb of entangled
tooth pairs; a central node distributes the halves of each pair to two
users, making N users fully connected through one source.  This package
models the source (including its technical noise), propagates the
two-mode Gaussian states through lossy links, computes asymptotic secret
key rates for every user pair, and solves the comb-tooth allocation
problem subject to the hardware budgets.

Numeric hot paths run on a compiled kernel when available and fall back
to pure Python; `kernel_backend()` tells which one is active.
"""
from ._kernels import BACKEND_NAME, available_backends
from .errors import (AboveThreshold, AllocationFailed, CombQKDError,
                     ConfigError, DomainError, InfeasibleSpacing, NonPhysical)
from .gaussian import (CONVENTIONS, PhysicalityReport, SymplecticPair,
                       TwoModeCovariance, bosonic_entropy, check_physicality,
                       heterodyne_conditioned_eigenvalues,
                       symplectic_eigenvalues)
from .keyrate import KeyRateReport, holevo_bound, key_rate, mutual_information
from .link import (LinkParams, apply_source_loss, db_to_linear,
                   fiber_transmittance, received_covariance)
from .opo import (LIGHT_SPEED_M_S, NoiseBreakdown, OpoParams, SeedNoiseModel,
                  bandwidth_from_crystal, cavity_length_for_fsr,
                  crystal_length_for_bandwidth, fsr_from_cavity,
                  noise_breakdown, sideband_cleanliness, source_covariance,
                  steady_state_mean)
from .planner import (BudgetReport, NetworkKeyRates, NetworkPlan, NetworkSpec,
                      PairAssignment, allocate, pair_budget, plan_keyrates,
                      verify_plan)

__version__ = "0.1.0"


def kernel_backend():
    """Name of the active numeric backend: 'compiled' or 'pure'."""
    return BACKEND_NAME


__all__ = [
    "AboveThreshold", "AllocationFailed", "BudgetReport", "CombQKDError",
    "ConfigError", "CONVENTIONS", "DomainError", "InfeasibleSpacing",
    "KeyRateReport", "LIGHT_SPEED_M_S", "LinkParams", "NetworkKeyRates",
    "NetworkPlan", "NetworkSpec", "NoiseBreakdown", "NonPhysical",
    "OpoParams", "PairAssignment", "PhysicalityReport", "SeedNoiseModel",
    "SymplecticPair", "TwoModeCovariance", "allocate", "apply_source_loss",
    "available_backends", "bandwidth_from_crystal", "bosonic_entropy",
    "cavity_length_for_fsr", "check_physicality",
    "crystal_length_for_bandwidth", "db_to_linear", "fiber_transmittance",
    "fsr_from_cavity", "heterodyne_conditioned_eigenvalues", "holevo_bound",
    "kernel_backend", "key_rate", "mutual_information", "noise_breakdown",
    "pair_budget", "plan_keyrates", "received_covariance",
    "sideband_cleanliness", "source_covariance", "steady_state_mean",
    "symplectic_eigenvalues", "verify_plan",
]
