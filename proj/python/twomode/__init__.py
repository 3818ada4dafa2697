"""Exact Markovian evolution of two coupled lossy bosonic modes."""

from ._twomode import (
    ExceptionalPointError,
    FockSpace,
    ModelParams,
    TrajectoryStats,
    annihilation,
    coincidence_closed_form,
    coincidence_from_density,
    eigenvalue,
    eta,
    evolve_exact,
    exp_jump,
    expm,
    h_diag,
    h_eff,
    hom_minimum,
    integrate_lindblad,
    lindblad_rhs,
    mc_trajectories,
    regime,
    run_cli,
    trace_distance,
    u_z,
)

__all__ = [
    "ExceptionalPointError",
    "FockSpace",
    "ModelParams",
    "TrajectoryStats",
    "annihilation",
    "coincidence_closed_form",
    "coincidence_from_density",
    "eigenvalue",
    "eta",
    "evolve_exact",
    "exp_jump",
    "expm",
    "h_diag",
    "h_eff",
    "hom_minimum",
    "integrate_lindblad",
    "lindblad_rhs",
    "mc_trajectories",
    "regime",
    "run_cli",
    "trace_distance",
    "u_z",
]
