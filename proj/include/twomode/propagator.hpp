// propagator.hpp — Non-unitary evolution operator U(z) and the exact Lindblad solution
//
// rho(z) = exp[-(J_a+J_b)/2] ( U(z) exp[(J_a+J_b)/2] rho(0) U(z)^dagger ),
// U(z) = R exp(-i H_diag z) R^-1 away from the exceptional point, exp(-i H_eff z) at it.

#pragma once

#include "twomode/fock.hpp"
#include "twomode/superop.hpp"

#include <vector>

namespace twomode {

struct PropagationPlan {
    ModelParams params;
    FockSpace space;
    std::vector<double> z_grid;
    bool ep_fallback{false};

    // Validates a non-negative, strictly increasing grid and records whether the EP fallback applies.
    static PropagationPlan make(const ModelParams& params, const FockSpace& space, std::vector<double> z_grid);
};

// Evenly spaced grid of `points` values on [0, z_max].
std::vector<double> linspace_grid(double z_max, int points);

bool uses_ep_fallback(const ModelParams& params);

Operator u_z(const ModelParams& params, const FockSpace& space, double z);
// Direct route exp(-i H_eff z), independent of the diagonalization.
Operator u_z_direct(const ModelParams& params, const FockSpace& space, double z);
// The R exp(-i H_diag z) R^-1 route; throws ExceptionalPointError at the EP.
Operator u_z_diagonal(const ModelParams& params, const FockSpace& space, double z);

// Throws std::domain_error when |tr rho0 - 1| > 1e-6 or when rho0 has weight above n_max
// total photons (the pipeline is exact only on that support).
DensityMatrix evolve_exact(const DensityMatrix& rho0, const ModelParams& params, double z);
std::vector<DensityMatrix> evolve_exact(const DensityMatrix& rho0, const PropagationPlan& plan);

// U(z) psi0 without renormalization.
StateVector evolve_pure_nonhermitian(const StateVector& psi0, const ModelParams& params, double z);

}  // namespace twomode
