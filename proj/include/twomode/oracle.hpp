// oracle.hpp — Independent reference solutions: RK4 Lindblad integration and quantum trajectories

#pragma once

#include "twomode/fock.hpp"
#include "twomode/superop.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twomode {

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct IntegratorConfig {
    double step{0.01};
    // Halve the step until successive results are within trace distance 1e-9.
    bool refine{false};

    // step = 0.01 / max(g, gamma_a, gamma_b)
    static IntegratorConfig for_params(const ModelParams& params, bool refine = false);
    // for_params scaled by min(1, 2/N), N the largest total photon number in the support of rho0.
    // The generator's spectrum grows with N, so this keeps the per-step phase error level.
    static IntegratorConfig for_state(const ModelParams& params, const DensityMatrix& rho0, bool refine = false);
    // Throws ConfigurationError when the step exceeds 0.01 / max rate or is not positive.
    void validate(const ModelParams& params) const;
};

// Classical RK4 on d rho/dz = lindblad_rhs(rho). Throws NumericalFailure if refinement drives
// the step below 1e-8/g without converging.
DensityMatrix integrate_lindblad(const DensityMatrix& rho0, const ModelParams& params, double z,
                                 const IntegratorConfig& config);
// Same integrator carried continuously through an increasing grid; one result per grid point.
std::vector<DensityMatrix> integrate_lindblad(const DensityMatrix& rho0, const ModelParams& params,
                                              const std::vector<double>& z_grid, const IntegratorConfig& config);

// Per-trajectory generators are std::mt19937_64 seeded with the i-th SplitMix64 output of the
// master seed; uniforms take the top 53 bits.
inline constexpr const char* kTrajectoryRng = "mt19937_64 seeded by splitmix64(seed, trajectory)";

struct TrajectoryStats {
    std::size_t n_traj{0};
    double mean{0.0};
    double std_error{0.0};
    std::uint64_t seed{0};
    std::string rng{kTrajectoryRng};
};

struct TrajectoryConfig {
    std::size_t n_traj{20000};
    std::uint64_t seed{42};
    // 0 selects min(0.01, 0.05 / max rate).
    double dz{0.0};
    // 0 selects std::thread::hardware_concurrency().
    unsigned threads{0};
};

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t trajectory);

// Step size chosen when TrajectoryConfig::dz is 0.
double default_trajectory_step(const ModelParams& params, const StateVector& psi0);

// Monte-Carlo wave-function estimate of tr(rho(z) observable) for a normalized pure input.
// Each step jumps c psi/|c psi| with probability 2 gamma_c |c psi|^2 dz, otherwise takes one RK4
// step of -i H_eff and renormalizes. Throws ConfigurationError if a step ever has dp_a + dp_b > 0.1
// or psi0 is not normalized.
TrajectoryStats mc_trajectories(const StateVector& psi0, const ModelParams& params, double z,
                                const Operator& observable, const TrajectoryConfig& config);
std::vector<TrajectoryStats> mc_trajectories(const StateVector& psi0, const ModelParams& params,
                                             const std::vector<double>& z_grid, const Operator& observable,
                                             const TrajectoryConfig& config);

}  // namespace twomode
