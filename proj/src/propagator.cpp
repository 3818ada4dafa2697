// propagator.cpp — Transform, evolve, untransform

#include "twomode/propagator.hpp"

#include "twomode/effective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twomode {

PropagationPlan PropagationPlan::make(const ModelParams& params, const FockSpace& space, std::vector<double> z_grid) {
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        if (!(z_grid[i] >= 0.0) || !std::isfinite(z_grid[i])) {
            throw std::domain_error("PropagationPlan: z values must be finite and non-negative");
        }
        if (i > 0 && !(z_grid[i] > z_grid[i - 1])) {
            throw std::domain_error("PropagationPlan: z grid must be strictly increasing");
        }
    }
    return {params, space, std::move(z_grid), uses_ep_fallback(params)};
}

std::vector<double> linspace_grid(double z_max, int points) {
    if (points < 2 || !(z_max > 0.0)) {
        throw std::domain_error("linspace_grid: need z_max > 0 and at least 2 points");
    }
    std::vector<double> z(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        z[static_cast<std::size_t>(i)] = z_max * i / (points - 1);
    }
    return z;
}

bool uses_ep_fallback(const ModelParams& params) { return classify(params).tag == RegimeTag::at_ep; }

Operator u_z_direct(const ModelParams& params, const FockSpace& space, double z) {
    return expm(Complex(0.0, -z) * h_eff(params, space));
}

Operator u_z_diagonal(const ModelParams& params, const FockSpace& space, double z) {
    const EtaParameter e = eta(params);
    const Operator diag = h_diag(params, space);
    CMatrix phases = CMatrix::Zero(space.dim(), space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        phases(i, i) = std::exp(Complex(0.0, -z) * diag(i, i));
    }
    const Operator evolve(space, std::move(phases));
    return mul(mul(r_transform(e, space), evolve), r_inverse(e, space));
}

Operator u_z(const ModelParams& params, const FockSpace& space, double z) {
    if (uses_ep_fallback(params)) {
        return u_z_direct(params, space, z);
    }
    return u_z_diagonal(params, space, z);
}

namespace {

void require_evolvable(const DensityMatrix& rho0) {
    const double dev = std::abs(rho0.trace() - Complex(1.0, 0.0));
    if (dev > 1e-6) {
        throw std::domain_error("evolve_exact: unphysical input, |trace - 1| = " + std::to_string(dev));
    }
    if (rho0.weight_above(rho0.space().n_max()) > 1e-12) {
        throw std::domain_error("evolve_exact: input has support above n_max total photons");
    }
}

DensityMatrix evolve_with(const DensityMatrix& transformed, const Operator& u) {
    return exp_jump(JumpSign::minus, sandwich(u, transformed, adjoint(u)));
}

}  // namespace

DensityMatrix evolve_exact(const DensityMatrix& rho0, const ModelParams& params, double z) {
    require_evolvable(rho0);
    return evolve_with(exp_jump(JumpSign::plus, rho0), u_z(params, rho0.space(), z));
}

std::vector<DensityMatrix> evolve_exact(const DensityMatrix& rho0, const PropagationPlan& plan) {
    require_same_space(rho0.space(), plan.space, "evolve_exact");
    require_evolvable(rho0);
    const DensityMatrix transformed = exp_jump(JumpSign::plus, rho0);
    std::vector<DensityMatrix> out;
    out.reserve(plan.z_grid.size());
    for (double z : plan.z_grid) {
        out.push_back(evolve_with(transformed, u_z(plan.params, plan.space, z)));
    }
    return out;
}

StateVector evolve_pure_nonhermitian(const StateVector& psi0, const ModelParams& params, double z) {
    return apply(u_z(params, psi0.space(), z), psi0);
}

}  // namespace twomode
