// superop.hpp — Model parameters and the superoperators of the two-mode Lindblad equation
//
// All superoperators act as functions DensityMatrix -> DensityMatrix. They are never
// materialized as dim^2 x dim^2 matrices.

#pragma once

#include "twomode/fock.hpp"

namespace twomode {

// Coupling g and loss rates gamma_a, gamma_b, all in units of inverse propagation distance.
class ModelParams {
public:
    // Throws std::domain_error unless g >= 0, gamma_a >= 0, gamma_b >= 0 and all are finite.
    ModelParams(double g, double gamma_a, double gamma_b);

    double g() const noexcept { return g_; }
    double gamma_a() const noexcept { return gamma_a_; }
    double gamma_b() const noexcept { return gamma_b_; }
    double gamma() const noexcept { return gamma_a_ + gamma_b_; }
    double delta() const noexcept { return gamma_b_ - gamma_a_; }
    double loss(Mode mode) const noexcept { return mode == Mode::a ? gamma_a_ : gamma_b_; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double g_;
    double gamma_a_;
    double gamma_b_;
};

// J_c rho = 2 c rho c^dagger
DensityMatrix jump_super(Mode mode, const DensityMatrix& rho);
// L_c rho = c^dagger c rho + rho c^dagger c
DensityMatrix anticomm_super(Mode mode, const DensityMatrix& rho);
// S rho = [a b^dagger + a^dagger b, rho]
DensityMatrix interaction_super(const DensityMatrix& rho);

// -i g S rho + sum_c gamma_c (J_c - L_c) rho
DensityMatrix lindblad_rhs(const ModelParams& params, const DensityMatrix& rho);

// -i (H rho - rho H^dagger)
DensityMatrix von_neumann_rhs(const Operator& h, const DensityMatrix& rho);

enum class JumpSign : int { minus = -1, plus = +1 };

// exp[sign (J_a + J_b)/2] rho as a finite series. Every application of J_a + J_b lowers the
// photon number on both sides, so the series ends once a term is exactly zero.
DensityMatrix exp_jump(JumpSign sign, const DensityMatrix& rho);

}  // namespace twomode
