// test_propagator.cpp — U(z), the exact Lindblad solution and its agreement with the RK4 oracle

#include "support.hpp"
#include "twomode/analytic.hpp"
#include "twomode/effective.hpp"
#include "twomode/oracle.hpp"
#include "twomode/propagator.hpp"

#include <doctest.h>

#include <numbers>

using namespace twomode;
using twomode::test::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ModelParams> sweep_params() {
    return {ModelParams(1.0, 0.0, 0.0), ModelParams(1.0, 0.75, 0.0), ModelParams(1.0, 0.5, 0.5),
            ModelParams(1.0, 2.0, 0.0), ModelParams(1.0, 3.0, 0.0), ModelParams(1.0, 0.2, 4.0)};
}

std::vector<DensityMatrix> sweep_states(const FockSpace& s) {
    test::Rng rng(41);
    const StateVector plus =
        (StateVector::basis(s, 1, 0) + StateVector::basis(s, 0, 1)).normalized();
    return {DensityMatrix::projector(s, 1, 1), DensityMatrix::projector(s, 2, 0), DensityMatrix::pure(plus),
            test::random_density(s, s.n_max(), 2, rng)};
}

}  // namespace

TEST_CASE("U(z) basic properties") {
    const FockSpace s(4);
    for (const ModelParams& p : sweep_params())
        CHECK(max_abs(u_z(p, s, 0.0).matrix() - CMatrix::Identity(s.dim(), s.dim())) < 1e-14);

    const ModelParams lossless(1.0, 0.0, 0.0);
    for (double z : {0.3, 1.0, 2.7}) {
        const CMatrix u = u_z(lossless, s, z).matrix();
        const CMatrix sub = restrict_to_sector(u.adjoint() * u, s, s.n_max());
        CHECK(max_abs(sub - CMatrix::Identity(sub.rows(), sub.cols())) < 1e-10);
    }
    const Operator hom = u_z(lossless, s, kPi / 4.0);
    CHECK(std::norm(hom.element({1, 1}, {1, 1})) < 1e-10);
}

TEST_CASE("diagonalized and direct evolution operators agree away from the EP") {
    const FockSpace s(5);
    for (const ModelParams& p : sweep_params()) {
        if (uses_ep_fallback(p)) {
            CHECK_THROWS_AS(u_z_diagonal(p, s, 1.0), ExceptionalPointError);
            continue;
        }
        for (double z : {0.1, 0.9, 2.5}) {
            const CMatrix diff = u_z_diagonal(p, s, z).matrix() - u_z_direct(p, s, z).matrix();
            CHECK(max_abs(restrict_to_sector(diff, s, s.n_max())) < 1e-10);
        }
    }
}

TEST_CASE("exact evolution examples") {
    const FockSpace s(4);
    test::Rng rng(2);
    const DensityMatrix rho0 = test::random_density(s, 4, 3, rng);
    for (const ModelParams& p : sweep_params()) {
        CHECK(trace_distance(evolve_exact(rho0, p, 0.0), rho0) < 1e-13);
        for (double z : {0.0, 0.5, 3.0}) {
            const DensityMatrix vac = evolve_exact(DensityMatrix::projector(s, 0, 0), p, z);
            CHECK(max_abs((vac - DensityMatrix::projector(s, 0, 0)).matrix()) < 1e-14);
        }
    }

    // Single-mode amplitude damping; the printed U^-1 in place of U^dagger would not reproduce it.
    for (double ga : {0.3, 1.0}) {
        const ModelParams p(0.0, ga, 0.0);
        for (double z : {0.2, 1.0, 4.0}) {
            const DensityMatrix out = evolve_exact(DensityMatrix::projector(s, 1, 0), p, z);
            const double keep = std::exp(-2.0 * ga * z);
            const DensityMatrix expect = Complex(keep) * DensityMatrix::projector(s, 1, 0) +
                                         Complex(1.0 - keep) * DensityMatrix::projector(s, 0, 0);
            CHECK(max_abs((out - expect).matrix()) < 1e-13);
        }
    }
}

TEST_CASE("exact evolution rejects inputs it cannot represent") {
    const FockSpace s(2);
    CHECK_THROWS_AS(evolve_exact(Complex(2.0) * DensityMatrix::projector(s, 1, 0), ModelParams(1, 0, 0), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(evolve_exact(DensityMatrix::projector(s, 2, 2), ModelParams(1, 0, 0), 1.0), std::domain_error);
    CHECK_THROWS_AS(PropagationPlan::make(ModelParams(1, 0, 0), s, {0.0, 1.0, 0.5}), std::domain_error);
    CHECK_THROWS_AS(PropagationPlan::make(ModelParams(1, 0, 0), s, {-1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(linspace_grid(1.0, 1), std::domain_error);
}

TEST_CASE("a propagation plan gives the same results as per-point evolution") {
    const FockSpace s(3);
    const ModelParams p(1.0, 0.75, 0.0);
    const PropagationPlan plan = PropagationPlan::make(p, s, linspace_grid(2.0, 9));
    CHECK_FALSE(plan.ep_fallback);
    CHECK(PropagationPlan::make(ModelParams(1.0, 2.0, 0.0), s, {0.0}).ep_fallback);
    const DensityMatrix rho0 = DensityMatrix::projector(s, 1, 1);
    const std::vector<DensityMatrix> out = evolve_exact(rho0, plan);
    REQUIRE(out.size() == 9);
    for (std::size_t i = 0; i < out.size(); ++i)
        CHECK(max_abs((out[i] - evolve_exact(rho0, p, plan.z_grid[i])).matrix()) == 0.0);
}

TEST_CASE("non-Hermitian pure-state evolution") {
    const FockSpace s(4);
    const StateVector psi0 = StateVector::basis(s, 1, 1);
    for (const ModelParams& p : sweep_params()) {
        CHECK(max_abs(evolve_pure_nonhermitian(psi0, p, 0.0).amplitudes() - psi0.amplitudes()) < 1e-15);
        double last = 1.0;
        for (int i = 1; i <= 30; ++i) {
            const double n = evolve_pure_nonhermitian(psi0, p, 0.1 * i).norm();
            CHECK(n <= last + 1e-12);
            if (p.gamma() == 0.0) CHECK(std::abs(n - 1.0) < 1e-10);
            last = n;
        }
    }
}

TEST_CASE("semigroup property in every regime") {
    const FockSpace s(4);
    test::Rng rng(5);
    const DensityMatrix rho0 = test::random_density(s, 4, 3, rng);
    for (const ModelParams& p : sweep_params()) {
        for (auto [z1, z2] : {std::pair{0.3, 0.9}, std::pair{1.1, 1.7}}) {
            const DensityMatrix once = evolve_exact(rho0, p, z1 + z2);
            const DensityMatrix twice = evolve_exact(evolve_exact(rho0, p, z1), p, z2);
            CHECK(trace_distance(once, twice) <= 1e-8);
        }
    }
}

TEST_CASE("exact solution matches the RK4 oracle and stays physical") {
    const FockSpace s(6);
    const std::vector<double> grid = linspace_grid(3.0, 101);
    for (const ModelParams& p : sweep_params()) {
        for (const DensityMatrix& rho0 : sweep_states(s)) {
            const std::vector<DensityMatrix> exact = evolve_exact(rho0, PropagationPlan::make(p, s, grid));
            const std::vector<DensityMatrix> rk4 = integrate_lindblad(rho0, p, grid, IntegratorConfig::for_state(p, rho0));
            double worst = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                worst = std::max(worst, trace_distance(exact[i], rk4[i]));
                CHECK(std::abs(exact[i].trace() - 1.0) <= 1e-9);
                CHECK(exact[i].hermiticity_defect() <= 1e-10);
                CHECK(exact[i].min_eigenvalue() >= -1e-8);
            }
            CHECK(worst <= 1e-6);
        }
    }
}

TEST_CASE("evolution is continuous across the exceptional point") {
    const FockSpace s(4);
    const DensityMatrix rho0 = DensityMatrix::projector(s, 1, 1);
    for (double z : {0.4, 0.8, 1.6, 3.0}) {
        const DensityMatrix at = evolve_exact(rho0, ModelParams(1.0, 2.0, 0.0), z);
        for (double f : {1.0 - 1e-6, 1.0 + 1e-6}) {
            const DensityMatrix near = evolve_exact(rho0, ModelParams(1.0, 2.0 * f, 0.0), z);
            CHECK(std::abs(coincidence_from_density(near) - coincidence_from_density(at)) <= 1e-4);
            CHECK(trace_distance(near, at) <= 1e-4);
        }
    }
}
