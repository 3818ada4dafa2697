// support.hpp — Random inputs and independent reference implementations for the test suite

#pragma once

#include "twomode/fock.hpp"
#include "twomode/superop.hpp"

#include <cmath>
#include <random>

namespace twomode::test {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

inline CMatrix random_matrix(int dim, Rng& rng) {
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = random_complex(rng);
    return m;
}

// Random positive unit-trace state with the given rank, supported on total photon number <= max_total.
inline DensityMatrix random_density(const FockSpace& space, int max_total, int rank, Rng& rng) {
    const int dim = space.dim();
    CMatrix v = CMatrix::Zero(dim, rank);
    for (int i = 0; i < dim; ++i) {
        if (occupation(i, space).total() > max_total) continue;
        for (int r = 0; r < rank; ++r) v(i, r) = random_complex(rng);
    }
    CMatrix rho = v * v.adjoint();
    rho /= rho.trace();
    return {space, rho};
}

// Arbitrary (non-Hermitian) operand with the same support restriction.
inline DensityMatrix random_operand(const FockSpace& space, int max_total, Rng& rng) {
    const int dim = space.dim();
    CMatrix m = CMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (occupation(i, space).total() <= max_total && occupation(j, space).total() <= max_total)
                m(i, j) = random_complex(rng);
    return {space, m};
}

// Ladder matrices built element by element from sqrt(n) matrix elements.
inline CMatrix ladder_reference(Mode mode, int n_max) {
    const int d = n_max + 1;
    CMatrix m = CMatrix::Zero(d * d, d * d);
    for (int na = 0; na <= n_max; ++na)
        for (int nb = 0; nb <= n_max; ++nb) {
            const int from = na * d + nb;
            if (mode == Mode::a && na > 0) m((na - 1) * d + nb, from) = std::sqrt(double(na));
            if (mode == Mode::b && nb > 0) m(na * d + nb - 1, from) = std::sqrt(double(nb));
        }
    return m;
}

// Taylor series with scaling and squaring, deliberately unlike the Pade implementation.
inline CMatrix taylor_expm(const CMatrix& m) {
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    while (norm / std::ldexp(1.0, s) > 0.25) ++s;
    const CMatrix a = m / std::ldexp(1.0, s);
    CMatrix term = CMatrix::Identity(m.rows(), m.cols());
    CMatrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * a / double(k);
        sum += term;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

// Dense Lindblad generator from explicit matrix products.
inline CMatrix lindblad_reference(const ModelParams& p, const CMatrix& rho, int n_max) {
    const CMatrix a = ladder_reference(Mode::a, n_max);
    const CMatrix b = ladder_reference(Mode::b, n_max);
    const CMatrix s = a * b.adjoint() + a.adjoint() * b;
    const Complex i(0.0, 1.0);
    CMatrix out = -i * p.g() * (s * rho - rho * s);
    for (const auto& [c, gamma] : {std::pair{a, p.gamma_a()}, std::pair{b, p.gamma_b()}}) {
        const CMatrix n = c.adjoint() * c;
        out += gamma * (2.0 * c * rho * c.adjoint() - n * rho - rho * n);
    }
    return out;
}

// Short-distance Lindblad flow sum_k dz^k L^k rho / k! from the dense reference generator.
inline CMatrix lindblad_flow_series(const ModelParams& p, const CMatrix& rho, int n_max, double dz, int terms = 25) {
    CMatrix term = rho;
    CMatrix sum = rho;
    for (int k = 1; k < terms; ++k) {
        term = lindblad_reference(p, term, n_max) * (dz / k);
        sum += term;
    }
    return sum;
}

inline double spectral_norm_reference(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace twomode::test
