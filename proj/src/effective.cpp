// effective.cpp — H_eff, Schwinger operators, eta, R and the diagonal form

#include "twomode/effective.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace twomode {

Regime classify(const ModelParams& params) {
    const double g = params.g();
    const double d = std::abs(params.delta());
    if (std::abs(d - 2.0 * g) <= kEpRelativeBand * g) {
        return {RegimeTag::at_ep, 0.0};
    }
    // (2g - d)(2g + d) keeps full relative precision near the EP.
    if (d < 2.0 * g) {
        return {RegimeTag::below_ep, std::sqrt((2.0 * g - d) * (2.0 * g + d))};
    }
    return {RegimeTag::above_ep, std::sqrt((d - 2.0 * g) * (d + 2.0 * g))};
}

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::below_ep:
            return "BelowEP";
        case RegimeTag::at_ep:
            return "AtEP";
        case RegimeTag::above_ep:
            return "AboveEP";
    }
    return "?";
}

Operator h_eff(const ModelParams& params, const FockSpace& space) {
    const Operator a = annihilation(Mode::a, space);
    const Operator b = annihilation(Mode::b, space);
    const Operator hop = mul(a, adjoint(b)) + mul(adjoint(a), b);
    return Complex(0.0, -params.gamma_a()) * number(Mode::a, space) +
           Complex(0.0, -params.gamma_b()) * number(Mode::b, space) + Complex(params.g()) * hop;
}

Operator h_eff_split(const ModelParams& params, const FockSpace& space) {
    const SchwingerOps s = schwinger_ops(space);
    // b^dag b - a^dag a = 2 J_z and a b^dag + a^dag b = 2 J_x
    return Complex(0.0, -1.0) * (Complex(params.gamma() / 2.0) * s.n + Complex(params.delta()) * s.jz) +
           Complex(2.0 * params.g()) * s.jx;
}

SchwingerOps schwinger_ops(const FockSpace& space) {
    const Operator a = annihilation(Mode::a, space);
    const Operator b = annihilation(Mode::b, space);
    const Operator a_dag = adjoint(a);
    const Operator b_dag = adjoint(b);
    const Operator na = mul(a_dag, a);
    const Operator nb = mul(b_dag, b);
    return {
        .n = na + nb,
        .jx = Complex(0.5) * (mul(a, b_dag) + mul(a_dag, b)),
        .jy = Complex(0.0, 0.5) * (mul(a_dag, b) - mul(a, b_dag)),
        .jz = Complex(0.5) * (nb - na),
    };
}

EtaParameter eta(const ModelParams& params) {
    const Regime regime = classify(params);
    const double g = params.g();
    const double d = params.delta();
    constexpr double pi = std::numbers::pi;
    switch (regime.tag) {
        case RegimeTag::at_ep:
            throw ExceptionalPointError();
        case RegimeTag::above_ep: {
            const double x = std::atanh(2.0 * g / d);
            return {d > 0.0 ? Complex(x, 0.0) : Complex(x, pi)};
        }
        case RegimeTag::below_ep:
            return {Complex(std::atanh(d / (2.0 * g)), -pi / 2.0)};
    }
    throw ExceptionalPointError();
}

Operator r_transform(EtaParameter eta, const FockSpace& space) {
    return expm(eta.value * schwinger_ops(space).jy);
}

Operator r_inverse(EtaParameter eta, const FockSpace& space) {
    return expm(-eta.value * schwinger_ops(space).jy);
}

Complex eigenvalue(int j, int k, const ModelParams& params) {
    const Regime regime = classify(params);
    const double n = j + k;
    const double diff = k - j;
    const double gamma = params.gamma();
    switch (regime.tag) {
        case RegimeTag::below_ep:
            return 0.5 * Complex(regime.omega * diff, -gamma * n);
        case RegimeTag::above_ep:
            return Complex(0.0, -0.5 * (gamma * n + regime.omega * diff));
        case RegimeTag::at_ep:
            return Complex(0.0, -0.5 * gamma * n);
    }
    return {};
}

Operator h_diag(const ModelParams& params, const FockSpace& space) {
    if (classify(params).tag == RegimeTag::at_ep) {
        throw ExceptionalPointError();
    }
    CMatrix m = CMatrix::Zero(space.dim(), space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        const Occupation occ = occupation(i, space);
        m(i, i) = eigenvalue(occ.n_a, occ.n_b, params);
    }
    return {space, std::move(m)};
}

namespace {

void require_eigen_labels(int j, int k, const FockSpace& space) {
    if (j < 0 || k < 0 || j + k > space.n_max()) {
        throw std::domain_error("eigenvector labels (" + std::to_string(j) + "," + std::to_string(k) +
                                ") need j,k >= 0 and j+k <= n_max");
    }
}

}  // namespace

StateVector right_eigenvector(int j, int k, const ModelParams& params, const FockSpace& space) {
    require_eigen_labels(j, k, space);
    const Operator r = r_transform(eta(params), space);
    return {space, r.matrix().col(basis_index(j, k, space))};
}

StateVector left_eigenvector(int j, int k, const ModelParams& params, const FockSpace& space) {
    require_eigen_labels(j, k, space);
    const Operator r_inv = r_inverse(eta(params), space);
    return {space, r_inv.matrix().row(basis_index(j, k, space)).transpose()};
}

Complex biorthogonal_pairing(const StateVector& left, const StateVector& right) {
    require_same_space(left.space(), right.space(), "biorthogonal_pairing");
    return left.amplitudes().transpose() * right.amplitudes();
}

int nilpotency_index(const ModelParams& params, const FockSpace& space, int total, Complex lambda, double tol) {
    const CMatrix block = sector_block(h_eff(params, space).matrix(), space, total);
    const auto size = block.rows();
    const CMatrix shifted = block - lambda * CMatrix::Identity(size, size);
    const double scale = std::max(block.norm(), 1e-300);
    CMatrix power = CMatrix::Identity(size, size);
    for (int p = 1; p <= size; ++p) {
        power = power * shifted;
        if (power.norm() <= tol * std::pow(scale, p)) {
            return p;
        }
    }
    return 0;
}

}  // namespace twomode
