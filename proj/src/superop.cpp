// superop.cpp — Dissipators, jump superoperators and the jump-removing exponential

#include "twomode/superop.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace twomode {

ModelParams::ModelParams(double g, double gamma_a, double gamma_b) : g_(g), gamma_a_(gamma_a), gamma_b_(gamma_b) {
    if (!std::isfinite(g) || !std::isfinite(gamma_a) || !std::isfinite(gamma_b)) {
        throw std::domain_error("ModelParams: parameters must be finite");
    }
    if (g < 0.0) {
        throw std::domain_error("ModelParams: coupling g must be >= 0, got " + std::to_string(g));
    }
    if (gamma_a < 0.0 || gamma_b < 0.0) {
        throw std::domain_error("ModelParams: loss rates must be >= 0");
    }
}

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;

SparseC sparse_annihilation(Mode mode, const FockSpace& space) {
    std::vector<Eigen::Triplet<Complex>> entries;
    const int n = space.n_max();
    for (int na = 0; na <= n; ++na) {
        for (int nb = 0; nb <= n; ++nb) {
            const int col = basis_index(na, nb, space);
            if (mode == Mode::a && na > 0) {
                entries.emplace_back(basis_index(na - 1, nb, space), col, std::sqrt(static_cast<double>(na)));
            } else if (mode == Mode::b && nb > 0) {
                entries.emplace_back(basis_index(na, nb - 1, space), col, std::sqrt(static_cast<double>(nb)));
            }
        }
    }
    SparseC m(space.dim(), space.dim());
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

RVector occupations(Mode mode, const FockSpace& space) {
    RVector n(space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        const Occupation occ = occupation(i, space);
        n(i) = mode == Mode::a ? occ.n_a : occ.n_b;
    }
    return n;
}

SparseC sparse_hopping(const FockSpace& space) {
    const SparseC a = sparse_annihilation(Mode::a, space);
    const SparseC b = sparse_annihilation(Mode::b, space);
    const SparseC ab_dag = a * SparseC(b.adjoint());
    return ab_dag + SparseC(ab_dag.adjoint());
}

CMatrix jump_matrix(Mode mode, const CMatrix& rho, const FockSpace& space) {
    const SparseC c = sparse_annihilation(mode, space);
    const CMatrix c_rho = c * rho;
    return 2.0 * (c_rho * SparseC(c.adjoint()));
}

CMatrix anticomm_matrix(Mode mode, const CMatrix& rho, const FockSpace& space) {
    const RVector n = occupations(mode, space);
    return n.asDiagonal() * rho + rho * n.asDiagonal();
}

CMatrix interaction_matrix(const CMatrix& rho, const FockSpace& space) {
    const SparseC hop = sparse_hopping(space);
    const CMatrix left = hop * rho;
    const CMatrix right = rho * hop;
    return left - right;
}

}  // namespace

DensityMatrix jump_super(Mode mode, const DensityMatrix& rho) {
    return {rho.space(), jump_matrix(mode, rho.matrix(), rho.space())};
}

DensityMatrix anticomm_super(Mode mode, const DensityMatrix& rho) {
    return {rho.space(), anticomm_matrix(mode, rho.matrix(), rho.space())};
}

DensityMatrix interaction_super(const DensityMatrix& rho) {
    return {rho.space(), interaction_matrix(rho.matrix(), rho.space())};
}

DensityMatrix lindblad_rhs(const ModelParams& params, const DensityMatrix& rho) {
    const FockSpace& space = rho.space();
    const CMatrix& r = rho.matrix();
    CMatrix out = Complex(0.0, -params.g()) * interaction_matrix(r, space);
    for (Mode mode : {Mode::a, Mode::b}) {
        const double rate = params.loss(mode);
        if (rate != 0.0) {
            out += rate * (jump_matrix(mode, r, space) - anticomm_matrix(mode, r, space));
        }
    }
    return {space, std::move(out)};
}

DensityMatrix von_neumann_rhs(const Operator& h, const DensityMatrix& rho) {
    require_same_space(h.space(), rho.space(), "von_neumann_rhs");
    const CMatrix& hm = h.matrix();
    const CMatrix& r = rho.matrix();
    return {rho.space(), Complex(0.0, -1.0) * (hm * r - r * hm.adjoint())};
}

DensityMatrix exp_jump(JumpSign sign, const DensityMatrix& rho) {
    const FockSpace& space = rho.space();
    const double half = 0.5 * static_cast<int>(sign);
    const SparseC a = sparse_annihilation(Mode::a, space);
    const SparseC b = sparse_annihilation(Mode::b, space);
    const SparseC a_dag = a.adjoint();
    const SparseC b_dag = b.adjoint();

    CMatrix sum = rho.matrix();
    CMatrix term = rho.matrix();
    // Each application lowers both sides by one photon, so 2*n_max + 1 applications
    // annihilate anything; the zero test usually ends the loop far earlier.
    for (int k = 1; k <= 2 * space.n_max() + 1; ++k) {
        const CMatrix a_term = a * term;
        const CMatrix b_term = b * term;
        term = (half * 2.0 / k) * (a_term * a_dag + b_term * b_dag);
        if (term.size() == 0 || term.cwiseAbs().maxCoeff() < 1e-300) {
            break;
        }
        sum += term;
    }
    return {space, std::move(sum)};
}

}  // namespace twomode
