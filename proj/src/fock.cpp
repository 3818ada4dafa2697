// fock.cpp — Fock-space bookkeeping, ladder operators, expm and Hermitian spectra

#include "twomode/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace twomode {

FockSpace::FockSpace(int n_max) : n_max_(n_max) {
    if (n_max < 0) {
        throw std::domain_error("FockSpace: n_max must be non-negative, got " + std::to_string(n_max));
    }
}

int basis_index(int n_a, int n_b, const FockSpace& space) {
    const int n = space.n_max();
    if (n_a < 0 || n_a > n || n_b < 0 || n_b > n) {
        throw std::domain_error("basis_index: occupation (" + std::to_string(n_a) + "," +
                                std::to_string(n_b) + ") outside [0," + std::to_string(n) + "]");
    }
    return n_a * (n + 1) + n_b;
}

int basis_index(Occupation occ, const FockSpace& space) { return basis_index(occ.n_a, occ.n_b, space); }

Occupation occupation(int index, const FockSpace& space) {
    if (index < 0 || index >= space.dim()) {
        throw std::domain_error("occupation: index " + std::to_string(index) + " out of range");
    }
    const int stride = space.n_max() + 1;
    return {index / stride, index % stride};
}

void require_same_space(const FockSpace& lhs, const FockSpace& rhs, const char* what) {
    if (!(lhs == rhs)) {
        throw std::domain_error(std::string(what) + ": dimension mismatch (n_max " +
                                std::to_string(lhs.n_max()) + " vs " + std::to_string(rhs.n_max()) + ")");
    }
}

// ------------------------------ SpaceMatrix --------------------------------

template <typename Derived>
SpaceMatrix<Derived>::SpaceMatrix(FockSpace space, CMatrix entries) : space_(space), m_(std::move(entries)) {
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim()) {
        throw std::domain_error("matrix shape " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                                " does not match Fock dimension " + std::to_string(space_.dim()));
    }
}

template <typename Derived>
double SpaceMatrix<Derived>::max_norm() const {
    return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

template <typename Derived>
Derived& SpaceMatrix<Derived>::operator+=(const Derived& rhs) {
    require_same_space(space_, rhs.space(), "operator+=");
    m_ += rhs.matrix();
    return self();
}

template <typename Derived>
Derived& SpaceMatrix<Derived>::operator-=(const Derived& rhs) {
    require_same_space(space_, rhs.space(), "operator-=");
    m_ -= rhs.matrix();
    return self();
}

template class SpaceMatrix<Operator>;
template class SpaceMatrix<DensityMatrix>;

Operator Operator::zero(const FockSpace& space) { return {space, CMatrix::Zero(space.dim(), space.dim())}; }

Operator Operator::identity(const FockSpace& space) {
    return {space, CMatrix::Identity(space.dim(), space.dim())};
}

// ------------------------------ StateVector --------------------------------

StateVector::StateVector(FockSpace space, CVector amplitudes) : space_(space), v_(std::move(amplitudes)) {
    if (v_.size() != space_.dim()) {
        throw std::domain_error("StateVector: length " + std::to_string(v_.size()) +
                                " does not match Fock dimension " + std::to_string(space_.dim()));
    }
}

StateVector StateVector::basis(const FockSpace& space, int n_a, int n_b) {
    CVector v = CVector::Zero(space.dim());
    v(basis_index(n_a, n_b, space)) = 1.0;
    return {space, std::move(v)};
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::domain_error("StateVector::normalized: zero or non-finite norm");
    }
    return {space_, v_ / n};
}

StateVector& StateVector::operator+=(const StateVector& rhs) {
    require_same_space(space_, rhs.space(), "StateVector::operator+=");
    v_ += rhs.amplitudes();
    return *this;
}

// ----------------------------- DensityMatrix -------------------------------

DensityMatrix DensityMatrix::zero(const FockSpace& space) {
    return {space, CMatrix::Zero(space.dim(), space.dim())};
}

DensityMatrix DensityMatrix::outer(const FockSpace& space, Occupation row, Occupation col) {
    DensityMatrix r = zero(space);
    r.m_(basis_index(row, space), basis_index(col, space)) = 1.0;
    return r;
}

DensityMatrix DensityMatrix::projector(const FockSpace& space, int n_a, int n_b) {
    return outer(space, {n_a, n_b}, {n_a, n_b});
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return {psi.space(), psi.amplitudes() * psi.amplitudes().adjoint()};
}

DensityMatrix DensityMatrix::adjoint() const { return {space_, m_.adjoint()}; }

double DensityMatrix::hermiticity_defect() const {
    return m_.size() == 0 ? 0.0 : (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const CMatrix herm = 0.5 * (m_ + m_.adjoint());
    return hermitian_eigenvalues(herm).minCoeff();
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::weight_above(int max_total) const {
    double worst = 0.0;
    for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < dim(); ++j) {
            if (occupation(i, space_).total() > max_total || occupation(j, space_).total() > max_total) {
                worst = std::max(worst, std::abs(m_(i, j)));
            }
        }
    }
    return worst;
}

bool DensityMatrix::is_physical(double tol) const {
    return std::abs(trace() - Complex(1.0, 0.0)) <= tol && hermiticity_defect() <= tol &&
           min_eigenvalue() >= -tol;
}

// ---------------------------- Ladder operators -----------------------------

Operator annihilation(Mode mode, const FockSpace& space) {
    CMatrix m = CMatrix::Zero(space.dim(), space.dim());
    const int n = space.n_max();
    for (int na = 0; na <= n; ++na) {
        for (int nb = 0; nb <= n; ++nb) {
            const int col = basis_index(na, nb, space);
            if (mode == Mode::a && na > 0) {
                m(basis_index(na - 1, nb, space), col) = std::sqrt(static_cast<double>(na));
            } else if (mode == Mode::b && nb > 0) {
                m(basis_index(na, nb - 1, space), col) = std::sqrt(static_cast<double>(nb));
            }
        }
    }
    return {space, std::move(m)};
}

Operator creation(Mode mode, const FockSpace& space) { return adjoint(annihilation(mode, space)); }

Operator number(Mode mode, const FockSpace& space) {
    CMatrix m = CMatrix::Zero(space.dim(), space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        const Occupation occ = occupation(i, space);
        m(i, i) = mode == Mode::a ? occ.n_a : occ.n_b;
    }
    return {space, std::move(m)};
}

// ------------------------------ Arithmetic ---------------------------------

Operator adjoint(const Operator& m) { return {m.space(), m.matrix().adjoint()}; }

Operator mul(const Operator& lhs, const Operator& rhs) {
    require_same_space(lhs.space(), rhs.space(), "mul");
    return {lhs.space(), lhs.matrix() * rhs.matrix()};
}

Operator commutator(const Operator& lhs, const Operator& rhs) {
    require_same_space(lhs.space(), rhs.space(), "commutator");
    return {lhs.space(), lhs.matrix() * rhs.matrix() - rhs.matrix() * lhs.matrix()};
}

StateVector apply(const Operator& m, const StateVector& psi) {
    require_same_space(m.space(), psi.space(), "apply");
    return {psi.space(), m.matrix() * psi.amplitudes()};
}

DensityMatrix sandwich(const Operator& lhs, const DensityMatrix& rho, const Operator& rhs) {
    require_same_space(lhs.space(), rho.space(), "sandwich");
    require_same_space(rhs.space(), rho.space(), "sandwich");
    return {rho.space(), lhs.matrix() * rho.matrix() * rhs.matrix()};
}

// --------------------------------- expm ------------------------------------

namespace {

// Pade(13) coefficients and theta_13 from Higham, "The scaling and squaring method
// for the matrix exponential revisited" (2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const CMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

CMatrix expm(const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::domain_error("expm: matrix must be square");
    }
    if (!m.allFinite()) {
        throw std::domain_error("expm: non-finite entries");
    }
    const Eigen::Index n = m.rows();
    if (n == 0) {
        return m;
    }

    const double norm = one_norm(m);
    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    }
    const CMatrix a = m / std::ldexp(1.0, squarings);

    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix a2 = a * a;
    const CMatrix a4 = a2 * a2;
    const CMatrix a6 = a4 * a2;
    const auto& b = kPade13;

    const CMatrix u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    const CMatrix u = a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const CMatrix v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    const CMatrix v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    CMatrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) {
        r = r * r;
    }
    return r;
}

Operator expm(const Operator& m) { return {m.space(), expm(m.matrix())}; }

RVector hermitian_eigenvalues(const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigenvalues: decomposition failed");
    }
    return solver.eigenvalues();
}

double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    require_same_space(rho1.space(), rho2.space(), "trace_distance");
    const CMatrix diff = rho1.matrix() - rho2.matrix();
    const CMatrix herm = 0.5 * (diff + diff.adjoint());
    return 0.5 * hermitian_eigenvalues(herm).cwiseAbs().sum();
}

namespace {

std::vector<int> indices_where(const FockSpace& space, auto&& keep) {
    std::vector<int> idx;
    for (int i = 0; i < space.dim(); ++i) {
        if (keep(occupation(i, space).total())) {
            idx.push_back(i);
        }
    }
    return idx;
}

CMatrix principal_submatrix(const CMatrix& m, const std::vector<int>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    CMatrix out(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) {
            out(r, c) = m(idx[r], idx[c]);
        }
    }
    return out;
}

}  // namespace

CMatrix restrict_to_sector(const CMatrix& m, const FockSpace& space, int max_total) {
    return principal_submatrix(m, indices_where(space, [&](int t) { return t <= max_total; }));
}

CMatrix sector_block(const CMatrix& m, const FockSpace& space, int total) {
    return principal_submatrix(m, indices_where(space, [&](int t) { return t == total; }));
}

}  // namespace twomode
