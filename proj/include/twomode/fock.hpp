// fock.hpp — Truncated two-mode Fock space, ladder operators and the dense complex kernel

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace twomode {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class Mode { a, b };

// Photon numbers of one basis state |n_a, n_b>.
struct Occupation {
    int n_a{0};
    int n_b{0};

    int total() const noexcept { return n_a + n_b; }
    friend bool operator==(const Occupation&, const Occupation&) = default;
};

// Both modes are cut off at n_max photons; dim = (n_max+1)^2.
// Basis states are ordered row-major with mode a major: index = n_a*(n_max+1) + n_b.
class FockSpace {
public:
    explicit FockSpace(int n_max);

    int n_max() const noexcept { return n_max_; }
    int dim() const noexcept { return (n_max_ + 1) * (n_max_ + 1); }

    friend bool operator==(const FockSpace&, const FockSpace&) = default;

private:
    int n_max_;
};

// Throws std::domain_error when either occupation lies outside [0, n_max].
int basis_index(int n_a, int n_b, const FockSpace& space);
int basis_index(Occupation occ, const FockSpace& space);
Occupation occupation(int index, const FockSpace& space);

// Dense complex dim x dim matrix tied to a FockSpace. Shared by Operator and DensityMatrix.
template <typename Derived>
class SpaceMatrix {
public:
    SpaceMatrix(FockSpace space, CMatrix entries);

    const FockSpace& space() const noexcept { return space_; }
    const CMatrix& matrix() const noexcept { return m_; }
    int dim() const noexcept { return space_.dim(); }

    Complex operator()(int row, int col) const { return m_(row, col); }
    Complex element(Occupation row, Occupation col) const {
        return m_(basis_index(row, space_), basis_index(col, space_));
    }

    Complex trace() const { return m_.trace(); }
    double max_norm() const;

    Derived& operator+=(const Derived& rhs);
    Derived& operator-=(const Derived& rhs);
    Derived& operator*=(Complex s) {
        m_ *= s;
        return self();
    }

    friend Derived operator+(Derived lhs, const Derived& rhs) { return lhs += rhs; }
    friend Derived operator-(Derived lhs, const Derived& rhs) { return lhs -= rhs; }
    friend Derived operator*(Complex s, Derived m) { return m *= s; }
    friend Derived operator*(Derived m, Complex s) { return m *= s; }

protected:
    Derived& self() { return static_cast<Derived&>(*this); }

    FockSpace space_;
    CMatrix m_;
};

class Operator : public SpaceMatrix<Operator> {
public:
    using SpaceMatrix::SpaceMatrix;

    static Operator zero(const FockSpace& space);
    static Operator identity(const FockSpace& space);
};

class StateVector {
public:
    StateVector(FockSpace space, CVector amplitudes);

    static StateVector basis(const FockSpace& space, int n_a, int n_b);

    const FockSpace& space() const noexcept { return space_; }
    const CVector& amplitudes() const noexcept { return v_; }
    Complex amplitude(int n_a, int n_b) const { return v_(basis_index(n_a, n_b, space_)); }

    double norm() const { return v_.norm(); }
    StateVector normalized() const;

    StateVector& operator+=(const StateVector& rhs);
    StateVector& operator*=(Complex s) {
        v_ *= s;
        return *this;
    }
    friend StateVector operator+(StateVector lhs, const StateVector& rhs) { return lhs += rhs; }
    friend StateVector operator*(Complex s, StateVector v) { return v *= s; }

private:
    FockSpace space_;
    CVector v_;
};

// A density matrix rho or a transformed operand varrho. Physicality is diagnosed, never enforced.
class DensityMatrix : public SpaceMatrix<DensityMatrix> {
public:
    using SpaceMatrix::SpaceMatrix;

    static DensityMatrix zero(const FockSpace& space);
    // |row><col|
    static DensityMatrix outer(const FockSpace& space, Occupation row, Occupation col);
    static DensityMatrix projector(const FockSpace& space, int n_a, int n_b);
    static DensityMatrix pure(const StateVector& psi);

    DensityMatrix adjoint() const;

    // max |rho - rho^dagger|
    double hermiticity_defect() const;
    // Smallest eigenvalue of the Hermitian part (rho + rho^dagger)/2.
    double min_eigenvalue() const;
    double purity() const;
    // Largest |entry| coupling to a basis state with total photon number above max_total.
    double weight_above(int max_total) const;

    bool is_physical(double tol) const;
};

Operator annihilation(Mode mode, const FockSpace& space);
// Adjoint of annihilation; creation on the n_max row is truncated to zero.
Operator creation(Mode mode, const FockSpace& space);
Operator number(Mode mode, const FockSpace& space);

Operator adjoint(const Operator& m);
Operator mul(const Operator& lhs, const Operator& rhs);
Operator commutator(const Operator& lhs, const Operator& rhs);
StateVector apply(const Operator& m, const StateVector& psi);
// lhs * rho * rhs
DensityMatrix sandwich(const Operator& lhs, const DensityMatrix& rho, const Operator& rhs);

// Scaling-and-squaring with a degree-13 Pade core. Throws std::domain_error on non-finite input.
CMatrix expm(const CMatrix& m);
Operator expm(const Operator& m);

// Ascending eigenvalues of a Hermitian matrix (only the lower triangle is read).
RVector hermitian_eigenvalues(const CMatrix& h);

// Largest singular value.
double spectral_norm(const CMatrix& m);

// (1/2) * trace norm of rho1 - rho2, taken from the Hermitian part of the difference.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Principal submatrix on basis states with total photon number <= max_total.
CMatrix restrict_to_sector(const CMatrix& m, const FockSpace& space, int max_total);
// Principal submatrix on basis states with total photon number exactly total.
CMatrix sector_block(const CMatrix& m, const FockSpace& space, int total);

void require_same_space(const FockSpace& lhs, const FockSpace& rhs, const char* what);

}  // namespace twomode
