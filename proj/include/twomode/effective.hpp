// effective.hpp — Effective non-Hermitian Hamiltonian, Schwinger bosons and its diagonalization
//
// H_eff = -i gamma_a a^dag a - i gamma_b b^dag b + g (a b^dag + a^dag b).
// The similarity R = exp(eta J_y) with tanh(eta) = 2g/Delta brings H_eff to a form that is
// diagonal in the Fock basis, except at the exceptional point |Delta| = 2g where it is singular.

#pragma once

#include "twomode/fock.hpp"
#include "twomode/superop.hpp"

#include <stdexcept>

namespace twomode {

enum class RegimeTag { below_ep, at_ep, above_ep };

// omega is omega_I = sqrt(4g^2 - Delta^2) below the EP, omega_II = sqrt(Delta^2 - 4g^2) above, 0 at it.
struct Regime {
    RegimeTag tag;
    double omega;
};

// ||Delta| - 2g| <= kEpRelativeBand * g classifies as AtEP.
inline constexpr double kEpRelativeBand = 1e-9;

Regime classify(const ModelParams& params);
const char* to_string(RegimeTag tag);

class ExceptionalPointError : public std::domain_error {
public:
    ExceptionalPointError() : std::domain_error("exceptional point: diagonalization singular") {}
};

Operator h_eff(const ModelParams& params, const FockSpace& space);
// The same Hamiltonian assembled as -i[gamma/2 N + Delta/2 (b^dag b - a^dag a)] + g(a b^dag + a^dag b).
Operator h_eff_split(const ModelParams& params, const FockSpace& space);

struct SchwingerOps {
    Operator n;
    Operator jx;
    Operator jy;
    Operator jz;
};

SchwingerOps schwinger_ops(const FockSpace& space);

struct EtaParameter {
    Complex value;
};

// Branch that makes R^-1 H_eff R equal h_diag():
//   |Delta| > 2g, Delta > 0:  artanh(2g/Delta)
//   |Delta| > 2g, Delta < 0:  artanh(2g/Delta) + i pi
//   |Delta| < 2g:             artanh(Delta/2g) - i pi/2
// Throws ExceptionalPointError at the EP.
EtaParameter eta(const ModelParams& params);

// exp(eta J_y) and its inverse exp(-eta J_y).
Operator r_transform(EtaParameter eta, const FockSpace& space);
Operator r_inverse(EtaParameter eta, const FockSpace& space);

// Diagonal operator with entries lambda_jk. Throws ExceptionalPointError at the EP.
Operator h_diag(const ModelParams& params, const FockSpace& space);

// Analytic eigenvalue for |j,k> of the diagonal form; at the EP the coalesced value -i gamma (j+k)/2.
Complex eigenvalue(int j, int k, const ModelParams& params);

// R|j,k>, a right eigenvector of H_eff with eigenvalue lambda_jk.
StateVector right_eigenvector(int j, int k, const ModelParams& params, const FockSpace& space);
// Coefficients of the bra <j,k|R^-1 (row vector, not conjugated): left^T H_eff = lambda_jk left^T.
StateVector left_eigenvector(int j, int k, const ModelParams& params, const FockSpace& space);

// sum_i left_i right_i, the pairing <eta_L|eta_R>.
Complex biorthogonal_pairing(const StateVector& left, const StateVector& right);

// Smallest p with ||(B - lambda I)^p|| <= tol * ||B||^p for the sector block B of H_eff with the
// given total photon number, or 0 if no p <= sector size satisfies it.
int nilpotency_index(const ModelParams& params, const FockSpace& space, int total, Complex lambda,
                     double tol = 1e-9);

}  // namespace twomode
