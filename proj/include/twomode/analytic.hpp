// analytic.hpp — Closed-form two-photon coincidence rate <1,1|rho(z)|1,1> for input |1,1>

#pragma once

#include "twomode/fock.hpp"
#include "twomode/superop.hpp"

#include <vector>

namespace twomode {

// Below the EP: e^{-2 gamma z} [(4g^2 cos(omega z) - Delta^2)/omega^2]^2
// Above the EP: e^{-2 gamma z} [(Delta^2 - 4g^2 cosh(omega z))/omega^2]^2
// At the EP:    e^{-2 gamma z} (1 - 2 g^2 z^2)^2
double coincidence_closed_form(const ModelParams& params, double z);

// Real part of <1,1|rho|1,1>; throws std::domain_error if the imaginary part exceeds 1e-10.
double coincidence_from_density(const DensityMatrix& rho);

struct CoincidenceCurve {
    ModelParams params;
    std::vector<double> z_grid;
    std::vector<double> values;
};

CoincidenceCurve coincidence_curve(const ModelParams& params, std::vector<double> z_grid);

struct HomMinimum {
    double z;
    double value;
};

// Global minimum over [0, z_max]: 2001-point scan, then golden-section refinement to 1e-8/g.
HomMinimum hom_minimum(const ModelParams& params, double z_max);

}  // namespace twomode
