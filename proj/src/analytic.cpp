// analytic.cpp — Coincidence rate in both PT regimes and at the exceptional point

#include "twomode/analytic.hpp"

#include "twomode/effective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twomode {

namespace {

// The bracketed amplitude, rewritten with Delta^2 = 4g^2 -+ omega^2 as
//   below: 1 - 2 g^2 z^2 sinc^2(omega z / 2),   above: 1 - 2 g^2 z^2 sinhc^2(omega z / 2),
// which has no cancellation near the EP. For omega z < 1e-4 the EP series is used.
double bracket(const Regime& regime, double g, double z) {
    const double x = 0.5 * regime.omega * z;
    double shape = 1.0;
    if (regime.tag != RegimeTag::at_ep) {
        const double sign = regime.tag == RegimeTag::below_ep ? -1.0 : 1.0;
        if (regime.omega * z < 1e-4) {
            shape = 1.0 + sign * x * x / 6.0;
        } else {
            shape = regime.tag == RegimeTag::below_ep ? std::sin(x) / x : std::sinh(x) / x;
        }
    }
    return 1.0 - 2.0 * g * g * z * z * shape * shape;
}

}  // namespace

double coincidence_closed_form(const ModelParams& params, double z) {
    const double amp = bracket(classify(params), params.g(), z);
    return std::exp(-2.0 * params.gamma() * z) * amp * amp;
}

double coincidence_from_density(const DensityMatrix& rho) {
    const Complex c = rho.element({1, 1}, {1, 1});
    if (std::abs(c.imag()) > 1e-10) {
        throw std::domain_error("coincidence_from_density: imaginary part " + std::to_string(c.imag()) +
                                " exceeds 1e-10");
    }
    return c.real();
}

CoincidenceCurve coincidence_curve(const ModelParams& params, std::vector<double> z_grid) {
    std::vector<double> values;
    values.reserve(z_grid.size());
    for (double z : z_grid) {
        values.push_back(coincidence_closed_form(params, z));
    }
    return {params, std::move(z_grid), std::move(values)};
}

HomMinimum hom_minimum(const ModelParams& params, double z_max) {
    if (!(z_max > 0.0) || !std::isfinite(z_max)) {
        throw std::domain_error("hom_minimum: z_max must be positive");
    }
    constexpr int kScan = 2001;
    int best = 0;
    double best_value = coincidence_closed_form(params, 0.0);
    for (int i = 1; i < kScan; ++i) {
        const double v = coincidence_closed_form(params, z_max * i / (kScan - 1));
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double h = z_max / (kScan - 1);
    double lo = std::max(0.0, (best - 1) * h);
    double hi = std::min(z_max, (best + 1) * h);

    const double tol = 1e-8 / (params.g() > 0.0 ? params.g() : 1.0);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double z) { return coincidence_closed_form(params, z); };
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    HomMinimum result{0.5 * (lo + hi), f(0.5 * (lo + hi))};
    // The bracket endpoints can win when the minimum sits on the interval boundary.
    for (double z : {lo, hi, best * h}) {
        const double v = f(z);
        if (v < result.value) {
            result = {z, v};
        }
    }
    return result;
}

}  // namespace twomode
