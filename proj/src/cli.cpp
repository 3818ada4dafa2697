// cli.cpp — Configuration parsing, experiment commands and the validation report

#include "twomode/cli.hpp"

#include "twomode/analytic.hpp"
#include "twomode/effective.hpp"
#include "twomode/matrix_io.hpp"
#include "twomode/oracle.hpp"
#include "twomode/propagator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace twomode::cli {

// ------------------------------- Config ------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError("config error: key '" + std::string(key) + "' must be " + std::string(expected) + ", got '" +
                      std::string(value) + "'");
}

bool parse_double(std::string_view text, double& out) {
    const std::string s(text);
    if (s.empty()) {
        return false;
    }
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_integer(std::string_view text, long long& out) {
    const std::string s(text);
    if (s.empty()) {
        return false;
    }
    char* end = nullptr;
    errno = 0;
    out = std::strtoll(s.c_str(), &end, 10);
    return errno == 0 && end == s.c_str() + s.size();
}

Rate parse_rate(std::string_view key, std::string_view value) {
    Rate rate;
    std::string_view number = value;
    if (number.size() >= 2 && number.substr(number.size() - 2) == "*g") {
        rate.times_g = true;
        number = trim(number.substr(0, number.size() - 2));
    }
    if (!parse_double(number, rate.number) || rate.number < 0.0) {
        bad_value(key, value, "a non-negative rate (absolute or '<x>*g')");
    }
    return rate;
}

std::string format_rate(const Rate& r) { return format_real(r.number) + (r.times_g ? "*g" : ""); }

}  // namespace

double ExperimentConfig::z_max_value() const { return z_max ? *z_max : std::numbers::pi / g; }

ModelParams ExperimentConfig::params() const { return {g, gamma_a.resolve(g), gamma_b.resolve(g)}; }

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    double d = 0.0;
    long long i = 0;
    if (key == "g") {
        if (!parse_double(value, d) || !(d > 0.0)) {
            bad_value(key, value, "a real number > 0");
        }
        config.g = d;
    } else if (key == "gamma_a") {
        config.gamma_a = parse_rate(key, value);
    } else if (key == "gamma_b") {
        config.gamma_b = parse_rate(key, value);
    } else if (key == "n_max") {
        if (!parse_integer(value, i) || i < 2 || i > 40) {
            bad_value(key, value, "an integer in [2, 40]");
        }
        config.n_max = static_cast<int>(i);
    } else if (key == "z_max") {
        if (!parse_double(value, d) || !(d > 0.0)) {
            bad_value(key, value, "a real number > 0");
        }
        config.z_max = d;
    } else if (key == "z_points") {
        if (!parse_integer(value, i) || i < 2 || i > 10'000'000) {
            bad_value(key, value, "an integer >= 2");
        }
        config.z_points = static_cast<int>(i);
    } else if (key == "seed") {
        const std::string s(value);
        char* end = nullptr;
        errno = 0;
        const unsigned long long u = std::strtoull(s.c_str(), &end, 10);
        if (s.empty() || s.front() == '-' || errno != 0 || end != s.c_str() + s.size()) {
            bad_value(key, value, "an unsigned 64-bit integer");
        }
        config.seed = u;
    } else if (key == "n_traj") {
        if (!parse_integer(value, i) || i < 2) {
            bad_value(key, value, "an integer >= 2");
        }
        config.n_traj = static_cast<std::size_t>(i);
    } else if (key == "output_path") {
        config.output_path = std::string(value);
    } else {
        throw ConfigError("config error: unknown key '" + std::string(key) + "'");
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config error: line " + std::to_string(line_no) + " is not 'key = value'");
        }
        apply_setting(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    }
    return config;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "g = " << format_real(c.g) << '\n'
        << "gamma_a = " << format_rate(c.gamma_a) << '\n'
        << "gamma_b = " << format_rate(c.gamma_b) << '\n'
        << "n_max = " << c.n_max << '\n'
        << "z_max = " << format_real(c.z_max_value()) << '\n'
        << "z_points = " << c.z_points << '\n'
        << "seed = " << c.seed << '\n'
        << "n_traj = " << c.n_traj << '\n';
    if (!c.output_path.empty()) {
        out << "output_path = " << c.output_path << '\n';
    }
    return out.str();
}

std::vector<double> default_gamma_ratios() {
    std::vector<double> r;
    for (int i = 0; i <= 50; ++i) {
        r.push_back(i / 20.0);
    }
    return r;
}

// ------------------------------ Commands -----------------------------------

namespace {

DensityMatrix two_photon_input(const FockSpace& space) { return DensityMatrix::projector(space, 1, 1); }

}  // namespace

void cmd_coincidence_scan(const ExperimentConfig& config, bool with_mc, std::ostream& out) {
    const ModelParams params = config.params();
    const FockSpace space(config.n_max);
    const auto plan = PropagationPlan::make(params, space, linspace_grid(config.z_max_value(), config.z_points));
    const DensityMatrix rho0 = two_photon_input(space);

    const std::vector<DensityMatrix> exact = evolve_exact(rho0, plan);
    const std::vector<DensityMatrix> rk4 =
        integrate_lindblad(rho0, params, plan.z_grid, IntegratorConfig::for_params(params));
    std::vector<TrajectoryStats> mc;
    if (with_mc) {
        TrajectoryConfig tc;
        tc.n_traj = config.n_traj;
        tc.seed = config.seed;
        mc = mc_trajectories(StateVector::basis(space, 1, 1), params, plan.z_grid, Operator(rho0.space(), rho0.matrix()),
                             tc);
    }

    out << "z,coincidence_closed_form,coincidence_exact_matrix,coincidence_rk4";
    if (with_mc) {
        out << ",coincidence_mc,mc_std_error";
    }
    out << '\n';
    for (std::size_t i = 0; i < plan.z_grid.size(); ++i) {
        const double z = plan.z_grid[i];
        out << format_real(z) << ',' << format_real(coincidence_closed_form(params, z)) << ','
            << format_real(coincidence_from_density(exact[i])) << ',' << format_real(coincidence_from_density(rk4[i]));
        if (with_mc) {
            out << ',' << format_real(mc[i].mean) << ',' << format_real(mc[i].std_error);
        }
        out << '\n';
    }
}

void cmd_sweep_gamma(const ExperimentConfig& config, const std::vector<double>& gamma_a_over_g, std::ostream& out) {
    const std::vector<double> z_grid = linspace_grid(config.z_max_value(), config.z_points);
    const double gamma_b = config.gamma_b.resolve(config.g);
    out << "gamma_a_over_g,z,coincidence\n";
    for (double ratio : gamma_a_over_g) {
        if (!(ratio >= 0.0)) {
            throw ConfigError("config error: gamma_a/g values must be non-negative");
        }
        const ModelParams params(config.g, ratio * config.g, gamma_b);
        for (double z : z_grid) {
            out << format_real(ratio) << ',' << format_real(z) << ',' << format_real(coincidence_closed_form(params, z))
                << '\n';
        }
    }
}

void cmd_eigen_report(const ExperimentConfig& config, std::ostream& out) {
    const ModelParams params = config.params();
    const FockSpace space(config.n_max);
    const bool at_ep = classify(params).tag == RegimeTag::at_ep;
    out << "j,k,re_lambda,im_lambda," << (at_ep ? "jordan_block_order" : "residual_norm") << '\n';

    const Operator h = h_eff(params, space);
    std::optional<Operator> r;
    if (!at_ep) {
        r = r_transform(eta(params), space);
    }
    for (int total = 0; total <= space.n_max(); ++total) {
        for (int j = 0; j <= total; ++j) {
            const int k = total - j;
            const Complex lambda = eigenvalue(j, k, params);
            out << j << ',' << k << ',' << format_real(lambda.real()) << ',' << format_real(lambda.imag()) << ',';
            if (at_ep) {
                out << nilpotency_index(params, space, total, lambda);
            } else {
                const CVector v = r->matrix().col(basis_index(j, k, space));
                out << format_real((h.matrix() * v - lambda * v).norm());
            }
            out << '\n';
        }
    }
}

void write_debug_dump(const ExperimentConfig& config, std::ostream& out) {
    const ModelParams params = config.params();
    const FockSpace space(config.n_max);
    out << "# H_eff\n";
    write_matrix_dump(out, h_eff(params, space).matrix());
    if (classify(params).tag != RegimeTag::at_ep) {
        out << "# R\n";
        write_matrix_dump(out, r_transform(eta(params), space).matrix());
        out << "# H_diag\n";
        write_matrix_dump(out, h_diag(params, space).matrix());
    }
    out << "# U(z_max)\n";
    write_matrix_dump(out, u_z(params, space, config.z_max_value()).matrix());
}

// ----------------------------- Validation ----------------------------------

bool ValidationReport::passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass; });
}

void ValidationReport::add(std::string name, double deviation, double tolerance) {
    rows.push_back({std::move(name), deviation, tolerance, deviation <= tolerance});
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto& r : rows) {
        out << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  deviation=" << format_real(r.deviation)
            << "  tolerance=" << format_real(r.tolerance) << '\n';
    }
    out << "overall: " << (passed() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

std::string ValidationReport::to_json() const {
    nlohmann::json j;
    j["overall"] = passed() ? "pass" : "fail";
    j["checks"] = nlohmann::json::array();
    for (const auto& r : rows) {
        j["checks"].push_back({{"name", r.name}, {"deviation", r.deviation}, {"tolerance", r.tolerance}, {"pass", r.pass}});
    }
    return j.dump(2) + "\n";
}

namespace {

// Random positive unit-trace matrix supported on total photon number <= max_total.
DensityMatrix random_density(const FockSpace& space, int max_total, std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    CMatrix x = CMatrix::Zero(space.dim(), space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        if (occupation(i, space).total() > max_total) {
            continue;
        }
        for (int c = 0; c < space.dim(); ++c) {
            x(i, c) = Complex(normal(gen), normal(gen));
        }
    }
    CMatrix rho = x * x.adjoint();
    rho /= rho.trace();
    return {space, rho};
}

double sub_cutoff_defect(const CMatrix& m, const FockSpace& space) {
    const CMatrix r = restrict_to_sector(m, space, space.n_max() - 1);
    return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

// exp(dz L) rho by its Taylor series in the Lindblad generator.
CMatrix lindblad_flow_series(const ModelParams& params, const DensityMatrix& rho, double dz) {
    CMatrix sum = rho.matrix();
    DensityMatrix term = rho;
    for (int k = 1; k <= 30; ++k) {
        term = Complex(dz / k) * lindblad_rhs(params, term);
        sum += term.matrix();
        if (term.max_norm() < 1e-18) {
            break;
        }
    }
    return sum;
}

double jump_removal_ratio(const ModelParams& params, const DensityMatrix& rho) {
    const Operator h = h_eff(params, rho.space());
    const DensityMatrix transformed = exp_jump(JumpSign::plus, rho);
    auto error = [&](double dz) {
        const DensityMatrix step = transformed + Complex(dz) * von_neumann_rhs(h, transformed);
        return (lindblad_flow_series(params, rho, dz) - exp_jump(JumpSign::minus, step).matrix()).cwiseAbs().maxCoeff();
    };
    const double scale = std::max({params.g(), params.gamma_a(), params.gamma_b()});
    const double dz = 0.02 / scale;
    return error(dz) / error(dz / 2.0);
}

}  // namespace

ValidationReport cmd_validate(const ExperimentConfig& config, double tolerance_scale) {
    ValidationReport report;
    auto check = [&](std::string name, double deviation, double tolerance) {
        report.add(std::move(name), deviation, tolerance * tolerance_scale);
    };
    const ModelParams params = config.params();
    const FockSpace space(config.n_max);
    const int n = space.n_max();
    std::mt19937_64 gen(config.seed);

    // Superoperator algebra.
    double jump_s = 0.0;
    double jump_l = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const DensityMatrix rho = random_density(space, n, gen);
        auto jsum = [](const DensityMatrix& r) { return jump_super(Mode::a, r) + jump_super(Mode::b, r); };
        const DensityMatrix comm = jsum(interaction_super(rho)) - interaction_super(jsum(rho));
        jump_s = std::max(jump_s, comm.max_norm());
        for (Mode c : {Mode::a, Mode::b}) {
            const DensityMatrix lhs = jump_super(c, anticomm_super(c, rho)) - anticomm_super(c, jump_super(c, rho));
            jump_l = std::max(jump_l, (lhs - Complex(2.0) * jump_super(c, rho)).max_norm());
        }
    }
    check("superop [(J_a+J_b),S] = 0", jump_s, 1e-10);
    check("superop [J_c,L_c] = 2 J_c", jump_l, 1e-10);

    // Schwinger su(2) algebra on the sub-cutoff subspace.
    const SchwingerOps s = schwinger_ops(space);
    const Complex i1(0.0, 1.0);
    double su2 = 0.0;
    su2 = std::max(su2, sub_cutoff_defect((commutator(s.jx, s.jy) - i1 * s.jz).matrix(), space));
    su2 = std::max(su2, sub_cutoff_defect((commutator(s.jy, s.jz) - i1 * s.jx).matrix(), space));
    su2 = std::max(su2, sub_cutoff_defect((commutator(s.jz, s.jx) - i1 * s.jy).matrix(), space));
    for (const Operator* j : {&s.jx, &s.jy, &s.jz}) {
        su2 = std::max(su2, sub_cutoff_defect(commutator(s.n, *j).matrix(), space));
    }
    check("schwinger su(2) and [N,J] relations", su2, 1e-10);

    const Operator h = h_eff(params, space);
    const double h_norm = spectral_norm(restrict_to_sector(h.matrix(), space, n - 1));
    check("H_eff construction equivalence", (h - h_eff_split(params, space)).max_norm(), 1e-14);

    const Regime regime = classify(params);
    if (regime.tag != RegimeTag::at_ep) {
        const EtaParameter e = eta(params);
        const Operator r = r_transform(e, space);
        const Operator r_inv = r_inverse(e, space);
        const Complex ch = std::cosh(e.value);
        const Complex sh = std::sinh(e.value);
        const double ident = std::max(
            sub_cutoff_defect((mul(mul(r_inv, s.jz), r) - (ch * s.jz - i1 * sh * s.jx)).matrix(), space),
            sub_cutoff_defect((mul(mul(r_inv, s.jx), r) - (ch * s.jx + i1 * sh * s.jz)).matrix(), space));
        const double scale = std::max(1.0, std::abs(ch) + std::abs(sh));
        check("R similarity identities", ident / scale, 1e-10);
        check("R^-1 H_eff R = H_diag", sub_cutoff_defect((mul(mul(r_inv, h), r) - h_diag(params, space)).matrix(), space),
              1e-9 * h_norm);

        double residual = 0.0;
        for (int total = 0; total <= std::min(4, n); ++total) {
            for (int j = 0; j <= total; ++j) {
                const StateVector v = right_eigenvector(j, total - j, params, space);
                const Complex lambda = eigenvalue(j, total - j, params);
                residual = std::max(residual, (h.matrix() * v.amplitudes() - lambda * v.amplitudes()).norm());
            }
        }
        check("spectral residuals j+k <= 4", residual, 1e-9 * h_norm);

        double biorth = 0.0;
        for (int t1 = 0; t1 <= std::min(2, n); ++t1) {
            for (int j = 0; j <= t1; ++j) {
                const StateVector left = left_eigenvector(j, t1 - j, params, space);
                for (int t2 = 0; t2 <= std::min(2, n); ++t2) {
                    for (int l = 0; l <= t2; ++l) {
                        const StateVector right = right_eigenvector(l, t2 - l, params, space);
                        const double expected = (j == l && t1 == t2) ? 1.0 : 0.0;
                        biorth = std::max(biorth, std::abs(biorthogonal_pairing(left, right) - expected));
                    }
                }
            }
        }
        check("bi-orthogonality", biorth, 1e-10);
    } else {
        const Complex lambda = eigenvalue(1, 0, params);
        const CMatrix block = sector_block(h.matrix(), space, 1) - lambda * CMatrix::Identity(2, 2);
        const double scale = std::max(sector_block(h.matrix(), space, 1).squaredNorm(), 1e-300);
        check("EP one-photon Jordan block nilpotency", (block * block).norm() / scale, 1e-12);
    }

    // Jump-removal identity: transformed Euler step has O(dz^2) error against the Lindblad flow.
    {
        const DensityMatrix rho = random_density(space, std::min(n, 3), gen);
        check("jump-removal identity |ratio - 4|", std::abs(jump_removal_ratio(params, rho) - 4.0), 0.5);
    }

    // Exact pipeline against closed form, RK4 oracle and physicality.
    const DensityMatrix rho0 = two_photon_input(space);
    const auto plan = PropagationPlan::make(params, space, linspace_grid(config.z_max_value(), 101));
    const auto exact = evolve_exact(rho0, plan);
    const auto rk4 = integrate_lindblad(rho0, params, plan.z_grid, IntegratorConfig::for_params(params));
    double closed_dev = 0.0;
    double oracle_dev = 0.0;
    double trace_dev = 0.0;
    double herm_dev = 0.0;
    double neg_dev = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        closed_dev = std::max(closed_dev,
                              std::abs(coincidence_closed_form(params, plan.z_grid[i]) - coincidence_from_density(exact[i])));
        oracle_dev = std::max(oracle_dev, trace_distance(exact[i], rk4[i]));
        trace_dev = std::max(trace_dev, std::abs(exact[i].trace() - Complex(1.0)));
        herm_dev = std::max(herm_dev, exact[i].hermiticity_defect());
        neg_dev = std::max(neg_dev, -exact[i].min_eigenvalue());
    }
    check("closed form vs exact pipeline", closed_dev, 1e-9);
    check("exact vs RK4 trace distance", oracle_dev, 1e-6);
    check("physicality |trace - 1|", trace_dev, 1e-9);
    check("physicality hermiticity defect", herm_dev, 1e-10);
    check("physicality -min eigenvalue", neg_dev, 1e-8);

    // EP continuity: |Delta| = 2g(1 +- 1e-6) against the direct-exponential fallback.
    {
        double ep_dev = 0.0;
        const double g = params.g();
        const ModelParams at(g, 2.0 * g, 0.0);
        for (double offset : {-1e-6, 1e-6}) {
            const ModelParams near(g, 2.0 * g * (1.0 + offset), 0.0);
            for (double z : {0.5 / g, 1.0 / g, 2.0 / g, 3.0 / g}) {
                ep_dev = std::max(ep_dev, std::abs(coincidence_from_density(evolve_exact(rho0, near, z)) -
                                                   coincidence_from_density(evolve_exact(rho0, at, z))));
            }
        }
        check("EP continuity of coincidence", ep_dev, 1e-4);
    }

    // Quantum trajectories: within 5 standard errors (plus integrator slack) of the exact value.
    {
        TrajectoryConfig tc;
        tc.n_traj = config.n_traj;
        tc.seed = config.seed;
        std::vector<double> zs;
        for (int i = 1; i <= 5; ++i) {
            zs.push_back(config.z_max_value() * i / 5.0);
        }
        const auto stats =
            mc_trajectories(StateVector::basis(space, 1, 1), params, zs, Operator(space, rho0.matrix()), tc);
        double worst = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const double exact_value = coincidence_closed_form(params, zs[i]);
            worst = std::max(worst, std::abs(stats[i].mean - exact_value) / (5.0 * stats[i].std_error + 1e-6));
        }
        check("trajectory mean within 5 standard errors", worst, 1.0);
    }
    return report;
}

// ----------------------------- Entry point ---------------------------------

namespace {

struct CommonOptions {
    std::string config_path;
    std::string output;
    std::map<std::string, std::string> overrides;
    bool with_mc{false};
    std::string dump_path;
};

void add_common(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--config", opts.config_path, "Config file with 'key = value' lines");
    cmd.add_option("--output", opts.output, "Output file (default: stdout)");
    const std::array<std::pair<const char*, const char*>, 8> flags = {{{"--g", "g"},
                                                                       {"--gamma-a", "gamma_a"},
                                                                       {"--gamma-b", "gamma_b"},
                                                                       {"--n-max", "n_max"},
                                                                       {"--z-max", "z_max"},
                                                                       {"--z-points", "z_points"},
                                                                       {"--seed", "seed"},
                                                                       {"--n-traj", "n_traj"}}};
    for (const auto& [flag, key] : flags) {
        cmd.add_option_function<std::string>(
            flag, [&opts, key = std::string(key)](const std::string& v) { opts.overrides[key] = v; },
            "Override config key " + std::string(key));
    }
    cmd.add_option("--dump", opts.dump_path, "Write debug matrix dumps to this file");
}

ExperimentConfig resolve_config(const CommonOptions& opts) {
    ExperimentConfig config;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) {
            throw ConfigError("config error: cannot read config file '" + opts.config_path + "'");
        }
        std::stringstream buf;
        buf << in.rdbuf();
        config = parse_config(buf.str());
    }
    // Rates given as '*g' multiples resolve against the final g, so order does not matter.
    for (const auto& [key, value] : opts.overrides) {
        apply_setting(config, key, value);
    }
    if (!opts.output.empty()) {
        config.output_path = opts.output;
    }
    return config;
}

class OutputSink {
public:
    OutputSink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw ConfigError("cannot open output path '" + path + "' for writing");
            }
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

std::vector<double> parse_ratio_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v = 0.0;
        if (!parse_double(trim(tok), v) || v < 0.0) {
            throw ConfigError("config error: --gamma-a-values entry '" + tok + "' is not a non-negative number");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw ConfigError("config error: --gamma-a-values is empty");
    }
    return values;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-mode lossy coupler simulator: exact Lindblad evolution and Hong-Ou-Mandel coincidences"};
    app.require_subcommand(1);

    CommonOptions scan_opts;
    CommonOptions sweep_opts;
    CommonOptions validate_opts;
    CommonOptions eigen_opts;
    std::string ratio_text;
    double tolerance_scale = 1.0;

    auto* scan = app.add_subcommand("coincidence-scan", "Coincidence rate vs z by four methods (CSV)");
    add_common(*scan, scan_opts);
    scan->add_flag("--with-mc", scan_opts.with_mc, "Add Monte-Carlo trajectory columns");
    auto* sweep = app.add_subcommand("sweep-gamma", "Closed-form coincidence over a gamma_a/g x z grid (CSV)");
    add_common(*sweep, sweep_opts);
    sweep->add_option("--gamma-a-values", ratio_text, "Comma-separated gamma_a/g values (default 0:2.5:0.05)");
    auto* validate = app.add_subcommand("validate", "Run the invariant suites and report");
    add_common(*validate, validate_opts);
    validate->add_option("--tolerance-scale", tolerance_scale, "Multiply every tolerance (test hook)");
    auto* eigen = app.add_subcommand("eigen-report", "Analytic eigenvalues and residuals per sector (CSV)");
    add_common(*eigen, eigen_opts);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsageError;
    }

    try {
        if (scan->parsed()) {
            const ExperimentConfig config = resolve_config(scan_opts);
            OutputSink sink(config.output_path, out);
            cmd_coincidence_scan(config, scan_opts.with_mc, sink.stream());
            if (!scan_opts.dump_path.empty()) {
                OutputSink dump(scan_opts.dump_path, out);
                write_debug_dump(config, dump.stream());
            }
        } else if (sweep->parsed()) {
            const ExperimentConfig config = resolve_config(sweep_opts);
            const std::vector<double> ratios = ratio_text.empty() ? default_gamma_ratios() : parse_ratio_list(ratio_text);
            OutputSink sink(config.output_path, out);
            cmd_sweep_gamma(config, ratios, sink.stream());
        } else if (eigen->parsed()) {
            const ExperimentConfig config = resolve_config(eigen_opts);
            OutputSink sink(config.output_path, out);
            cmd_eigen_report(config, sink.stream());
            if (!eigen_opts.dump_path.empty()) {
                OutputSink dump(eigen_opts.dump_path, out);
                write_debug_dump(config, dump.stream());
            }
        } else if (validate->parsed()) {
            const ExperimentConfig config = resolve_config(validate_opts);
            const ValidationReport report = cmd_validate(config, tolerance_scale);
            out << report.to_text();
            if (!config.output_path.empty()) {
                OutputSink sink(config.output_path, out);
                sink.stream() << report.to_json();
            }
            return report.passed() ? kSuccess : kValidationFailure;
        }
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kUsageError;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    }
    return kSuccess;
}

}  // namespace twomode::cli
