// cli.hpp — Experiment configuration, CSV-producing commands and the validation report

#pragma once

#include "twomode/superop.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twomode::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kUsageError = 2 };

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A loss rate given either absolutely ("0.3") or as a multiple of g ("0.75*g").
struct Rate {
    double number{0.0};
    bool times_g{false};

    double resolve(double g) const { return times_g ? number * g : number; }
    friend bool operator==(const Rate&, const Rate&) = default;
};

struct ExperimentConfig {
    double g{1.0};
    Rate gamma_a;
    Rate gamma_b;
    int n_max{6};
    std::optional<double> z_max;  // defaults to pi/g
    int z_points{401};
    std::uint64_t seed{42};
    std::size_t n_traj{20000};
    std::string output_path;  // empty writes to stdout

    double z_max_value() const;
    ModelParams params() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Keys exactly as the struct fields. Throws ConfigError naming the key on bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
// Flat "key = value" lines; '#' starts a comment.
ExperimentConfig parse_config(std::string_view text);
// Canonical form: every key in declaration order, defaults resolved, numbers with 17 digits.
std::string serialize_config(const ExperimentConfig& config);

std::vector<double> default_gamma_ratios();

void cmd_coincidence_scan(const ExperimentConfig& config, bool with_mc, std::ostream& out);
void cmd_sweep_gamma(const ExperimentConfig& config, const std::vector<double>& gamma_a_over_g, std::ostream& out);
void cmd_eigen_report(const ExperimentConfig& config, std::ostream& out);
// H_eff, R, H_diag and U(z_max) in the matrix dump format, each after a "# name" line.
void write_debug_dump(const ExperimentConfig& config, std::ostream& out);

struct ValidationRow {
    std::string name;
    double deviation;
    double tolerance;
    bool pass;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;

    bool passed() const;
    void add(std::string name, double deviation, double tolerance);
    std::string to_text() const;
    std::string to_json() const;
};

// tolerance_scale multiplies every tolerance; it exists so tests can force failures.
ValidationReport cmd_validate(const ExperimentConfig& config, double tolerance_scale = 1.0);

// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twomode::cli
