#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "osctrig/error_lab.hpp"

namespace osctrig::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// JSON run configuration: problem + experiment + output sections.
/// Unknown keys are rejected so typos surface instead of being ignored.
struct RunConfig {
    OscillatorProblem problem;
    std::vector<QuadratureRule> methods;
    std::vector<double> step_sizes;
    std::size_t n_fine = 1 << 14;
    std::size_t samples = 500;
    std::uint64_t seed = 0;
    std::string output_path = "report.csv";
    std::string output_format = "csv";
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& cfg);
ExperimentConfig to_experiment_config(const RunConfig& cfg);

struct IntegrateOverrides {
    std::optional<std::string> method;
    std::optional<double> h;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> sample;
    std::optional<std::string> output;
};

/// Writes a (t, x, v) trajectory CSV. Returns the process exit code.
int cmd_integrate(const std::string& config_path, const IntegrateOverrides& overrides);

/// Runs the Monte Carlo strong-error experiment and writes the report CSV.
int cmd_strong_error(const std::string& config_path, std::optional<std::size_t> samples_override,
                     std::optional<std::string> output_override);

/// Prints per-rule quadrature errors against an oracle for a built-in family.
int cmd_quadrature_check(double k, int nodes, const std::string& family);

// CSV bodies, exposed for in-process tests
std::string trajectory_csv(const std::vector<State>& trajectory);
std::string report_csv(const StrongErrorReport& report);
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace osctrig::cli
