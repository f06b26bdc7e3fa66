#pragma once

#include <optional>
#include <string>
#include <vector>

#include "micz/quadrature.hpp"

namespace micz {

enum class RunMode { Simulate, Validate, Sweep, Green };

/// Parses "simulate" | "validate" | "sweep" | "green"; throws ConfigError.
RunMode parse_mode(const std::string& name);
const char* mode_name(RunMode m);

struct GreenTableParams {
    double r_min = 0.1;
    double r_max = 10.0;
    int count = 100;
};

struct SweepParams {
    std::string pointer;  ///< JSON pointer into the config, e.g. "/system/e"
    std::vector<double> values;
};

struct OutputPaths {
    std::string trajectory_csv = "trajectory.csv";
    std::string report_json = "report.json";
    std::string validation_json = "validation.json";
    std::string green_csv = "green.csv";
    std::string sweep_csv = "sweep.csv";
};

/// The parsed run specification; one config file drives every mode.
struct RunConfig {
    std::optional<RunMode> mode;
    SystemSpec spec;
    PhaseState initial;
    IntegratorControls controls;
    double t_end = 10.0;
    OutputPaths output;
    int stride = 1;
    double flag_threshold = 1e-6;
    GreenTableParams green;
    std::optional<SweepParams> sweep;
};

/// Parses a config from JSON text; throws ConfigError with a message naming
/// the offending field.
RunConfig parse_run_config_text(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Executes one mode end to end. Returns the process exit code:
/// 0 success, 2 config error (message on stderr), 3 numerical failure
/// (partial outputs flushed and flagged).
int run(RunMode mode, const std::string& config_path, const std::string& out_dir, int stride = 0,
        bool quiet = false);

/// Formats a double with 17 significant digits (lossless round trip).
std::string format_g17(double v);

void write_trajectory_csv(const std::string& path, const Trajectory& traj, const SystemSpec& spec,
                          int stride);
void write_report_json(const std::string& path, const ConservationReport& report,
                       const Trajectory& traj);
void write_validation_json(const std::string& path, const ValidationReport& report);
void write_green_csv(const std::string& path, const MetricProfile& profile,
                     const GreenTableParams& params);

}  // namespace micz
