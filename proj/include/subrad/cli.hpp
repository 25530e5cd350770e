#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "subrad/params.hpp"

namespace subrad::cli {

using nlohmann::json;

struct RunResult {
    std::string scenario;
    json report;
    // Flat scalar metrics; one sweep row per run.
    json summary;
    // Output files, name -> content (report.json is added by the writer).
    std::vector<std::pair<std::string, std::string>> files;
    // Scatter only: (t, |c|^2) samples for sweep surfaces.
    std::vector<std::array<double, 2>> surface;
};

// Time value: a number in seconds or a string "<number> <unit>" with unit one
// of ps, ns, us, µs, ms, s or tau_R (needs `tau_R`).
double parse_time(const json& value, std::optional<double> tau_R, const std::string& field);
// Rate value: a number in s^-1 or "<number> g_a" (needs `g_a`).
double parse_rate(const json& value, std::optional<double> g_a, const std::string& field);

EnsembleInput parse_ensemble(const json& block);

// Scenario chosen by `override_scenario` or the "scenario" key.
std::string scenario_of(const json& config, const std::string& override_scenario = "");

// Runs one scenario. Relative file references resolve against `base_dir`.
RunResult run(const json& config, const std::filesystem::path& base_dir,
              const std::string& override_scenario = "");

// Dotted config path addressed by a sweep axis (aliases tau_ph, Omega_R,
// omega_r, density, bin_duration, separation). Throws ConfigError if unknown.
std::string resolve_axis(const json& config, const std::string& scenario, const std::string& axis);
json with_axis_value(const json& config, const std::string& path, const std::string& value);

// Runs the sweep in parallel; results are in input order.
std::vector<RunResult> sweep(const json& config, const std::filesystem::path& base_dir,
                             const std::string& override_scenario, const std::string& axis,
                             const std::vector<std::string>& values);

std::string sweep_table(const std::string& axis, const std::vector<std::string>& values,
                        const std::vector<RunResult>& runs);
std::string surface_table(const std::string& axis, const std::vector<std::string>& values,
                          const std::vector<RunResult>& runs);

// Serialized document with 12 significant digits and sorted keys.
std::string dump(json doc);

// Command-line entry point. Exit codes: 0 ok, 1 internal error, 2 config /
// domain error, 3 regime or resolution error, 4 I/O error.
int main(int argc, char** argv);

}  // namespace subrad::cli
