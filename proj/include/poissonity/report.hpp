#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "poissonity/calibrate.hpp"
#include "poissonity/engine.hpp"

namespace poissonity {

using nlohmann::json;

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

json alternative_to_json(const AlternativeSpec& spec);
// Throws DomainError on unknown families or missing/mistyped fields.
AlternativeSpec alternative_from_json(const json& j);

json config_to_json(const ExperimentConfig& config);
// Fields absent from j keep the values already in `base`.
ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path);

json power_to_json(const std::vector<PowerEntry>& table);
std::vector<PowerEntry> power_from_json(const json& j);

json summary_to_json(const ExperimentResult& result);

// CSV with header "half,statistic,cumulative_fraction"; null curve first.
std::string edf_csv(const TestOutcome& outcome);

// Output file name of a test's EDF curve, e.g. "edf_chat.csv".
std::string edf_file_name(TestKind test);

// Writes edf_chat.csv, edf_gof_theta.csv, edf_gof_mle.csv, power.json and
// summary.json into dir (created if missing). Throws std::runtime_error on
// I/O failure.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

struct PmfRow {
  Count x;
  double poisson;
  double alternative;
};

// Rows x = 0..x_max covering both distributions until each upper tail is
// below tail_eps (and at least through k_max).
std::vector<PmfRow> pmf_compare(const ExperimentConfig& config, double tail_eps = 1e-12);
std::string pmf_csv(const std::vector<PmfRow>& rows);

json calibration_to_json(const CalibrationResult& result, double target, double tol);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace poissonity
