#pragma once

// Binary dataset files and JSON serialization of reports.
//
// Dataset layout (all little-endian):
//   bytes 0..7    magic "RMKDATA1"
//   bytes 8..15   n as uint64
//   bytes 16..23  d as uint64
//   then n*d IEEE-754 float64 values, row-major.
// Ground truth, when known, lives in a sidecar JSON file next to the data.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rmean/core.hpp"
#include "rmean/datagen.hpp"
#include "rmean/inner_max.hpp"

namespace rmean {

inline constexpr char kDatasetMagic[8] = {'R', 'M', 'K', 'D', 'A', 'T', 'A', '1'};

void write_dataset(const std::filesystem::path& path, const DataSet& data);
/// Throws InvalidArgument on a bad magic, truncated payload or trailing bytes.
DataSet read_dataset(const std::filesystem::path& path);

/// "<dataset path>.json".
std::filesystem::path ground_truth_path(const std::filesystem::path& dataset);
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth,
                        const nlohmann::json& extra = nlohmann::json::object());
GroundTruth read_ground_truth(const std::filesystem::path& path);

nlohmann::json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EstimatorConfig& config);
nlohmann::json to_json(const MarginCertificate& cert);

/// {estimate, initial_guess, chosen_iteration, terminated_early, config,
///  iterations: [{t, x_t, d_t, g_t, margin_theta, approx_bregman_failed, degenerate}],
///  timing: {phase: seconds}}
nlohmann::json report_to_json(const EstimateReport& report, const EstimatorConfig& config);

}  // namespace rmean
