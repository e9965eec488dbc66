#include "rmean/dataset_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace rmean {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(bytes.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  if (!in) throw InvalidArgument("dataset: truncated header or payload");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

void write_dataset(const std::filesystem::path& path, const DataSet& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("dataset: cannot open " + path.string() + " for writing");
  out.write(kDatasetMagic, 8);
  put_u64(out, data.n());
  put_u64(out, data.d());
  const Matrix& x = data.samples();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(x(i, j)));
  }
  if (!out) throw InvalidArgument("dataset: write failed for " + path.string());
}

DataSet read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("dataset: cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kDatasetMagic, 8) != 0) throw InvalidArgument("dataset: bad magic");
  const std::uint64_t n = get_u64(in);
  const std::uint64_t d = get_u64(in);
  if (n == 0 || d == 0) throw InvalidArgument("dataset: empty shape");
  const auto size = std::filesystem::file_size(path);
  if (d > (size / 8) || n > (size / 8) / d || 24 + 8 * n * d != size) {
    throw InvalidArgument("dataset: payload size does not match header");
  }
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = std::bit_cast<double>(get_u64(in));
  }
  return DataSet(std::move(x));
}

std::filesystem::path ground_truth_path(const std::filesystem::path& dataset) {
  return std::filesystem::path(dataset.string() + ".json");
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth, const nlohmann::json& extra) {
  nlohmann::json j = extra;
  j["mean"] = to_json(truth.mean);
  j["sigma_trace"] = truth.sigma_trace;
  j["sigma_opnorm"] = truth.sigma_opnorm;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    return GroundTruth{vector_from_json(j.at("mean")), j.at("sigma_trace").get<double>(),
                       j.at("sigma_opnorm").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("ground truth: ") + e.what());
  }
}

nlohmann::json to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidArgument("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

nlohmann::json to_json(const EstimatorConfig& config) {
  nlohmann::json j;
  j["delta"] = config.delta;
  j["k_override"] = config.k_override ? nlohmann::json(*config.k_override) : nlohmann::json(nullptr);
  j["bucket_constant"] = config.bucket_constant;
  j["eta"] = config.eta;
  j["prune_fraction"] = config.prune_fraction;
  j["smooth_cap_numerator"] = config.smooth_cap_numerator;
  j["mwu_progress_factor"] = config.mwu_progress_factor;
  j["descent_iter_constant"] = config.descent_iter_constant;
  j["inner_iter_constant"] = config.inner_iter_constant;
  j["round_trial_constant"] = config.round_trial_constant;
  j["power_iter_constant"] = config.power_iter_constant;
  j["margin_search_steps"] = config.margin_search_steps;
  j["margin_refine_probes"] = config.margin_refine_probes;
  j["inner_iter_max"] = config.inner_iter_max;
  j["round_accept_fraction"] = config.round_accept_fraction;
  j["grad_sign_fraction"] = config.grad_sign_fraction;
  j["certificate_fraction"] = config.certificate_fraction;
  j["rng_seed"] = config.rng_seed;
  return j;
}

nlohmann::json to_json(const MarginCertificate& cert) {
  return {{"direction", to_json(cert.direction)},
          {"margin_theta", cert.margin_theta},
          {"satisfied_count", cert.satisfied_count},
          {"total", cert.total}};
}

nlohmann::json report_to_json(const EstimateReport& report, const EstimatorConfig& config) {
  nlohmann::json j;
  j["estimate"] = to_json(report.estimate);
  j["initial_guess"] = to_json(report.initial_guess);
  j["chosen_iteration"] = report.chosen_iteration;
  j["terminated_early"] = report.terminated_early;
  j["config"] = to_json(config);
  nlohmann::json iterations = nlohmann::json::array();
  for (const IterationRecord& rec : report.iterations) {
    iterations.push_back({{"t", rec.t},
                          {"x_t", to_json(rec.x_t)},
                          {"d_t", rec.d_t},
                          {"g_t", to_json(rec.g_t)},
                          {"margin_theta", rec.margin_theta},
                          {"approx_bregman_failed", rec.approx_bregman_failed},
                          {"degenerate", rec.degenerate}});
  }
  j["iterations"] = std::move(iterations);
  nlohmann::json timing = nlohmann::json::object();
  for (const auto& [phase, seconds] : report.wall_times) timing[phase] = seconds;
  j["timing"] = std::move(timing);
  return j;
}

}  // namespace rmean
