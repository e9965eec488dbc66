#include "rmean/core.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace rmean {

DataSet::DataSet(Matrix samples) : samples_(std::move(samples)) {
  if (samples_.rows() < 1 || samples_.cols() < 1) {
    throw InvalidArgument("DataSet: need n >= 1 and d >= 1");
  }
  if (!samples_.allFinite()) {
    throw InvalidArgument("DataSet: samples contain NaN or Inf");
  }
}

void BucketMeans::validate() const {
  if (means.rows() < 1 || means.cols() < 1) {
    throw InvalidArgument("BucketMeans: empty matrix");
  }
  if (!means.allFinite()) {
    throw InvalidArgument("BucketMeans: non-finite entry");
  }
  if (center && center->size() != means.cols()) {
    throw InvalidArgument("BucketMeans: center has wrong length");
  }
  if (scale) {
    if (!(*scale > 0.0)) throw InvalidArgument("BucketMeans: scale must be positive");
    for (Eigen::Index i = 0; i < means.rows(); ++i) {
      if (means.row(i).norm() > 1.0 + kScaledNormSlack) {
        throw InvalidArgument("BucketMeans: scaled row exceeds unit norm");
      }
    }
  }
}

// ---------------------------------------------------------------------------

void EstimatorConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("config: delta must lie in (0, 1]");
  if (k_override && *k_override == 0) throw InvalidArgument("config: k_override must be positive");
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(std::string("config: ") + name + " must be positive");
    }
  };
  positive(bucket_constant, "bucket_constant");
  positive(eta, "eta");
  positive(smooth_cap_numerator, "smooth_cap_numerator");
  positive(mwu_progress_factor, "mwu_progress_factor");
  positive(descent_iter_constant, "descent_iter_constant");
  positive(inner_iter_constant, "inner_iter_constant");
  positive(round_trial_constant, "round_trial_constant");
  positive(power_iter_constant, "power_iter_constant");
  if (!(prune_fraction >= 0.0 && prune_fraction < 0.5)) {
    throw InvalidArgument("config: prune_fraction must lie in [0, 1/2)");
  }
  if (inner_iter_max == 0) throw InvalidArgument("config: inner_iter_max must be positive");
  for (double f : {round_accept_fraction, grad_sign_fraction, certificate_fraction}) {
    if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("config: fractions must lie in (0, 1]");
  }
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  // Accept "a/b" so that e.g. eta=1/8000 can be written literally.
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return parse_double(key, text.substr(0, slash)) / parse_double(key, text.substr(slash + 1));
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("config: cannot parse '" + text + "' for " + key);
  }
  if (used != text.size()) throw InvalidArgument("config: trailing characters in " + key);
  return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InvalidArgument("config: cannot parse '" + text + "' for " + key);
  }
  return value;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void EstimatorConfig::set(const std::string& key, const std::string& value) {
  if (key == "delta") delta = parse_double(key, value);
  else if (key == "k_override" || key == "k") {
    if (value.empty() || value == "none") k_override.reset();
    else k_override = parse_u64(key, value);
  }
  else if (key == "bucket_constant") bucket_constant = parse_double(key, value);
  else if (key == "eta") eta = parse_double(key, value);
  else if (key == "prune_fraction") prune_fraction = parse_double(key, value);
  else if (key == "smooth_cap_numerator") smooth_cap_numerator = parse_double(key, value);
  else if (key == "mwu_progress_factor") mwu_progress_factor = parse_double(key, value);
  else if (key == "descent_iter_constant") descent_iter_constant = parse_double(key, value);
  else if (key == "inner_iter_constant") inner_iter_constant = parse_double(key, value);
  else if (key == "round_trial_constant") round_trial_constant = parse_double(key, value);
  else if (key == "power_iter_constant") power_iter_constant = parse_double(key, value);
  else if (key == "margin_search_steps") margin_search_steps = parse_u64(key, value);
  else if (key == "margin_refine_probes") margin_refine_probes = parse_u64(key, value);
  else if (key == "inner_iter_max") inner_iter_max = parse_u64(key, value);
  else if (key == "round_accept_fraction") round_accept_fraction = parse_double(key, value);
  else if (key == "grad_sign_fraction") grad_sign_fraction = parse_double(key, value);
  else if (key == "certificate_fraction") certificate_fraction = parse_double(key, value);
  else if (key == "rng_seed") rng_seed = parse_u64(key, value);
  else throw InvalidArgument("config: unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> EstimatorConfig::entries() const {
  return {
      {"delta", format_double(delta)},
      {"k_override", k_override ? std::to_string(*k_override) : "none"},
      {"bucket_constant", format_double(bucket_constant)},
      {"eta", format_double(eta)},
      {"prune_fraction", format_double(prune_fraction)},
      {"smooth_cap_numerator", format_double(smooth_cap_numerator)},
      {"mwu_progress_factor", format_double(mwu_progress_factor)},
      {"descent_iter_constant", format_double(descent_iter_constant)},
      {"inner_iter_constant", format_double(inner_iter_constant)},
      {"round_trial_constant", format_double(round_trial_constant)},
      {"power_iter_constant", format_double(power_iter_constant)},
      {"margin_search_steps", std::to_string(margin_search_steps)},
      {"margin_refine_probes", std::to_string(margin_refine_probes)},
      {"inner_iter_max", std::to_string(inner_iter_max)},
      {"round_accept_fraction", format_double(round_accept_fraction)},
      {"grad_sign_fraction", format_double(grad_sign_fraction)},
      {"certificate_fraction", format_double(certificate_fraction)},
      {"rng_seed", std::to_string(rng_seed)},
  };
}

// ---------------------------------------------------------------------------

SubgaussianRadius compute_r_delta(double sigma_trace, double sigma_opnorm, std::size_t n,
                                  double delta) {
  if (n == 0) throw InvalidArgument("compute_r_delta: n must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("compute_r_delta: delta outside (0, 1]");
  if (!(sigma_trace >= 0.0) || !(sigma_opnorm >= 0.0)) {
    throw InvalidArgument("compute_r_delta: covariance summaries must be nonnegative");
  }
  if (sigma_opnorm > sigma_trace * (1.0 + 1e-12)) {
    throw InvalidArgument("compute_r_delta: operator norm exceeds trace");
  }
  const double nn = static_cast<double>(n);
  SubgaussianRadius r;
  r.trace_term = std::sqrt(sigma_trace / nn);
  r.operator_term = std::sqrt(sigma_opnorm * std::log(1.0 / delta) / nn);
  r.r_delta = r.trace_term + r.operator_term;
  return r;
}

std::size_t resolve_k(const EstimatorConfig& config, std::size_t n) {
  config.validate();
  std::size_t k = 0;
  if (config.k_override) {
    k = *config.k_override;
  } else {
    const double raw = std::ceil(config.bucket_constant * std::log(1.0 / config.delta));
    if (raw >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 4)) {
      throw InsufficientSamples("resolve_k: bucket count overflows");
    }
    k = std::max<std::size_t>(1, static_cast<std::size_t>(raw));
  }
  if (2 * k > n) {
    throw InsufficientSamples("resolve_k: need 2k <= n but k = " + std::to_string(k) +
                              ", n = " + std::to_string(n));
  }
  return k;
}

std::size_t descent_iterations(const EstimatorConfig& config, std::size_t d) {
  const double raw = std::ceil(config.descent_iter_constant * std::log2(static_cast<double>(d) + 1.0));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

std::size_t argmin_distance(const std::vector<IterationRecord>& iterations) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < iterations.size(); ++i) {
    if (iterations[i].d_t < iterations[best].d_t) best = i;
  }
  return best;
}

}  // namespace rmean
