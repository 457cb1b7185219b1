#include "ruinlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "ruinlab/errors.hpp"

namespace ruinlab {

std::vector<double> evaluate_paths(std::size_t count, unsigned workers,
                                   const std::function<double(std::size_t)>& per_path) {
  std::vector<double> out(count);
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = per_path(i);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        // Strided assignment keeps long and short paths evenly spread.
        for (std::size_t i = w; i < count; i += threads) out[i] = per_path(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

EstimatorResult summarize(std::span<const double> values, std::uint64_t seed) {
  EstimatorResult r;
  r.n_paths = values.size();
  r.seed = seed;
  if (values.empty()) return r;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  r.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  r.std_error = sd / std::sqrt(n);
  r.ci_lo = r.mean - 1.959963984540054 * r.std_error;
  r.ci_hi = r.mean + 1.959963984540054 * r.std_error;
  return r;
}

void validate(const EstimateConfig& config) {
  if (config.paths < 100) {
    throw DomainError("estimator needs at least 100 paths (got " + std::to_string(config.paths) + ")");
  }
  if (!(config.y0 >= 0.0) || !std::isfinite(config.y0)) throw DomainError("initial capital y0 must be >= 0");
  if (const auto* ruin = std::get_if<RuinProbability>(&config.functional)) {
    if (!(ruin->horizon > 0.0)) throw DomainError("ruin horizon T must be > 0");
    if (!(ruin->escape_level > config.y0)) throw DomainError("escape level must exceed y0");
  } else if (const auto* pen = std::get_if<DiscountedPenalty>(&config.functional)) {
    if (!(pen->alpha > 0.0)) throw DomainError("discount rate alpha must be > 0");
    if (!(pen->horizon > 0.0)) throw DomainError("penalty horizon must be > 0");
  } else if (const auto* mom = std::get_if<MomentAt>(&config.functional)) {
    if (mom->p < 0) throw DomainError("moment order p must be >= 0");
    if (!(mom->time > 0.0)) throw DomainError("moment time must be > 0");
  }
}

}  // namespace ruinlab
