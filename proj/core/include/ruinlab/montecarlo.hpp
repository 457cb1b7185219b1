#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace ruinlab {

// P(tau <= horizon). A path that reaches escape_level is counted as not
// ruined; with a positive return drift the error is at most the ruin
// probability from that level.
struct RuinProbability {
  double horizon = 1.0;
  double escape_level = std::numeric_limits<double>::infinity();
};

// E[exp(-alpha tau) 1{tau <= horizon}]; the censored part is bounded by
// exp(-alpha * horizon), reported as the truncation bound.
struct DiscountedPenalty {
  double alpha = 0.5;
  double horizon = 20.0;
};

// E[(value at `time`)^p], paths are not stopped at ruin.
struct MomentAt {
  int p = 1;
  double time = 1.0;
};

using Functional = std::variant<RuinProbability, DiscountedPenalty, MomentAt>;

struct EstimateConfig {
  Functional functional;
  std::size_t paths = 10000;
  double y0 = 1.0;
  std::uint64_t seed = 42;
  unsigned workers = 1;
};

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  double truncation_bound = 0.0;
};

// Evaluates per_path(i) for i in [0, count) on `workers` threads. Results are
// stored by path index, so the output does not depend on the worker count.
std::vector<double> evaluate_paths(std::size_t count, unsigned workers,
                                   const std::function<double(std::size_t)>& per_path);

// Ordered fold: sample mean, stderr = sd / sqrt(N), normal 95% interval.
EstimatorResult summarize(std::span<const double> values, std::uint64_t seed);

// Common validation for estimator configs (N >= 100, alpha > 0, p >= 0,
// escape level above y0 ...).
void validate(const EstimateConfig& config);

}  // namespace ruinlab
