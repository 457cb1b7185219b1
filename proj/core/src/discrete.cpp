#include "ruinlab/discrete.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

constexpr int kMaxExactMomentOrder = 6;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_moment_support(const RescaledScheme& scheme, int p) {
  if (!scheme.loss_moment(p)) {
    throw UnavailableError("moment of order " + std::to_string(p) + " does not exist for the " +
                           family_name(scheme.loss()) + " loss law");
  }
  if (!scheme.return_factor_moment(p)) {
    throw UnavailableError("E[rho^" + std::to_string(p) + "] is infinite or unavailable for the " +
                           family_name(scheme.log_return()) + " return law at n=" +
                           std::to_string(scheme.n()));
  }
}

}  // namespace

std::size_t grid_steps(int n, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon T must be > 0");
  const double raw = static_cast<double>(n) * horizon;
  return static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-12)));
}

SurplusPath simulate_path(const RescaledScheme& scheme, double y0, double horizon, StreamKey key) {
  if (!(y0 >= 0.0)) throw DomainError("initial capital y0 must be >= 0");
  const std::size_t steps = grid_steps(scheme.n(), horizon);
  SurplusPath path{scheme.n(), horizon, y0, {}};
  path.values.reserve(steps + 1);
  path.values.push_back(y0);
  Stream stream(key);
  double theta = y0;
  for (std::size_t k = 0; k < steps; ++k) {
    const Step step = scheme.draw(stream);
    theta = step.xi + theta * step.rho;
    path.values.push_back(theta);
  }
  return path;
}

SurplusPath path_from_steps(double y0, int n, std::span<const double> xi, std::span<const double> rho) {
  if (xi.size() != rho.size()) throw DomainError("xi and rho step lists must have equal length");
  SurplusPath path{n, static_cast<double>(xi.size()) / n, y0, {}};
  path.values.reserve(xi.size() + 1);
  path.values.push_back(y0);
  double theta = y0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    theta = xi[k] + theta * rho[k];
    path.values.push_back(theta);
  }
  return path;
}

double explicit_solution(double y0, std::span<const double> xi, std::span<const double> rho) {
  if (xi.size() != rho.size()) throw DomainError("xi and rho step lists must have equal length");
  // Discounted form: prod rho * (y0 + sum_i xi_i / prod_{j <= i} rho_j).
  double discount = 1.0;
  double integral = y0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    discount *= rho[i];
    integral += xi[i] / discount;
  }
  return discount * integral;
}

RuinOutcome ruin_scan(std::span<const double> values, double step, double horizon) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < 0.0) return {true, static_cast<double>(k) * step, k};
  }
  return {false, horizon, values.empty() ? 0 : values.size() - 1};
}

RuinOutcome ruin_scan(const SurplusPath& path) {
  return ruin_scan(path.values, 1.0 / path.n, path.horizon);
}

EstimatorResult estimate(const RescaledScheme& scheme, const EstimateConfig& config) {
  validate(config);
  const double dt = 1.0 / scheme.n();
  double truncation = 0.0;
  std::function<double(std::size_t)> per_path;

  if (const auto* ruin = std::get_if<RuinProbability>(&config.functional)) {
    const std::size_t steps = grid_steps(scheme.n(), ruin->horizon);
    const double escape = ruin->escape_level;
    per_path = [&, steps, escape](std::size_t i) {
      Stream stream({config.seed, i});
      double theta = config.y0;
      for (std::size_t k = 0; k < steps; ++k) {
        const Step s = scheme.draw(stream);
        theta = s.xi + theta * s.rho;
        if (theta < 0.0) return 1.0;
        if (theta >= escape) return 0.0;
      }
      return 0.0;
    };
  } else if (const auto* pen = std::get_if<DiscountedPenalty>(&config.functional)) {
    const std::size_t steps = grid_steps(scheme.n(), pen->horizon);
    const double alpha = pen->alpha;
    truncation = std::exp(-alpha * pen->horizon);
    per_path = [&, steps, alpha](std::size_t i) {
      Stream stream({config.seed, i});
      double theta = config.y0;
      for (std::size_t k = 0; k < steps; ++k) {
        const Step s = scheme.draw(stream);
        theta = s.xi + theta * s.rho;
        if (theta < 0.0) return std::exp(-alpha * static_cast<double>(k + 1) * dt);
      }
      return 0.0;
    };
  } else {
    const auto& mom = std::get<MomentAt>(config.functional);
    check_moment_support(scheme, mom.p);
    const std::size_t steps = grid_steps(scheme.n(), mom.time);
    const int p = mom.p;
    per_path = [&, steps, p](std::size_t i) {
      Stream stream({config.seed, i});
      double theta = config.y0;
      for (std::size_t k = 0; k < steps; ++k) {
        const Step s = scheme.draw(stream);
        theta = s.xi + theta * s.rho;
      }
      return std::pow(theta, p);
    };
  }

  const std::vector<double> values = evaluate_paths(config.paths, config.workers, per_path);
  EstimatorResult result = summarize(values, config.seed);
  result.truncation_bound = truncation;
  return result;
}

double exact_moment(const RescaledScheme& scheme, double y0, int p) {
  if (p < 0 || p > kMaxExactMomentOrder) {
    throw DomainError("exact moment order must be in [0, 6] (got " + std::to_string(p) + ")");
  }
  std::array<double, kMaxExactMomentOrder + 1> loss{};
  std::array<double, kMaxExactMomentOrder + 1> ret{};
  for (int j = 0; j <= p; ++j) {
    const auto lm = scheme.loss_moment(j);
    const auto rm = scheme.return_factor_moment(j);
    if (!lm || !rm) check_moment_support(scheme, j);
    loss[static_cast<std::size_t>(j)] = *lm;
    ret[static_cast<std::size_t>(j)] = *rm;
  }
  std::array<double, kMaxExactMomentOrder + 1> m{};
  for (int j = 0; j <= p; ++j) m[static_cast<std::size_t>(j)] = std::pow(y0, j);
  for (int k = 0; k < scheme.n(); ++k) {
    std::array<double, kMaxExactMomentOrder + 1> next{};
    for (int q = 0; q <= p; ++q) {
      double acc = 0.0;
      for (int j = 0; j <= q; ++j) {
        acc += binomial(q, j) * loss[static_cast<std::size_t>(q - j)] * ret[static_cast<std::size_t>(j)] *
               m[static_cast<std::size_t>(j)];
      }
      next[static_cast<std::size_t>(q)] = acc;
    }
    m = next;
  }
  return m[static_cast<std::size_t>(p)];
}

}  // namespace ruinlab
