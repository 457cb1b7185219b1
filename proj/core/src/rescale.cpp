#include "ruinlab/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void require_positive_n(int n) {
  if (n < 1) throw DomainError("steps per unit time n must be >= 1 (got " + std::to_string(n) + ")");
}

// sigma^2 of the return law for the analytic n -> infinity limits; only
// square-integrable (or degenerate) laws have one.
double limit_variance(const StepLaw& log_return) {
  const Normalization norm = normalization_for(log_return);
  if (norm.exponent != 2.0) {
    throw UnavailableError("condition limits need a square-integrable log-return law (got " +
                           family_name(log_return) + ")");
  }
  return variance(log_return);
}

}  // namespace

double Normalization::scale(int n) const {
  return 1.0 / (constant * std::pow(static_cast<double>(n), 1.0 / exponent));
}

Normalization normalization_for(const StepLaw& law) {
  const TailClass tail = classify(law);
  switch (tail.kind) {
    case TailClass::Kind::square_integrable:
      return {2.0, 1.0};
    case TailClass::Kind::heavy_alpha:
      if (std::holds_alternative<NegPareto>(law.family)) {
        return {tail.alpha, stable_constant_c_alpha(tail.alpha)};
      }
      return {tail.alpha, 1.0};
    case TailClass::Kind::nonconforming:
      if (std::holds_alternative<Degenerate>(law.family)) return {2.0, 1.0};
      break;
  }
  throw DomainError("law " + family_name(law) +
                    " satisfies neither the heavy-tail (1 < alpha < 2) nor the finite-variance "
                    "assumption");
}

RescaledScheme::RescaledScheme(StepLaw loss, StepLaw log_return, int n)
    : loss_(std::move(loss)),
      log_return_(std::move(log_return)),
      n_(n),
      loss_norm_(normalization_for(loss_)),
      return_norm_(normalization_for(log_return_)),
      loss_mean_(mean(loss_)),
      return_mean_(mean(log_return_)),
      loss_scale_(0.0),
      return_scale_(0.0) {
  require_positive_n(n_);
  loss_scale_ = loss_norm_.scale(n_);
  return_scale_ = return_norm_.scale(n_);
}

double RescaledScheme::rescale_loss(double raw) const {
  return loss_mean_ / n_ + (raw - loss_mean_) * loss_scale_;
}

double RescaledScheme::rescale_logreturn(double raw) const {
  return return_mean_ / n_ + (raw - return_mean_) * return_scale_;
}

Step RescaledScheme::draw(Stream& stream) const {
  const double raw_loss = sample(loss_, stream);
  const double raw_return = sample(log_return_, stream);
  return {rescale_loss(raw_loss), std::exp(rescale_logreturn(raw_return))};
}

std::optional<double> RescaledScheme::loss_moment(int k) const {
  if (k < 0) throw DomainError("moment order must be >= 0");
  const double drift = loss_mean_ / n_;
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) {
    const auto central = central_moment(loss_, j);
    if (!central) return std::nullopt;
    acc += binomial(k, j) * std::pow(drift, k - j) * std::pow(loss_scale_, j) * *central;
  }
  return acc;
}

std::optional<double> RescaledScheme::return_factor_moment(int j) const {
  if (j == 0) return 1.0;
  double centered = 0.0;
  try {
    centered = centered_log_mgf(log_return_, j * return_scale_);
  } catch (const UnavailableError&) {
    return std::nullopt;
  }
  if (!std::isfinite(centered)) return std::nullopt;
  return std::exp(j * return_mean_ / n_ + centered);
}

double rescaled_loss(const StepLaw& base, int n, double raw) {
  require_positive_n(n);
  const double mu = mean(base);
  return mu / n + (raw - mu) * normalization_for(base).scale(n);
}

double rescaled_logreturn(const StepLaw& base, int n, double raw) {
  require_positive_n(n);
  const double mu = mean(base);
  return mu / n + (raw - mu) * normalization_for(base).scale(n);
}

double log_power_mgf(const StepLaw& log_return, int n, double k) {
  require_positive_n(n);
  const Normalization norm = normalization_for(log_return);
  const double mu = mean(log_return);
  if (const auto* normal = std::get_if<Normal>(&log_return.family)) {
    // n * s^2 = n^(1 - 2/b) / c^2, exactly 1 in the finite-variance case.
    const double n_s2 =
        std::pow(static_cast<double>(n), 1.0 - 2.0 / norm.exponent) / (norm.constant * norm.constant);
    return k * mu + 0.5 * normal->variance * k * k * n_s2;
  }
  const double centered = centered_log_mgf(log_return, k * norm.scale(n));
  if (!std::isfinite(centered)) return kInf;
  return k * mu + n * centered;
}

Condition9Result check_condition_9(const StepLaw& log_return, int n_max) {
  require_positive_n(n_max);
  const double sigma2 = limit_variance(log_return);
  Condition9Result result;
  const double log_limit = -2.0 * mean(log_return) + 2.0 * sigma2;
  result.limit = std::exp(log_limit);
  result.rows.reserve(static_cast<std::size_t>(n_max));
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double log_a = log_power_mgf(log_return, n, -2.0);
    logs.push_back(log_a);
    result.rows.push_back({n, std::exp(log_a)});
  }
  int n0 = n_max + 1;
  for (int n = n_max; n >= 1 && logs[static_cast<std::size_t>(n - 1)] < 0.0; --n) n0 = n;
  result.n0 = n0;
  result.satisfied = log_limit < 0.0 && n0 <= n_max;
  double sup = result.limit;
  for (int n = std::min(n0, n_max + 1); n <= n_max; ++n) {
    sup = std::max(sup, result.rows[static_cast<std::size_t>(n - 1)].value);
  }
  result.C = sup;
  return result;
}

Condition15Result check_condition_15(const StepLaw& log_return, int q, int n_max) {
  require_positive_n(n_max);
  if (q < 2) throw DomainError("the return moment bound needs an integer q >= 2 (got " + std::to_string(q) + ")");
  const double sigma2 = limit_variance(log_return);
  Condition15Result result;
  result.limit = std::exp(q * mean(log_return) + 0.5 * q * q * sigma2);
  for (int n = 1; n <= n_max; ++n) {
    const double log_b = log_power_mgf(log_return, n, static_cast<double>(q));
    const double b = std::exp(log_b);
    result.rows.push_back({n, b});
    if (!std::isfinite(b)) result.domain_violations.push_back(n);
  }
  int first = n_max + 1;
  for (int n = n_max; n >= 1 && std::isfinite(result.rows[static_cast<std::size_t>(n - 1)].value); --n) {
    first = n;
  }
  result.first_admissible_n = first;
  double sup = result.limit;
  for (int n = first; n <= n_max; ++n) sup = std::max(sup, result.rows[static_cast<std::size_t>(n - 1)].value);
  result.sup_estimate = sup;
  result.bounded = std::isfinite(result.limit) && first <= n_max && std::isfinite(sup);
  return result;
}

}  // namespace ruinlab
