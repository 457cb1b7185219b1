#include "ruinlab/gou.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "ruinlab/errors.hpp"
#include "ruinlab/rescale.hpp"

namespace ruinlab {

namespace {

void validate_driver(const StableDriver& d, const char* which) {
  if (!(d.alpha > 1.0 && d.alpha < 2.0)) {
    throw DomainError(std::string(which) + " stable driver index must lie in (1, 2)");
  }
  if (!(std::abs(d.skew) <= 1.0)) throw DomainError(std::string(which) + " stable driver skew must lie in [-1, 1]");
  if (!(d.c >= 0.0) || !std::isfinite(d.c)) throw DomainError(std::string(which) + " stable driver scale must be >= 0");
}

class Stepper {
 public:
  Stepper(const GouParams& params, GouScheme scheme, double step)
      : params_(params), scheme_(scheme), h_(step), sqrt_h_(std::sqrt(step)) {
    if (params.loss_driver) loss_jump_scale_ = std::pow(step, 1.0 / params.loss_driver->alpha);
    if (params.return_driver) return_jump_scale_ = std::pow(step, 1.0 / params.return_driver->alpha);
  }

  double advance(double y, Stream& stream) const {
    if (scheme_ == GouScheme::euler_sde) {
      const double g_loss = stream.next_gaussian();
      const double g_return = stream.next_gaussian();
      return euler_step(params_, y, h_, sqrt_h_, g_loss, g_return);
    }
    const double d_loss = params_.mu_xi * h_ + loss_noise(stream);
    const double d_return = params_.mu_rho * h_ + return_noise(stream);
    return exponential_step(y, d_loss, d_return);
  }

 private:
  double loss_noise(Stream& stream) const {
    if (const auto& d = params_.loss_driver) {
      return loss_jump_scale_ * sample_stable(d->alpha, d->skew, d->c, stream);
    }
    return params_.sigma_xi * sqrt_h_ * stream.next_gaussian();
  }

  double return_noise(Stream& stream) const {
    if (const auto& d = params_.return_driver) {
      return return_jump_scale_ * sample_stable(d->alpha, d->skew, d->c, stream);
    }
    return params_.sigma_rho * sqrt_h_ * stream.next_gaussian();
  }

  const GouParams& params_;
  GouScheme scheme_;
  double h_;
  double sqrt_h_;
  double loss_jump_scale_ = 0.0;
  double return_jump_scale_ = 0.0;
};

// E[exp(-alpha tau) 1{tau <= steps h}] along one path (alpha = 0 gives the
// ruin indicator).
struct MonitoredKernel {
  const Stepper& stepper;
  const GouParams& params;
  double h;
  bool bridge;

  double run(double y, std::size_t steps, double alpha, double escape, Stream& stream) const {
    const double sx2 = params.sigma_xi * params.sigma_xi;
    const double sr2 = params.sigma_rho * params.sigma_rho;
    double survive = 1.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      const double next = stepper.advance(y, stream);
      if (next < 0.0) {
        return acc + survive * std::exp(-alpha * static_cast<double>(k + 1) * h);
      }
      if (bridge) {
        const double exponent = 2.0 * y * next / ((sx2 + sr2 * y * y) * h);
        if (exponent < 40.0) {
          const double cross = std::exp(-exponent);
          acc += survive * cross * std::exp(-alpha * (static_cast<double>(k) + 0.5) * h);
          survive *= 1.0 - cross;
        }
      }
      y = next;
      if (y >= escape) break;
    }
    return acc;
  }
};

void check_scheme(const GouParams& params, GouScheme scheme) {
  validate(params);
  if (scheme == GouScheme::euler_sde && !params.is_diffusion()) {
    throw DomainError("euler-sde needs Brownian drivers; use the stable (exponential-form) scheme");
  }
}

GouPath run_path(const GouParams& params, double y, double horizon, double step, GouScheme scheme,
                 StreamKey key) {
  if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("initial capital y must be >= 0");
  const std::size_t steps = gou_steps(horizon, step);
  GouPath path{step, horizon, scheme, {}};
  path.values.reserve(steps + 1);
  path.values.push_back(y);
  const Stepper stepper(params, scheme, step);
  Stream stream(key);
  double value = y;
  for (std::size_t k = 0; k < steps; ++k) {
    value = stepper.advance(value, stream);
    path.values.push_back(value);
  }
  return path;
}

}  // namespace

void validate(const GouParams& p) {
  for (double v : {p.mu_xi, p.sigma_xi, p.mu_rho, p.sigma_rho}) {
    if (!std::isfinite(v)) throw DomainError("GOU parameters must be finite");
  }
  if (p.sigma_xi < 0.0 || p.sigma_rho < 0.0) throw DomainError("GOU volatilities sigma_xi, sigma_rho must be >= 0");
  if (p.loss_driver) validate_driver(*p.loss_driver, "loss");
  if (p.return_driver) validate_driver(*p.return_driver, "return");
}

GouParams limit_params(const StepLaw& loss, const StepLaw& log_return) {
  GouParams p;
  p.mu_xi = mean(loss);
  p.mu_rho = mean(log_return);

  // The centered sum of n steps divided by (constant * n^(1/alpha)) tends to
  // a stable law with cf-scale (k1 + k2) c_alpha / constant^alpha and skew
  // (k2 - k1) / (k1 + k2).
  auto driver_for = [](const StepLaw& law) -> std::optional<StableDriver> {
    const TailClass tail = classify(law);
    if (tail.kind != TailClass::Kind::heavy_alpha) return std::nullopt;
    const Normalization norm = normalization_for(law);
    const double c_alpha = stable_constant_c_alpha(tail.alpha);
    const double mass = tail.k1 + tail.k2;
    return StableDriver{tail.alpha, (tail.k2 - tail.k1) / mass,
                        mass * c_alpha / std::pow(norm.constant, tail.alpha)};
  };

  p.loss_driver = driver_for(loss);
  if (!p.loss_driver) p.sigma_xi = std::sqrt(variance(loss));
  p.return_driver = driver_for(log_return);
  if (!p.return_driver) p.sigma_rho = std::sqrt(variance(log_return));
  return p;
}

std::string scheme_name(GouScheme scheme) {
  switch (scheme) {
    case GouScheme::euler_sde:
      return "euler-sde";
    case GouScheme::exponential:
      return "exponential";
    case GouScheme::stable_euler:
      return "stable-euler";
  }
  return "euler-sde";
}

GouScheme parse_scheme(const std::string& name) {
  if (name == "euler-sde") return GouScheme::euler_sde;
  if (name == "exponential") return GouScheme::exponential;
  if (name == "stable-euler") return GouScheme::stable_euler;
  throw DomainError("unknown GOU scheme '" + name + "' (expected euler-sde, exponential or stable-euler)");
}

std::size_t gou_steps(double horizon, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("time step h must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon T must be > 0");
  const double ratio = horizon / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) {
    throw DomainError("horizon T must be a positive multiple of the step h");
  }
  return static_cast<std::size_t>(rounded);
}

GouPath simulate_diffusion(const GouParams& params, double y, double horizon, double step,
                           GouScheme scheme, StreamKey key) {
  if (scheme == GouScheme::stable_euler) {
    throw DomainError("simulate_diffusion takes the euler-sde or exponential scheme");
  }
  check_scheme(params, scheme);
  if (!params.is_diffusion()) throw DomainError("simulate_diffusion needs Brownian drivers");
  return run_path(params, y, horizon, step, scheme, key);
}

GouPath simulate_stable(const GouParams& params, double y, double horizon, double step, StreamKey key) {
  validate(params);
  return run_path(params, y, horizon, step, GouScheme::stable_euler, key);
}

RuinOutcome first_passage(const GouPath& path) { return ruin_scan(path.values, path.step, path.horizon); }

EstimatorResult estimate(const GouParams& params, GouScheme scheme, double step, const EstimateConfig& config,
                         Monitoring monitoring) {
  validate(config);
  check_scheme(params, scheme);
  const Stepper stepper(params, scheme, step);
  double truncation = 0.0;
  std::function<double(std::size_t)> per_path;

  const MonitoredKernel kernel{stepper, params, step,
                               monitoring == Monitoring::bridge && params.is_diffusion()};

  if (const auto* ruin = std::get_if<RuinProbability>(&config.functional)) {
    const std::size_t steps = gou_steps(ruin->horizon, step);
    per_path = [&, steps](std::size_t i) {
      Stream stream({config.seed, i});
      return kernel.run(config.y0, steps, 0.0, ruin->escape_level, stream);
    };
  } else if (const auto* pen = std::get_if<DiscountedPenalty>(&config.functional)) {
    const std::size_t steps = gou_steps(pen->horizon, step);
    const double alpha = pen->alpha;
    truncation = std::exp(-alpha * pen->horizon);
    per_path = [&, steps, alpha](std::size_t i) {
      Stream stream({config.seed, i});
      return kernel.run(config.y0, steps, alpha, std::numeric_limits<double>::infinity(), stream);
    };
  } else {
    const auto& mom = std::get<MomentAt>(config.functional);
    const std::size_t steps = gou_steps(mom.time, step);
    const int p = mom.p;
    per_path = [&, steps, p](std::size_t i) {
      Stream stream({config.seed, i});
      double y = config.y0;
      for (std::size_t k = 0; k < steps; ++k) y = stepper.advance(y, stream);
      return std::pow(y, p);
    };
  }

  const std::vector<double> values = evaluate_paths(config.paths, config.workers, per_path);
  EstimatorResult result = summarize(values, config.seed);
  result.truncation_bound = truncation;
  return result;
}

std::vector<double> terminal_samples(const GouParams& params, GouScheme scheme, double y, double horizon,
                                     double step, std::size_t count, std::uint64_t seed, unsigned workers) {
  check_scheme(params, scheme);
  const Stepper stepper(params, scheme, step);
  const std::size_t steps = gou_steps(horizon, step);
  return evaluate_paths(count, workers, [&](std::size_t i) {
    Stream stream({seed, i});
    double value = y;
    for (std::size_t k = 0; k < steps; ++k) value = stepper.advance(value, stream);
    return value;
  });
}

}  // namespace ruinlab
