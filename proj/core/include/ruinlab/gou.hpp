#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ruinlab/discrete.hpp"
#include "ruinlab/distributions.hpp"
#include "ruinlab/montecarlo.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

// Stable Levy driver with L_1 having characteristic function
// exp(-c |u|^alpha (1 - i skew sign(u) tan(pi alpha / 2))).
struct StableDriver {
  double alpha = 1.5;
  double skew = 0.0;
  double c = 1.0;
};

// Y_t = e^{R_t} (y + int e^{-R_{s-}} dX_s) with X_t = mu_xi t + sigma_xi W~_t
// and R_t = mu_rho t + sigma_rho W_t. A stable driver, when present, replaces
// the Brownian part of the corresponding process.
struct GouParams {
  double mu_xi = 0.0;
  double sigma_xi = 0.0;
  double mu_rho = 0.0;
  double sigma_rho = 0.0;
  std::optional<StableDriver> loss_driver;
  std::optional<StableDriver> return_driver;

  // Drift of R^ in dY = dX + Y dR^.
  double kappa() const { return mu_rho + 0.5 * sigma_rho * sigma_rho; }
  bool is_diffusion() const { return !loss_driver && !return_driver; }
};

void validate(const GouParams& params);

// Weak limit of the rescaled scheme built from the two base laws.
GouParams limit_params(const StepLaw& loss, const StepLaw& log_return);

enum class GouScheme { euler_sde, exponential, stable_euler };

std::string scheme_name(GouScheme scheme);
GouScheme parse_scheme(const std::string& name);

struct GouPath {
  double step = 1e-3;
  double horizon = 1.0;
  GouScheme scheme = GouScheme::euler_sde;
  std::vector<double> values;

  double time_at(std::size_t k) const { return static_cast<double>(k) * step; }
};

// round(T / h); throws unless T is a multiple of h up to rounding.
std::size_t gou_steps(double horizon, double step);

// Y + (mu_xi + kappa Y) h + sigma_xi sqrt(h) g_loss + sigma_rho Y sqrt(h) g_return
inline double euler_step(const GouParams& p, double y, double h, double sqrt_h, double g_loss,
                         double g_return) {
  return y + (p.mu_xi + p.kappa() * y) * h + p.sigma_xi * sqrt_h * g_loss +
         p.sigma_rho * y * sqrt_h * g_return;
}

// e^{dR} (Y + dX)
inline double exponential_step(double y, double d_loss, double d_return) {
  return std::exp(d_return) * (y + d_loss);
}

GouPath simulate_diffusion(const GouParams& params, double y, double horizon, double step,
                           GouScheme scheme, StreamKey key);

// Exponential-form Euler with stable increments h^(1/alpha) S.
GouPath simulate_stable(const GouParams& params, double y, double horizon, double step, StreamKey key);

RuinOutcome first_passage(const GouPath& path);

// How first passage below 0 is detected between grid points. `bridge` adds,
// for each step that stays nonnegative, the Brownian-bridge probability
// exp(-2 y_k y_{k+1} / ((s_xi^2 + s_rho^2 y_k^2) h)) of an unseen crossing,
// as a conditional expectation. Stable-driven paths always use `grid`.
enum class Monitoring { grid, bridge };

// Monte Carlo functionals of the limit process; one stream per path.
EstimatorResult estimate(const GouParams& params, GouScheme scheme, double step,
                         const EstimateConfig& config, Monitoring monitoring = Monitoring::bridge);

// Samples of Y_t at the end of the horizon (no ruin stopping), one per path.
std::vector<double> terminal_samples(const GouParams& params, GouScheme scheme, double y, double horizon,
                                     double step, std::size_t count, std::uint64_t seed, unsigned workers);

}  // namespace ruinlab
