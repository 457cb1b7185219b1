#include "ruinlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

void require_diffusion(const GouParams& params, const char* what) {
  validate(params);
  if (!params.is_diffusion()) {
    throw UnavailableError(std::string(what) + " is available for the Brownian (finite-variance) limit only");
  }
  if (!(params.sigma_xi > 0.0) || !(params.sigma_rho > 0.0)) {
    throw DomainError(std::string(what) + " needs sigma_xi > 0 and sigma_rho > 0");
  }
}

std::string format_double(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

}  // namespace

UltimateRuinResult ultimate_ruin(const GouParams& params, double y, const QuadratureOptions& options) {
  require_diffusion(params, "ultimate ruin probability");
  if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("initial capital y must be a finite value >= 0");
  if (params.mu_rho <= 0.0) return {1.0, "mu_rho<=0", 0, 0.0};
  if (y == 0.0) return {1.0, "y=0", 0, 0.0};

  // z = (s_xi / s_rho) tan(s - pi/2) turns H into a multiple of
  //   int_0^S sin(s)^a exp(c (s - pi/2)) ds,
  // and s = t^m with m (a + 1) = k, k integer, removes the s^a endpoint
  // singularity.
  const double sr2 = params.sigma_rho * params.sigma_rho;
  const double a = 2.0 * params.mu_rho / sr2 - 1.0;
  const double c = 2.0 * params.mu_xi / (params.sigma_xi * params.sigma_rho);
  const double k = std::ceil(a + 1.0);
  const double m = k / (a + 1.0);

  auto integrand = [=](double t) {
    const double s = std::pow(t, m);
    const double sinc = s > 0.0 ? std::sin(s) / s : 1.0;
    return m * std::pow(sinc, a) * std::pow(t, k - 1.0) * std::exp(c * (s - kHalfPi));
  };

  const double s_y = std::atan(params.sigma_xi / (params.sigma_rho * y));
  const QuadratureResult num = integrate_graded(integrand, 0.0, std::pow(s_y, 1.0 / m), options);
  const QuadratureResult den = integrate_graded(integrand, 0.0, std::pow(kHalfPi, 1.0 / m), options);

  UltimateRuinResult result;
  result.branch = "formula";
  result.nodes = num.evaluations + den.evaluations;
  result.probability = std::min(1.0, num.value / den.value);
  result.error_estimate = result.probability * (num.error_estimate / std::abs(num.value) +
                                                den.error_estimate / std::abs(den.value));
  if (!num.converged || !den.converged || !std::isfinite(result.probability)) {
    throw ConvergenceError("ultimate ruin quadrature did not converge (error estimate " +
                           format_double(result.error_estimate) + ")");
  }
  return result;
}

double PenaltySolution::interpolate(double y) const {
  if (!(y >= 0.0) || y > x_max) throw DomainError("y lies outside the solved grid [0, x_max]");
  const std::size_t last = f.size() - 1;
  const std::size_t i = std::min(static_cast<std::size_t>(y / step), last - 1);
  const double s = (y - x_at(i)) / step;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * f[i] + h10 * step * df[i] + h01 * f[i + 1] + h11 * step * df[i + 1];
}

double PenaltySolution::value(double y) const { return interpolate(y) / f0(); }

double penalty_decay_exponent(const GouParams& params, double alpha) {
  const double sr2 = params.sigma_rho * params.sigma_rho;
  if (!(sr2 > 0.0)) throw DomainError("the decay exponent needs sigma_rho > 0");
  const double mu = params.mu_rho;
  return (2.0 * mu + std::sqrt(4.0 * mu * mu + 8.0 * sr2 * alpha)) / (2.0 * sr2);
}

double default_penalty_x_max(const GouParams& params, double y) {
  return std::max({50.0, 20.0 * y, 20.0 * params.sigma_xi / params.sigma_rho});
}

PenaltySolution solve_penalty_ode(const GouParams& params, double alpha, std::optional<double> x_max,
                                  std::optional<double> step, double seed_scale) {
  require_diffusion(params, "the penalty ODE");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("discount rate alpha must be > 0");
  if (!(seed_scale > 0.0)) throw DomainError("seed scale must be > 0");

  PenaltySolution sol;
  sol.alpha = alpha;
  sol.x_max = x_max.value_or(default_penalty_x_max(params, 0.0));
  if (!(sol.x_max > 0.0) || !std::isfinite(sol.x_max)) throw DomainError("x_max must be > 0");
  const double h0 = step.value_or(std::min(1e-3, sol.x_max / 1e5));
  if (!(h0 > 0.0)) throw DomainError("ODE step must be > 0");
  const auto cells = static_cast<std::size_t>(std::ceil(sol.x_max / h0 - 1e-9));
  sol.step = sol.x_max / static_cast<double>(cells);
  sol.eta = penalty_decay_exponent(params, alpha);
  sol.uniqueness_guaranteed = params.mu_rho <= 0.0;

  const double sx2 = params.sigma_xi * params.sigma_xi;
  const double sr2 = params.sigma_rho * params.sigma_rho;
  const double kappa = params.kappa();
  const double mu_xi = params.mu_xi;
  auto second = [&](double x, double f, double g) {
    return (2.0 * alpha * f - 2.0 * (mu_xi + kappa * x) * g) / (sx2 + sr2 * x * x);
  };

  sol.f.assign(cells + 1, 0.0);
  sol.df.assign(cells + 1, 0.0);
  double f = seed_scale * std::pow(sol.x_max, -sol.eta);
  double g = -sol.eta * f / sol.x_max;
  sol.f[cells] = f;
  sol.df[cells] = g;
  const double h = -sol.step;
  for (std::size_t i = cells; i > 0; --i) {
    const double x = sol.x_at(i);
    const double k1f = g;
    const double k1g = second(x, f, g);
    const double k2f = g + 0.5 * h * k1g;
    const double k2g = second(x + 0.5 * h, f + 0.5 * h * k1f, k2f);
    const double k3f = g + 0.5 * h * k2g;
    const double k3g = second(x + 0.5 * h, f + 0.5 * h * k2f, k3f);
    const double k4f = g + h * k3g;
    const double k4g = second(x + h, f + h * k3f, k4f);
    f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
    sol.f[i - 1] = f;
    sol.df[i - 1] = g;
  }

  for (std::size_t i = 0; i <= cells; ++i) {
    if (!std::isfinite(sol.f[i]) || !(sol.f[i] > 0.0) || sol.df[i] > 0.0) {
      throw ConvergenceError("penalty ODE solution is not positive and nonincreasing at x = " +
                             format_double(sol.x_at(i)) + "; increase x_max (try " +
                             format_double(2.0 * sol.x_max) + ")");
    }
  }

  if (cells < 4) throw DomainError("the penalty ODE grid needs at least 4 cells");
  const double f0 = sol.f0();
  for (std::size_t i = 1; i < cells; ++i) {
    const double x = sol.x_at(i);
    const double u = sol.f[i] / f0;
    const double du = sol.df[i] / f0;
    // Fourth-order differences of f': central inside, shifted next to the ends.
    const auto& g = sol.df;
    double d2u = 0.0;
    if (i == 1) {
      d2u = (-3.0 * g[0] - 10.0 * g[1] + 18.0 * g[2] - 6.0 * g[3] + g[4]) / (12.0 * sol.step * f0);
    } else if (i + 1 == cells) {
      d2u = (3.0 * g[i + 1] + 10.0 * g[i] - 18.0 * g[i - 1] + 6.0 * g[i - 2] - g[i - 3]) / (12.0 * sol.step * f0);
    } else {
      d2u = (-g[i + 2] + 8.0 * g[i + 1] - 8.0 * g[i - 1] + g[i - 2]) / (12.0 * sol.step * f0);
    }
    const double res = (sx2 + sr2 * x * x) * d2u + 2.0 * (mu_xi + kappa * x) * du - 2.0 * alpha * u;
    sol.residual_max = std::max(sol.residual_max, std::abs(res) / (1.0 + std::abs(u)));
  }
  if (sol.residual_max > 1e-6) {
    throw ConvergenceError("penalty ODE residual " + format_double(sol.residual_max) +
                           " exceeds 1e-6; decrease the step");
  }
  return sol;
}

PenaltyResult discounted_penalty(const GouParams& params, double alpha, double y, std::optional<double> x_max) {
  if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("initial capital y must be a finite value >= 0");
  const double limit = x_max.value_or(default_penalty_x_max(params, y));
  if (y > 0.5 * limit) {
    throw DomainError("y = " + format_double(y) + " lies beyond the trusted region x_max / 2 = " +
                      format_double(0.5 * limit));
  }
  PenaltyResult result{1.0, solve_penalty_ode(params, alpha, limit)};
  result.value = result.solution.value(y);
  return result;
}

double MomentPolynomial::operator()(double t) const {
  if (!(t >= 0.0) || t > t_max) throw DomainError("moment polynomial evaluated outside [0, t_max]");
  double sum = 0.0;
  for (const Term& term : terms) sum += term.coef * std::pow(t, term.degree) * std::exp(term.rate * t);
  return sum;
}

namespace {

using TermKey = std::pair<double, int>;  // (rate, degree)
using TermMap = std::map<TermKey, double>;

// Adds c int_0^t e^{a (t-s)} s^d e^{lambda s} ds. With delta = lambda - a the
// integral is expanded as a series with nonnegative terms:
//   delta >= 0: e^{a t} sum_k delta^k t^{d+k+1} / (k! (d+k+1))
//   delta <  0: e^{lambda t} sum_k |delta|^k t^{d+k+1} d! / (d+k+1)!
// delta = 0 leaves the single term t^{d+1} / (d+1).
void add_convolution(TermMap& out, double a, double c, int d, double lambda, double t_max) {
  const double delta = lambda - a;
  const double rate = delta >= 0.0 ? a : lambda;
  const double x = std::abs(delta);
  double coef = c / (d + 1);
  double weight = 1.0;  // |coef / c| * t_max^(k + d + 1), up to a common factor
  double total = 0.0;
  for (int k = 0;; ++k) {
    out[{rate, d + k + 1}] += coef;
    total += weight;
    if (x == 0.0) break;
    const double next = delta >= 0.0 ? x / (k + 1) * (d + k + 1.0) / (d + k + 2.0) : x / (d + k + 2.0);
    coef *= next;
    weight *= next * t_max;
    if (k + 1 > x * t_max && weight < 1e-19 * total) break;
    if (k > 2000) break;
  }
}

}  // namespace

MomentPolynomial moment_polynomial(const GouParams& params, double y, int p, double t_max) {
  validate(params);
  if (!params.is_diffusion()) throw UnavailableError("moments of the stable-driven limit are not available");
  if (p < 0 || p > 6) throw DomainError("moment order p must lie in [0, 6]");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be > 0");

  std::vector<TermMap> m(static_cast<std::size_t>(p) + 1);
  m[0][{0.0, 0}] = 1.0;
  const double sx2 = params.sigma_xi * params.sigma_xi;
  const double sr2 = params.sigma_rho * params.sigma_rho;
  for (int q = 1; q <= p; ++q) {
    const double a = q * params.mu_rho + 0.5 * q * q * sr2;
    const double b = q * params.mu_xi;
    const double c = 0.5 * q * (q - 1) * sx2;
    TermMap& cur = m[static_cast<std::size_t>(q)];
    cur[{a, 0}] += std::pow(y, q);
    if (b != 0.0) {
      for (const auto& [key, coef] : m[static_cast<std::size_t>(q - 1)]) {
        add_convolution(cur, a, b * coef, key.second, key.first, t_max);
      }
    }
    if (q >= 2 && c != 0.0) {
      for (const auto& [key, coef] : m[static_cast<std::size_t>(q - 2)]) {
        add_convolution(cur, a, c * coef, key.second, key.first, t_max);
      }
    }
  }

  MomentPolynomial poly;
  poly.t_max = t_max;
  for (const auto& [key, coef] : m[static_cast<std::size_t>(p)]) {
    if (coef != 0.0) poly.terms.push_back({coef, key.second, key.first});
  }
  return poly;
}

double moment_recursion(const GouParams& params, double y, int p, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time t must be >= 0");
  return moment_polynomial(params, y, p, std::max(1.0, t))(t);
}

double first_moment(const GouParams& params, double y, double t) {
  validate(params);
  const double kappa = params.kappa();
  if (kappa == 0.0) return y + params.mu_xi * t;
  return y * std::exp(kappa * t) + params.mu_xi / kappa * std::expm1(kappa * t);
}

}  // namespace ruinlab
