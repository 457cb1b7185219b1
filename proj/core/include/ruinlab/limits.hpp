#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ruinlab/gou.hpp"
#include "ruinlab/quadrature.hpp"

namespace ruinlab {

struct UltimateRuinResult {
  double probability = 1.0;
  // "formula" for H(-y)/H(0); "mu_rho<=0" and "y=0" for the trivial branches.
  std::string branch;
  std::size_t nodes = 0;
  double error_estimate = 0.0;
};

// P(tau(y) < infinity) for the diffusion limit. 1 when mu_rho <= 0, else
// H(-y)/H(0) with
//   H(x) = int_{-inf}^x (s_xi^2 + s_rho^2 z^2)^(-1/2 - mu_rho/s_rho^2)
//          exp(2 mu_xi/(s_xi s_rho) arctan(s_rho z / s_xi)) dz.
// Throws ConvergenceError when the quadrature misses its tolerance.
UltimateRuinResult ultimate_ruin(const GouParams& params, double y, const QuadratureOptions& options = {});

// Decaying solution of
//   (s_xi^2 + s_rho^2 x^2) f'' + 2 (mu_xi + kappa x) f' - 2 alpha f = 0
// on [0, x_max], integrated backward from the seed f(x_max) = s x_max^-eta.
struct PenaltySolution {
  double alpha = 0.0;
  double x_max = 0.0;
  double step = 0.0;
  double eta = 0.0;
  std::vector<double> f;
  std::vector<double> df;
  double residual_max = 0.0;  // max |residual| / (1 + |f|) of f / f(0)
  bool uniqueness_guaranteed = true;  // false when mu_rho > 0

  double f0() const { return f.front(); }
  double x_at(std::size_t i) const { return static_cast<double>(i) * step; }
  // f(y) by cubic Hermite interpolation on the grid.
  double interpolate(double y) const;
  // f(y) / f(0).
  double value(double y) const;
};

// Positive root of s_rho^2 eta (eta + 1) - 2 kappa eta - 2 alpha = 0.
double penalty_decay_exponent(const GouParams& params, double alpha);

// max(50, 20 y, 20 s_xi / s_rho).
double default_penalty_x_max(const GouParams& params, double y);

// Needs s_xi > 0, s_rho > 0, alpha > 0. The step defaults to
// min(1e-3, x_max / 1e5). Throws ConvergenceError when the solution fails the
// positivity / monotonicity check or the residual bound.
PenaltySolution solve_penalty_ode(const GouParams& params, double alpha, std::optional<double> x_max = {},
                                  std::optional<double> step = {}, double seed_scale = 1.0);

struct PenaltyResult {
  double value = 1.0;
  PenaltySolution solution;
};

// E[exp(-alpha tau(y)) 1{tau(y) < infinity}] = f(y) / f(0); needs y <= x_max / 2.
PenaltyResult discounted_penalty(const GouParams& params, double alpha, double y,
                                 std::optional<double> x_max = {});

// sum_i c_i t^d_i exp(lambda_i t). Built for t in [0, t_max]; evaluation
// beyond t_max is rejected because the series parts are truncated there.
struct MomentPolynomial {
  struct Term {
    double coef;
    int degree;
    double rate;
  };
  std::vector<Term> terms;
  double t_max = 1.0;

  double operator()(double t) const;
};

// m_p(t) = E[Y_t^p], Y_0 = y, built from
//   m_p(t) = y^p e^{a_p t} + int_0^t e^{a_p (t-s)} (b_p m_{p-1}(s) + c_p m_{p-2}(s)) ds
// with a_p = p mu_rho + p^2 s_rho^2 / 2, b_p = p mu_xi, c_p = p (p-1) s_xi^2 / 2.
// A term whose rate equals a_p integrates to a degree bump.
MomentPolynomial moment_polynomial(const GouParams& params, double y, int p, double t_max = 1.0);

double moment_recursion(const GouParams& params, double y, int p, double t);

// m_1(t) = y e^{kappa t} + (mu_xi / kappa)(e^{kappa t} - 1), or y + mu_xi t
// when kappa = 0.
double first_moment(const GouParams& params, double y, double t);

}  // namespace ruinlab
