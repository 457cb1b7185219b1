#pragma once

#include <optional>
#include <vector>

#include "ruinlab/distributions.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

// Normalization of the centered part of a step: (Z - mu) / (constant *
// n^(1/exponent)). Square-integrable laws use (2, 1); negated Pareto losses
// with alpha in (1,2) use (alpha, c_alpha); stable laws use (alpha, 1).
struct Normalization {
  double exponent = 2.0;
  double constant = 1.0;

  double scale(int n) const;  // 1 / (constant * n^(1/exponent))
};

Normalization normalization_for(const StepLaw& law);

struct Step {
  double xi;   // rescaled loss
  double rho;  // rescaled return factor exp(gamma)
};

// Re-normalized step laws for n steps per unit time:
//   xi^(n)    = mu_xi / n + (xi - mu_xi) / (c_a n^(1/a))
//   gamma^(n) = mu_rho / n + (ln rho - mu_rho) / (c_b n^(1/b)),  rho^(n) = exp(gamma^(n))
class RescaledScheme {
 public:
  RescaledScheme(StepLaw loss, StepLaw log_return, int n);

  int n() const { return n_; }
  const StepLaw& loss() const { return loss_; }
  const StepLaw& log_return() const { return log_return_; }
  const Normalization& loss_normalization() const { return loss_norm_; }
  const Normalization& return_normalization() const { return return_norm_; }
  double loss_mean() const { return loss_mean_; }
  double return_mean() const { return return_mean_; }

  double rescale_loss(double raw) const;
  double rescale_logreturn(double raw) const;

  // One step: the raw loss is drawn first, then the raw log-return.
  Step draw(Stream& stream) const;

  // E[(xi^(n))^k]; nullopt when the base central moments do not exist.
  std::optional<double> loss_moment(int k) const;
  // E[(rho^(n))^j] = E[exp(j gamma^(n))]; nullopt when infinite or when the
  // return law has no moment generating function.
  std::optional<double> return_factor_moment(int j) const;

 private:
  StepLaw loss_;
  StepLaw log_return_;
  int n_;
  Normalization loss_norm_;
  Normalization return_norm_;
  double loss_mean_;
  double return_mean_;
  double loss_scale_;
  double return_scale_;
};

double rescaled_loss(const StepLaw& base, int n, double raw);
double rescaled_logreturn(const StepLaw& base, int n, double raw);

// n * log E[exp(k gamma^(n))] = k mu_rho + n * K_c(k / (c n^(1/b))), with K_c
// the centered cumulant generating function of ln rho. +infinity outside the
// mgf domain.
double log_power_mgf(const StepLaw& log_return, int n, double k);

struct ConditionRow {
  int n;
  double value;  // a_n or b_n; +infinity outside the mgf domain
};

// sup_{n >= n0} E(exp(-2 gamma^(n)))^n <= C < 1, checked on n = 1..n_max
// plus the n -> infinity limit exp(-2 mu_rho + 2 sigma_rho^2).
struct Condition9Result {
  bool satisfied = false;
  double C = 0.0;
  int n0 = 0;  // first grid n from which every a_n < 1; n_max + 1 if none
  double limit = 0.0;
  std::vector<ConditionRow> rows;
};

Condition9Result check_condition_9(const StepLaw& log_return, int n_max);

// sup_n E(exp(q gamma^(n)))^n < infinity, checked on n = 1..n_max plus the
// limit exp(q mu_rho + q^2 sigma_rho^2 / 2).
struct Condition15Result {
  bool bounded = false;
  double sup_estimate = 0.0;  // sup over admissible grid n and the limit
  double limit = 0.0;
  int first_admissible_n = 1;    // n_max + 1 when no grid n is admissible
  std::vector<int> domain_violations;
  std::vector<ConditionRow> rows;
};

Condition15Result check_condition_15(const StepLaw& log_return, int q, int n_max);

}  // namespace ruinlab
