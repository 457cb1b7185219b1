#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ruinlab/distributions.hpp"
#include "ruinlab/errors.hpp"

namespace ruinlab {

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Infinite values
// are ordered as usual; NaN is rejected.
double ks_distance(std::span<const double> a, std::span<const double> b);
// One-sample statistic against a reference CDF.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);
// Asymptotic two-sample p-value Q_KS(sqrt(m n / (m + n)) d) from the
// Kolmogorov series.
double ks_pvalue(double statistic, std::size_t size_a, std::size_t size_b);

enum class Experiment { marginal, ruin, penalty, moments };

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

// Settings shared by the four convergence experiments. Fields an experiment
// does not use are ignored (and left out of its config hash).
struct ExperimentConfig {
  StepLaw loss{NegPareto{3.0}, LawRole::loss};
  StepLaw log_return{Normal{0.1, 0.04}, LawRole::log_return};
  double y0 = 1.0;
  std::vector<int> grid{8, 32, 128, 512};
  std::size_t paths = 10000;
  std::size_t reference_paths = 10000;
  double reference_step = 1e-3;
  std::optional<double> horizon;  // per-experiment default when unset
  bool ultimate = false;          // ruin: compare against P(tau < infinity)
  double alpha = 0.5;             // penalty discount rate
  int p = 1;                      // moment order
  double slack = 0.2;             // marginal: allowed relative KS increase
  double ks_threshold = 0.05;
  double horizon_allowance = 0.02;  // ruin: finite- vs infinite-horizon gap
  std::uint64_t seed = 42;
  unsigned workers = 1;
};

struct ReportRow {
  int n = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double limit = 0.0;
  double error = 0.0;  // |estimate - limit|
  double limit_std_error = 0.0;

  bool operator==(const ReportRow&) const = default;
};

struct ConvergenceReport {
  std::string experiment;
  std::string limit_method;  // closed-form | ODE | fine-MC | exact
  std::vector<ReportRow> rows;
  bool pass = false;
  std::vector<std::pair<std::string, double>> allowances;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> notes;

  std::string verdict() const { return pass ? "PASS" : "FAIL"; }
  bool operator==(const ConvergenceReport&) const = default;
};

// A convergence condition required by the experiment does not hold. `table`
// holds the per-n values as CSV.
class ConditionGateError : public ConvergenceError {
 public:
  ConditionGateError(const std::string& what, std::string table)
      : ConvergenceError(what), table_(std::move(table)) {}
  const std::string& table() const { return table_; }

 private:
  std::string table_;
};

// KS(theta^(n)_1, Y_1) per n against exponential-form samples of the limit.
// PASS iff KS[i+1] <= (1 + slack) KS[i] along the grid and the last KS is
// below ks_threshold.
ConvergenceReport run_marginal_convergence(const ExperimentConfig& config);

// Finite-horizon mode: P(tau^n <= T) vs Monte Carlo of the limit at step
// reference_step. Ultimate mode: P(tau^n <= T) vs the closed-form
// P(tau < infinity); needs sup_n E[exp(-2 gamma^(n))]^n < 1 when mu_rho > 0.
ConvergenceReport run_ruin_convergence(const ExperimentConfig& config);

// Discounted penalty Monte Carlo per n vs f(y) / f(0) from the ODE.
ConvergenceReport run_penalty_convergence(const ExperimentConfig& config);

// exact_moment per n vs m_p(1); needs sup_n E[exp(q gamma^(n))]^n < inf
// with q = p + 1 and a finite loss moment of order q.
ConvergenceReport run_moment_convergence(const ExperimentConfig& config);

ConvergenceReport run_experiment(Experiment e, const ExperimentConfig& config);

// Canonical JSON of the fields `e` uses (worker count excluded) and its
// 64-bit FNV-1a hash in hex.
std::string canonical_config(Experiment e, const ExperimentConfig& config);
std::string config_hash(const std::string& canonical);

// CSV with "# key=value" metadata lines followed by
// n,estimate,stderr,limit,error,limit_stderr rows.
std::string report_to_csv(const ConvergenceReport& report);
ConvergenceReport report_from_csv(const std::string& text);
std::string report_to_json(const ConvergenceReport& report);
// Log-log plot of error against n.
std::string report_to_svg(const ConvergenceReport& report);

// "%.17g", the format used in every emitted number.
std::string format_number(double x);

}  // namespace ruinlab
