#include "ruinlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ruinlab/discrete.hpp"
#include "ruinlab/gou.hpp"
#include "ruinlab/limits.hpp"
#include "ruinlab/rescale.hpp"

namespace ruinlab {

namespace {

constexpr std::uint64_t kReferenceTag = 0xFFFFFFFFull;

// Distinct experiment parts draw from distinct seeds.
std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag) { return seed ^ mix64(tag); }

void check_finite(std::span<const double> xs) {
  for (double x : xs) {
    if (std::isnan(x)) throw DomainError("KS distance: sample contains NaN");
  }
}

void check_grid(const ExperimentConfig& config) {
  if (config.grid.empty()) throw DomainError("experiment n-grid must not be empty");
  for (int n : config.grid) {
    if (n < 1) throw DomainError("experiment n-grid entries must be >= 1");
  }
  if (!(config.y0 >= 0.0) || !std::isfinite(config.y0)) throw DomainError("y0 must be >= 0");
  validate(config.loss);
  validate(config.log_return);
}

GouScheme reference_scheme(const GouParams& params) {
  return params.is_diffusion() ? GouScheme::exponential : GouScheme::stable_euler;
}

ConvergenceReport blank_report(Experiment e, const ExperimentConfig& config, std::string method) {
  ConvergenceReport report;
  report.experiment = experiment_name(e);
  report.limit_method = std::move(method);
  report.seed = config.seed;
  report.config_hash = config_hash(canonical_config(e, config));
  return report;
}

GouParams diffusion_limit(const ExperimentConfig& config, const char* what) {
  const GouParams params = limit_params(config.loss, config.log_return);
  if (!params.is_diffusion()) {
    throw UnavailableError(std::string(what) + " needs finite-variance loss and log-return laws");
  }
  return params;
}

std::vector<double> terminal_discrete(const RescaledScheme& scheme, double y0, std::size_t count,
                                      std::uint64_t seed, unsigned workers) {
  const std::size_t steps = grid_steps(scheme.n(), 1.0);
  return evaluate_paths(count, workers, [&](std::size_t i) {
    Stream stream({seed, i});
    double theta = y0;
    for (std::size_t k = 0; k < steps; ++k) {
      const Step s = scheme.draw(stream);
      theta = s.xi + theta * s.rho;
    }
    return theta;
  });
}

ReportRow make_row(int n, double estimate, double se, double limit, double limit_se) {
  return {n, estimate, se, limit, std::abs(estimate - limit), limit_se};
}

std::string condition_table(const std::vector<ConditionRow>& rows, const char* column) {
  std::ostringstream out;
  out << "n," << column << "\n";
  for (const ConditionRow& r : rows) out << r.n << "," << format_number(r.value) << "\n";
  return out.str();
}

}  // namespace

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS distance needs nonempty samples");
  check_finite(a);
  check_finite(b);
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("KS distance needs a nonempty sample");
  check_finite(sample);
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    const double v = x[i];
    const double below = static_cast<double>(i) / n;
    while (i < x.size() && x[i] == v) ++i;
    const double at = static_cast<double>(i) / n;
    const double f = cdf(v);
    d = std::max({d, std::abs(f - below), std::abs(at - f)});
  }
  return d;
}

double ks_pvalue(double statistic, std::size_t size_a, std::size_t size_b) {
  if (size_a == 0 || size_b == 0) throw DomainError("KS p-value needs nonempty samples");
  const double m = static_cast<double>(size_a);
  const double n = static_cast<double>(size_b);
  const double lambda = std::sqrt(m * n / (m + n)) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::marginal:
      return "marginal";
    case Experiment::ruin:
      return "ruin";
    case Experiment::penalty:
      return "penalty";
    case Experiment::moments:
      return "moments";
  }
  return "marginal";
}

Experiment parse_experiment(const std::string& name) {
  if (name == "marginal") return Experiment::marginal;
  if (name == "ruin") return Experiment::ruin;
  if (name == "penalty") return Experiment::penalty;
  if (name == "moments") return Experiment::moments;
  throw DomainError("unknown experiment '" + name + "' (expected marginal, ruin, penalty or moments)");
}

ConvergenceReport run_marginal_convergence(const ExperimentConfig& config) {
  check_grid(config);
  if (config.paths < 2 || config.reference_paths < 2) throw DomainError("marginal experiment needs >= 2 paths");
  const GouParams params = limit_params(config.loss, config.log_return);
  const bool deterministic = params.is_diffusion() && params.sigma_xi == 0.0 && params.sigma_rho == 0.0;

  ConvergenceReport report = blank_report(Experiment::marginal, config, deterministic ? "closed-form" : "fine-MC");
  std::vector<double> reference;
  if (deterministic) {
    reference.assign(config.reference_paths, first_moment(params, config.y0, 1.0));
  } else {
    reference = terminal_samples(params, reference_scheme(params), config.y0, 1.0, config.reference_step,
                                 config.reference_paths, derived_seed(config.seed, kReferenceTag),
                                 config.workers);
  }
  const double ks_scale = std::sqrt(1.0 / static_cast<double>(config.paths) +
                                    1.0 / static_cast<double>(config.reference_paths));

  for (int n : config.grid) {
    const RescaledScheme scheme(config.loss, config.log_return, n);
    const std::vector<double> samples = terminal_discrete(
        scheme, config.y0, config.paths, derived_seed(config.seed, static_cast<std::uint64_t>(n)), config.workers);
    report.rows.push_back(make_row(n, ks_distance(samples, reference), ks_scale, 0.0, 0.0));
  }

  bool trend = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].estimate > (1.0 + config.slack) * report.rows[i - 1].estimate) trend = false;
  }
  report.pass = trend && report.rows.back().estimate < config.ks_threshold;
  report.allowances = {{"slack", config.slack}, {"ks_threshold", config.ks_threshold}};
  if (!deterministic) {
    report.notes.push_back("reference: " + scheme_name(reference_scheme(params)) + " scheme, h=" +
                           format_number(config.reference_step));
  }
  return report;
}

ConvergenceReport run_ruin_convergence(const ExperimentConfig& config) {
  check_grid(config);
  const int n_max = *std::max_element(config.grid.begin(), config.grid.end());
  ConvergenceReport report;
  double limit = 0.0;
  double limit_se = 0.0;
  double horizon = 0.0;
  double escape = std::numeric_limits<double>::infinity();
  double escape_bias = 0.0;

  if (config.ultimate) {
    horizon = config.horizon.value_or(200.0);
    const GouParams params = diffusion_limit(config, "the ultimate ruin experiment");
    if (params.mu_rho > 0.0) {
      const Condition9Result c9 = check_condition_9(config.log_return, n_max);
      if (!c9.satisfied) {
        throw ConditionGateError("return contraction fails: sup_n E[exp(-2 gamma^(n))]^n is not below 1 (limit " +
                                     format_number(c9.limit) + ")",
                                 condition_table(c9.rows, "a_n"));
      }
    }
    report = blank_report(Experiment::ruin, config, "closed-form");
    const UltimateRuinResult ur = ultimate_ruin(params, config.y0);
    limit = ur.probability;
    report.notes.push_back("ultimate ruin branch: " + ur.branch);
    if (params.mu_rho > 0.0) {
      // Paths far above 0 are stopped as survivors; the bias is bounded by the
      // limit ruin probability from the escape level.
      escape = 100.0 * std::max(1.0, config.y0);
      escape_bias = ultimate_ruin(params, escape).probability;
      while (escape_bias > 1e-7 && escape < 1e12) {
        escape *= 10.0;
        escape_bias = ultimate_ruin(params, escape).probability;
      }
      report.notes.push_back("escape level " + format_number(escape));
    }
  } else {
    horizon = config.horizon.value_or(1.0);
    const GouParams params = limit_params(config.loss, config.log_return);
    report = blank_report(Experiment::ruin, config, "fine-MC");
    EstimateConfig ref{RuinProbability{horizon}, config.reference_paths, config.y0,
                       derived_seed(config.seed, kReferenceTag), config.workers};
    const EstimatorResult r = estimate(params, reference_scheme(params), config.reference_step, ref);
    limit = r.mean;
    limit_se = r.std_error;
  }

  for (int n : config.grid) {
    const RescaledScheme scheme(config.loss, config.log_return, n);
    EstimateConfig ec{RuinProbability{horizon, escape}, config.paths, config.y0,
                      derived_seed(config.seed, static_cast<std::uint64_t>(n)), config.workers};
    const EstimatorResult r = estimate(scheme, ec);
    report.rows.push_back(make_row(n, r.mean, r.std_error, limit, limit_se));
  }
  const ReportRow& last = report.rows.back();
  const double budget =
      3.0 * std::hypot(last.std_error, last.limit_std_error) + config.horizon_allowance + escape_bias;
  report.pass = last.error <= budget;
  report.allowances = {{"horizon", horizon}, {"horizon_allowance", config.horizon_allowance}};
  if (escape_bias > 0.0) report.allowances.emplace_back("escape_bias", escape_bias);
  return report;
}

ConvergenceReport run_penalty_convergence(const ExperimentConfig& config) {
  check_grid(config);
  if (!(config.alpha > 0.0)) throw DomainError("discount rate alpha must be > 0");
  const GouParams params = diffusion_limit(config, "the penalty experiment");
  const double horizon = config.horizon.value_or(std::ceil(std::log(1e4) / config.alpha));
  ConvergenceReport report = blank_report(Experiment::penalty, config, "ODE");
  const PenaltyResult limit = discounted_penalty(params, config.alpha, config.y0);
  if (!limit.solution.uniqueness_guaranteed) {
    report.notes.push_back("mu_rho > 0: uniqueness of the decaying solution is not guaranteed");
  }
  const double truncation = std::exp(-config.alpha * horizon);
  for (int n : config.grid) {
    const RescaledScheme scheme(config.loss, config.log_return, n);
    EstimateConfig ec{DiscountedPenalty{config.alpha, horizon}, config.paths, config.y0,
                      derived_seed(config.seed, static_cast<std::uint64_t>(n)), config.workers};
    const EstimatorResult r = estimate(scheme, ec);
    report.rows.push_back(make_row(n, r.mean, r.std_error, limit.value, 0.0));
  }
  const ReportRow& last = report.rows.back();
  report.pass = last.error < 3.0 * last.std_error + truncation;
  report.allowances = {{"horizon", horizon}, {"truncation", truncation}};
  return report;
}

ConvergenceReport run_moment_convergence(const ExperimentConfig& config) {
  check_grid(config);
  if (config.p < 0 || config.p > 6) throw DomainError("moment order p must lie in [0, 6]");
  const GouParams params = diffusion_limit(config, "the moment experiment");
  const int n_max = *std::max_element(config.grid.begin(), config.grid.end());
  const int q = config.p + 1;
  if (config.p >= 1) {
    const Condition15Result c15 = check_condition_15(config.log_return, q, n_max);
    if (!c15.bounded) {
      throw ConditionGateError("return moment bound sup_n E[exp(q gamma^(n))]^n fails for q = " + std::to_string(q),
                               condition_table(c15.rows, "b_n"));
    }
    if (!central_moment(config.loss, q)) {
      throw ConditionGateError("E|xi|^" + std::to_string(q) + " is infinite for the " +
                                   family_name(config.loss) + " loss law",
                               "");
    }
  }
  ConvergenceReport report = blank_report(Experiment::moments, config, "exact");
  const double limit = moment_recursion(params, config.y0, config.p, 1.0);
  for (int n : config.grid) {
    const RescaledScheme scheme(config.loss, config.log_return, n);
    report.rows.push_back(make_row(n, exact_moment(scheme, config.y0, config.p), 0.0, limit, 0.0));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const double prev = report.rows[i - 1].error;
    const double cur = report.rows[i].error;
    if (!(cur < prev) && !(cur == 0.0 && prev == 0.0)) decreasing = false;
  }
  const double tolerance = 1e-3 * (1.0 + std::abs(limit));
  report.pass = decreasing && report.rows.back().error < tolerance;
  report.allowances = {{"tolerance", tolerance}};
  return report;
}

ConvergenceReport run_experiment(Experiment e, const ExperimentConfig& config) {
  switch (e) {
    case Experiment::marginal:
      return run_marginal_convergence(config);
    case Experiment::ruin:
      return run_ruin_convergence(config);
    case Experiment::penalty:
      return run_penalty_convergence(config);
    case Experiment::moments:
      return run_moment_convergence(config);
  }
  throw DomainError("unknown experiment");
}

}  // namespace ruinlab
