// Acceptance suite. Runs one criterion (--criterion N) or all of them and
// prints one PASS/FAIL line per criterion; the exit code is nonzero when any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ruinlab/discrete.hpp"
#include "ruinlab/distributions.hpp"
#include "ruinlab/gou.hpp"
#include "ruinlab/harness.hpp"
#include "ruinlab/limits.hpp"
#include "ruinlab/rescale.hpp"

namespace {

using namespace ruinlab;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

StepLaw loss(Family f) { return StepLaw{f, LawRole::loss}; }
StepLaw ret(Family f) { return StepLaw{f, LawRole::log_return}; }

GouParams diffusion(double mu_xi, double sigma_xi, double mu_rho, double sigma_rho) {
  GouParams p;
  p.mu_xi = mu_xi;
  p.sigma_xi = sigma_xi;
  p.mu_rho = mu_rho;
  p.sigma_rho = sigma_rho;
  return p;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// Recursion against the product-sum solution on random 50-step instances.
void exactness(Outcome& o) {
  const RescaledScheme scheme(loss(NegPareto{3.0}), ret(Nig{2.0, 0.0, 1.0, 0.1}), 50);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Stream s({20240101, i});
    const double y0 = 10.0 * s.next_uniform();
    std::vector<double> xi(50), rho(50);
    for (int k = 0; k < 50; ++k) {
      const Step step = scheme.draw(s);
      xi[k] = step.xi;
      rho[k] = step.rho;
    }
    const double rec = path_from_steps(y0, 50, xi, rho).values.back();
    const double expl = explicit_solution(y0, xi, rho);
    worst = std::max(worst, std::abs(rec - expl) / std::abs(rec));
  }
  o.detail << "max relative gap " << num(worst) << " over 1000 instances";
  o.check(worst < 1e-12, "relative gap >= 1e-12");
}

void moment_chain(Outcome& o) {
  ExperimentConfig cfg;
  cfg.loss = loss(Normal{0.5, 1.0});
  cfg.log_return = ret(Normal{0.1, 0.04});
  for (int p = 1; p <= 3; ++p) {
    cfg.p = p;
    const ConvergenceReport r = run_moment_convergence(cfg);
    bool decreasing = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) decreasing = decreasing && r.rows[i].error < r.rows[i - 1].error;
    const ReportRow& last = r.rows.back();
    const double rel = last.error / std::abs(last.limit);
    o.detail << " p=" << p << ": m=" << num(last.limit) << " rel.err@512=" << num(rel);
    o.check(decreasing, "errors not strictly decreasing for p=" + std::to_string(p));
    o.check(rel < 1e-3, "final relative error for p=" + std::to_string(p));
    o.check(r.pass, "report verdict for p=" + std::to_string(p));
  }
}

void penalty_triangle(Outcome& o) {
  const GouParams p = diffusion(1.0, 1.0, -0.05, 0.3);
  const double alpha = 0.5, y = 1.0;
  const PenaltySolution one = solve_penalty_ode(p, alpha);
  const PenaltySolution two = solve_penalty_ode(p, alpha, std::nullopt, std::nullopt, 2.0);
  double ratio_gap = 0.0;
  for (std::size_t i = 0; i < one.f.size(); ++i) ratio_gap = std::max(ratio_gap, std::abs(two.f[i] / one.f[i] - 2.0));
  const double ode = one.value(y);

  const double horizon = 19.0;  // exp(-alpha T) = 7.5e-5
  const EstimateConfig cfg{DiscountedPenalty{alpha, horizon}, 100000, y, 3, 1};
  const EstimatorResult mc = estimate(p, GouScheme::euler_sde, 1e-3, cfg);
  const double gap = std::abs(mc.mean - ode);
  o.detail << "ODE " << num(ode) << " (residual " << num(one.residual_max) << ", seed ratio gap " << num(ratio_gap)
           << "); MC " << num(mc.mean) << " +- " << num(mc.std_error) << ", |diff| " << num(gap)
           << ", censoring bound " << num(mc.truncation_bound);
  o.check(one.residual_max <= 1e-6, "ODE residual");
  o.check(ratio_gap <= 1e-8, "linearity");
  o.check(mc.truncation_bound < 1e-4, "horizon");
  o.check(gap <= 3.0 * mc.std_error + mc.truncation_bound, "MC vs ODE");
}

void ultimate(Outcome& o) {
  ExperimentConfig cfg;
  cfg.loss = loss(Normal{0.5, 1.0});
  cfg.log_return = ret(Normal{0.5, 0.25});
  cfg.ultimate = true;
  cfg.grid = {512};
  cfg.horizon = 200.0;
  cfg.paths = 100000;
  cfg.seed = 4;

  const GouParams params = limit_params(cfg.loss, cfg.log_return);
  const double base = ultimate_ruin(params, cfg.y0).probability;
  double refine = 0.0;
  for (int panels : {2, 4}) {
    QuadratureOptions q;
    q.min_panels = panels;
    refine = std::max(refine, std::abs(ultimate_ruin(params, cfg.y0, q).probability - base));
  }
  const ConvergenceReport r = run_ruin_convergence(cfg);
  const ReportRow& row = r.rows.back();
  o.detail << "psi(1)=" << num(base) << " (refinement change " << num(refine) << "), discrete n=512 T=200: "
           << num(row.estimate) << " +- " << num(row.std_error);
  o.check(refine < 1e-8, "refinement stability");
  o.check(row.error < 3.0 * row.std_error + 0.02 + 1e-7, "discrete vs quadrature");

  ExperimentConfig neg = cfg;
  neg.loss = loss(Normal{0.2, 1.0});
  neg.log_return = ret(Normal{-0.5, 0.25});
  neg.paths = 10000;
  const ConvergenceReport rn = run_ruin_convergence(neg);
  o.detail << "; mu_rho<=0: " << num(rn.rows.back().estimate);
  o.check(rn.rows.back().estimate > 0.99, "mu_rho <= 0 branch");
}

void marginal(Outcome& o) {
  ExperimentConfig ex2;
  ex2.loss = loss(NegPareto{3.0});
  ex2.log_return = ret(Nig{2.0, 0.0, 1.0, 0.1});
  const ConvergenceReport r2 = run_marginal_convergence(ex2);
  o.detail << "Pareto/NIG KS:";
  for (const auto& row : r2.rows) o.detail << " " << num(row.estimate);
  o.check(r2.pass, "Pareto/NIG trend or threshold");

  ExperimentConfig ex1;
  ex1.loss = loss(NegPareto{1.5});
  ex1.log_return = ret(Stable{1.5, 0.0});
  ex1.slack = 0.3;
  const ConvergenceReport r1 = run_marginal_convergence(ex1);
  o.detail << "; Pareto/stable KS:";
  for (const auto& row : r1.rows) o.detail << " " << num(row.estimate);
  o.check(r1.pass, "Pareto/stable trend or threshold");
}

void conditions(Outcome& o) {
  int normal_match = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double mu = -0.1 + 0.05 * i;
      const double s2 = 0.01 + 0.04 * j;
      const bool verdict = check_condition_9(ret(Normal{mu, s2}), 256).satisfied;
      normal_match += verdict == (mu > s2);
    }
  }
  int nig_match = 0;
  Stream s({66, 0});
  for (int i = 0; i < 50; ++i) {
    const double a = 1.0 + 3.0 * s.next_uniform();
    const double b = a * (1.6 * s.next_uniform() - 0.8);
    const double d = 0.1 + 0.9 * s.next_uniform();
    const double m = -0.5 + 1.0 * s.next_uniform();
    const double lambda = std::sqrt(a * a - b * b);
    const bool inequality = m + (d * b * lambda * lambda - d * a * a) / std::pow(lambda, 3) > 0.0;
    nig_match += check_condition_9(ret(Nig{a, b, d, m}), 256).satisfied == inequality;
  }
  o.detail << "Normal sweep " << normal_match << "/100, NIG sweep " << nig_match << "/50";
  o.check(normal_match == 100, "Normal sweep");
  o.check(nig_match == 50, "NIG sweep");
}

void distribution_layer(Outcome& o) {
  const int n = 100000;
  int checks = 0;
  auto draws = [&](const StepLaw& law, std::uint64_t seed) {
    Stream st({seed, 0});
    std::vector<double> x(n);
    for (auto& v : x) v = sample(law, st);
    return x;
  };

  const std::vector<StepLaw> laws{loss(NegPareto{3.0}), loss(NegPareto{5.0}), loss(Normal{-0.3, 2.0}),
                                  ret(Nig{2.0, 0.0, 1.0, 0.0}), ret(Nig{2.0, 0.0, 1.0, 0.1}),
                                  ret(Nig{3.0, 1.0, 0.5, -0.2})};
  std::uint64_t seed = 700;
  for (const StepLaw& law : laws) {
    const auto x = draws(law, ++seed);
    double m = 0.0;
    for (double v : x) m += v;
    m /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
      m2 += (v - m) * (v - m);
      m4 += std::pow(v - m, 4);
    }
    m2 /= n;
    m4 /= n;
    o.check(std::abs(m - mean(law)) <= 4.0 * std::sqrt(m2 / n), family_name(law) + " mean");
    ++checks;
    if (central_moment(law, 4)) {
      o.check(std::abs(m2 - variance(law)) <= 4.0 * std::sqrt((m4 - m2 * m2) / n), family_name(law) + " variance");
      ++checks;
    }
  }

  for (double alpha : {1.5, 3.0}) {
    const auto x = draws(loss(NegPareto{alpha}), ++seed);
    for (double t : {2.0, 5.0, 10.0}) {
      int hits = 0;
      for (double v : x) hits += v <= -t;
      const double p = std::pow(t, -alpha);
      o.check(std::abs(static_cast<double>(hits) / n - p) <= 3.0 * std::sqrt(p * (1.0 - p) / n),
              "Pareto tail at " + num(t));
      ++checks;
    }
  }

  for (const Stable st : {Stable{1.5, 1.0}, Stable{1.5, 0.0}, Stable{1.8, -0.5}}) {
    const auto x = draws(StepLaw{st}, ++seed);
    for (double u : {0.5, 1.0, 2.0}) {
      const double ua = std::pow(u, st.alpha);
      const std::complex<double> cf =
          std::exp(std::complex<double>(-ua, ua * st.beta * std::tan(std::numbers::pi * st.alpha / 2.0)));
      double c = 0, c2 = 0, sn = 0, s2 = 0;
      for (double v : x) {
        c += std::cos(u * v);
        c2 += std::cos(u * v) * std::cos(u * v);
        sn += std::sin(u * v);
        s2 += std::sin(u * v) * std::sin(u * v);
      }
      c /= n;
      sn /= n;
      o.check(std::abs(c - cf.real()) <= 3.0 * std::sqrt((c2 / n - c * c) / n), "stable cf real at u=" + num(u));
      o.check(std::abs(sn - cf.imag()) <= 3.0 * std::sqrt((s2 / n - sn * sn) / n), "stable cf imag at u=" + num(u));
      checks += 2;
    }
  }
  o.detail << checks << " seeded checks";
}

void reproducibility(Outcome& o) {
  ExperimentConfig cfg;
  cfg.loss = loss(Normal{0.5, 1.0});
  cfg.log_return = ret(Normal{-0.05, 0.09});
  cfg.grid = {8, 32};
  cfg.paths = 2000;
  cfg.reference_paths = 2000;
  cfg.reference_step = 1e-2;
  cfg.horizon = 2.0;
  int identical = 0, total = 0;
  for (Experiment e : {Experiment::marginal, Experiment::ruin, Experiment::penalty, Experiment::moments}) {
    std::vector<std::string> runs;
    for (unsigned workers : {1u, 1u, 4u}) {
      cfg.workers = workers;
      const ConvergenceReport r = run_experiment(e, cfg);
      runs.push_back(report_to_csv(r) + report_to_json(r) + report_to_svg(r));
    }
    for (std::size_t i = 1; i < runs.size(); ++i) {
      ++total;
      identical += runs[i] == runs[0];
    }
  }
  o.detail << identical << "/" << total << " re-runs byte-identical (workers 1, 1, 4)";
  o.check(identical == total, "reports differ");
}

struct Criterion {
  const char* name;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {"recursion vs explicit solution", exactness},
      {"moment identity chain", moment_chain},
      {"penalty: ODE vs Monte Carlo", penalty_triangle},
      {"ultimate ruin", ultimate},
      {"marginal weak convergence", marginal},
      {"condition checkers", conditions},
      {"distribution layer", distribution_layer},
      {"reproducibility", reproducibility},
  };
  return list;
}

bool run_one(int index) {
  const Criterion& c = criteria()[static_cast<std::size_t>(index - 1)];
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("AC%d %s  %s: %s (%.1f s)\n", index, o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str(), secs);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) selected.push_back(i);
  }
  bool all = true;
  for (int index : selected) {
    if (index < 1 || index > static_cast<int>(criteria().size())) {
      std::fprintf(stderr, "no criterion %d\n", index);
      return 2;
    }
    all = run_one(index) && all;
  }
  return all ? 0 : 1;
}
