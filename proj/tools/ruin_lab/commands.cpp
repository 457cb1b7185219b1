#include "commands.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "ruinlab/discrete.hpp"
#include "ruinlab/limits.hpp"
#include "ruinlab/rescale.hpp"
#include "ruinlab/version.hpp"

namespace ruinlab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string process;
  std::string experiment;
  unsigned workers = 0;
  bool limit = false;
  int n_max = 0;
  int q = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  out << contents;
}

RunConfig load(const Options& opt) {
  RunConfig c = parse_config(read_file(opt.config_path));
  if (!opt.process.empty()) {
    if (opt.process == "discrete") {
      c.process = Process::discrete;
    } else if (opt.process == "gou") {
      c.process = Process::gou;
    } else {
      throw DomainError("--process must be discrete or gou");
    }
  }
  if (opt.workers > 0) {
    c.workers = opt.workers;
    c.experiment.workers = opt.workers;
  }
  if (!opt.out_dir.empty()) c.out = opt.out_dir;
  return c;
}

std::optional<fs::path> out_dir(const RunConfig& c) {
  if (!c.out) return std::nullopt;
  fs::path dir(*c.out);
  fs::create_directories(dir);
  return dir;
}

json provenance(const RunConfig& c, const std::string& command) {
  return {{"command", command}, {"config_hash", c.hash}, {"seed", c.seed}, {"version", kVersion}};
}

std::string process_name(const RunConfig& c) { return c.process == Process::gou ? "gou" : "discrete"; }

RescaledScheme discrete_scheme(const RunConfig& c) {
  if (!c.loss || !c.log_return) throw SchemaError("$: the discrete process needs \"loss\" and \"return\" laws");
  return RescaledScheme(*c.loss, *c.log_return, c.n);
}

GouScheme gou_scheme(const RunConfig& c, const GouParams& params) {
  return params.is_diffusion() ? c.scheme : GouScheme::stable_euler;
}

json estimator_json(const EstimatorResult& r) {
  return {{"mean", r.mean},       {"stderr", r.std_error},  {"ci_lo", r.ci_lo},
          {"ci_hi", r.ci_hi},     {"n_paths", r.n_paths},   {"seed", r.seed},
          {"truncation_bound", r.truncation_bound}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  std::vector<double> values;
  double step = 0.0;
  RuinOutcome outcome;
  if (c.process == Process::discrete) {
    const SurplusPath path = simulate_path(discrete_scheme(c), c.y0, c.T, {c.seed, 0});
    outcome = ruin_scan(path);
    values = path.values;
    step = 1.0 / c.n;
  } else {
    const GouParams params = limit_of(c);
    const GouScheme scheme = gou_scheme(c, params);
    const GouPath path = scheme == GouScheme::stable_euler ? simulate_stable(params, c.y0, c.T, c.h, {c.seed, 0})
                                                           : simulate_diffusion(params, c.y0, c.T, c.h, scheme, {c.seed, 0});
    outcome = first_passage(path);
    values = path.values;
    step = c.h;
  }
  json j = provenance(c, "simulate");
  j["process"] = process_name(c);
  j["steps"] = values.size() - 1;
  j["final_value"] = values.back();
  j["ruined"] = outcome.ruined;
  j["ruin_time"] = outcome.ruined ? json(outcome.time) : json(nullptr);
  if (const auto dir = out_dir(c)) {
    std::ostringstream csv;
    csv << "k,t,value\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
      csv << k << "," << format_number(static_cast<double>(k) * step) << "," << format_number(values[k]) << "\n";
    }
    write_file(*dir / "path.csv", csv.str());
    j["path_csv"] = (*dir / "path.csv").string();
  }
  emit(out, j);
  return 0;
}

int cmd_ruin(const RunConfig& c, bool limit, std::ostream& out) {
  json j = provenance(c, "ruin");
  if (limit) {
    const UltimateRuinResult r = ultimate_ruin(limit_of(c), c.y0);
    j["probability"] = r.probability;
    j["branch"] = r.branch;
    j["nodes"] = r.nodes;
    j["error_estimate"] = r.error_estimate;
    j["y0"] = c.y0;
    emit(out, j);
    return 0;
  }
  EstimateConfig ec{RuinProbability{c.T}, c.paths, c.y0, c.seed, c.workers};
  EstimatorResult r;
  if (c.process == Process::discrete) {
    r = estimate(discrete_scheme(c), ec);
  } else {
    const GouParams params = limit_of(c);
    r = estimate(params, gou_scheme(c, params), c.h, ec);
  }
  j["process"] = process_name(c);
  j["horizon"] = c.T;
  j["estimate"] = estimator_json(r);
  emit(out, j);
  return 0;
}

int cmd_penalty(const RunConfig& c, std::ostream& out) {
  const PenaltyResult r = discounted_penalty(limit_of(c), c.alpha, c.y0);
  json j = provenance(c, "penalty");
  j["value"] = r.value;
  j["alpha"] = c.alpha;
  j["y0"] = c.y0;
  j["x_max"] = r.solution.x_max;
  j["step"] = r.solution.step;
  j["eta"] = r.solution.eta;
  j["residual_max"] = r.solution.residual_max;
  j["uniqueness_guaranteed"] = r.solution.uniqueness_guaranteed;
  j["metadata"] = json::object();
  if (!r.solution.uniqueness_guaranteed) {
    j["metadata"]["note"] = "uniqueness not guaranteed: mu_rho > 0, the decaying solution may not be unique";
  }
  emit(out, j);
  return 0;
}

int cmd_moments(const RunConfig& c, std::ostream& out) {
  const GouParams params = limit_of(c);
  const MomentPolynomial poly = moment_polynomial(params, c.y0, c.p, std::max(1.0, c.T));
  json j = provenance(c, "moments");
  j["p"] = c.p;
  j["t"] = c.T;
  j["value"] = poly(c.T);
  j["terms"] = poly.terms.size();
  if (c.process == Process::discrete && c.loss && c.log_return && c.T == 1.0) {
    j["exact_moment"] = exact_moment(discrete_scheme(c), c.y0, c.p);
    j["n"] = c.n;
  }
  emit(out, j);
  return 0;
}

void print_table(const ConvergenceReport& r, std::ostream& err) {
  err << r.experiment << " (" << r.limit_method << "): " << r.verdict() << "\n";
  err << std::setw(6) << "n" << std::setw(16) << "estimate" << std::setw(14) << "stderr" << std::setw(16) << "limit"
      << std::setw(14) << "error" << "\n";
  for (const ReportRow& row : r.rows) {
    err << std::setw(6) << row.n << std::setw(16) << row.estimate << std::setw(14) << row.std_error << std::setw(16)
        << row.limit << std::setw(14) << row.error << "\n";
  }
}

int cmd_converge(const RunConfig& c, const std::string& name, std::ostream& out, std::ostream& err) {
  const Experiment e = parse_experiment(name);
  try {
    const ConvergenceReport report = run_experiment(e, c.experiment);
    json j = provenance(c, "converge");
    j["experiment_config_hash"] = report.config_hash;
    j["report"] = json::parse(report_to_json(report));
    if (const auto dir = out_dir(c)) {
      write_file(*dir / "report.csv", report_to_csv(report));
      write_file(*dir / "report.json", report_to_json(report) + "\n");
      write_file(*dir / "report.svg", report_to_svg(report));
    }
    print_table(report, err);
    emit(out, j);
    return 0;
  } catch (const ConditionGateError& gate) {
    err << "refused: " << gate.what() << "\n" << gate.table();
    json j = provenance(c, "converge");
    j["error"] = gate.what();
    j["condition_table"] = gate.table();
    emit(out, j);
    return 2;
  }
}

int cmd_check_conditions(const RunConfig& c, const Options& opt, std::ostream& out, std::ostream& err) {
  if (!c.log_return) throw SchemaError("$.return: check-conditions needs a log-return law");
  const int n_max = opt.n_max > 0 ? opt.n_max : c.n_max;
  const int q = opt.q > 0 ? opt.q : c.q;
  const Condition9Result c9 = check_condition_9(*c.log_return, n_max);
  const Condition15Result c15 = check_condition_15(*c.log_return, q, n_max);
  std::ostringstream csv;
  csv << "n,a_n,b_n,verdict\n";
  for (int n = 1; n <= n_max; ++n) {
    const double a = c9.rows[static_cast<std::size_t>(n - 1)].value;
    const double b = c15.rows[static_cast<std::size_t>(n - 1)].value;
    const char* verdict = a < 1.0 ? (std::isfinite(b) ? "both" : "a_n-only") : (std::isfinite(b) ? "b_n-only" : "neither");
    csv << n << "," << format_number(a) << "," << format_number(b) << "," << verdict << "\n";
  }
  csv << "limit," << format_number(c9.limit) << "," << format_number(c15.limit) << ","
      << (c9.satisfied ? "a_n:satisfied" : "a_n:fails") << (c15.bounded ? " b_n:bounded" : " b_n:unbounded") << "\n";
  out << csv.str();
  if (const auto dir = out_dir(c)) write_file(*dir / "conditions.csv", csv.str());
  err << "contraction a_n = E[exp(-2 gamma^(n))]^n: " << (c9.satisfied ? "satisfied" : "fails") << ", C=" << c9.C << ", n0=" << c9.n0
      << ", limit=" << c9.limit << "\n";
  err << "moment bound b_n = E[exp(q gamma^(n))]^n, q=" << q << ": " << (c15.bounded ? "bounded" : "unbounded") << ", sup=" << c15.sup_estimate
      << ", first admissible n=" << c15.first_admissible_n << ", limit=" << c15.limit << "\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ruin-lab: discrete surplus processes, their GOU limits and ruin functionals"};
  app.name(args.empty() ? "ruin-lab" : args[0]);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory for CSV/JSON/SVG artifacts");
    sub->add_option("--workers", opt.workers, "worker threads (does not change results)")->check(CLI::PositiveNumber);
  };
  CLI::App* simulate = app.add_subcommand("simulate", "simulate one path and scan it for ruin");
  add_common(simulate);
  simulate->add_option("--process", opt.process, "discrete or gou")->check(CLI::IsMember({"discrete", "gou"}));
  CLI::App* ruin = app.add_subcommand("ruin", "Monte Carlo P(tau <= T), or the closed-form P(tau < inf)");
  add_common(ruin);
  ruin->add_option("--process", opt.process, "discrete or gou")->check(CLI::IsMember({"discrete", "gou"}));
  ruin->add_flag("--limit", opt.limit, "ultimate ruin probability of the diffusion limit");
  CLI::App* penalty = app.add_subcommand("penalty", "discounted penalty f(y)/f(0) from the ODE");
  add_common(penalty);
  CLI::App* moments = app.add_subcommand("moments", "moment m_p(t) of the diffusion limit");
  add_common(moments);
  moments->add_option("--process", opt.process, "discrete or gou")->check(CLI::IsMember({"discrete", "gou"}));
  CLI::App* converge = app.add_subcommand("converge", "convergence experiment with report artifacts");
  add_common(converge);
  converge->add_option("--experiment", opt.experiment, "marginal, ruin, penalty or moments")
      ->required()
      ->check(CLI::IsMember({"marginal", "ruin", "penalty", "moments"}));
  CLI::App* check = app.add_subcommand("check-conditions", "tabulate the return conditions a_n and b_n as CSV");
  add_common(check);
  check->add_option("--n-max", opt.n_max, "largest n")->check(CLI::PositiveNumber);
  check->add_option("--q", opt.q, "exponent q >= 2 of the moment bound b_n")->check(CLI::Range(2, 1000));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig c = load(opt);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (ruin->parsed()) return cmd_ruin(c, opt.limit, out);
    if (penalty->parsed()) return cmd_penalty(c, out);
    if (moments->parsed()) return cmd_moments(c, out);
    if (converge->parsed()) return cmd_converge(c, opt.experiment, out, err);
    if (check->parsed()) return cmd_check_conditions(c, opt, out, err);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace ruinlab::cli
