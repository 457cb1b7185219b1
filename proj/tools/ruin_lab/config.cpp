#include "config.hpp"

#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace ruinlab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SchemaError(path + ": " + message);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key)) continue;
    std::string message = "unknown key '" + key + "'";
    if (key == "sigma" || key == "sigma2" || key == "σ") message += "; σ is spelled sigma_xi / sigma_rho";
    fail(path + "." + key, message);
  }
}

const json& object_at(const json& parent, const std::string& key, const std::string& path) {
  const json& v = parent.at(key);
  if (!v.is_object()) fail(path + "." + key, "expected an object");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double required_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "required field is missing");
  return number(obj, key, path, 0.0);
}

long long integer(const json& obj, const std::string& key, const std::string& path, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<long long>(d))) return static_cast<long long>(d);
  }
  fail(path + "." + key, "expected an integer");
}

long long positive_integer(const json& obj, const std::string& key, const std::string& path, long long fallback) {
  const long long v = integer(obj, key, path, fallback);
  if (v < 1) fail(path + "." + key, "must be >= 1");
  return v;
}

std::string text(const json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

StepLaw parse_law(const json& obj, const std::string& path, LawRole role) {
  reject_unknown(obj, path, {"family", "params", "role"});
  if (obj.contains("role")) {
    const std::string expected = role == LawRole::loss ? "loss" : "logreturn";
    if (text(obj, "role", path, expected) != expected) fail(path + ".role", "expected \"" + expected + "\"");
  }
  if (!obj.contains("family")) fail(path + ".family", "required field is missing");
  const std::string family = text(obj, "family", path, "");
  const json empty = json::object();
  const json& params = obj.contains("params") ? object_at(obj, "params", path) : empty;
  const std::string pp = path + ".params";
  StepLaw law;
  law.role = role;
  if (family == "negpareto") {
    reject_unknown(params, pp, {"alpha"});
    law.family = NegPareto{required_number(params, "alpha", pp)};
  } else if (family == "normal") {
    reject_unknown(params, pp, {"mean", "variance"});
    law.family = Normal{required_number(params, "mean", pp), required_number(params, "variance", pp)};
  } else if (family == "nig") {
    reject_unknown(params, pp, {"alpha", "beta", "delta", "mu"});
    law.family = Nig{required_number(params, "alpha", pp), required_number(params, "beta", pp),
                     required_number(params, "delta", pp), required_number(params, "mu", pp)};
  } else if (family == "stable") {
    reject_unknown(params, pp, {"alpha", "beta"});
    law.family = Stable{required_number(params, "alpha", pp), number(params, "beta", pp, 0.0)};
  } else if (family == "degenerate") {
    reject_unknown(params, pp, {"value"});
    law.family = Degenerate{required_number(params, "value", pp)};
  } else {
    fail(path + ".family", "unknown family '" + family + "' (expected negpareto, normal, nig, stable or degenerate)");
  }
  try {
    validate(law);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  return law;
}

StableDriver parse_driver(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"alpha", "skew", "c"});
  return {required_number(obj, "alpha", path), number(obj, "skew", path, 0.0), number(obj, "c", path, 1.0)};
}

GouParams parse_gou(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"mu_xi", "sigma_xi", "mu_rho", "sigma_rho", "loss_driver", "return_driver"});
  GouParams g;
  g.mu_xi = number(obj, "mu_xi", path, 0.0);
  g.sigma_xi = number(obj, "sigma_xi", path, 0.0);
  g.mu_rho = number(obj, "mu_rho", path, 0.0);
  g.sigma_rho = number(obj, "sigma_rho", path, 0.0);
  if (obj.contains("loss_driver")) g.loss_driver = parse_driver(object_at(obj, "loss_driver", path), path + ".loss_driver");
  if (obj.contains("return_driver")) {
    g.return_driver = parse_driver(object_at(obj, "return_driver", path), path + ".return_driver");
  }
  try {
    validate(g);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  return g;
}

json law_json(const StepLaw& law) {
  json params = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NegPareto>) {
          return {{"alpha", f.alpha}};
        } else if constexpr (std::is_same_v<T, Normal>) {
          return {{"mean", f.mean}, {"variance", f.variance}};
        } else if constexpr (std::is_same_v<T, Nig>) {
          return {{"alpha", f.alpha}, {"beta", f.beta}, {"delta", f.delta}, {"mu", f.mu}};
        } else if constexpr (std::is_same_v<T, Stable>) {
          return {{"alpha", f.alpha}, {"beta", f.beta}};
        } else {
          return {{"value", f.value}};
        }
      },
      law.family);
  return {{"family", family_name(law)}, {"params", params}};
}

json driver_json(const StableDriver& d) { return {{"alpha", d.alpha}, {"skew", d.skew}, {"c", d.c}}; }

json canonical_json(const RunConfig& c) {
  json j = {{"process", c.process == Process::gou ? "gou" : "discrete"},
            {"scheme", scheme_name(c.scheme)},
            {"y0", c.y0},
            {"n", c.n},
            {"h", c.h},
            {"T", c.T},
            {"alpha", c.alpha},
            {"p", c.p},
            {"q", c.q},
            {"n_max", c.n_max},
            {"paths", c.paths},
            {"seed", c.seed}};
  j["loss"] = c.loss ? law_json(*c.loss) : json(nullptr);
  j["return"] = c.log_return ? law_json(*c.log_return) : json(nullptr);
  if (c.gou) {
    json g = {{"mu_xi", c.gou->mu_xi},
              {"sigma_xi", c.gou->sigma_xi},
              {"mu_rho", c.gou->mu_rho},
              {"sigma_rho", c.gou->sigma_rho}};
    if (c.gou->loss_driver) g["loss_driver"] = driver_json(*c.gou->loss_driver);
    if (c.gou->return_driver) g["return_driver"] = driver_json(*c.gou->return_driver);
    j["gou"] = g;
  } else {
    j["gou"] = nullptr;
  }
  const ExperimentConfig& e = c.experiment;
  j["experiment"] = {{"grid", e.grid},
                     {"reference_paths", e.reference_paths},
                     {"reference_step", e.reference_step},
                     {"horizon", e.horizon ? json(*e.horizon) : json(nullptr)},
                     {"ultimate", e.ultimate},
                     {"slack", e.slack},
                     {"ks_threshold", e.ks_threshold},
                     {"horizon_allowance", e.horizon_allowance}};
  return j;
}

}  // namespace

RunConfig parse_config(const std::string& input) {
  json root;
  try {
    root = json::parse(input);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("$: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("$", "expected a JSON object");
  reject_unknown(root, "$", {"process", "loss", "return", "gou", "scheme", "y0", "n", "h", "T", "alpha", "p", "q",
                             "n_max", "paths", "seed", "workers", "out", "experiment"});

  RunConfig c;
  const std::string process = text(root, "process", "$", "discrete");
  if (process == "discrete") {
    c.process = Process::discrete;
  } else if (process == "gou") {
    c.process = Process::gou;
  } else {
    fail("$.process", "expected \"discrete\" or \"gou\"");
  }
  if (root.contains("loss")) c.loss = parse_law(object_at(root, "loss", "$"), "$.loss", LawRole::loss);
  if (root.contains("return")) {
    c.log_return = parse_law(object_at(root, "return", "$"), "$.return", LawRole::log_return);
  }
  if (root.contains("gou")) c.gou = parse_gou(object_at(root, "gou", "$"), "$.gou");
  try {
    c.scheme = parse_scheme(text(root, "scheme", "$", "euler-sde"));
  } catch (const DomainError& e) {
    fail("$.scheme", e.what());
  }

  c.y0 = number(root, "y0", "$", c.y0);
  if (!(c.y0 >= 0.0)) fail("$.y0", "initial capital must be >= 0");
  c.n = static_cast<int>(positive_integer(root, "n", "$", c.n));
  c.h = number(root, "h", "$", c.h);
  if (!(c.h > 0.0)) fail("$.h", "time step must be > 0");
  c.T = number(root, "T", "$", c.T);
  if (!(c.T > 0.0)) fail("$.T", "horizon must be > 0");
  c.alpha = number(root, "alpha", "$", c.alpha);
  if (!(c.alpha > 0.0)) fail("$.alpha", "discount rate must be > 0");
  c.p = static_cast<int>(integer(root, "p", "$", c.p));
  if (c.p < 0 || c.p > 6) fail("$.p", "moment order must lie in [0, 6]");
  c.q = static_cast<int>(integer(root, "q", "$", c.q));
  if (c.q < 2) fail("$.q", "the moment bound needs q >= 2");
  c.n_max = static_cast<int>(positive_integer(root, "n_max", "$", c.n_max));
  c.paths = static_cast<std::size_t>(positive_integer(root, "paths", "$", static_cast<long long>(c.paths)));
  if (c.paths < 100) fail("$.paths", "at least 100 paths are required");
  const long long seed = integer(root, "seed", "$", static_cast<long long>(c.seed));
  if (seed < 0) fail("$.seed", "seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.workers = static_cast<unsigned>(positive_integer(root, "workers", "$", c.workers));
  if (root.contains("out")) c.out = text(root, "out", "$", "");

  ExperimentConfig& e = c.experiment;
  if (root.contains("experiment")) {
    const json& ex = object_at(root, "experiment", "$");
    const std::string path = "$.experiment";
    reject_unknown(ex, path, {"grid", "reference_paths", "reference_step", "horizon", "ultimate", "slack",
                              "ks_threshold", "horizon_allowance"});
    if (ex.contains("grid")) {
      const json& g = ex.at("grid");
      if (!g.is_array() || g.empty()) fail(path + ".grid", "expected a nonempty array of integers");
      e.grid.clear();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g[i].is_number_integer() || g[i].get<long long>() < 1) {
          fail(path + ".grid[" + std::to_string(i) + "]", "expected an integer >= 1");
        }
        e.grid.push_back(g[i].get<int>());
      }
    }
    e.reference_paths =
        static_cast<std::size_t>(positive_integer(ex, "reference_paths", path, static_cast<long long>(e.reference_paths)));
    e.reference_step = number(ex, "reference_step", path, e.reference_step);
    if (!(e.reference_step > 0.0)) fail(path + ".reference_step", "must be > 0");
    if (ex.contains("horizon")) {
      e.horizon = number(ex, "horizon", path, 0.0);
      if (!(*e.horizon > 0.0)) fail(path + ".horizon", "must be > 0");
    }
    if (ex.contains("ultimate")) {
      if (!ex.at("ultimate").is_boolean()) fail(path + ".ultimate", "expected a boolean");
      e.ultimate = ex.at("ultimate").get<bool>();
    }
    e.slack = number(ex, "slack", path, e.slack);
    e.ks_threshold = number(ex, "ks_threshold", path, e.ks_threshold);
    e.horizon_allowance = number(ex, "horizon_allowance", path, e.horizon_allowance);
  }
  if (c.loss) e.loss = *c.loss;
  if (c.log_return) e.log_return = *c.log_return;
  e.y0 = c.y0;
  e.paths = c.paths;
  e.alpha = c.alpha;
  e.p = c.p;
  e.seed = c.seed;
  e.workers = c.workers;

  c.canonical = canonical_json(c).dump();
  c.hash = config_hash(c.canonical);
  return c;
}

GouParams limit_of(const RunConfig& config) {
  if (config.gou) return *config.gou;
  if (!config.loss || !config.log_return) {
    throw SchemaError("$: a \"gou\" block or both \"loss\" and \"return\" laws are required");
  }
  return limit_params(*config.loss, *config.log_return);
}

}  // namespace ruinlab::cli
