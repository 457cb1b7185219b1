#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ruinlab/harness.hpp"

namespace ruinlab {

namespace {

using nlohmann::json;

json law_json(const StepLaw& law) {
  json j = std::visit(
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
  return {{"family", family_name(law)}, {"params", j}};
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

const char* const kCsvHeader = "n,estimate,stderr,limit,error,limit_stderr";

double parse_number(const std::string& text) {
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw DomainError("malformed number '" + text + "' in report CSV");
  return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string canonical_config(Experiment e, const ExperimentConfig& c) {
  json j = {{"experiment", experiment_name(e)},
            {"loss", law_json(c.loss)},
            {"return", law_json(c.log_return)},
            {"y0", c.y0},
            {"grid", c.grid},
            {"seed", c.seed}};
  switch (e) {
    case Experiment::marginal:
      j["paths"] = c.paths;
      j["reference_paths"] = c.reference_paths;
      j["reference_step"] = c.reference_step;
      j["slack"] = c.slack;
      j["ks_threshold"] = c.ks_threshold;
      break;
    case Experiment::ruin:
      j["paths"] = c.paths;
      j["ultimate"] = c.ultimate;
      j["horizon"] = optional_number(c.horizon);
      j["horizon_allowance"] = c.horizon_allowance;
      if (!c.ultimate) {
        j["reference_paths"] = c.reference_paths;
        j["reference_step"] = c.reference_step;
      }
      break;
    case Experiment::penalty:
      j["paths"] = c.paths;
      j["alpha"] = c.alpha;
      j["horizon"] = optional_number(c.horizon);
      break;
    case Experiment::moments:
      j["p"] = c.p;
      break;
  }
  return j.dump();
}

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string report_to_csv(const ConvergenceReport& r) {
  std::ostringstream out;
  out << "# experiment=" << r.experiment << "\n";
  out << "# limit_method=" << r.limit_method << "\n";
  out << "# verdict=" << r.verdict() << "\n";
  out << "# seed=" << r.seed << "\n";
  out << "# config_hash=" << r.config_hash << "\n";
  for (const auto& [name, value] : r.allowances) out << "# allowance." << name << "=" << format_number(value) << "\n";
  for (const auto& note : r.notes) out << "# note=" << note << "\n";
  out << kCsvHeader << "\n";
  for (const ReportRow& row : r.rows) {
    out << row.n << "," << format_number(row.estimate) << "," << format_number(row.std_error) << ","
        << format_number(row.limit) << "," << format_number(row.error) << ","
        << format_number(row.limit_std_error) << "\n";
  }
  return out.str();
}

ConvergenceReport report_from_csv(const std::string& text) {
  ConvergenceReport r;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const std::string body = line.substr(2);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw DomainError("malformed report metadata line: " + line);
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "experiment") {
        r.experiment = value;
      } else if (key == "limit_method") {
        r.limit_method = value;
      } else if (key == "verdict") {
        r.pass = value == "PASS";
      } else if (key == "seed") {
        r.seed = std::stoull(value);
      } else if (key == "config_hash") {
        r.config_hash = value;
      } else if (key.rfind("allowance.", 0) == 0) {
        r.allowances.emplace_back(key.substr(10), parse_number(value));
      } else if (key == "note") {
        r.notes.push_back(value);
      } else {
        throw DomainError("unknown report metadata key '" + key + "'");
      }
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) throw DomainError("unexpected report CSV header: " + line);
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 6) throw DomainError("report CSV row needs 6 fields: " + line);
    r.rows.push_back({std::stoi(fields[0]), parse_number(fields[1]), parse_number(fields[2]),
                      parse_number(fields[3]), parse_number(fields[4]), parse_number(fields[5])});
  }
  if (!header_seen) throw DomainError("report CSV has no header row");
  return r;
}

std::string report_to_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const ReportRow& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"estimate", row.estimate},
                    {"stderr", row.std_error},
                    {"limit", row.limit},
                    {"error", row.error},
                    {"limit_stderr", row.limit_std_error}});
  }
  json allowances = json::object();
  for (const auto& [name, value] : r.allowances) allowances[name] = value;
  const json j = {{"experiment", r.experiment}, {"limit_method", r.limit_method}, {"verdict", r.verdict()},
                  {"seed", r.seed},             {"config_hash", r.config_hash},   {"allowances", allowances},
                  {"notes", r.notes},           {"rows", rows}};
  return j.dump(2);
}

std::string report_to_svg(const ConvergenceReport& r) {
  constexpr double width = 480.0;
  constexpr double height = 320.0;
  constexpr double left = 60.0;
  constexpr double right = 20.0;
  constexpr double top = 30.0;
  constexpr double bottom = 40.0;

  std::vector<std::pair<double, double>> pts;
  for (const ReportRow& row : r.rows) {
    if (row.error > 0.0 && std::isfinite(row.error) && row.n > 0) {
      pts.emplace_back(std::log10(static_cast<double>(row.n)), std::log10(row.error));
    }
  }
  double x0 = 0.0, x1 = 1.0, y0 = -1.0, y1 = 0.0;
  if (!pts.empty()) {
    x0 = x1 = pts.front().first;
    y0 = y1 = pts.front().second;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
    if (y1 <= y0) y1 = y0 + 1.0;
    if (x1 <= x0) {
      x0 -= 0.5;
      x1 += 0.5;
    }
  }
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  auto py = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"18\">" << r.experiment << " (" << r.verdict()
      << "): |estimate - limit| vs n</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  for (const ReportRow& row : r.rows) {
    if (row.n <= 0) continue;
    const double x = px(std::log10(static_cast<double>(row.n)));
    out << "<text x=\"" << x << "\" y=\"" << height - bottom + 15 << "\" text-anchor=\"middle\">" << row.n
        << "</text>\n";
  }
  for (double d = y0; d <= y1 + 1e-9; d += 1.0) {
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << d
        << "</text>\n";
  }
  if (!pts.empty()) {
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    for (const auto& [x, y] : pts) {
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\">n (log scale)</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace ruinlab
