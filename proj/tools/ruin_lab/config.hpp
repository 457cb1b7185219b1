#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ruinlab/distributions.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/gou.hpp"
#include "ruinlab/harness.hpp"

namespace ruinlab::cli {

// Schema violation; the message starts with the JSON path of the offending
// field, e.g. "$.loss.params.alpha".
class SchemaError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class Process { discrete, gou };

struct RunConfig {
  Process process = Process::discrete;
  std::optional<StepLaw> loss;
  std::optional<StepLaw> log_return;
  std::optional<GouParams> gou;
  GouScheme scheme = GouScheme::euler_sde;
  double y0 = 1.0;
  int n = 128;
  double h = 1e-3;
  double T = 1.0;
  double alpha = 0.5;
  int p = 1;
  int q = 2;
  int n_max = 512;
  std::size_t paths = 10000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::optional<std::string> out;
  ExperimentConfig experiment;

  // Canonical JSON of the validated config with defaults filled (worker
  // count and output directory excluded) and its hash.
  std::string canonical;
  std::string hash;
};

RunConfig parse_config(const std::string& text);

// GOU parameters from the "gou" block, else the limit of the two laws.
GouParams limit_of(const RunConfig& config);

}  // namespace ruinlab::cli
