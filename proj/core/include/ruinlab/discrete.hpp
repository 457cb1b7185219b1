#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ruinlab/montecarlo.hpp"
#include "ruinlab/rescale.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

// theta^(n)(k/n) for k = 0..floor(nT).
struct SurplusPath {
  int n = 1;
  double horizon = 0.0;
  double y0 = 0.0;
  std::vector<double> values;

  double time_at(std::size_t k) const { return static_cast<double>(k) / n; }
};

// Ruin is the first grid time with a strictly negative value; a path that
// only touches 0 is not ruined. Censored outcomes carry time = horizon.
struct RuinOutcome {
  bool ruined = false;
  double time = 0.0;
  std::size_t index = 0;
};

// Number of grid steps floor(n * horizon), tolerant to representation error
// in n * horizon.
std::size_t grid_steps(int n, double horizon);

// theta_k = xi_k + theta_{k-1} rho_k with steps drawn from the scheme.
SurplusPath simulate_path(const RescaledScheme& scheme, double y0, double horizon, StreamKey key);

// The same recursion on caller-supplied steps (n only sets the time grid).
SurplusPath path_from_steps(double y0, int n, std::span<const double> xi, std::span<const double> rho);

// y0 * prod rho_i + sum_i xi_i prod_{j > i} rho_j, evaluated independently of
// the recursion.
double explicit_solution(double y0, std::span<const double> xi, std::span<const double> rho);

RuinOutcome ruin_scan(const SurplusPath& path);
RuinOutcome ruin_scan(std::span<const double> values, double step, double horizon);

// Monte Carlo estimate over independent paths, one stream per path
// (stream_id = path index).
EstimatorResult estimate(const RescaledScheme& scheme, const EstimateConfig& config);

// E[(theta^(n)_1)^p] by the exact moment recursion
//   E[theta_k^p] = sum_j C(p,j) E[xi^(p-j)] E[rho^j] E[theta_{k-1}^j]
// iterated n times. p <= 6.
double exact_moment(const RescaledScheme& scheme, double y0, int p);

}  // namespace ruinlab
