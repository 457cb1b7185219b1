#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ruinlab {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes from Newton iteration on P_order; rules are cached per order.
const GaussLegendreRule& gauss_legendre(int order);

double integrate_panel(const std::function<double(double)>& f, double a, double b,
                       const GaussLegendreRule& rule);

struct QuadratureOptions {
  int order = 20;
  int min_panels = 1;   // uniform subpanels per graded cell at the first level
  int max_panels = 256;
  double tolerance = 1e-10;  // relative change between successive levels
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  int panels = 0;
  bool converged = false;
};

// Composite Gauss-Legendre on [a, b] with cells graded geometrically toward a
// (widths (b-a)/2, (b-a)/4, ...). Each cell is split into `panels` uniform
// pieces; panels double until two successive values agree to the tolerance.
QuadratureResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& options = {});

}  // namespace ruinlab
