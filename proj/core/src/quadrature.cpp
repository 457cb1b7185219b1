#include "ruinlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

constexpr int kGradedCells = 60;

GaussLegendreRule build_rule(int order) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double graded_sum(const std::function<double(double)>& f, double a, double b, int panels,
                  const GaussLegendreRule& rule, std::size_t& evaluations) {
  double total = 0.0;
  double hi = b;
  for (int cell = 0; cell <= kGradedCells; ++cell) {
    const double lo = cell == kGradedCells ? a : a + (b - a) * std::ldexp(1.0, -(cell + 1));
    const double width = (hi - lo) / panels;
    for (int j = 0; j < panels; ++j) {
      total += integrate_panel(f, lo + j * width, lo + (j + 1) * width, rule);
    }
    evaluations += static_cast<std::size_t>(panels) * rule.nodes.size();
    hi = lo;
  }
  return total;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1 || order > 200) throw DomainError("Gauss-Legendre order must lie in [1, 200]");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double integrate_panel(const std::function<double(double)>& f, double a, double b,
                       const GaussLegendreRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

QuadratureResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& options) {
  if (!(b >= a)) throw DomainError("integration bounds must satisfy a <= b");
  if (options.min_panels < 1 || options.max_panels < options.min_panels) {
    throw DomainError("quadrature panel counts must satisfy 1 <= min_panels <= max_panels");
  }
  QuadratureResult result;
  if (b == a) {
    result.converged = true;
    result.panels = options.min_panels;
    return result;
  }
  const GaussLegendreRule& rule = gauss_legendre(options.order);
  int panels = options.min_panels;
  double previous = graded_sum(f, a, b, panels, rule, result.evaluations);
  while (panels < options.max_panels) {
    panels *= 2;
    const double current = graded_sum(f, a, b, panels, rule, result.evaluations);
    result.error_estimate = std::abs(current - previous);
    result.value = current;
    result.panels = panels;
    if (result.error_estimate <= options.tolerance * std::abs(current)) {
      result.converged = true;
      return result;
    }
    previous = current;
  }
  return result;
}

}  // namespace ruinlab
