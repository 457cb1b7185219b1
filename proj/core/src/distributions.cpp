#include "ruinlab/distributions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxMomentOrder = 8;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double nig_lambda(const Nig& nig) {
  return std::sqrt(nig.alpha * nig.alpha - nig.beta * nig.beta);
}

void validate_nig(const Nig& nig) {
  if (!(nig.delta > 0.0) || !std::isfinite(nig.delta)) {
    throw DomainError("NIG requires delta > 0 (got delta=" + fmt(nig.delta) + ")");
  }
  if (!std::isfinite(nig.alpha) || !std::isfinite(nig.beta) || !std::isfinite(nig.mu) ||
      !(std::abs(nig.beta) < nig.alpha)) {
    throw DomainError("NIG requires 0 <= |beta| < alpha (got alpha=" + fmt(nig.alpha) +
                      ", beta=" + fmt(nig.beta) + ")");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Central moments 0..order from cumulants (cumulants[1] is ignored).
std::array<double, kMaxMomentOrder + 1> central_from_cumulants(
    const std::array<double, kMaxMomentOrder + 1>& cumulants, int order) {
  std::array<double, kMaxMomentOrder + 1> m{};
  m[0] = 1.0;
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    for (int k = 2; k <= n; ++k) acc += binomial(n - 1, k - 1) * cumulants[k] * m[n - k];
    m[n] = acc;
  }
  return m;
}

// Cumulants of NIG from the Taylor series of sqrt(lambda^2 - 2 beta u - u^2).
std::array<double, kMaxMomentOrder + 1> nig_cumulants(const Nig& nig) {
  const double lambda = nig_lambda(nig);
  std::array<double, kMaxMomentOrder + 1> s{};
  s[0] = lambda * lambda;
  s[1] = -2.0 * nig.beta;
  s[2] = -1.0;
  std::array<double, kMaxMomentOrder + 1> q{};
  q[0] = lambda;
  for (int k = 1; k <= kMaxMomentOrder; ++k) {
    double acc = s[k];
    for (int j = 1; j < k; ++j) acc -= q[j] * q[k - j];
    q[k] = acc / (2.0 * lambda);
  }
  std::array<double, kMaxMomentOrder + 1> kappa{};
  double factorial = 1.0;
  for (int k = 1; k <= kMaxMomentOrder; ++k) {
    factorial *= k;
    kappa[k] = -nig.delta * q[k] * factorial;
  }
  kappa[1] += nig.mu;
  return kappa;
}

}  // namespace

std::string family_name(const StepLaw& law) {
  return std::visit(Overloaded{
                        [](const NegPareto&) { return std::string("negpareto"); },
                        [](const Normal&) { return std::string("normal"); },
                        [](const Nig&) { return std::string("nig"); },
                        [](const Stable&) { return std::string("stable"); },
                        [](const Degenerate&) { return std::string("degenerate"); },
                    },
                    law.family);
}

void validate(const StepLaw& law) {
  std::visit(Overloaded{
                 [](const NegPareto& f) {
                   if (!(f.alpha > 1.0) || !std::isfinite(f.alpha)) {
                     throw DomainError("negpareto requires alpha > 1 for a finite mean (got alpha=" +
                                       fmt(f.alpha) + ")");
                   }
                 },
                 [](const Normal& f) {
                   if (!std::isfinite(f.mean) || !(f.variance > 0.0) || !std::isfinite(f.variance)) {
                     throw DomainError("normal requires a finite mean and variance > 0");
                   }
                 },
                 [](const Nig& f) { validate_nig(f); },
                 [](const Stable& f) {
                   if (!(f.alpha > 1.0 && f.alpha < 2.0)) {
                     throw DomainError("stable requires 1 < alpha < 2 (got alpha=" + fmt(f.alpha) + ")");
                   }
                   if (!(std::abs(f.beta) <= 1.0)) {
                     throw DomainError("stable requires -1 <= beta <= 1 (got beta=" + fmt(f.beta) + ")");
                   }
                 },
                 [](const Degenerate& f) {
                   if (!std::isfinite(f.value)) throw DomainError("degenerate value must be finite");
                 },
             },
             law.family);
}

TailClass classify(const StepLaw& law) {
  validate(law);
  return std::visit(
      Overloaded{
          [](const NegPareto& f) {
            if (f.alpha < 2.0) return TailClass{TailClass::Kind::heavy_alpha, f.alpha, 1.0, 0.0};
            if (f.alpha > 2.0) return TailClass{TailClass::Kind::square_integrable, 2.0, 0.0, 0.0};
            // x^-2 tails: neither regularly varying with index in (1,2) nor
            // square-integrable.
            return TailClass{TailClass::Kind::nonconforming, 2.0, 1.0, 0.0};
          },
          [](const Normal&) { return TailClass{TailClass::Kind::square_integrable, 2.0, 0.0, 0.0}; },
          [](const Nig&) { return TailClass{TailClass::Kind::square_integrable, 2.0, 0.0, 0.0}; },
          [](const Stable& f) {
            const double c = stable_constant_c_alpha(f.alpha);
            return TailClass{TailClass::Kind::heavy_alpha, f.alpha, (1.0 - f.beta) / (2.0 * c),
                             (1.0 + f.beta) / (2.0 * c)};
          },
          [](const Degenerate&) { return TailClass{TailClass::Kind::nonconforming, 2.0, 0.0, 0.0}; },
      },
      law.family);
}

double mean(const StepLaw& law) {
  validate(law);
  return std::visit(Overloaded{
                        [](const NegPareto& f) { return pareto_moments(f.alpha).mean; },
                        [](const Normal& f) { return f.mean; },
                        [](const Nig& f) { return nig_moments(f).mean; },
                        [](const Stable&) { return 0.0; },
                        [](const Degenerate& f) { return f.value; },
                    },
                    law.family);
}

double variance(const StepLaw& law) {
  validate(law);
  return std::visit(Overloaded{
                        [](const NegPareto& f) { return pareto_moments(f.alpha).variance; },
                        [](const Normal& f) { return f.variance; },
                        [](const Nig& f) { return nig_moments(f).variance; },
                        [](const Stable&) { return kInf; },
                        [](const Degenerate&) { return 0.0; },
                    },
                    law.family);
}

std::optional<double> central_moment(const StepLaw& law, int order) {
  validate(law);
  if (order < 0 || order > kMaxMomentOrder) {
    throw DomainError("central moment order must be in [0, 8] (got " + std::to_string(order) + ")");
  }
  if (order == 0) return 1.0;
  if (order == 1) {
    // Every admissible family has a finite mean.
    return 0.0;
  }
  return std::visit(
      Overloaded{
          [order](const NegPareto& f) -> std::optional<double> {
            if (!(f.alpha > order)) return std::nullopt;
            // xi = -P with E[P^j] = alpha / (alpha - j).
            const double mu_p = f.alpha / (f.alpha - 1.0);
            double acc = 0.0;
            for (int j = 0; j <= order; ++j) {
              const double raw = f.alpha / (f.alpha - j);
              acc += binomial(order, j) * raw * std::pow(-mu_p, order - j);
            }
            return (order % 2 == 0) ? acc : -acc;
          },
          [order](const Normal& f) -> std::optional<double> {
            std::array<double, kMaxMomentOrder + 1> kappa{};
            kappa[2] = f.variance;
            return central_from_cumulants(kappa, order)[order];
          },
          [order](const Nig& f) -> std::optional<double> {
            return central_from_cumulants(nig_cumulants(f), order)[order];
          },
          [](const Stable&) -> std::optional<double> { return std::nullopt; },
          [](const Degenerate&) -> std::optional<double> { return 0.0; },
      },
      law.family);
}

double log_mgf(const StepLaw& law, double u) {
  validate(law);
  return std::visit(
      Overloaded{
          [&law](const NegPareto&) -> double {
            throw UnavailableError("no moment generating function for family " + family_name(law));
          },
          [u](const Normal& f) { return f.mean * u + 0.5 * f.variance * u * u; },
          [u](const Nig& f) {
            const double shifted = f.beta + u;
            if (!(std::abs(shifted) < f.alpha)) return kInf;
            const double lambda = nig_lambda(f);
            const double root = std::sqrt(f.alpha * f.alpha - shifted * shifted);
            return f.mu * u + f.delta * (2.0 * f.beta * u + u * u) / (lambda + root);
          },
          [&law](const Stable&) -> double {
            throw UnavailableError("no moment generating function for family " + family_name(law));
          },
          [u](const Degenerate& f) { return f.value * u; },
      },
      law.family);
}

double centered_log_mgf(const StepLaw& law, double u) {
  validate(law);
  return std::visit(
      Overloaded{
          [&law](const NegPareto&) -> double {
            throw UnavailableError("no moment generating function for family " + family_name(law));
          },
          [u](const Normal& f) { return 0.5 * f.variance * u * u; },
          [u](const Nig& f) {
            const double shifted = f.beta + u;
            if (!(std::abs(shifted) < f.alpha)) return kInf;
            const double lambda = nig_lambda(f);
            const double root = std::sqrt(f.alpha * f.alpha - shifted * shifted);
            return f.delta * u * u * (f.beta * (2.0 * f.beta + u) / (lambda + root) + lambda) /
                   (lambda * (lambda + root));
          },
          [&law](const Stable&) -> double {
            throw UnavailableError("no moment generating function for family " + family_name(law));
          },
          [](const Degenerate&) { return 0.0; },
      },
      law.family);
}

double sample(const StepLaw& law, Stream& stream) {
  return std::visit(
      Overloaded{
          [&stream](const NegPareto& f) {
            return -std::exp(stream.next_exponential() / f.alpha);
          },
          [&stream](const Normal& f) { return f.mean + std::sqrt(f.variance) * stream.next_gaussian(); },
          [&stream](const Nig& f) {
            const double lambda = nig_lambda(f);
            const double mixing = sample_inverse_gaussian(f.delta / lambda, f.delta * f.delta, stream);
            return f.mu + f.beta * mixing + std::sqrt(mixing) * stream.next_gaussian();
          },
          [&stream](const Stable& f) { return sample_stable(f.alpha, f.beta, 1.0, stream); },
          [](const Degenerate& f) { return f.value; },
      },
      law.family);
}

ParetoMoments pareto_moments(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw DomainError("pareto moments require alpha > 1 (got alpha=" + fmt(alpha) + ")");
  }
  const double m = -alpha / (alpha - 1.0);
  const double v = alpha > 2.0 ? alpha / ((alpha - 1.0) * (alpha - 1.0) * (alpha - 2.0)) : kInf;
  return {m, v};
}

NigMoments nig_moments(const Nig& nig) {
  validate_nig(nig);
  const double lambda = nig_lambda(nig);
  return {nig.mu + nig.beta * nig.delta / lambda,
          nig.delta * nig.alpha * nig.alpha / (lambda * lambda * lambda)};
}

double nig_mgf(double u, const Nig& nig) {
  validate_nig(nig);
  const double shifted = nig.beta + u;
  if (!(std::abs(shifted) < nig.alpha)) {
    throw DomainError("NIG mgf requires |beta + u| < alpha, i.e. " + fmt(-nig.alpha - nig.beta) +
                      " < u < " + fmt(nig.alpha - nig.beta) + " (got u=" + fmt(u) + ")");
  }
  return std::exp(log_mgf(StepLaw{nig, LawRole::log_return}, u));
}

double stable_constant_c_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw DomainError("c_alpha requires 1 < alpha < 2 (got alpha=" + fmt(alpha) + ")");
  }
  return std::numbers::pi / (2.0 * std::tgamma(alpha) * std::sin(alpha * std::numbers::pi / 2.0));
}

double sample_stable(double alpha, double beta, double c, Stream& stream) {
  const double v = std::numbers::pi * (stream.next_uniform() - 0.5);
  const double w = stream.next_exponential();
  const double t = beta * std::tan(std::numbers::pi * alpha / 2.0);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
  return std::pow(c, 1.0 / alpha) * x;
}

double sample_inverse_gaussian(double mean, double shape, Stream& stream) {
  const double g = stream.next_gaussian();
  const double nu = g * g;
  const double m_nu = mean * nu;
  const double x = mean - 2.0 * mean * m_nu / (m_nu + std::sqrt(m_nu * m_nu + 4.0 * mean * shape * nu));
  return stream.next_uniform() <= mean / (mean + x) ? x : mean * mean / x;
}

}  // namespace ruinlab
