#pragma once

#include <optional>
#include <string>
#include <variant>

#include "ruinlab/rng.hpp"

namespace ruinlab {

// Negative of a Pareto type I law: P(xi <= -x) = x^-alpha for x >= 1.
struct NegPareto {
  double alpha = 3.0;
};

struct Normal {
  double mean = 0.0;
  double variance = 1.0;
};

// Normal inverse Gaussian NIG(alpha, beta, delta, mu), 0 <= |beta| < alpha,
// delta > 0.
struct Nig {
  double alpha = 2.0;
  double beta = 0.0;
  double delta = 1.0;
  double mu = 0.0;
};

// Strictly stable law with characteristic function
//   exp(-|u|^alpha (1 - i beta sign(u) tan(pi alpha / 2))),
// i.e. unit cf-scale c = 1 and location gamma = 0.
struct Stable {
  double alpha = 1.5;
  double beta = 0.0;
};

// Point mass. Admitted for testing only; it violates the positive-variance
// requirement and classifies as non-conforming.
struct Degenerate {
  double value = 0.0;
};

using Family = std::variant<NegPareto, Normal, Nig, Stable, Degenerate>;

enum class LawRole { loss, log_return };

struct StepLaw {
  Family family;
  LawRole role = LawRole::loss;
};

std::string family_name(const StepLaw& law);

// Throws DomainError when the family parameters are outside their domain.
void validate(const StepLaw& law);

struct TailClass {
  enum class Kind { heavy_alpha, square_integrable, nonconforming };
  Kind kind = Kind::square_integrable;
  double alpha = 2.0;  // tail index; 2 for square-integrable laws
  double k1 = 0.0;     // P(Z <= -x) ~ k1 x^-alpha
  double k2 = 0.0;     // P(Z >= x) ~ k2 x^-alpha
};

TailClass classify(const StepLaw& law);

double mean(const StepLaw& law);
// +infinity when the second moment is infinite.
double variance(const StepLaw& law);

// Central moment of order m in [0, 8]; nullopt when it does not exist.
std::optional<double> central_moment(const StepLaw& law, int order);

// Cumulant generating function log E[exp(u Z)]. Returns +infinity outside the
// domain of the moment generating function. Throws UnavailableError for
// families without a usable closed form (NegPareto, Stable).
double log_mgf(const StepLaw& law, double u);

// log E[exp(u (Z - E Z))], evaluated without the cancellation of
// log_mgf(u) - u * mean(law) near u = 0.
double centered_log_mgf(const StepLaw& law, double u);

// Draws one variate. NegPareto uses the inverse CDF, Stable the
// Chambers-Mallows-Stuck transform, NIG a normal variance-mean mixture with
// an inverse Gaussian mixing variate (Michael-Schucany-Haas).
double sample(const StepLaw& law, Stream& stream);

struct ParetoMoments {
  double mean;
  double variance;  // +infinity when alpha <= 2
};

ParetoMoments pareto_moments(double alpha);

struct NigMoments {
  double mean;
  double variance;
};

NigMoments nig_moments(const Nig& nig);

// exp(mu u + delta (lambda - sqrt(alpha^2 - (beta + u)^2))),
// lambda = sqrt(alpha^2 - beta^2). Requires |beta + u| < alpha.
double nig_mgf(double u, const Nig& nig);

// pi / (2 Gamma(alpha) sin(alpha pi / 2)) for alpha in (1, 2).
double stable_constant_c_alpha(double alpha);

// Stable variate with index alpha, skewness beta and cf-scale c (the
// coefficient of |u|^alpha in the log characteristic function), location 0.
double sample_stable(double alpha, double beta, double c, Stream& stream);

// Inverse Gaussian variate with the given mean and shape.
double sample_inverse_gaussian(double mean, double shape, Stream& stream);

}  // namespace ruinlab
