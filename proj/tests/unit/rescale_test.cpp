#include <gtest/gtest.h>

#include <cmath>

#include "ruinlab/errors.hpp"
#include "ruinlab/rescale.hpp"

namespace ruinlab {
namespace {

TEST(Rescale, IdentityAtOneStep) {
  const StepLaw loss{Normal{-1.5, 0.75}};
  EXPECT_DOUBLE_EQ(rescaled_loss(loss, 1, 0.37), 0.37);
  const StepLaw ret{Nig{2.0, 0.0, 1.0, 0.1}, LawRole::log_return};
  EXPECT_DOUBLE_EQ(rescaled_logreturn(ret, 1, -0.2), -0.2);
}

TEST(Rescale, CenteredDrawMapsToDrift) {
  EXPECT_DOUBLE_EQ(rescaled_loss(StepLaw{NegPareto{3.0}}, 4, -1.5), -0.375);
  EXPECT_DOUBLE_EQ(rescaled_loss(StepLaw{NegPareto{1.5}}, 100, -3.0), -0.03);
}

TEST(Rescale, HeavyTailNormalization) {
  const StepLaw loss{NegPareto{1.5}};
  const Normalization norm = normalization_for(loss);
  EXPECT_DOUBLE_EQ(norm.exponent, 1.5);
  EXPECT_NEAR(norm.constant, std::sqrt(2.0 * std::acos(-1.0)), 1e-14);
  const double raw = -10.0;
  EXPECT_NEAR(rescaled_loss(loss, 8, raw), -3.0 / 8 + (raw + 3.0) / (norm.constant * std::pow(8.0, 1 / 1.5)),
              1e-15);
  EXPECT_DOUBLE_EQ(normalization_for(StepLaw{Stable{1.5, 0.0}}).constant, 1.0);
  EXPECT_THROW(normalization_for(StepLaw{NegPareto{2.0}}), DomainError);
}

TEST(Rescale, NormalReturnsScaleAsNormal) {
  const StepLaw ret{Normal{0.3, 0.5}, LawRole::log_return};
  const int n = 25;
  // The affine image of N(0.3, 0.5) is N(0.3/n, 0.5/n).
  EXPECT_NEAR(rescaled_logreturn(ret, n, 0.3), 0.3 / n, 1e-16);
  EXPECT_NEAR(rescaled_logreturn(ret, n, 0.3 + std::sqrt(0.5)), 0.3 / n + std::sqrt(0.5 / n), 1e-15);
}

TEST(Rescale, MeanPreservationAndVarianceStabilization) {
  for (const StepLaw& loss : {StepLaw{NegPareto{3.0}}, StepLaw{Normal{-0.5, 2.0}},
                              StepLaw{Nig{3.0, 1.0, 0.5, 0.2}}}) {
    for (int n : {1, 7, 64, 1000}) {
      const RescaledScheme scheme(loss, StepLaw{Normal{0.0, 1.0}, LawRole::log_return}, n);
      const double m1 = *scheme.loss_moment(1);
      const double m2 = *scheme.loss_moment(2);
      EXPECT_NEAR(n * m1, mean(loss), 1e-13 * (1 + std::abs(mean(loss))));
      EXPECT_NEAR(n * (m2 - m1 * m1), variance(loss), 1e-12 * variance(loss));
    }
  }
}

TEST(Rescale, ReturnFactorMoment) {
  const RescaledScheme scheme(StepLaw{Normal{0.0, 1.0}}, StepLaw{Normal{0.1, 0.04}, LawRole::log_return}, 10);
  EXPECT_NEAR(*scheme.return_factor_moment(2), std::exp(2 * 0.01 + 0.5 * 4 * 0.004), 1e-15);
  EXPECT_DOUBLE_EQ(*scheme.return_factor_moment(0), 1.0);
  const RescaledScheme stable(StepLaw{Normal{0.0, 1.0}}, StepLaw{Stable{1.5, 0.0}, LawRole::log_return}, 10);
  EXPECT_FALSE(stable.return_factor_moment(1).has_value());
}

TEST(Rescale, RejectsNonpositiveN) {
  EXPECT_THROW(rescaled_loss(StepLaw{Normal{}}, 0, 1.0), DomainError);
  EXPECT_THROW(RescaledScheme(StepLaw{Normal{}}, StepLaw{Normal{}}, -1), DomainError);
}

TEST(Condition9, NormalExamples) {
  const auto sat = check_condition_9(StepLaw{Normal{0.05, 0.02}, LawRole::log_return}, 100);
  EXPECT_TRUE(sat.satisfied);
  EXPECT_NEAR(sat.C, std::exp(-0.06), 1e-15);
  EXPECT_EQ(sat.n0, 1);
  EXPECT_NEAR(sat.rows[0].value, std::exp(-0.06), 1e-15);
  EXPECT_EQ(sat.rows[0].value, sat.rows[99].value);

  const auto fail = check_condition_9(StepLaw{Normal{0.01, 0.02}, LawRole::log_return}, 100);
  EXPECT_FALSE(fail.satisfied);
  EXPECT_NEAR(fail.limit, std::exp(0.02), 1e-15);
}

TEST(Condition9, NigMatchesExampleInequality) {
  for (double mu : {-0.3, -0.1, 0.0, 0.05, 0.2, 0.4}) {
    const Nig nig{2.0, 0.5, 0.4, mu};
    const double lambda = std::sqrt(nig.alpha * nig.alpha - nig.beta * nig.beta);
    const double lhs = mu + (nig.delta * nig.beta * lambda * lambda - nig.delta * nig.alpha * nig.alpha) /
                                std::pow(lambda, 3);
    const auto r = check_condition_9(StepLaw{nig, LawRole::log_return}, 200);
    EXPECT_NEAR(r.limit, std::exp(-2.0 * lhs), 1e-12);
    if (std::abs(lhs) > 1e-3) EXPECT_EQ(r.satisfied, lhs > 0.0) << mu;
  }
}

TEST(Condition9, ImpliesOneStepBound) {
  const StepLaw ret{Nig{3.0, 0.0, 0.5, 0.2}, LawRole::log_return};
  const auto r = check_condition_9(ret, 64);
  ASSERT_TRUE(r.satisfied);
  for (int n = r.n0; n <= 64; ++n) {
    const double one_step = std::exp(log_power_mgf(ret, n, -1.0) / n);
    EXPECT_LE(one_step, std::pow(r.C, 1.0 / (2.0 * n)) * (1 + 1e-14));
    EXPECT_LT(one_step, 1.0);
  }
}

TEST(Condition9, UnsupportedFamily) {
  EXPECT_THROW(check_condition_9(StepLaw{NegPareto{3.0}, LawRole::log_return}, 10), UnavailableError);
  EXPECT_THROW(check_condition_9(StepLaw{Stable{1.5, 0.0}, LawRole::log_return}, 10), UnavailableError);
}

TEST(Condition15, NormalIsNIndependent) {
  const double mu = 0.1, s2 = 0.04;
  const auto r = check_condition_15(StepLaw{Normal{mu, s2}, LawRole::log_return}, 3, 100);
  const double expected = std::exp(3 * mu + 0.5 * 9 * s2);
  for (int n : {1, 10, 100}) EXPECT_NEAR(r.rows[n - 1].value, expected, 1e-14);
  EXPECT_TRUE(r.bounded);
  EXPECT_TRUE(r.domain_violations.empty());
}

TEST(Condition15, DegenerateIsOne) {
  const auto r = check_condition_15(StepLaw{Degenerate{0.0}, LawRole::log_return}, 2, 20);
  EXPECT_TRUE(r.bounded);
  for (const auto& row : r.rows) EXPECT_DOUBLE_EQ(row.value, 1.0);
}

TEST(Condition15, NigLimitAndDomain) {
  const Nig nig{2.0, 0.0, 1.0, 0.1};
  const int q = 3;
  const auto r = check_condition_15(StepLaw{nig, LawRole::log_return}, q, 512);
  // q / sqrt(n) must stay below alpha - beta = 2: n = 1, 2 are outside the domain.
  EXPECT_EQ(r.domain_violations, (std::vector<int>{1, 2}));
  EXPECT_EQ(r.first_admissible_n, 3);
  const double lambda = 2.0;
  const double s2 = nig.delta * nig.alpha * nig.alpha / std::pow(lambda, 3);
  EXPECT_NEAR(r.limit, std::exp(q * nig.mu + 0.5 * q * q * s2), 1e-14);
  EXPECT_NEAR(r.rows[511].value / r.limit, 1.0, 5e-3);
  EXPECT_TRUE(r.bounded);
  EXPECT_THROW(check_condition_15(StepLaw{nig, LawRole::log_return}, 1, 10), DomainError);
}

}  // namespace
}  // namespace ruinlab
