#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ruinlab/discrete.hpp"
#include "ruinlab/errors.hpp"

namespace ruinlab {
namespace {

StepLaw ret(Family f) { return StepLaw{f, LawRole::log_return}; }

TEST(Discrete, HandUnrolledRecursion) {
  const std::vector<double> xi{0.5, -0.3}, rho{1.1, 0.9};
  const SurplusPath path = path_from_steps(1.0, 2, xi, rho);
  ASSERT_EQ(path.values.size(), 3u);
  EXPECT_DOUBLE_EQ(path.values[0], 1.0);
  EXPECT_NEAR(path.values[1], 1.6, 1e-15);
  EXPECT_NEAR(path.values[2], 1.14, 1e-15);
  EXPECT_NEAR(explicit_solution(1.0, xi, rho), 1.14, 1e-15);
  EXPECT_DOUBLE_EQ(explicit_solution(2.5, {}, {}), 2.5);
  EXPECT_THROW(explicit_solution(1.0, xi, std::vector<double>{1.0}), DomainError);
}

TEST(Discrete, ExplicitSolutionMatchesRecursion) {
  Stream s({9, 0});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xi(50), rho(50);
    for (int k = 0; k < 50; ++k) {
      xi[k] = 0.3 * s.next_gaussian();
      rho[k] = std::exp(0.1 * s.next_gaussian());
    }
    const double y0 = 5.0 * s.next_uniform();
    const double rec = path_from_steps(y0, 50, xi, rho).values.back();
    EXPECT_LE(std::abs(explicit_solution(y0, xi, rho) - rec), 1e-12 * std::abs(rec));
  }
}

TEST(Discrete, DeterministicLinesAndZeros) {
  const RescaledScheme line(StepLaw{Degenerate{0.25}}, ret(Degenerate{0.0}), 1);
  const SurplusPath p = simulate_path(line, 1.0, 6.0, {1, 0});
  ASSERT_EQ(p.values.size(), 7u);
  for (std::size_t k = 0; k < p.values.size(); ++k) EXPECT_DOUBLE_EQ(p.values[k], 1.0 + 0.25 * k);

  const RescaledScheme zero(StepLaw{Degenerate{0.0}}, ret(Normal{0.0, 1.0}), 16);
  for (double v : simulate_path(zero, 0.0, 2.0, {3, 0}).values) EXPECT_EQ(v, 0.0);
}

TEST(Discrete, PathLengthAndReplay) {
  const RescaledScheme scheme(StepLaw{NegPareto{3.0}}, ret(Normal{0.1, 0.04}), 32);
  const auto a = simulate_path(scheme, 1.0, 1.5, {5, 2});
  const auto b = simulate_path(scheme, 1.0, 1.5, {5, 2});
  EXPECT_EQ(a.values.size(), 49u);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(grid_steps(10, 0.3), 3u);
}

TEST(RuinScan, StrictNegativity) {
  const std::vector<double> ruined{1.0, 0.5, -0.2};
  const RuinOutcome r = ruin_scan(ruined, 0.5, 1.0);
  EXPECT_TRUE(r.ruined);
  EXPECT_DOUBLE_EQ(r.time, 1.0);
  EXPECT_EQ(r.index, 2u);

  const std::vector<double> touching{1.0, 0.0, 0.3};
  EXPECT_FALSE(ruin_scan(touching, 0.5, 1.0).ruined);

  const std::vector<double> positive{1.0, 2.0, 3.0};
  const RuinOutcome c = ruin_scan(positive, 0.5, 1.0);
  EXPECT_FALSE(c.ruined);
  EXPECT_DOUBLE_EQ(c.time, 1.0);
}

TEST(Estimate, DeterministicRuin) {
  const RescaledScheme scheme(StepLaw{Degenerate{-1.0}}, ret(Degenerate{0.0}), 1);
  EstimateConfig cfg{RuinProbability{3.0}, 100, 2.5, 1, 1};
  const auto r = estimate(scheme, cfg);
  EXPECT_DOUBLE_EQ(r.mean, 1.0);
  EXPECT_DOUBLE_EQ(r.std_error, 0.0);
  cfg.functional = RuinProbability{2.0};
  EXPECT_DOUBLE_EQ(estimate(scheme, cfg).mean, 0.0);
}

TEST(Estimate, FarFromBoundary) {
  const RescaledScheme scheme(StepLaw{Normal{0.0, 1.0}}, ret(Normal{0.0, 0.01}), 64);
  const auto r = estimate(scheme, {RuinProbability{1.0}, 2000, 50.0, 4, 1});
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_LE(r.ci_lo, 0.0);
  EXPECT_GE(r.ci_hi, 0.0);
}

TEST(Estimate, PenaltyReportsTruncation) {
  const RescaledScheme scheme(StepLaw{Normal{0.5, 1.0}}, ret(Normal{-0.05, 0.09}), 16);
  const auto r = estimate(scheme, {DiscountedPenalty{0.5, 10.0}, 1000, 1.0, 5, 1});
  EXPECT_DOUBLE_EQ(r.truncation_bound, std::exp(-5.0));
  EXPECT_GT(r.mean, 0.0);
  EXPECT_LT(r.mean, 1.0);
}

TEST(Estimate, Validation) {
  const RescaledScheme scheme(StepLaw{Normal{0.0, 1.0}}, ret(Normal{0.0, 0.01}), 4);
  EXPECT_THROW(estimate(scheme, {RuinProbability{1.0}, 99, 1.0, 1, 1}), DomainError);
  EXPECT_THROW(estimate(scheme, {DiscountedPenalty{0.0, 1.0}, 100, 1.0, 1, 1}), DomainError);
  EXPECT_THROW(estimate(scheme, {MomentAt{-1, 1.0}, 100, 1.0, 1, 1}), DomainError);
  const RescaledScheme heavy(StepLaw{NegPareto{3.0}}, ret(Normal{0.0, 0.01}), 4);
  EXPECT_THROW(estimate(heavy, {MomentAt{3, 1.0}, 100, 1.0, 1, 1}), DomainError);
}

TEST(ExactMoment, TrivialSteps) {
  const RescaledScheme scheme(StepLaw{Degenerate{0.0}}, ret(Degenerate{0.0}), 12);
  for (int p = 0; p <= 6; ++p) EXPECT_NEAR(exact_moment(scheme, 1.7, p), std::pow(1.7, p), 1e-12);
}

TEST(ExactMoment, GeometricClosedForm) {
  const RescaledScheme scheme(StepLaw{Nig{2.0, 0.3, 1.0, -0.4}}, ret(Normal{0.1, 0.2}), 50);
  const double m = *scheme.return_factor_moment(1);
  const double mu = *scheme.loss_moment(1);
  const double y0 = 1.3;
  const double mn = std::pow(m, 50);
  const double expected = y0 * mn + mu * (mn - 1.0) / (m - 1.0);
  EXPECT_NEAR(exact_moment(scheme, y0, 1), expected, 1e-12 * std::abs(expected));
}

TEST(ExactMoment, SecondMomentAgainstMonteCarlo) {
  const RescaledScheme scheme(StepLaw{Normal{0.5, 1.0}}, ret(Normal{0.1, 0.09}), 10);
  const auto r = estimate(scheme, {MomentAt{2, 1.0}, 200000, 1.0, 77, 1});
  EXPECT_NEAR(r.mean, exact_moment(scheme, 1.0, 2), 4.0 * r.std_error);
}

TEST(ExactMoment, FirstMomentMonteCarloAcrossFamilies) {
  const std::vector<std::pair<StepLaw, StepLaw>> cases{
      {StepLaw{Normal{-0.5, 1.0}}, ret(Normal{0.1, 0.04})},
      {StepLaw{NegPareto{3.0}}, ret(Nig{2.0, 0.0, 1.0, 0.1})},
      {StepLaw{Nig{3.0, 0.5, 1.0, 0.0}}, ret(Normal{0.0, 0.25})}};
  std::uint64_t seed = 30;
  for (const auto& [loss, lr] : cases) {
    const RescaledScheme scheme(loss, lr, 16);
    const auto r = estimate(scheme, {MomentAt{1, 1.0}, 20000, 1.0, ++seed, 1});
    EXPECT_NEAR(r.mean, exact_moment(scheme, 1.0, 1), 3.0 * r.std_error) << family_name(loss);
  }
}

TEST(ExactMoment, MissingMomentsReported) {
  const RescaledScheme heavy(StepLaw{NegPareto{1.5}}, ret(Normal{0.0, 0.01}), 4);
  EXPECT_THROW(exact_moment(heavy, 1.0, 2), UnavailableError);
  const RescaledScheme ok(StepLaw{Normal{}}, ret(Normal{0.0, 0.01}), 4);
  EXPECT_THROW(exact_moment(ok, 1.0, 7), DomainError);
}

TEST(Coupling, RuinMonotoneInCapital) {
  const RescaledScheme scheme(StepLaw{NegPareto{3.0}}, ret(Normal{0.0, 0.09}), 32);
  for (std::uint64_t id = 0; id < 200; ++id) {
    const auto lo = simulate_path(scheme, 0.5, 2.0, {8, id});
    const auto hi = simulate_path(scheme, 1.5, 2.0, {8, id});
    for (std::size_t k = 0; k < lo.values.size(); ++k) ASSERT_GE(hi.values[k], lo.values[k]);
    const auto rl = ruin_scan(lo), rh = ruin_scan(hi);
    if (rh.ruined) {
      ASSERT_TRUE(rl.ruined);
      EXPECT_GE(rh.time, rl.time);
    }
  }
}

}  // namespace
}  // namespace ruinlab
