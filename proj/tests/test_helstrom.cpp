#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "zenolab/helstrom.hpp"

using namespace zenolab;
using namespace zenolab::helstrom;
using qcore::PureState;

namespace {

/// Pair with |<psi0|psi1>| = overlap.
std::pair<PureState, PureState> pair_with_overlap(double overlap) {
  return {PureState({1.0, 0.0}), PureState({overlap, std::sqrt(1.0 - overlap * overlap)})};
}

}  // namespace

TEST(HelstromPure, Examples) {
  auto [o0, o1] = pair_with_overlap(0.0);
  EXPECT_EQ(helstrom_pure({o0, o1, 0.3}).value(), 0.0);
  auto [i0, i1] = pair_with_overlap(1.0);
  EXPECT_NEAR(helstrom_pure({i0, i1, 0.5}).value(), 0.5, 1e-15);
  auto [t0, t1] = pair_with_overlap(0.6);
  EXPECT_NEAR(helstrom_pure({t0, t1, 0.5}).value(), 0.1, 1e-15);
}

TEST(HelstromPure, RejectsBadPrior) {
  auto [s0, s1] = pair_with_overlap(0.5);
  EXPECT_THROW(helstrom_pure({s0, s1, 1.2}), ValidationError);
  EXPECT_THROW(helstrom_pure({s0, PureState({1, 0, 0}), 0.5}), ValidationError);
}

TEST(HelstromPure, StableForTinyTransition) {
  // 1/2 (1 - sqrt(1 - x)) ~ x/4 for x = 1e-20 would round to 0 in the naive form.
  EXPECT_NEAR(helstrom_from_transition(0.5, 1e-20).value() / 2.5e-21, 1.0, 1e-12);
}

TEST(HelstromPure, MonotoneSymmetricBounded) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double xi = u(rng), t1 = u(rng), t2 = u(rng);
    const double lo = std::min(t1, t2), hi = std::max(t1, t2);
    ASSERT_LE(helstrom_from_transition(xi, lo).value(), helstrom_from_transition(xi, hi).value());
    ASSERT_NEAR(helstrom_from_transition(xi, t1).value(), helstrom_from_transition(1.0 - xi, t1).value(), 1e-15);
    ASSERT_LE(helstrom_from_transition(xi, t1).value(), guess_only_cost(xi).value() + 1e-15);
  }
  EXPECT_EQ(helstrom_from_transition(0.0, 0.7).value(), 0.0);
  EXPECT_EQ(helstrom_from_transition(1.0, 0.7).value(), 0.0);
}

TEST(HelstromMixed, IdenticalStatesGiveGuessCost) {
  std::mt19937_64 rng(32);
  const auto rho = qcore::density(fixtures::random_state(rng));
  EXPECT_NEAR(helstrom_mixed(rho, rho, 0.3).value(), 0.3, 1e-12);
  EXPECT_NEAR(helstrom_mixed(rho, rho, 0.8).value(), 0.2, 1e-12);
}

TEST(HelstromMixed, OrthogonalStatesAreFree) {
  const auto r0 = qcore::density(PureState({1, 0, 0, 0, 0}));
  const auto r1 = qcore::density(PureState({0, 0, 0, 1, 0}));
  EXPECT_NEAR(helstrom_mixed(r0, r1, 0.3).value(), 0.0, 1e-15);
}

TEST(HelstromMixed, AgreesWithPureFormulaOn1000Pairs) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s0 = fixtures::random_state(rng), s1 = fixtures::random_state(rng);
    const double xi = u(rng);
    ASSERT_NEAR(helstrom_mixed(qcore::density(s0), qcore::density(s1), xi).value(),
                helstrom_pure({s0, s1, xi}).value(), 1e-12);
  }
}

TEST(HelstromMixed, ValidatesInputs) {
  qcore::Matrix bad_trace = qcore::Matrix::Identity(2, 2);
  qcore::Matrix ok = 0.5 * qcore::Matrix::Identity(2, 2);
  EXPECT_THROW(helstrom_mixed(bad_trace, ok, 0.5), ValidationError);
  qcore::Matrix non_herm = ok;
  non_herm(0, 1) = 0.3;
  EXPECT_THROW(helstrom_mixed(non_herm, ok, 0.5), ValidationError);
  qcore::Matrix negative = qcore::Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(helstrom_mixed(negative, ok, 0.5), ValidationError);
  // Roundoff-scale negativity is clamped, not rejected.
  qcore::Matrix tiny = qcore::Matrix::Zero(2, 2);
  tiny(0, 0) = 1.0 + 1e-13;
  tiny(1, 1) = -1e-13;
  EXPECT_NO_THROW(helstrom_mixed(tiny, ok, 0.5));
}

TEST(PosteriorUpdate, Examples) {
  EXPECT_DOUBLE_EQ(posterior_update(0.37, 0.4, 0.4), 0.37);
  EXPECT_NEAR(posterior_update(0.5, 0.2, 0.1), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(posterior_update(0.5, 0.0, 0.3), 0.0);
  EXPECT_THROW(posterior_update(0.5, 0.0, 0.0), DegenerateBranchError);
  EXPECT_THROW(posterior_update(0.5, 1.2, 0.0), ValidationError);
}

TEST(GuessOnlyCost, Examples) {
  EXPECT_EQ(guess_only_cost(0.5).value(), 0.5);
  EXPECT_EQ(guess_only_cost(0.0).value(), 0.0);
  EXPECT_DOUBLE_EQ(guess_only_cost(0.3).value(), 0.3);
  EXPECT_THROW(guess_only_cost(-0.1), ValidationError);
}

TEST(PosteriorUpdate, InformationNeverHurts) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double xi = u(rng), p0 = u(rng), p1 = u(rng);
    double expected = 0.0;
    for (auto [q0, q1] : {std::pair{p0, p1}, std::pair{1.0 - p0, 1.0 - p1}}) {
      const double marginal = xi * q0 + (1.0 - xi) * q1;
      if (marginal > 0.0) expected += marginal * guess_only_cost(posterior_update(xi, q0, q1)).value();
    }
    ASSERT_LE(expected, guess_only_cost(xi).value() + 1e-15);
  }
}
