#pragma once

#include "zenolab/qcore.hpp"

namespace zenolab::helstrom {

/// Expected 0-1 loss.
class CostValue {
 public:
  CostValue() = default;
  explicit CostValue(double cost);

  double value() const noexcept { return cost_; }
  friend auto operator<=>(const CostValue&, const CostValue&) = default;

 private:
  double cost_ = 0.0;
};

struct DiscriminationInstance {
  qcore::PureState psi0;
  qcore::PureState psi1;
  /// Prior probability of psi0.
  double prior;

  void validate() const;
};

/// Bayes cost of the optimal measurement on two pure states,
/// 1/2 (1 - sqrt(1 - 4 xi (1-xi) T)) with T = |<psi0|psi1>|^2.
CostValue helstrom_pure(const DiscriminationInstance& instance);

/// Same bound written in terms of a transition probability T directly.
CostValue helstrom_from_transition(double prior, double transition);

/// 1/2 (1 - || xi rho0 - (1-xi) rho1 ||_1).
CostValue helstrom_mixed(const qcore::Matrix& rho0, const qcore::Matrix& rho1, double prior);

double posterior_update(double prior, double p_event_given_h0, double p_event_given_h1);

CostValue guess_only_cost(double prior);

void check_probability(double p, const char* name);

}  // namespace zenolab::helstrom
