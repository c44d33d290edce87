#include "zenolab/protocol.hpp"

#include <cmath>
#include <string>

#include "zenolab/series.hpp"

namespace zenolab::protocol {
namespace {

constexpr double kNormalizationTolerance = 1e-9;

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

std::string_view to_string(AccountingMode mode) {
  return mode == AccountingMode::Exact ? "exact" : "paper";
}

AccountingMode parse_mode(std::string_view text) {
  if (text == "exact") return AccountingMode::Exact;
  if (text == "paper") return AccountingMode::Paper;
  throw ValidationError("unknown accounting mode '" + std::string(text) + "' (expected exact|paper)");
}

ProtocolParams ProtocolParams::from_b(double b, double delta, double dt, int k, double prior) {
  const double bd = b * delta;
  require(std::isfinite(bd) && std::abs(bd) <= 1.0, "|b*delta| must be at most 1");
  ProtocolParams p;
  p.a = std::sqrt(1.0 - bd * bd);
  p.b = b;
  p.delta = delta;
  p.dt = dt;
  p.k = k;
  p.prior = prior;
  return p;
}

ProtocolParams ProtocolParams::from_a(double a, double delta, double dt, int k, double prior) {
  require(a >= 0.0 && a <= 1.0, "a must lie in [0, 1]");
  require(delta > 0.0, "fixing a requires delta > 0");
  ProtocolParams p;
  p.a = a;
  p.b = std::sqrt(1.0 - a * a) / delta;
  p.delta = delta;
  p.dt = dt;
  p.k = k;
  p.prior = prior;
  return p;
}

void ProtocolParams::validate_without_dt() const {
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(delta), "a, b, delta must be finite");
  require(delta >= 0.0, "delta must be nonnegative");
  require(k >= 1, "k must be at least 1");
  helstrom::check_probability(prior, "prior xi");
  const double norm2 = a * a + (b * delta) * (b * delta);
  require(std::abs(norm2 - 1.0) <= kNormalizationTolerance,
          "a^2 + (b*delta)^2 must equal 1 (got " + std::to_string(norm2) + ")");
  require(direction.dimension() == qcore::kModelDimension, "measurement direction must have dimension 5");
  hamiltonian().validate();
}

void ProtocolParams::validate() const {
  validate_without_dt();
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive and finite");
}

std::pair<qcore::PureState, qcore::PureState> initial_states(const ProtocolParams& params) {
  params.validate_without_dt();
  const double tail = params.b * params.delta;
  // Exact renormalization absorbs the 1e-9 slack allowed by validate().
  return {qcore::normalize(qcore::Vector{{params.a, 0.0, 0.0, 0.0, tail}}),
          qcore::normalize(qcore::Vector{{0.0, 0.0, 0.0, params.a, tail}})};
}

StepResult step(const qcore::HamiltonianSpec& spec, const qcore::MeasurementDirection& m, double dt,
                const qcore::PureState& psi) {
  auto outcome = qcore::measure_binary(m, qcore::evolve(spec, dt, psi));
  return StepResult{std::move(outcome.post_survive_state), outcome.survive_prob, outcome.click_prob};
}

double solve_orthogonality(double a, double b, int k) {
  require(std::isfinite(a) && a > 0.0, "orthogonality condition needs a > 0");
  require(k >= 1, "orthogonality condition needs k >= 1");
  require(std::isfinite(b) && b > 0.0, "orthogonality condition needs b > 0");
  return b / (2.0 * k * a);
}

double solve_orthogonality(const ProtocolParams& params) {
  return solve_orthogonality(params.a, params.b, params.k);
}

double total_cost_paper_mode(const ProtocolParams& params) {
  params.validate();
  const double x = params.a * params.dt * params.delta;
  return params.k * x * x / 4.0;
}

ProtocolReport run(const ProtocolParams& params) {
  const auto [init0, init1] = initial_states(params);
  return run_from_states(params, init0, init1);
}

ProtocolReport run_from_states(const ProtocolParams& params, const qcore::PureState& init0,
                               const qcore::PureState& init1) {
  params.validate();
  if (init0.dimension() != qcore::kModelDimension || init1.dimension() != qcore::kModelDimension) {
    throw ValidationError("hypothesis states must have dimension 5");
  }
  const double xi = params.prior;
  const auto spec = params.hamiltonian();
  const auto& m = params.direction;
  std::array<std::optional<qcore::PureState>, 2> state{init0, init1};
  std::array<double, 2> reach{1.0, 1.0};

  ProtocolReport report{
      .params = params,
      .leaves = {},
      .total_cost = helstrom::CostValue(0.0),
      .baseline_exact = helstrom::helstrom_pure({init0, init1, xi}),
      .baseline_paper = helstrom::CostValue(series::baseline_paper_convention(params).closed_form),
      .paper_new_cost = total_cost_paper_mode(params),
      .overlap_trajectory = {std::abs(qcore::inner_product(init0, init1))},
      .survival_trajectory = {std::vector<double>{1.0}, std::vector<double>{1.0}},
      .verdict = {},
      .pruned = {},
  };

  auto make_leaf = [&](LeafKind kind, int step_index, double p0, double p1) {
    LeafRecord leaf{.kind = kind, .step = step_index, .p_given_h0 = p0, .p_given_h1 = p1,
                    .marginal = xi * p0 + (1.0 - xi) * p1, .posterior = xi, .state0 = {},
                    .state1 = {}, .leaf_cost = {}, .pruned = false};
    if (leaf.marginal > 0.0) {
      leaf.posterior = helstrom::posterior_update(xi, p0, p1);
    } else {
      leaf.pruned = true;
    }
    return leaf;
  };

  for (int i = 1; i <= params.k; ++i) {
    std::array<double, 2> click{0.0, 0.0};
    std::array<std::optional<qcore::PureState>, 2> click_state;
    for (int h = 0; h < 2; ++h) {
      if (!state[h]) continue;
      const auto evolved = qcore::evolve(spec, params.dt, *state[h]);
      try {
        auto outcome = qcore::measure_binary(m, evolved);
        click[h] = reach[h] * outcome.click_prob;
        reach[h] *= outcome.survive_prob;
        click_state[h] = std::move(outcome.post_click_state);
        state[h] = std::move(outcome.post_survive_state);
      } catch (const DegenerateBranchError& e) {
        click[h] = reach[h] * e.click_prob();
        reach[h] = 0.0;
        click_state[h] = qcore::PureState(m.vector());
        state[h].reset();
        report.pruned.push_back("hypothesis " + std::to_string(h) + " survival below " +
                                "prune floor at step " + std::to_string(i));
      }
    }

    LeafRecord leaf = make_leaf(LeafKind::Click, i, click[0], click[1]);
    leaf.state0 = std::move(click_state[0]);
    leaf.state1 = std::move(click_state[1]);
    // Both conditioned states equal m up to phase, so only the prior is informative.
    leaf.leaf_cost = params.mode == AccountingMode::Exact ? helstrom::guess_only_cost(leaf.posterior)
                                                          : helstrom::CostValue(0.5);
    report.leaves.push_back(std::move(leaf));

    report.overlap_trajectory.push_back(state[0] && state[1]
                                            ? std::abs(qcore::inner_product(*state[0], *state[1]))
                                            : std::nan(""));
    report.survival_trajectory[0].push_back(reach[0]);
    report.survival_trajectory[1].push_back(reach[1]);
  }

  LeafRecord survived = make_leaf(LeafKind::Survived, params.k, reach[0], reach[1]);
  survived.state0 = state[0];
  survived.state1 = state[1];
  if (params.mode == AccountingMode::Paper) {
    survived.leaf_cost = helstrom::CostValue(0.0);
  } else if (state[0] && state[1]) {
    survived.leaf_cost = helstrom::helstrom_pure({*state[0], *state[1], survived.posterior});
  } else {
    survived.leaf_cost = helstrom::guess_only_cost(survived.posterior);
  }
  report.leaves.push_back(std::move(survived));

  double total = 0.0;
  for (const auto& leaf : report.leaves) total += leaf.marginal * leaf.leaf_cost.value();
  if (!std::isfinite(total)) throw NumericalError("non-finite total cost");
  report.total_cost = helstrom::CostValue(total);
  report.verdict = {total - report.baseline_exact.value(), total - report.baseline_paper.value()};
  return report;
}

}  // namespace zenolab::protocol
