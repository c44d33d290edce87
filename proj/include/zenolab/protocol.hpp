#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zenolab/helstrom.hpp"
#include "zenolab/qcore.hpp"

namespace zenolab::protocol {

/// How leaf costs are assigned.
///   Exact: every leaf gets its true Bayes cost at the leaf posterior.
///   Paper: click leaves cost 1/2, the survived leaf costs 0.
enum class AccountingMode { Exact, Paper };

std::string_view to_string(AccountingMode mode);
AccountingMode parse_mode(std::string_view text);

/// One full experiment definition. Hypothesis states are (a,0,0,0,b*delta)
/// and (0,0,0,a,b*delta), so a^2 + (b*delta)^2 must be 1.
struct ProtocolParams {
  double a = 1.0;
  double b = 0.0;
  double delta = 0.0;
  double dt = 1.0;
  int k = 1;
  double e0 = 1.0;
  double e1 = 0.5;
  double prior = 0.5;
  qcore::MeasurementDirection direction = qcore::MeasurementDirection::standard();
  AccountingMode mode = AccountingMode::Exact;

  /// Fills a = sqrt(1 - (b*delta)^2). Requires |b*delta| <= 1.
  static ProtocolParams from_b(double b, double delta, double dt, int k, double prior = 0.5);
  /// Fills b = sqrt(1 - a^2) / delta. Requires delta > 0 and 0 <= a <= 1.
  static ProtocolParams from_a(double a, double delta, double dt, int k, double prior = 0.5);

  qcore::HamiltonianSpec hamiltonian() const { return {e0, e1, delta}; }

  /// Checks everything except dt > 0.
  void validate_without_dt() const;
  void validate() const;
};

enum class LeafKind { Click, Survived };

struct LeafRecord {
  LeafKind kind;
  /// Measurement index (1..k) for click leaves, k for the survived leaf.
  int step;
  double p_given_h0;
  double p_given_h1;
  double marginal;
  double posterior;
  /// Empty when the hypothesis cannot reach this leaf (pruned earlier).
  std::optional<qcore::PureState> state0;
  std::optional<qcore::PureState> state1;
  helstrom::CostValue leaf_cost;
  bool pruned = false;
};

struct Verdict {
  /// total_cost - baseline_exact; negative would mean the exact Helstrom bound is beaten.
  double vs_exact;
  /// total_cost - baseline_paper.
  double vs_paper;
};

struct ProtocolReport {
  ProtocolParams params;
  std::vector<LeafRecord> leaves;
  helstrom::CostValue total_cost;
  /// Helstrom bound with T = |<psi0|psi1>|^2.
  helstrom::CostValue baseline_exact;
  /// Helstrom bound with T = b^2 delta^2 (the overlap amplitude used as T).
  helstrom::CostValue baseline_paper;
  /// k a^2 dt^2 delta^2 / 4.
  double paper_new_cost;
  /// |<psi0|psi1>| before the first step and after each surviving step (k+1 entries).
  /// NaN once either hypothesis has been pruned.
  std::vector<double> overlap_trajectory;
  /// Cumulative survival probability per hypothesis (k+1 entries, starting at 1).
  std::array<std::vector<double>, 2> survival_trajectory;
  Verdict verdict;
  std::vector<std::string> pruned;

  double final_overlap() const { return overlap_trajectory.back(); }
};

struct StepResult {
  qcore::PureState survive;
  double survive_prob;
  double click_prob;
};

std::pair<qcore::PureState, qcore::PureState> initial_states(const ProtocolParams& params);

/// Evolve for dt, then measure along m; returns the renormalized survival branch.
StepResult step(const qcore::HamiltonianSpec& spec, const qcore::MeasurementDirection& m, double dt,
                const qcore::PureState& psi);

/// Full branch tree for the standard hypothesis pair from initial_states().
ProtocolReport run(const ProtocolParams& params);

/// Same engine on an arbitrary hypothesis pair (a, b and delta still set the
/// Hamiltonian and the paper-convention baseline).
ProtocolReport run_from_states(const ProtocolParams& params, const qcore::PureState& psi0,
                               const qcore::PureState& psi1);

/// dt = b / (2 k a), the spacing that satisfies 2 k a dt = b.
double solve_orthogonality(double a, double b, int k);
double solve_orthogonality(const ProtocolParams& params);

/// k a^2 dt^2 delta^2 / 4. A perturbative formula, so it is not clamped to [0, 1/2].
double total_cost_paper_mode(const ProtocolParams& params);

}  // namespace zenolab::protocol
