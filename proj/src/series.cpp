#include "zenolab/series.hpp"

#include <cmath>
#include <string>

namespace zenolab::series {
namespace {

using qcore::Complex;
constexpr Complex kI{0.0, 1.0};

void check_hypothesis(int hypothesis) {
  if (hypothesis != 0 && hypothesis != 1) throw ValidationError("hypothesis must be 0 or 1");
}

/// Hypothesis 1 is hypothesis 0 with indices 0<->3 and 1<->2 exchanged.
Amplitudes mirror(const Amplitudes& h0) { return {h0[3], h0[2], h0[1], h0[0], h0[4]}; }

constexpr std::string_view kChecklist[] = {
    "one_step_state",          "survival_one_step_paper", "k_step_state",  "survival_k_paper",
    "overlap_k_paper",         "baseline_paper_convention", "total_cost_paper_mode", "original_cost",
};

}  // namespace

Amplitudes one_step_state(const protocol::ProtocolParams& params, int hypothesis) {
  params.validate();
  check_hypothesis(hypothesis);
  const double a = params.a, d = params.delta, t = params.dt;
  const Amplitudes h0{a - 0.5 * a * t * t * d * d, kI * d * a * t, 0.0, 0.0, d * params.b};
  return hypothesis == 0 ? h0 : mirror(h0);
}

double survival_one_step_paper(const protocol::ProtocolParams& params) {
  params.validate();
  const double x = params.a * params.delta * params.dt;
  return 1.0 - 0.5 * x * x;
}

Amplitudes k_step_state(const protocol::ProtocolParams& params, int hypothesis) {
  params.validate();
  check_hypothesis(hypothesis);
  const double a = params.a, d = params.delta, t = params.dt;
  const double k = params.k;
  const double prefactor = std::pow(1.0 - 0.5 * a * a * d * d * t * t, -k / 2.0);
  const double side = 0.5 * k * d * a * t;
  Amplitudes h0{a * (1.0 - 0.25 * k * (k + 1.0) * t * t * d * d),
                kI * side,
                -kI * side,
                -0.25 * k * (k - 1.0) * d * d * a * t * t,
                d * params.b};
  for (auto& c : h0) c *= prefactor;
  return hypothesis == 0 ? h0 : mirror(h0);
}

double survival_k_paper(const protocol::ProtocolParams& params) {
  params.validate();
  const double x = params.a * params.delta * params.dt;
  return 1.0 - 0.25 * params.k * x * x;
}

double overlap_k_paper(const protocol::ProtocolParams& params) {
  params.validate();
  const double a = params.a, d = params.delta, t = params.dt, b = params.b;
  const double k = params.k;
  return (1.0 + 0.25 * a * a * k * d * d * t * t) * (b * b * d * d - 2.0 * a * a * k * k * t * d * d);
}

PaperBaseline baseline_paper_convention(const protocol::ProtocolParams& params) {
  params.validate_without_dt();
  const double cos2 = std::min(1.0, (params.b * params.delta) * (params.b * params.delta));
  const double w = params.prior * (1.0 - params.prior);
  return {helstrom::helstrom_from_transition(params.prior, cos2).value(), w * cos2};
}

double original_cost(const protocol::ProtocolParams& params) {
  params.validate();
  const double lhs = 2.0 * params.k * params.a * params.dt;
  if (std::abs(lhs - params.b) > 1e-9 * std::max(1.0, std::abs(params.b))) {
    throw ValidationError("original_cost requires 2 k a dt = b (got " + std::to_string(lhs) + " vs " +
                          std::to_string(params.b) + ")");
  }
  const double x = params.a * params.k * params.dt * params.delta;
  return x * x;
}

std::span<const std::string_view> checklist() { return kChecklist; }

}  // namespace zenolab::series
