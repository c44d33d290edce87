#include <algorithm>
#include <cmath>
#include <string>

#include "zenolab/series.hpp"

namespace zenolab::series {
namespace {

constexpr Quantity kAllQuantities[] = {
    Quantity::OneStepClick,  Quantity::OneStepSurvival, Quantity::OneStepState,
    Quantity::KStepState,    Quantity::KStepSurvival,   Quantity::KStepOverlap,
    Quantity::FinalOverlap,  Quantity::BaselineSeries,  Quantity::PaperModeTotal,
};

double max_magnitude_gap(const qcore::PureState& exact, const Amplitudes& predicted) {
  double gap = 0.0;
  for (int i = 0; i < qcore::kModelDimension; ++i) {
    gap = std::max(gap, std::abs(std::abs(exact[i]) - std::abs(predicted[i])));
  }
  return gap;
}

const qcore::PureState& survived_state(const protocol::ProtocolReport& report, int hypothesis) {
  const auto& leaf = report.leaves.back();
  const auto& s = hypothesis == 0 ? leaf.state0 : leaf.state1;
  if (!s) throw NumericalError("survival branch was pruned");
  return *s;
}

}  // namespace

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::OneStepClick: return "one_step_click";
    case Quantity::OneStepSurvival: return "one_step_survival";
    case Quantity::OneStepState: return "one_step_state";
    case Quantity::KStepState: return "k_step_state";
    case Quantity::KStepSurvival: return "k_step_survival";
    case Quantity::KStepOverlap: return "k_step_overlap";
    case Quantity::FinalOverlap: return "final_overlap";
    case Quantity::BaselineSeries: return "baseline_series";
    case Quantity::PaperModeTotal: return "paper_mode_total";
  }
  return "unknown";
}

Quantity parse_quantity(std::string_view text) {
  for (Quantity q : kAllQuantities) {
    if (to_string(q) == text) return q;
  }
  throw ValidationError("unknown quantity '" + std::string(text) + "'");
}

std::span<const Quantity> all_quantities() { return kAllQuantities; }

std::vector<double> default_delta_grid() { return {1e-2, std::pow(10.0, -2.5), 1e-3}; }

protocol::ProtocolParams ParamsTemplate::at(double delta) const {
  auto p = fix_a ? protocol::ProtocolParams::from_a(a, delta, dt, k, prior)
                 : protocol::ProtocolParams::from_b(b, delta, dt, k, prior);
  p.e0 = e0;
  p.e1 = e1;
  p.direction = direction;
  if (dt_rule == DtRule::Orthogonality) p.dt = protocol::solve_orthogonality(p);
  return p;
}

double residual(Quantity q, const protocol::ProtocolParams& params) {
  params.validate();
  const auto spec = params.hamiltonian();
  switch (q) {
    case Quantity::OneStepClick:
    case Quantity::OneStepSurvival: {
      const auto init = protocol::initial_states(params).first;
      const auto s = protocol::step(spec, params.direction, params.dt, init);
      const double predicted = survival_one_step_paper(params);
      return q == Quantity::OneStepClick ? std::abs(s.click_prob - (1.0 - predicted))
                                         : std::abs(s.survive_prob - predicted);
    }
    case Quantity::OneStepState: {
      const auto [init0, init1] = protocol::initial_states(params);
      return std::max(max_magnitude_gap(qcore::evolve(spec, params.dt, init0), one_step_state(params, 0)),
                      max_magnitude_gap(qcore::evolve(spec, params.dt, init1), one_step_state(params, 1)));
    }
    case Quantity::KStepState: {
      const auto report = protocol::run(params);
      return std::max(max_magnitude_gap(survived_state(report, 0), k_step_state(params, 0)),
                      max_magnitude_gap(survived_state(report, 1), k_step_state(params, 1)));
    }
    case Quantity::KStepSurvival:
      return std::abs(protocol::run(params).survival_trajectory[0].back() - survival_k_paper(params));
    case Quantity::KStepOverlap:
      return std::abs(protocol::run(params).final_overlap() - overlap_k_paper(params));
    case Quantity::FinalOverlap:
      return protocol::run(params).final_overlap();
    case Quantity::BaselineSeries: {
      const auto base = baseline_paper_convention(params);
      return std::abs(base.closed_form - base.leading_order);
    }
    case Quantity::PaperModeTotal: {
      auto paper = params;
      paper.mode = protocol::AccountingMode::Paper;
      return std::abs(protocol::run(paper).total_cost.value() - total_cost_paper_mode(paper));
    }
  }
  throw ValidationError("unknown quantity");
}

ScalingFit fit_residuals(Quantity q, std::span<const double> deltas, std::span<const double> residuals) {
  if (deltas.size() < 3) throw ValidationError("scaling fit needs at least 3 delta values");
  if (residuals.size() != deltas.size()) throw ValidationError("residual/delta count mismatch");
  if (!std::all_of(deltas.begin(), deltas.end(), [](double d) { return d > 0.0 && std::isfinite(d); })) {
    throw ValidationError("scaling fit needs positive finite delta values");
  }
  const auto [lo, hi] = std::minmax_element(deltas.begin(), deltas.end());
  if (std::log10(*hi) - std::log10(*lo) < 1.0 - 1e-9) {
    throw ValidationError("delta grid must span at least one decade");
  }

  ScalingFit fit{.quantity = q, .exponent = std::nan(""), .intercept = std::nan(""),
                 .sample_deltas = {deltas.begin(), deltas.end()}, .residuals = {}};
  for (double r : residuals) {
    if (!std::isfinite(r)) throw NumericalError("non-finite residual in scaling fit");
    if (std::abs(r) <= kNoiseFloor) ++fit.noise_points;
    fit.residuals.push_back(std::max(std::abs(r), kNoiseFloor));
  }
  if (fit.noise_points == static_cast<int>(residuals.size())) {
    fit.indeterminate = true;
    return fit;
  }

  const double n = static_cast<double>(deltas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double x = std::log(deltas[i]);
    const double y = std::log(fit.residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.exponent * sx) / n;
  return fit;
}

ScalingFit fit_scaling(Quantity q, std::span<const double> deltas, const ParamsTemplate& tmpl) {
  std::vector<double> residuals;
  residuals.reserve(deltas.size());
  for (double d : deltas) residuals.push_back(residual(q, tmpl.at(d)));
  return fit_residuals(q, deltas, residuals);
}

}  // namespace zenolab::series
