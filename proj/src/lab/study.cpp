#include "zenolab/lab.hpp"

namespace zenolab::lab {

std::vector<ScalingRow> scaling_study(const SweepConfig& config, std::vector<series::Quantity> quantities) {
  config.validate();
  if (config.deltas.size() < 3) throw ValidationError("scaling study needs a delta grid with at least 3 points");
  if (quantities.empty()) quantities = config.quantities;
  if (quantities.empty()) quantities.assign(series::all_quantities().begin(), series::all_quantities().end());

  // One row per (quantity, tuple without delta); delta is the fit axis.
  SweepConfig collapsed = config;
  collapsed.deltas = {config.deltas.front()};
  const auto points = expand_grid(collapsed);

  std::vector<ScalingRow> rows;
  for (auto q : quantities) {
    for (const auto& point : points) {
      ScalingRow row{.quantity = q, .point = point, .fix_a = config.fix_a, .fit = {}, .flag = {}, .error = {}};
      if (q == series::Quantity::KStepOverlap) row.flag = series::kOverlapDtPowerFlag;
      if (q == series::Quantity::KStepSurvival) row.flag = series::kSurvivalCoefficientFlag;
      try {
        row.fit = series::fit_scaling(q, config.deltas, make_template(config, point));
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace zenolab::lab
