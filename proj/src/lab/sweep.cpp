#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "zenolab/lab.hpp"

namespace zenolab::lab {
namespace {

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::optional<double> diff(const std::optional<double>& x, const std::optional<double>& y) {
  if (!x || !y) return std::nullopt;
  return *x - *y;
}

}  // namespace

std::optional<double> ReportRow::exact_minus_baseline_exact() const { return diff(total_exact, baseline_exact); }
std::optional<double> ReportRow::exact_minus_baseline_paper() const { return diff(total_exact, baseline_paper); }
std::optional<double> ReportRow::paper_minus_baseline_exact() const { return diff(total_paper, baseline_exact); }
std::optional<double> ReportRow::paper_minus_baseline_paper() const { return diff(total_paper, baseline_paper); }

std::optional<bool> ReportRow::exact_sanity_holds() const {
  const auto d = exact_minus_baseline_exact();
  if (!d) return std::nullopt;
  return *d >= -kSanityTolerance;
}

std::optional<bool> ReportRow::paper_claim_holds() const {
  const auto d = paper_minus_baseline_paper();
  if (!d) return std::nullopt;
  return *d < 0.0;
}

std::optional<bool> ReportRow::exact_violation() const {
  const auto d = exact_minus_baseline_exact();
  if (!d) return std::nullopt;
  return *d < -kSanityTolerance;
}

std::vector<PointSpec> expand_grid(const SweepConfig& config) {
  config.validate();
  std::vector<std::optional<double>> dts;
  if (config.auto_dt) {
    dts.emplace_back();
  } else {
    for (double dt : sorted(config.dts)) dts.emplace_back(dt);
  }
  std::vector<PointSpec> points;
  points.reserve(config.point_count());
  for (double amp : sorted(config.amplitudes))
    for (double delta : sorted(config.deltas))
      for (const auto& dt : dts)
        for (int k : sorted(config.ks))
          for (double xi : sorted(config.priors)) points.push_back({amp, delta, dt, k, xi});
  return points;
}

series::ParamsTemplate make_template(const SweepConfig& config, const PointSpec& point) {
  series::ParamsTemplate t;
  t.fix_a = config.fix_a;
  (config.fix_a ? t.a : t.b) = point.amplitude;
  t.dt_rule = point.dt ? series::DtRule::Fixed : series::DtRule::Orthogonality;
  t.dt = point.dt.value_or(1.0);
  t.k = point.k;
  t.e0 = config.e0;
  t.e1 = config.e1;
  t.prior = point.prior;
  t.direction = qcore::MeasurementDirection(config.direction);
  return t;
}

protocol::ProtocolParams make_params(const SweepConfig& config, const PointSpec& point) {
  return make_template(config, point).at(point.delta);
}

ReportRow evaluate_point(const SweepConfig& config, const PointSpec& point) {
  ReportRow row;
  row.delta = point.delta;
  row.k = point.k;
  row.xi = point.prior;
  row.e0 = config.e0;
  row.e1 = config.e1;
  row.auto_dt = !point.dt;
  (config.fix_a ? row.a : row.b) = point.amplitude;
  row.dt = point.dt.value_or(std::nan(""));
  row.flags = {std::string(series::kOverlapDtPowerFlag), std::string(series::kSurvivalCoefficientFlag)};

  try {
    auto params = make_params(config, point);
    row.a = params.a;
    row.b = params.b;
    row.dt = params.dt;

    for (auto mode : {protocol::AccountingMode::Exact, protocol::AccountingMode::Paper}) {
      if (!includes(config.mode, mode)) continue;
      params.mode = mode;
      const auto report = protocol::run(params);
      (mode == protocol::AccountingMode::Exact ? row.total_exact : row.total_paper) = report.total_cost.value();
      row.baseline_exact = report.baseline_exact.value();
      row.baseline_paper = report.baseline_paper.value();
      row.paper_new_cost = report.paper_new_cost;
      row.final_overlap = report.final_overlap();
      row.survival_exact = report.survival_trajectory[0].back();
      row.pruned = static_cast<int>(report.pruned.size());
    }
    row.baseline_paper_series = series::baseline_paper_convention(params).leading_order;
    row.overlap_k_paper = series::overlap_k_paper(params);
    row.survival_k_paper = series::survival_k_paper(params);
    if (std::abs(2.0 * params.k * params.a * params.dt - params.b) <= 1e-9 * std::max(1.0, std::abs(params.b))) {
      row.original_cost = series::original_cost(params);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    return row;
  }

  try {
    const auto fit = series::fit_scaling(series::Quantity::FinalOverlap, config.fit_deltas,
                                         make_template(config, point));
    row.overlap_fit_indeterminate = fit.indeterminate;
    if (!fit.indeterminate) row.overlap_exponent = fit.exponent;
  } catch (const std::exception& e) {
    row.error = std::string("overlap fit: ") + e.what();
  }
  return row;
}

std::vector<ReportRow> run_sweep(const SweepConfig& config) {
  const auto points = expand_grid(config);
  std::vector<ReportRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = evaluate_point(config, points[i]);
  };
  const auto n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, points.size() ? points.size() : 1);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

}  // namespace zenolab::lab
