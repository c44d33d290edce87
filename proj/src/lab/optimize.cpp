#include <cmath>
#include <limits>

#include "zenolab/lab.hpp"

namespace zenolab::lab {
namespace {

constexpr int kDtGridPoints = 17;
constexpr int kGoldenIterations = 100;

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  int k = 0;
  double dt = 0.0;
};

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

OptimizeResult optimize(const OptimizeRequest& request) {
  const auto& base = request.base;
  base.validate();
  require(request.free_k || request.free_dt, "optimize needs at least one free variable (dt or k)");
  require(base.amplitudes.size() == 1 && base.deltas.size() == 1 && base.priors.size() == 1,
          "optimize needs single values for a-or-b, delta and xi");
  if (request.free_k) {
    require(request.k_min >= 1 && request.k_min <= request.k_max, "empty k range");
  } else {
    require(base.ks.size() == 1, "k is not free, so the config must give a single k");
  }
  if (request.free_dt) {
    require(std::isfinite(request.dt_min) && std::isfinite(request.dt_max) && request.dt_min > 0.0 &&
                request.dt_min <= request.dt_max,
            "empty dt range");
  } else {
    require(base.auto_dt || base.dts.size() == 1, "dt is not free, so the config must give dt=auto or one dt");
  }

  const int k_lo = request.free_k ? request.k_min : base.ks.front();
  const int k_hi = request.free_k ? request.k_max : base.ks.front();

  PointSpec point{base.amplitudes.front(), base.deltas.front(), std::nullopt, k_lo, base.priors.front()};
  int evaluations = 0;
  auto cost_at = [&](int k, std::optional<double> dt) {
    point.k = k;
    point.dt = dt;
    auto params = make_params(base, point);
    params.mode = request.mode;
    ++evaluations;
    return std::pair{protocol::run(params).total_cost.value(), params.dt};
  };

  Candidate best, best_grid;
  auto consider = [](Candidate& slot, const Candidate& c) {
    if (c.cost < slot.cost) slot = c;
  };

  for (int k = k_lo; k <= k_hi; ++k) {
    if (!request.free_dt) {
      const auto fixed = base.auto_dt ? std::nullopt : std::optional<double>(base.dts.front());
      const auto [cost, dt] = cost_at(k, fixed);
      consider(best_grid, {cost, k, dt});
      consider(best, {cost, k, dt});
      continue;
    }

    // Coarse grid, then golden-section inside the bracket around the best grid point.
    std::vector<double> grid(kDtGridPoints);
    std::vector<double> costs(kDtGridPoints);
    const double span = request.dt_max - request.dt_min;
    int arg = 0;
    for (int j = 0; j < kDtGridPoints; ++j) {
      grid[j] = j + 1 == kDtGridPoints ? request.dt_max : request.dt_min + span * j / (kDtGridPoints - 1);
      costs[j] = cost_at(k, grid[j]).first;
      if (costs[j] < costs[arg]) arg = j;
    }
    const Candidate grid_best{costs[arg], k, grid[arg]};
    consider(best_grid, grid_best);
    consider(best, grid_best);
    if (span == 0.0) continue;

    double lo = grid[std::max(arg - 1, 0)];
    double hi = grid[std::min(arg + 1, kDtGridPoints - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = cost_at(k, x1).first;
    double f2 = cost_at(k, x2).first;
    for (int it = 0; it < kGoldenIterations && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = cost_at(k, x1).first;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = cost_at(k, x2).first;
      }
    }
    const Candidate refined = f1 <= f2 ? Candidate{f1, k, x1} : Candidate{f2, k, x2};
    consider(best, refined);
  }

  SweepConfig single = base;
  single.ks = {best.k};
  const bool keep_auto = !request.free_dt && base.auto_dt;
  single.auto_dt = keep_auto;
  single.dts = keep_auto ? std::vector<double>{} : std::vector<double>{best.dt};
  point.k = best.k;
  point.dt = keep_auto ? std::nullopt : std::optional<double>(best.dt);
  auto params = make_params(single, point);
  params.mode = request.mode;

  return OptimizeResult{
      .best = params,
      .best_cost = best.cost,
      .best_grid_cost = best_grid.cost,
      .evaluations = evaluations,
      .row = evaluate_point(single, point),
  };
}

}  // namespace zenolab::lab
