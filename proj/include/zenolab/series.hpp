#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zenolab/protocol.hpp"

// Perturbative (small-delta) expressions for the negative-measurement
// protocol, implemented exactly as displayed in the original derivation.
// Phase factors exp(i E t) are dropped; only component magnitudes and the
// relative factors of i are kept. Two expressions are suspected typos and are
// kept verbatim: overlap_k_paper (single power of dt in its second term) and
// survival_k_paper (coefficient 1/4 where compounding gives 1/2).
namespace zenolab::series {

using Amplitudes = std::array<qcore::Complex, qcore::kModelDimension>;

struct SeriesPrediction {
  std::string quantity;
  qcore::Complex value;
  /// Power of delta at which the displayed expansion is truncated.
  int stated_error_order;
};

/// Evolved (pre-measurement) state after one dt, to O(delta^2).
Amplitudes one_step_state(const protocol::ProtocolParams& params, int hypothesis);

/// 1 - a^2 delta^2 dt^2 / 2.
double survival_one_step_paper(const protocol::ProtocolParams& params);

/// Post-survival state after k steps, including the (1 - a^2 delta^2 dt^2/2)^(-k/2) prefactor.
/// For k = 1 this is the displayed one-step post-survival state.
Amplitudes k_step_state(const protocol::ProtocolParams& params, int hypothesis);

/// 1 - a^2 k delta^2 dt^2 / 4 (verbatim coefficient).
double survival_k_paper(const protocol::ProtocolParams& params);

/// (1 + a^2 k delta^2 dt^2 / 4)(b^2 delta^2 - 2 a^2 k^2 dt delta^2) (verbatim dt power).
double overlap_k_paper(const protocol::ProtocolParams& params);

struct PaperBaseline {
  /// 1/2 (1 - sqrt(1 - 4 xi (1-xi) b^2 delta^2)).
  double closed_form;
  /// xi (1-xi) b^2 delta^2, i.e. b^2 delta^2 / 4 at xi = 1/2.
  double leading_order;
};

/// Helstrom cost with the overlap amplitude b^2 delta^2 used as the transition probability.
PaperBaseline baseline_paper_convention(const protocol::ProtocolParams& params);

/// a^2 k^2 dt^2 delta^2. Requires 2 k a dt = b (relative tolerance 1e-9).
double original_cost(const protocol::ProtocolParams& params);

/// Names of the displayed expressions covered by this module, in display order.
std::span<const std::string_view> checklist();

/// Flags attached to the two verbatim-but-suspect expressions.
inline constexpr std::string_view kOverlapDtPowerFlag = "overlap_k_paper:single_dt_power_verbatim";
inline constexpr std::string_view kSurvivalCoefficientFlag = "survival_k_paper:quarter_coefficient_verbatim";

// ---------------------------------------------------------------------------
// Residual scaling fits.

enum class Quantity {
  OneStepClick,      ///< |exact click - a^2 delta^2 dt^2 / 2|
  OneStepSurvival,   ///< |exact survival - (1 - a^2 delta^2 dt^2 / 2)|
  OneStepState,      ///< max_i ||exact_i| - |one_step_state_i||
  KStepState,        ///< max_i ||exact_i| - |k_step_state_i||
  KStepSurvival,     ///< |exact cumulative survival - survival_k_paper|
  KStepOverlap,      ///< ||<psi0|psi1>|_exact - overlap_k_paper|
  FinalOverlap,      ///< |<psi0|psi1>|_exact after k steps (residual against 0)
  BaselineSeries,    ///< closed-form paper baseline - leading order
  PaperModeTotal,    ///< |Paper-mode total cost - k a^2 dt^2 delta^2 / 4|
};

std::string_view to_string(Quantity q);
Quantity parse_quantity(std::string_view text);
std::span<const Quantity> all_quantities();

inline constexpr double kNoiseFloor = 1e-14;

struct ScalingFit {
  Quantity quantity;
  /// Least-squares slope of log(residual) against log(delta).
  double exponent;
  double intercept;
  std::vector<double> sample_deltas;
  /// Residuals after flooring at kNoiseFloor.
  std::vector<double> residuals;
  /// Number of samples that were at or below the noise floor.
  int noise_points = 0;
  /// Every sample at the noise floor; exponent is meaningless.
  bool indeterminate = false;
};

/// How dt is chosen when delta changes across the grid.
enum class DtRule { Fixed, Orthogonality };

/// Parameters minus delta. b (or a, when fix_a is set) is held fixed and the
/// other amplitude follows from normalization.
struct ParamsTemplate {
  double b = 0.0;
  double a = 1.0;
  bool fix_a = false;
  double dt = 1.0;
  DtRule dt_rule = DtRule::Orthogonality;
  int k = 1;
  double e0 = 1.0;
  double e1 = 0.5;
  double prior = 0.5;
  qcore::MeasurementDirection direction = qcore::MeasurementDirection::standard();

  protocol::ProtocolParams at(double delta) const;
};

/// {1e-2, 10^-2.5, 1e-3}
std::vector<double> default_delta_grid();

double residual(Quantity q, const protocol::ProtocolParams& params);

ScalingFit fit_scaling(Quantity q, std::span<const double> deltas, const ParamsTemplate& tmpl);

/// Fit on residuals that were computed elsewhere. Same preconditions as fit_scaling.
ScalingFit fit_residuals(Quantity q, std::span<const double> deltas, std::span<const double> residuals);

}  // namespace zenolab::series
