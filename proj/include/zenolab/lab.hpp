#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zenolab/protocol.hpp"
#include "zenolab/series.hpp"

namespace zenolab::lab {

enum class ModeSelection { Exact, Paper, Both };

ModeSelection parse_mode_selection(std::string_view text);
bool includes(ModeSelection selection, protocol::AccountingMode mode);

/// Parameter grids for a sweep. Parsed from flat `key=value` lines with
/// comma-separated values; `#` starts a comment.
///
///   a | b       amplitude grid (exactly one of the two)
///   delta       coupling grid
///   dt          time-step grid, or `auto` to solve 2 k a dt = b per point
///   k           iteration counts
///   xi          priors (default 0.5)
///   mode        exact | paper | both (default both)
///   e0, e1      energies (single values)
///   direction   five comma-separated components (normalized on load)
///   precision   significant digits in reports (default 17)
///   fit_delta   delta grid for the per-row overlap exponent
///   quantity    quantities for `scaling` (default: all)
///   out         output path
struct SweepConfig {
  std::vector<double> amplitudes;
  bool fix_a = false;
  std::vector<double> deltas;
  std::vector<double> dts;
  bool auto_dt = true;
  std::vector<int> ks;
  std::vector<double> priors{0.5};
  ModeSelection mode = ModeSelection::Both;
  double e0 = 1.0;
  double e1 = 0.5;
  qcore::Vector direction = qcore::MeasurementDirection::standard().vector();
  int precision = 17;
  std::vector<double> fit_deltas = series::default_delta_grid();
  std::vector<series::Quantity> quantities;
  std::string out_path;

  void validate() const;
  std::size_t point_count() const;
};

SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::filesystem::path& path);

/// parse_config after replacing (or adding) the given keys. Setting `a` drops
/// any `b` line and vice versa. Line numbers in errors refer to the original text.
SweepConfig parse_config_overrides(std::string_view text,
                                   const std::vector<std::pair<std::string, std::string>>& overrides);

/// One evaluated parameter tuple.
struct PointSpec {
  double amplitude;  // a when fix_a, else b
  double delta;
  std::optional<double> dt;  // empty means auto
  int k;
  double prior;
};

std::vector<PointSpec> expand_grid(const SweepConfig& config);
protocol::ProtocolParams make_params(const SweepConfig& config, const PointSpec& point);
series::ParamsTemplate make_template(const SweepConfig& config, const PointSpec& point);

struct ReportRow {
  double a = 0, b = 0, delta = 0, dt = 0;
  int k = 0;
  double xi = 0, e0 = 0, e1 = 0;
  bool auto_dt = false;
  std::optional<double> total_exact;
  std::optional<double> total_paper;
  std::optional<double> baseline_exact;
  std::optional<double> baseline_paper;
  std::optional<double> baseline_paper_series;
  std::optional<double> paper_new_cost;
  /// Only defined when 2 k a dt = b.
  std::optional<double> original_cost;
  std::optional<double> final_overlap;
  std::optional<double> overlap_exponent;
  bool overlap_fit_indeterminate = false;
  std::optional<double> overlap_k_paper;
  std::optional<double> survival_exact;
  std::optional<double> survival_k_paper;
  std::vector<std::string> flags;
  int pruned = 0;
  std::string error;

  std::optional<double> exact_minus_baseline_exact() const;
  std::optional<double> exact_minus_baseline_paper() const;
  std::optional<double> paper_minus_baseline_exact() const;
  std::optional<double> paper_minus_baseline_paper() const;
  /// EXACT total >= exact Helstrom bound - 1e-10.
  std::optional<bool> exact_sanity_holds() const;
  /// PAPER total < paper-convention baseline.
  std::optional<bool> paper_claim_holds() const;
  /// EXACT total < exact Helstrom bound - 1e-10.
  std::optional<bool> exact_violation() const;
};

inline constexpr double kSanityTolerance = 1e-10;

/// Evaluates a single tuple. Never throws for per-point failures; they land in `error`.
ReportRow evaluate_point(const SweepConfig& config, const PointSpec& point);

/// Cartesian product of the grids, one row per tuple in tuple order.
std::vector<ReportRow> run_sweep(const SweepConfig& config);

std::vector<std::string_view> csv_header();
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, int precision = 17);
void write_summary(std::ostream& out, const std::vector<ReportRow>& rows, int precision = 17);

struct ReportFiles {
  std::filesystem::path csv;
  std::filesystem::path summary;
};

/// `<stem>.summary.txt` next to the CSV.
std::filesystem::path summary_path_for(const std::filesystem::path& csv_path);
ReportFiles emit_report(const std::vector<ReportRow>& rows, const std::filesystem::path& csv_path,
                        int precision = 17);

// ---------------------------------------------------------------------------

struct OptimizeRequest {
  /// Everything except the free variables; dt is taken from the first dt grid
  /// entry or solved when auto.
  SweepConfig base;
  bool free_k = false;
  bool free_dt = false;
  int k_min = 1, k_max = 1;
  double dt_min = 0.0, dt_max = 0.0;
  protocol::AccountingMode mode = protocol::AccountingMode::Exact;
};

struct OptimizeResult {
  protocol::ProtocolParams best;
  double best_cost;
  /// Best point seen on the coarse grid, before refinement.
  double best_grid_cost;
  int evaluations;
  ReportRow row;
};

OptimizeResult optimize(const OptimizeRequest& request);

// ---------------------------------------------------------------------------

struct ScalingRow {
  series::Quantity quantity;
  PointSpec point;  // delta field unused
  bool fix_a;
  std::optional<series::ScalingFit> fit;
  std::string flag;
  std::string error;
};

std::vector<ScalingRow> scaling_study(const SweepConfig& config, std::vector<series::Quantity> quantities);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows, int precision = 17);

/// printf("%.*g") into a string.
std::string format_number(double value, int precision = 17);

}  // namespace zenolab::lab
