// Command-line driver: baseline, run, sweep, scaling, optimize.
//
// Exit codes: 0 success, 1 validation or I/O error, 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "zenolab/lab.hpp"

namespace {

using namespace zenolab;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string mode;
  bool quiet = false;
  std::optional<double> a, b, delta, xi;
  std::optional<std::string> dt;
  std::optional<int> k;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool point_flags) {
  cmd->add_option("--config", opts.config_path, "Config file (key=value lines)")->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_path, "Output CSV path (summary goes next to it)");
  cmd->add_option("--mode", opts.mode, "Accounting mode")->check(CLI::IsMember({"exact", "paper", "both"}));
  cmd->add_flag("--quiet", opts.quiet, "Suppress the human-readable summary");
  if (!point_flags) return;
  cmd->add_option("--a", opts.a, "Amplitude a (b follows from normalization)");
  cmd->add_option("--b", opts.b, "Amplitude coefficient b (a follows from normalization)");
  cmd->add_option("--delta", opts.delta, "Coupling delta");
  cmd->add_option("--dt", opts.dt, "Time step, or 'auto'");
  cmd->add_option("--k", opts.k, "Number of evolve/measure iterations");
  cmd->add_option("--xi", opts.xi, "Prior of hypothesis 0");
}

/// Config file (if any) with command-line overrides applied as extra lines.
lab::SweepConfig build_config(const CommonOptions& opts) {
  std::string text;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  auto config = lab::parse_config_overrides(text, [&] {
    std::vector<std::pair<std::string, std::string>> kv;
    auto num = [](double v) { return lab::format_number(v, 17); };
    if (opts.a) kv.emplace_back("a", num(*opts.a));
    if (opts.b) kv.emplace_back("b", num(*opts.b));
    if (opts.delta) kv.emplace_back("delta", num(*opts.delta));
    if (opts.dt) kv.emplace_back("dt", *opts.dt);
    if (opts.k) kv.emplace_back("k", std::to_string(*opts.k));
    if (opts.xi) kv.emplace_back("xi", num(*opts.xi));
    if (!opts.mode.empty()) kv.emplace_back("mode", opts.mode);
    if (!opts.out_path.empty()) kv.emplace_back("out", opts.out_path);
    return kv;
  }());
  return config;
}

/// CSV to --out (or stdout); summary next to it (or stderr) unless quiet.
void emit(const std::string& out_path, bool quiet, const std::string& csv, const std::string& summary) {
  if (out_path.empty()) {
    std::cout << csv;
    if (!quiet) std::cerr << summary;
    return;
  }
  const std::filesystem::path csv_path(out_path);
  for (const auto& [path, body] : {std::pair{csv_path, &csv}, std::pair{lab::summary_path_for(csv_path), &summary}}) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << *body)) throw std::runtime_error("cannot write " + path.string());
  }
  if (!quiet) std::cout << summary;
}

int cmd_baseline(const lab::SweepConfig& config, bool quiet) {
  std::ostringstream csv, summary;
  const int p = config.precision;
  csv << "a,b,delta,xi,overlap_exact,transition_exact,baseline_exact,cos2_paper,baseline_paper,"
         "baseline_paper_series,ratio_paper_over_exact\n";
  auto collapsed = config;
  collapsed.ks = {1};
  collapsed.auto_dt = false;
  collapsed.dts = {1.0};
  for (const auto& point : lab::expand_grid(collapsed)) {
    const auto params = lab::make_params(collapsed, point);
    const auto [psi0, psi1] = protocol::initial_states(params);
    const double overlap = std::abs(qcore::inner_product(psi0, psi1));
    const double exact = helstrom::helstrom_pure({psi0, psi1, params.prior}).value();
    const auto paper = series::baseline_paper_convention(params);
    const double cos2 = params.b * params.delta * params.b * params.delta;
    const double ratio = exact > 0.0 ? paper.closed_form / exact : std::nan("");
    using lab::format_number;
    csv << format_number(params.a, p) << ',' << format_number(params.b, p) << ','
        << format_number(params.delta, p) << ',' << format_number(params.prior, p) << ','
        << format_number(overlap, p) << ',' << format_number(overlap * overlap, p) << ','
        << format_number(exact, p) << ',' << format_number(cos2, p) << ',' << format_number(paper.closed_form, p)
        << ',' << format_number(paper.leading_order, p) << ',' << format_number(ratio, p) << '\n';
    summary << "b=" << format_number(params.b, p) << " delta=" << format_number(params.delta, p)
            << " xi=" << format_number(params.prior, p) << "\n"
            << "  exact Helstrom (T=|<psi0|psi1>|^2=" << format_number(overlap * overlap, p)
            << "): " << format_number(exact, p) << "\n"
            << "  paper-convention Helstrom (T=b^2 delta^2=" << format_number(cos2, p)
            << "): " << format_number(paper.closed_form, p) << "  leading order "
            << format_number(paper.leading_order, p) << "\n";
  }
  emit(config.out_path, quiet, csv.str(), summary.str());
  return 0;
}

int cmd_run(const lab::SweepConfig& config, bool quiet) {
  if (config.point_count() != 1) throw ValidationError("run needs exactly one parameter point");
  const auto point = lab::expand_grid(config).front();
  auto params = lab::make_params(config, point);
  const int p = config.precision;
  using lab::format_number;

  std::ostringstream csv, summary;
  csv << "mode,kind,step,p_given_h0,p_given_h1,marginal,posterior,leaf_cost,pruned\n";
  for (auto mode : {protocol::AccountingMode::Exact, protocol::AccountingMode::Paper}) {
    if (!lab::includes(config.mode, mode)) continue;
    params.mode = mode;
    const auto report = protocol::run(params);
    for (const auto& leaf : report.leaves) {
      csv << protocol::to_string(mode) << ',' << (leaf.kind == protocol::LeafKind::Click ? "click" : "survived")
          << ',' << leaf.step << ',' << format_number(leaf.p_given_h0, p) << ','
          << format_number(leaf.p_given_h1, p) << ',' << format_number(leaf.marginal, p) << ','
          << format_number(leaf.posterior, p) << ',' << format_number(leaf.leaf_cost.value(), p) << ','
          << (leaf.pruned ? "true" : "false") << '\n';
    }
    summary << "mode=" << protocol::to_string(mode) << " a=" << format_number(params.a, p)
            << " b=" << format_number(params.b, p) << " delta=" << format_number(params.delta, p)
            << " dt=" << format_number(params.dt, p) << " k=" << params.k
            << " xi=" << format_number(params.prior, p) << "\n"
            << "  total cost        " << format_number(report.total_cost.value(), p) << "\n"
            << "  baseline exact    " << format_number(report.baseline_exact.value(), p) << "\n"
            << "  baseline paper    " << format_number(report.baseline_paper.value(), p) << "\n"
            << "  new-cost formula  " << format_number(report.paper_new_cost, p) << "\n"
            << "  total - exact     " << format_number(report.verdict.vs_exact, p) << "\n"
            << "  total - paper     " << format_number(report.verdict.vs_paper, p) << "\n"
            << "  overlap trajectory";
    for (double o : report.overlap_trajectory) summary << ' ' << format_number(o, p);
    summary << "\n  survival h0/h1    " << format_number(report.survival_trajectory[0].back(), p) << " / "
            << format_number(report.survival_trajectory[1].back(), p) << "\n";
    for (const auto& msg : report.pruned) summary << "  pruned: " << msg << "\n";
  }
  emit(config.out_path, quiet, csv.str(), summary.str());
  return 0;
}

int cmd_sweep(const lab::SweepConfig& config, bool quiet) {
  const auto rows = lab::run_sweep(config);
  std::ostringstream csv, summary;
  lab::write_csv(csv, rows, config.precision);
  lab::write_summary(summary, rows, config.precision);
  emit(config.out_path, quiet, csv.str(), summary.str());
  return 0;
}

int cmd_scaling(const lab::SweepConfig& config, const std::vector<std::string>& names, bool quiet) {
  std::vector<series::Quantity> quantities;
  for (const auto& n : names) quantities.push_back(series::parse_quantity(n));
  const auto rows = lab::scaling_study(config, quantities);
  std::ostringstream csv, summary;
  lab::write_scaling_csv(csv, rows, config.precision);
  for (const auto& r : rows) {
    summary << series::to_string(r.quantity) << " k=" << r.point.k << ": ";
    if (!r.error.empty()) {
      summary << "error: " << r.error << "\n";
    } else if (r.fit->indeterminate) {
      summary << "indeterminate (all residuals at noise floor)\n";
    } else {
      summary << "exponent " << lab::format_number(r.fit->exponent, 6) << (r.flag.empty() ? "" : "  [" + r.flag + "]")
              << "\n";
    }
  }
  emit(config.out_path, quiet, csv.str(), summary.str());
  return 0;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("range must be lo:hi, got '" + text + "'");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ValidationError("range must be lo:hi, got '" + text + "'");
  }
}

int cmd_optimize(const lab::SweepConfig& config, const std::vector<std::string>& free, const std::string& k_range,
                 const std::string& dt_range, bool quiet) {
  lab::OptimizeRequest req;
  req.base = config;
  for (const auto& f : free) {
    if (f == "k") {
      req.free_k = true;
    } else if (f == "dt") {
      req.free_dt = true;
    } else {
      throw ValidationError("--free accepts dt and k, got '" + f + "'");
    }
  }
  if (config.mode == lab::ModeSelection::Both) throw ValidationError("optimize needs --mode exact or --mode paper");
  req.mode = config.mode == lab::ModeSelection::Exact ? protocol::AccountingMode::Exact
                                                      : protocol::AccountingMode::Paper;
  if (req.free_k) {
    const auto [lo, hi] = parse_range(k_range);
    if (lo != std::floor(lo) || hi != std::floor(hi)) throw ValidationError("k range must be integers");
    req.k_min = static_cast<int>(lo);
    req.k_max = static_cast<int>(hi);
    req.base.ks = {req.k_min};
  }
  if (req.free_dt) {
    std::tie(req.dt_min, req.dt_max) = parse_range(dt_range);
    req.base.auto_dt = true;
    req.base.dts.clear();
  }
  const auto result = lab::optimize(req);
  std::ostringstream csv, summary;
  lab::write_csv(csv, {result.row}, config.precision);
  const int p = config.precision;
  summary << "optimize (" << protocol::to_string(req.mode) << " mode): best k=" << result.best.k
          << " dt=" << lab::format_number(result.best.dt, p) << " cost=" << lab::format_number(result.best_cost, p)
          << " (best grid cost " << lab::format_number(result.best_grid_cost, p) << ", " << result.evaluations
          << " evaluations)\n";
  lab::write_summary(summary, {result.row}, p);
  emit(config.out_path, quiet, csv.str(), summary.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative-measurement state discrimination lab"};
  app.require_subcommand(1);

  CommonOptions baseline_opts, run_opts, sweep_opts, scaling_opts, optimize_opts;
  std::vector<std::string> quantities, free;
  std::string k_range = "1:20", dt_range;

  auto* baseline = app.add_subcommand("baseline", "Print both Helstrom baselines for the hypothesis pair");
  add_common(baseline, baseline_opts, true);
  auto* run = app.add_subcommand("run", "Evaluate the protocol at a single parameter point");
  add_common(run, run_opts, true);
  auto* sweep = app.add_subcommand("sweep", "Evaluate the Cartesian product of the config grids");
  add_common(sweep, sweep_opts, true);
  auto* scaling = app.add_subcommand("scaling", "Fit delta-scaling exponents of series residuals");
  add_common(scaling, scaling_opts, true);
  scaling->add_option("--quantity", quantities, "Quantities to fit, comma-separated or repeated (default: all)")->delimiter(',');
  auto* opt = app.add_subcommand("optimize", "Minimize total cost over dt and/or k");
  add_common(opt, optimize_opts, true);
  opt->add_option("--free", free, "Free variables: dt, k")->delimiter(',')->required();
  opt->add_option("--k-range", k_range, "Integer k range lo:hi");
  opt->add_option("--dt-range", dt_range, "dt range lo:hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (opt->parsed() && !optimize_opts.k && std::find(free.begin(), free.end(), "k") != free.end()) {
    optimize_opts.k = 1;
  }
  // The baselines do not depend on k; a placeholder keeps the shared grid validation happy.
  if (baseline->parsed() && !baseline_opts.k) baseline_opts.k = 1;

  try {
    if (baseline->parsed()) return cmd_baseline(build_config(baseline_opts), baseline_opts.quiet);
    if (run->parsed()) return cmd_run(build_config(run_opts), run_opts.quiet);
    if (sweep->parsed()) return cmd_sweep(build_config(sweep_opts), sweep_opts.quiet);
    if (scaling->parsed()) return cmd_scaling(build_config(scaling_opts), quantities, scaling_opts.quiet);
    if (opt->parsed()) return cmd_optimize(build_config(optimize_opts), free, k_range, dt_range, optimize_opts.quiet);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DegenerateBranchError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
