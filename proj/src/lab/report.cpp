#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "zenolab/lab.hpp"

namespace zenolab::lab {
namespace {

constexpr std::string_view kHeader[] = {
    "a", "b", "delta", "dt", "dt_auto", "k", "xi", "e0", "e1",
    "total_exact", "total_paper", "baseline_exact", "baseline_paper", "baseline_paper_series",
    "paper_new_cost", "original_cost", "final_overlap", "overlap_exponent", "overlap_fit_indeterminate",
    "overlap_k_paper", "survival_exact", "survival_k_paper",
    "exact_minus_baseline_exact", "exact_minus_baseline_paper", "paper_minus_baseline_exact",
    "paper_minus_baseline_paper", "exact_sanity", "paper_claim", "exact_violation", "flags", "pruned", "error",
};

std::string opt(const std::optional<double>& v, int precision) {
  return v ? format_number(*v, precision) : std::string();
}

std::string opt(const std::optional<bool>& v) {
  return v ? (*v ? "true" : "false") : std::string();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string verdict_word(const std::optional<bool>& v, const char* yes, const char* no) {
  return v ? (*v ? yes : no) : "n/a";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string format_number(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  return buf;
}

std::vector<std::string_view> csv_header() { return {std::begin(kHeader), std::end(kHeader)}; }

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, int precision) {
  out << join({std::begin(kHeader), std::end(kHeader)}, ',') << '\n';
  const auto num = [precision](double v) { return format_number(v, precision); };
  for (const auto& r : rows) {
    const std::vector<std::string> fields{
        num(r.a), num(r.b), num(r.delta), num(r.dt), r.auto_dt ? "true" : "false", std::to_string(r.k),
        num(r.xi), num(r.e0), num(r.e1),
        opt(r.total_exact, precision), opt(r.total_paper, precision), opt(r.baseline_exact, precision),
        opt(r.baseline_paper, precision), opt(r.baseline_paper_series, precision),
        opt(r.paper_new_cost, precision), opt(r.original_cost, precision), opt(r.final_overlap, precision),
        opt(r.overlap_exponent, precision), r.overlap_fit_indeterminate ? "true" : "false",
        opt(r.overlap_k_paper, precision), opt(r.survival_exact, precision), opt(r.survival_k_paper, precision),
        opt(r.exact_minus_baseline_exact(), precision), opt(r.exact_minus_baseline_paper(), precision),
        opt(r.paper_minus_baseline_exact(), precision), opt(r.paper_minus_baseline_paper(), precision),
        opt(r.exact_sanity_holds()), opt(r.paper_claim_holds()), opt(r.exact_violation()),
        join(r.flags, ';'), std::to_string(r.pruned), csv_field(r.error),
    };
    out << join(fields, ',') << '\n';
  }
}

void write_summary(std::ostream& out, const std::vector<ReportRow>& rows, int precision) {
  const auto num = [precision](const std::optional<double>& v) {
    return v ? format_number(*v, precision) : std::string("n/a");
  };
  out << "Adjudication summary: " << rows.size() << " parameter point(s)\n"
      << "  paper-mode claim  : PAPER-mode total < paper-convention baseline (T = b^2 delta^2)\n"
      << "  exact-mode sanity : EXACT-mode total >= exact Helstrom bound - 1e-10 (T = |<psi0|psi1>|^2)\n"
      << "  exact violation   : EXACT-mode total < exact Helstrom bound - 1e-10\n";

  int claims = 0, sanity = 0, violations = 0, errors = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "\nRow " << (i + 1) << ": a=" << format_number(r.a, precision) << " b=" << format_number(r.b, precision)
        << " delta=" << format_number(r.delta, precision) << " dt=" << format_number(r.dt, precision)
        << (r.auto_dt ? " (auto: 2 k a dt = b)" : "") << " k=" << r.k
        << " xi=" << format_number(r.xi, precision) << "\n";
    if (!r.error.empty()) {
      out << "  error: " << r.error << "\n";
      ++errors;
      if (!r.total_exact && !r.total_paper) continue;
    }
    std::optional<double> ratio;
    if (r.baseline_paper && r.baseline_exact && *r.baseline_exact > 0.0) ratio = *r.baseline_paper / *r.baseline_exact;
    out << "  PAPER-mode total               " << num(r.total_paper) << "\n"
        << "  EXACT-mode total               " << num(r.total_exact) << "\n"
        << "  baseline exact (T=|<.|.>|^2)   " << num(r.baseline_exact) << "\n"
        << "  baseline paper (T=b^2 d^2)     " << num(r.baseline_paper) << "  (leading order "
        << num(r.baseline_paper_series) << ")\n"
        << "  baseline ratio paper/exact     " << num(ratio) << "\n"
        << "  new-cost formula k a^2 dt^2 d^2/4  " << num(r.paper_new_cost) << "\n"
        << "  original-cost formula a^2 k^2 dt^2 d^2  " << num(r.original_cost) << "\n"
        << "  final exact overlap            " << num(r.final_overlap) << "  (delta exponent "
        << (r.overlap_fit_indeterminate ? std::string("indeterminate") : num(r.overlap_exponent)) << ")\n"
        << "  overlap_k_paper                " << num(r.overlap_k_paper)
        << "  [flag: verbatim, single power of dt]\n"
        << "  survival exact | survival_k_paper  " << num(r.survival_exact) << " | " << num(r.survival_k_paper)
        << "  [flag: verbatim, coefficient 1/4]\n";
    const auto claim = r.paper_claim_holds();
    const auto sane = r.exact_sanity_holds();
    const auto viol = r.exact_violation();
    claims += claim.value_or(false);
    sanity += sane.value_or(false);
    violations += viol.value_or(false);
    out << "  paper-mode claim: " << verdict_word(claim, "HOLDS", "FAILS") << " (PAPER - baseline paper = "
        << num(r.paper_minus_baseline_paper()) << ")\n"
        << "  exact-mode sanity: " << verdict_word(sane, "HOLDS", "FAILS") << " (EXACT - baseline exact = "
        << num(r.exact_minus_baseline_exact()) << ")\n"
        << "  exact violation of the Helstrom bound: " << verdict_word(viol, "YES", "NO") << "\n";
  }
  out << "\nTotals: paper-mode claim holds in " << claims << ", exact-mode sanity holds in " << sanity
      << ", exact violations " << violations << ", errors " << errors << " of " << rows.size() << " row(s)\n";
}

std::filesystem::path summary_path_for(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".summary.txt");
  return p;
}

ReportFiles emit_report(const std::vector<ReportRow>& rows, const std::filesystem::path& csv_path, int precision) {
  if (rows.empty()) throw ValidationError("no rows to report");
  std::ostringstream csv, summary;
  write_csv(csv, rows, precision);
  write_summary(summary, rows, precision);
  ReportFiles files{csv_path, summary_path_for(csv_path)};
  write_file(files.csv, csv.str());
  write_file(files.summary, summary.str());
  return files;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows, int precision) {
  out << "quantity,amplitude_kind,amplitude,dt,dt_auto,k,xi,exponent,intercept,indeterminate,noise_points,"
         "deltas,residuals,flag,error\n";
  for (const auto& r : rows) {
    std::vector<std::string> deltas, residuals;
    std::string exponent, intercept, indeterminate, noise;
    if (r.fit) {
      for (double d : r.fit->sample_deltas) deltas.push_back(format_number(d, precision));
      for (double v : r.fit->residuals) residuals.push_back(format_number(v, precision));
      if (!r.fit->indeterminate) {
        exponent = format_number(r.fit->exponent, precision);
        intercept = format_number(r.fit->intercept, precision);
      }
      indeterminate = r.fit->indeterminate ? "true" : "false";
      noise = std::to_string(r.fit->noise_points);
    }
    const std::vector<std::string> fields{
        std::string(series::to_string(r.quantity)), r.fix_a ? "a" : "b", format_number(r.point.amplitude, precision),
        r.point.dt ? format_number(*r.point.dt, precision) : std::string(), r.point.dt ? "false" : "true",
        std::to_string(r.point.k), format_number(r.point.prior, precision), exponent, intercept, indeterminate,
        noise, join(deltas, ';'), join(residuals, ';'), r.flag, csv_field(r.error),
    };
    out << join(fields, ',') << '\n';
  }
}

}  // namespace zenolab::lab
