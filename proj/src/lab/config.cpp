#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "zenolab/lab.hpp"

namespace zenolab::lab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    items.push_back(trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

class LineError {
 public:
  explicit LineError(int line) : line_(line) {}
  [[noreturn]] void fail(const std::string& message) const {
    throw ValidationError("config line " + std::to_string(line_) + ": " + message);
  }

 private:
  int line_;
};

double parse_double(std::string_view item, const LineError& at) {
  if (item.empty()) at.fail("empty value in list");
  double v = 0.0;
  const auto* end = item.data() + item.size();
  auto [ptr, ec] = std::from_chars(item.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    at.fail("not a finite number: '" + std::string(item) + "'");
  }
  return v;
}

int parse_int(std::string_view item, const LineError& at) {
  if (item.empty()) at.fail("empty value in list");
  int v = 0;
  const auto* end = item.data() + item.size();
  auto [ptr, ec] = std::from_chars(item.data(), end, v);
  if (ec != std::errc() || ptr != end) at.fail("not an integer: '" + std::string(item) + "'");
  return v;
}

std::vector<double> parse_doubles(std::string_view value, const LineError& at) {
  std::vector<double> out;
  for (auto item : split_list(value)) out.push_back(parse_double(item, at));
  return out;
}

double parse_single(std::string_view value, const LineError& at) {
  const auto items = parse_doubles(value, at);
  if (items.size() != 1) at.fail("expected a single value");
  return items.front();
}

}  // namespace

ModeSelection parse_mode_selection(std::string_view text) {
  if (text == "exact") return ModeSelection::Exact;
  if (text == "paper") return ModeSelection::Paper;
  if (text == "both") return ModeSelection::Both;
  throw ValidationError("unknown mode '" + std::string(text) + "' (expected exact|paper|both)");
}

bool includes(ModeSelection selection, protocol::AccountingMode mode) {
  if (selection == ModeSelection::Both) return true;
  return (selection == ModeSelection::Exact) == (mode == protocol::AccountingMode::Exact);
}

void SweepConfig::validate() const {
  if (amplitudes.empty()) throw ValidationError("config needs an `a` or `b` grid");
  if (deltas.empty()) throw ValidationError("config needs a `delta` grid");
  if (ks.empty()) throw ValidationError("config needs a `k` grid");
  if (priors.empty()) throw ValidationError("`xi` grid is empty");
  if (!auto_dt && dts.empty()) throw ValidationError("`dt` grid is empty");
  if (auto_dt && !dts.empty()) throw ValidationError("dt=auto and explicit dt values are mutually exclusive");
  if (precision < 1 || precision > 17) throw ValidationError("precision must be in [1, 17]");
  if (direction.size() != qcore::kModelDimension) throw ValidationError("direction must have 5 components");
}

std::size_t SweepConfig::point_count() const {
  return amplitudes.size() * deltas.size() * (auto_dt ? 1 : dts.size()) * ks.size() * priors.size();
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig config;
  std::set<std::string, std::less<>> seen;
  bool have_dt = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const LineError at(line_no);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) at.fail("expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) at.fail("missing key");
    if (value.empty()) at.fail("empty grid for '" + std::string(key) + "'");
    if (!seen.emplace(key).second) at.fail("duplicate key '" + std::string(key) + "'");

    if (key == "a" || key == "b") {
      if (seen.contains(key == "a" ? "b" : "a")) at.fail("`a` and `b` are mutually exclusive");
      config.fix_a = key == "a";
      config.amplitudes = parse_doubles(value, at);
      for (double v : config.amplitudes) {
        if (config.fix_a && (v < 0.0 || v > 1.0)) at.fail("a must lie in [0, 1]");
      }
    } else if (key == "delta") {
      config.deltas = parse_doubles(value, at);
      for (double v : config.deltas) {
        if (v < 0.0) at.fail("delta must be nonnegative");
      }
    } else if (key == "dt") {
      have_dt = true;
      const auto items = split_list(value);
      const bool any_auto = std::any_of(items.begin(), items.end(), [](auto s) { return s == "auto"; });
      if (any_auto) {
        if (items.size() != 1) at.fail("dt=auto cannot be combined with explicit dt values");
        config.auto_dt = true;
        config.dts.clear();
      } else {
        config.auto_dt = false;
        config.dts = parse_doubles(value, at);
        for (double v : config.dts) {
          if (v <= 0.0) at.fail("dt must be positive");
        }
      }
    } else if (key == "k") {
      config.ks.clear();
      for (auto item : split_list(value)) {
        const int k = parse_int(item, at);
        if (k < 1) at.fail("k must be at least 1");
        config.ks.push_back(k);
      }
    } else if (key == "xi") {
      config.priors = parse_doubles(value, at);
      for (double v : config.priors) {
        if (v < 0.0 || v > 1.0) at.fail("xi must lie in [0, 1], got " + std::string(value));
      }
    } else if (key == "mode") {
      try {
        config.mode = parse_mode_selection(value);
      } catch (const ValidationError& e) {
        at.fail(e.what());
      }
    } else if (key == "e0") {
      config.e0 = parse_single(value, at);
    } else if (key == "e1") {
      config.e1 = parse_single(value, at);
    } else if (key == "direction") {
      const auto comps = parse_doubles(value, at);
      if (comps.size() != qcore::kModelDimension) at.fail("direction needs 5 components");
      qcore::Vector v(qcore::kModelDimension);
      for (int i = 0; i < qcore::kModelDimension; ++i) v(i) = comps[i];
      try {
        config.direction = qcore::MeasurementDirection(v).vector();
      } catch (const std::exception& e) {
        at.fail(std::string("invalid direction: ") + e.what());
      }
    } else if (key == "precision") {
      config.precision = parse_int(value, at);
      if (config.precision < 1 || config.precision > 17) at.fail("precision must be in [1, 17]");
    } else if (key == "fit_delta") {
      config.fit_deltas = parse_doubles(value, at);
      if (config.fit_deltas.size() < 3) at.fail("fit_delta needs at least 3 values");
    } else if (key == "quantity") {
      for (auto item : split_list(value)) {
        try {
          config.quantities.push_back(series::parse_quantity(item));
        } catch (const ValidationError& e) {
          at.fail(e.what());
        }
      }
    } else if (key == "out") {
      config.out_path = std::string(value);
    } else {
      at.fail("unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_dt) config.auto_dt = true;
  config.validate();
  return config;
}

SweepConfig parse_config_overrides(std::string_view text,
                                   const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::set<std::string, std::less<>> replaced;
  for (const auto& [key, value] : overrides) {
    replaced.insert(key);
    if (key == "a") replaced.insert("b");
    if (key == "b") replaced.insert("a");
  }
  std::string merged;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    auto body = line.substr(0, line.find('#'));
    const auto eq = body.find('=');
    const bool drop = eq != std::string_view::npos && replaced.contains(trim(body.substr(0, eq)));
    if (!drop) merged += line;
    merged += '\n';
  }
  for (const auto& [key, value] : overrides) merged += key + "=" + value + "\n";
  return parse_config(merged);
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace zenolab::lab
