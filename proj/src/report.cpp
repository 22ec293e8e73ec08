#include "wovl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wovl/error.hpp"

namespace wovl {

using nlohmann::json;

std::string format_fixed6(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  std::string s(buf, r.ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

double positive_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) config_error(path + "." + key, "required field missing");
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(path + "." + key, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d) || !(d > 0.0)) config_error(path + "." + key, "must be > 0");
  return d;
}

std::uint64_t unsigned_integer(const json& obj, const std::string& key, const std::string& path,
                               std::optional<std::uint64_t> fallback, std::uint64_t min) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(path + "." + key, "required field missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) config_error(path + "." + key, "must be a non-negative integer");
  const auto u = v.get<std::uint64_t>();
  if (u < min) config_error(path + "." + key, "must be >= " + std::to_string(min));
  return u;
}

std::string string_field(const json& obj, const std::string& key, const std::string& path,
                         const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) config_error(path + "." + key, "must be a string");
  return v.get<std::string>();
}

// Sizes used when a scenario gives neither n1 nor n2.
constexpr std::pair<std::size_t, std::size_t> kDefaultSizes[] = {
    {10, 10}, {20, 30}, {30, 30}, {50, 50}, {100, 200}};

std::vector<Scenario> parse_one(const json& obj, const std::string& path) {
  if (!obj.is_object()) config_error(path, "scenario must be an object");
  static const char* known[] = {"scale1",   "shape1",       "scale2", "shape2",
                                "n1",       "n2",           "seed",   "replications",
                                "estimators", "fit_mode",   "mse_convention"};
  for (const auto& [key, _] : obj.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      config_error(path + "." + key, "unknown field");
    }
  }

  Scenario s;
  s.pair = {WeibullParams(positive_number(obj, "scale1", path), positive_number(obj, "shape1", path)),
            WeibullParams(positive_number(obj, "scale2", path), positive_number(obj, "shape2", path))};
  const bool sized = obj.contains("n1") || obj.contains("n2");
  if (sized) {
    s.n1 = unsigned_integer(obj, "n1", path, std::nullopt, 2);
    s.n2 = unsigned_integer(obj, "n2", path, std::nullopt, 2);
  }
  s.seed = unsigned_integer(obj, "seed", path, std::nullopt, 0);
  s.replications = unsigned_integer(obj, "replications", path, 1000, 1);

  if (obj.contains("estimators")) {
    const json& arr = obj.at("estimators");
    if (!arr.is_array() || arr.empty()) {
      config_error(path + ".estimators", "must be a nonempty array");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + ".estimators[" + std::to_string(i) + "]";
      if (!arr[i].is_string()) config_error(p, "must be a string");
      const auto m = parse_estimator_method(arr[i].get<std::string>());
      if (!m) config_error(p, "unknown estimator '" + arr[i].get<std::string>() + "'");
      if (std::find(s.estimators.begin(), s.estimators.end(), *m) != s.estimators.end()) {
        config_error(p, "duplicate estimator");
      }
      s.estimators.push_back(*m);
    }
  } else {
    s.estimators = {EstimatorMethod::parametric_avg, EstimatorMethod::kernel};
  }

  const std::string fit = string_field(obj, "fit_mode", path, "unrestricted");
  const auto fm = parse_fit_mode(fit);
  if (!fm || *fm == FitMode::not_applicable) {
    config_error(path + ".fit_mode", "must be 'unrestricted' or 'equal_shape'");
  }
  s.fit_mode = *fm;

  const std::string conv = string_field(obj, "mse_convention", path, "about_exact");
  const auto mc = parse_mse_convention(conv);
  if (!mc) config_error(path + ".mse_convention", "must be 'about_exact' or 'about_mean'");
  s.mse_convention = *mc;
  if (sized) return {s};
  std::vector<Scenario> grid;
  for (auto [n1, n2] : kDefaultSizes) {
    grid.push_back(s);
    grid.back().n1 = n1;
    grid.back().n2 = n2;
  }
  return grid;
}

}  // namespace

std::vector<Scenario> parse_scenario_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  const json* list = &doc;
  std::string base = "scenarios";
  if (doc.is_object()) {
    for (const auto& [key, _] : doc.items()) {
      if (key != "scenarios") config_error(key, "unknown field");
    }
    if (!doc.contains("scenarios")) config_error("scenarios", "required field missing");
    list = &doc.at("scenarios");
  }
  if (!list->is_array()) config_error(base, "must be an array");

  std::vector<Scenario> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    for (Scenario& s : parse_one((*list)[i], base + "[" + std::to_string(i) + "]")) {
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Scenario> read_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config(ss.str());
}

std::vector<ReportRow> report_rows(const ScenarioReport& report) {
  std::vector<ReportRow> rows;
  const std::string id = scenario_id(report.scenario);
  for (const auto& e : report.estimators) {
    ReportRow r;
    r.scenario_id = id;
    r.estimator = std::string(to_string(e.method));
    r.delta_exact = report.delta_exact;
    r.mean = e.metrics.mean;
    r.rb = e.metrics.rb;
    r.rrmse = e.metrics.rrmse;
    r.eff = e.metrics.eff_vs_kernel;
    r.failures = e.metrics.replicate_failures;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_report_rows(std::ostream& out, std::span<const ReportRow> rows) {
  for (const ReportRow& r : rows) {
    out << r.scenario_id << ',' << r.estimator << ',' << format_fixed6(r.delta_exact) << ','
        << format_fixed6(r.mean) << ',' << format_fixed6(r.rb) << ',' << format_fixed6(r.rrmse)
        << ',' << (r.eff ? format_fixed6(*r.eff) : std::string()) << ',' << r.failures << '\n';
  }
}

void write_report_csv(std::ostream& out, std::span<const ScenarioReport> reports) {
  out << kReportCsvHeader << '\n';
  for (const ScenarioReport& rep : reports) {
    const auto rows = report_rows(rep);
    write_report_rows(out, rows);
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, std::size_t lineno, const char* col) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(lineno) + ": column " + col + " is not a number",
                     lineno);
  }
  return v;
}

}  // namespace

std::vector<ReportRow> parse_report_csv(std::istream& in) {
  std::vector<ReportRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kReportCsvHeader) {
        throw ParseError("line " + std::to_string(lineno) + ": expected header '" +
                             kReportCsvHeader + "'",
                         lineno);
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 8 columns, got " +
                           std::to_string(f.size()),
                       lineno);
    }
    ReportRow r;
    r.scenario_id = f[0];
    r.estimator = f[1];
    r.delta_exact = parse_number(f[2], lineno, "delta_exact");
    r.mean = parse_number(f[3], lineno, "mean");
    r.rb = parse_number(f[4], lineno, "rb");
    r.rrmse = parse_number(f[5], lineno, "rrmse");
    if (!f[6].empty()) r.eff = parse_number(f[6], lineno, "eff");
    const double failures = parse_number(f[7], lineno, "failures");
    if (failures < 0 || failures != std::floor(failures)) {
      throw ParseError("line " + std::to_string(lineno) + ": failures must be a count", lineno);
    }
    r.failures = static_cast<std::size_t>(failures);
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError("report CSV is empty (no header)");
  return rows;
}

namespace {

enum class Family { equal_scale, equal_shape, both_differ, identical, unrecognized };

const char* family_title(Family f) {
  switch (f) {
    case Family::equal_scale: return "Equal scale parameters";
    case Family::equal_shape: return "Equal shape parameters";
    case Family::both_differ: return "Different scale and shape parameters";
    case Family::identical: return "Identical distributions";
    case Family::unrecognized: return "Unrecognized scenarios";
  }
  return "";
}

Family classify(const std::optional<ScenarioKey>& k) {
  if (!k) return Family::unrecognized;
  const bool same_scale = k->scale1 == k->scale2;
  const bool same_shape = k->shape1 == k->shape2;
  if (same_scale && same_shape) return Family::identical;
  if (same_scale) return Family::equal_scale;
  if (same_shape) return Family::equal_shape;
  return Family::both_differ;
}

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct SizeBlock {
  std::string label;
  std::map<std::string, const ReportRow*> by_estimator;
};

struct PairBlock {
  std::string label;
  double delta_exact = 0.0;
  std::vector<SizeBlock> sizes;
};

}  // namespace

std::string render_markdown(std::span<const ReportRow> rows) {
  if (rows.empty()) return {};

  const Family order[] = {Family::equal_scale, Family::equal_shape, Family::both_differ,
                          Family::identical, Family::unrecognized};
  std::ostringstream out;
  bool first_table = true;
  for (Family fam : order) {
    std::vector<PairBlock> blocks;
    std::vector<std::string> estimators;
    for (const ReportRow& r : rows) {
      const auto key = parse_scenario_id(r.scenario_id);
      if (classify(key) != fam) continue;

      std::string pair_label;
      std::string size_label;
      if (key) {
        pair_label = "(α1, α2) = (" + shortest(key->scale1) + ", " + shortest(key->scale2) +
                     "), (β1, β2) = (" + shortest(key->shape1) + ", " + shortest(key->shape2) +
                     ")";
        size_label = "(" + std::to_string(key->n1) + ", " + std::to_string(key->n2) + ")";
      } else {
        pair_label = r.scenario_id;
        size_label = "-";
      }
      auto pb = std::find_if(blocks.begin(), blocks.end(),
                             [&](const PairBlock& b) { return b.label == pair_label; });
      if (pb == blocks.end()) {
        blocks.push_back({pair_label, r.delta_exact, {}});
        pb = std::prev(blocks.end());
      }
      auto sb = std::find_if(pb->sizes.begin(), pb->sizes.end(),
                             [&](const SizeBlock& b) { return b.label == size_label; });
      if (sb == pb->sizes.end()) {
        pb->sizes.push_back({size_label, {}});
        sb = std::prev(pb->sizes.end());
      }
      sb->by_estimator[r.estimator] = &r;
      if (std::find(estimators.begin(), estimators.end(), r.estimator) == estimators.end()) {
        estimators.push_back(r.estimator);
      }
    }
    if (blocks.empty()) continue;

    if (!first_table) out << '\n';
    first_table = false;
    out << "## " << family_title(fam) << "\n\n";
    out << "| Pair | Δ exact | (n1, n2) | Metric |";
    for (const auto& e : estimators) out << ' ' << e << " |";
    out << "\n|---|---|---|---|";
    for (std::size_t i = 0; i < estimators.size(); ++i) out << "---|";
    out << '\n';

    for (const PairBlock& pb : blocks) {
      bool first_pair_row = true;
      for (const SizeBlock& sb : pb.sizes) {
        bool first_size_row = true;
        for (const char* metric : {"RB", "RRMSE", "EFF"}) {
          out << "| " << (first_pair_row ? pb.label : "") << " | "
              << (first_pair_row ? format_fixed6(pb.delta_exact) : "") << " | "
              << (first_size_row ? sb.label : "") << " | " << metric << " |";
          for (const auto& e : estimators) {
            const auto it = sb.by_estimator.find(e);
            std::string cell;
            if (it != sb.by_estimator.end()) {
              const ReportRow& r = *it->second;
              if (metric[1] == 'B') {
                cell = format_fixed6(r.rb);
              } else if (metric[1] == 'R') {
                cell = format_fixed6(r.rrmse);
              } else if (r.eff) {
                cell = format_fixed6(*r.eff);
              }
            }
            out << ' ' << cell << " |";
          }
          out << '\n';
          first_pair_row = false;
          first_size_row = false;
        }
      }
    }
  }
  return out.str();
}

}  // namespace wovl
