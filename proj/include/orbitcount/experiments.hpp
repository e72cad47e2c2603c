#pragma once

// Batch experiment runner: JSON configuration, experiment orchestration and
// plot-ready CSV/JSON artifacts with a reproducibility manifest.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "orbitcount/orbit_counter.hpp"

namespace orbitcount {

inline constexpr const char* kVersion = "orbitcount 0.1.0";
inline constexpr const char* kCsvVersion = "orbitcount-csv v1";

struct RunOverrides {
  std::optional<int> threads;
  std::optional<double> tolerance;
  std::optional<std::string> resume;
  std::optional<std::string> out;
};

namespace cfg {

using nlohmann::json;

inline json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

inline const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw config_error(std::string("missing config field '") + name + "'");
  return *it;
}

inline Holonomy surface(const json& j, double tolerance) {
  if (j.contains("preset")) return holonomy_preset(j["preset"].get<std::string>(), tolerance);
  FenchelNielsen fn;
  fn.signature.genus = field(j, "genus").get<int>();
  fn.signature.punctures = field(j, "punctures").get<int>();
  fn.lengths = field(j, "lengths").get<std::vector<double>>();
  fn.twists = field(j, "twists").get<std::vector<double>>();
  return Holonomy::build(fn, tolerance);
}

inline WeightedCurveSystem system(const json& j, const GroupPresentation& pres) {
  if (!j.is_array()) throw config_error("curve system must be an array of 'weight:word' strings");
  std::string text;
  for (const auto& line : j) text += line.get<std::string>() + "\n";
  return WeightedCurveSystem::parse(pres, text);
}

inline HomogeneousFunctional functional(const json& j, const Holonomy& fallback_surface,
                                        double tolerance) {
  std::string kind = field(j, "kind").get<std::string>();
  Holonomy X = j.contains("surface") ? surface(j["surface"], tolerance) : fallback_surface;
  if (kind == "length") return HomogeneousFunctional::length(std::move(X));
  if (kind == "intersect") {
    auto alpha = system(field(j, "system"), X.presentation());
    return HomogeneousFunctional::intersect(std::move(X), std::move(alpha),
                                            j.value("filling_bound", 6));
  }
  if (kind == "thurston_ratio")
    return HomogeneousFunctional::thurston_ratio(std::move(X), field(j, "bound").get<long long>());
  throw config_error("unknown functional kind '" + kind + "'");
}

inline std::vector<double> budget_grid(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  double lo = field(j, "min").get<double>();
  double hi = field(j, "max").get<double>();
  int points = field(j, "points").get<int>();
  if (points < 1 || !(lo > 0) || !(hi >= lo)) throw config_error("bad budget grid");
  std::vector<double> grid;
  bool logspace = j.value("log", true);
  for (int i = 0; i < points; ++i) {
    double f = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
    grid.push_back(logspace ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  return grid;
}

inline std::uint64_t fnv64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cfg

// Writer that pins the versioned CSV schema.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& experiment, const std::string& columns) {
    out_.open(path, std::ios::trunc);
    if (!out_) throw config_error("cannot write artifact: " + path);
    out_ << "# " << kCsvVersion << ' ' << experiment << '\n';
    out_ << columns << '\n';
    out_ << std::setprecision(17);
  }
  template <typename... Ts>
  void row(Ts&&... vals) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, out_ << vals), ...);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// Parser counterpart; rejects unknown schema versions.
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read artifact: " + path);
  std::string header;
  std::getline(in, header);
  if (header.rfind(std::string("# ") + kCsvVersion, 0) != 0)
    throw config_error("unknown result schema: " + header);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::string resource_estimate;
};

namespace detail {

inline OrbitCountOptions orbit_options(const nlohmann::json& j, const RunOverrides& ov) {
  OrbitCountOptions opt;
  opt.margin = j.value("margin", 1.6);
  opt.threads = ov.threads.value_or(j.value("threads", 0));
  if (opt.threads <= 0) {
    if (const char* env = std::getenv("ORBITCOUNT_THREADS")) opt.threads = std::atoi(env);
    if (opt.threads <= 0) opt.threads = 1;
  }
  opt.checkpoint_every = j.value("checkpoint_every", std::size_t{0});
  if (ov.resume) {
    opt.checkpoint_path = *ov.resume;
    if (opt.checkpoint_every == 0) opt.checkpoint_every = 100000;
  }
  opt.filling_bound = j.value("filling_bound", 6);
  opt.halt_after_expansions = j.value("halt_after_expansions", std::size_t{0});
  return opt;
}

inline void write_manifest(const std::string& out_prefix, const nlohmann::json& config,
                           const std::string& experiment, double runtime_seconds,
                           const std::vector<std::string>& artifacts) {
  nlohmann::json m;
  m["tool"] = kVersion;
  m["csv_schema"] = kCsvVersion;
  m["experiment"] = experiment;
  m["config"] = config;
  m["config_hash"] = cfg::fnv64(config.dump());
  m["runtime_seconds"] = runtime_seconds;
  m["artifacts"] = artifacts;
  std::ofstream out(out_prefix + ".manifest.json", std::ios::trunc);
  out << m.dump(2) << '\n';
}

}  // namespace detail

// Executes the configured experiment; returns the artifact paths.
inline std::vector<std::string> run_experiment(const std::string& config_path,
                                               const RunOverrides& ov = {}) {
  auto t0 = std::chrono::steady_clock::now();
  auto j = cfg::load(config_path);
  const std::string experiment = cfg::field(j, "experiment").get<std::string>();
  const double tolerance = ov.tolerance.value_or(j.value("tolerance", 1e-9));
  std::string out_prefix = ov.out.value_or(j.value("out", std::string("orbitcount_result")));
  if (auto dir = std::filesystem::path(out_prefix).parent_path(); !dir.empty())
    std::filesystem::create_directories(dir);
  std::vector<std::string> artifacts;

  auto finish = [&]() {
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::write_manifest(out_prefix, j, experiment, dt, artifacts);
    artifacts.push_back(out_prefix + ".manifest.json");
    return artifacts;
  };

  if (experiment == "length") {
    auto X = cfg::surface(cfg::field(j, "surface"), tolerance);
    auto sys = cfg::system(cfg::field(j, "system"), X.presentation());
    CsvWriter csv(out_prefix + ".csv", experiment, "weight,word,length,weighted_length");
    for (const auto& [c, w] : sys.components()) {
      double l = X.geodesic_length(c);
      csv.row(w, '"' + X.presentation().format_word(c.letters()) + '"', l, w * l);
    }
    csv.row(1.0, "\"<total>\"", X.liouville_intersection(sys), X.liouville_intersection(sys));
    artifacts.push_back(out_prefix + ".csv");
    return finish();
  }

  if (experiment == "intersect") {
    auto X = cfg::surface(cfg::field(j, "surface"), tolerance);
    auto s = cfg::system(cfg::field(j, "system"), X.presentation());
    auto t = cfg::system(cfg::field(j, "system2"), X.presentation());
    Intersector I(X);
    CsvWriter csv(out_prefix + ".csv", experiment, "word1,word2,weight1,weight2,crossings,contribution");
    for (const auto& [c1, w1] : s.components())
      for (const auto& [c2, w2] : t.components()) {
        long long n = I.geometric(c1, c2);
        csv.row('"' + X.presentation().format_word(c1.letters()) + '"',
                '"' + X.presentation().format_word(c2.letters()) + '"', w1, w2, n, w1 * w2 * n);
      }
    csv.row("\"<total>\"", "\"<total>\"", 0, 0, 0, I.pairing(s, t));
    artifacts.push_back(out_prefix + ".csv");
    return finish();
  }

  if (experiment == "orbit-count" || experiment == "exponent") {
    auto F = cfg::functional(cfg::field(j, "functional"), cfg::surface(cfg::field(j, "surface"), tolerance),
                             tolerance);
    auto alpha = cfg::system(cfg::field(j, "system"), F.presentation());
    auto grid = cfg::budget_grid(cfg::field(j, "L_grid"));
    auto opt = detail::orbit_options(j, ov);
    auto recs = count_sublevel_grid(alpha, F, grid, opt);
    CsvWriter csv(out_prefix + ".csv", "orbit-count", "L,count_orbit,count_group,saturated");
    for (const auto& r : recs)
      csv.row(r.L, r.count_orbit, r.count_group ? std::to_string(*r.count_group) : "unknown",
              r.saturated ? 1 : 0);
    artifacts.push_back(out_prefix + ".csv");
    if (experiment == "exponent") {
      auto [slope, err] = fit_exponent(recs, j.value("fit_min_count", 100));
      nlohmann::json summary{{"slope", slope}, {"stderr", err}, {"dimension", F.presentation().signature().dimension()}};
      std::ofstream sout(out_prefix + ".summary.json", std::ios::trunc);
      sout << summary.dump(2) << '\n';
      artifacts.push_back(out_prefix + ".summary.json");
    }
    return finish();
  }

  if (experiment == "m-estimate") {
    auto F = cfg::functional(cfg::field(j, "functional"), cfg::surface(cfg::field(j, "surface"), tolerance),
                             tolerance);
    MeasureOptions mopt;
    mopt.min_count = j.value("min_count", 100);
    auto est = estimate_m(F, cfg::field(j, "L").get<double>(), mopt);
    CsvWriter csv(out_prefix + ".csv", experiment, "L,count,estimate");
    for (auto& [L, count, value] : est.convergence) csv.row(L, count, value);
    artifacts.push_back(out_prefix + ".csv");
    nlohmann::json summary{{"value", est.value}, {"count", est.count}, {"box_bound", est.box_bound}};
    if (j.contains("eps_list")) {
      nlohmann::json masses = nlohmann::json::array();
      for (double eps : j["eps_list"].get<std::vector<double>>())
        masses.push_back({{"eps", eps},
                          {"fraction", sublevel_boundary_mass(F, cfg::field(j, "L").get<double>(), eps)}});
      summary["boundary_mass"] = masses;
    }
    std::ofstream sout(out_prefix + ".summary.json", std::ios::trunc);
    sout << summary.dump(2) << '\n';
    artifacts.push_back(out_prefix + ".summary.json");
    return finish();
  }

  if (experiment == "ratio") {
    auto F = cfg::functional(cfg::field(j, "functional"), cfg::surface(cfg::field(j, "surface"), tolerance),
                             tolerance);
    auto a1 = cfg::system(cfg::field(j, "system"), F.presentation());
    auto a2 = cfg::system(cfg::field(j, "system2"), F.presentation());
    auto grid = cfg::budget_grid(cfg::field(j, "L_grid"));
    auto opt = detail::orbit_options(j, ov);
    auto ex = ratio_experiment(a1, a2, F, grid, j.value("target_budget", grid.back()), opt);
    CsvWriter csv(out_prefix + ".csv", experiment, "L,count1,count2,ratio,saturated");
    for (std::size_t i = 0; i < ex.L_grid.size(); ++i)
      csv.row(ex.L_grid[i], ex.first[i].count_group.value_or(ex.first[i].count_orbit),
              ex.second[i].count_group.value_or(ex.second[i].count_orbit), ex.ratio[i],
              (ex.first[i].saturated && ex.second[i].saturated) ? 1 : 0);
    artifacts.push_back(out_prefix + ".csv");
    nlohmann::json summary{{"lattice_target", ex.lattice_target},
                           {"terminal_ratio", ex.ratio.back()},
                           {"relative_gap", std::fabs(ex.ratio.back() / ex.lattice_target - 1.0)}};
    std::ofstream sout(out_prefix + ".summary.json", std::ios::trunc);
    sout << summary.dump(2) << '\n';
    artifacts.push_back(out_prefix + ".summary.json");
    return finish();
  }

  if (experiment == "thurston-distance") {
    auto X = cfg::surface(cfg::field(j, "surface"), tolerance);
    auto Y = cfg::surface(cfg::field(j, "surface2"), tolerance);
    auto bounds = cfg::field(j, "bounds").get<std::vector<long long>>();
    CsvWriter csv(out_prefix + ".csv", experiment, "bound,d_xy_lower,d_yx_lower,curves");
    for (long long B : bounds) {
      auto dxy = thurston_distance(X, Y, B);
      auto dyx = thurston_distance(Y, X, B);
      csv.row(B, dxy.value, dyx.value, dxy.curves_checked);
    }
    artifacts.push_back(out_prefix + ".csv");
    return finish();
  }

  throw config_error("unknown experiment '" + experiment + "'");
}

// Report-only schema and precondition check with a rough resource estimate.
inline ValidationReport validate_config(const std::string& config_path) {
  ValidationReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.errors.push_back(msg);
  };
  nlohmann::json j;
  try {
    j = cfg::load(config_path);
  } catch (const error& e) {
    fail(e.what());
    return rep;
  }
  std::string experiment;
  try {
    experiment = cfg::field(j, "experiment").get<std::string>();
  } catch (const error& e) {
    fail(e.what());
    return rep;
  }
  const double tolerance = j.value("tolerance", 1e-9);
  try {
    if (experiment == "orbit-count" || experiment == "exponent" || experiment == "ratio") {
      auto F = cfg::functional(cfg::field(j, "functional"),
                               cfg::surface(cfg::field(j, "surface"), tolerance), tolerance);
      auto alpha = cfg::system(cfg::field(j, "system"), F.presentation());
      auto verdict = is_filling(F.surface(), alpha, j.value("filling_bound", 6));
      if (verdict.verdict == FillingVerdict::not_filling)
        rep.warnings.push_back("system is not filling; orbit counting will be rejected (witness " +
                               (verdict.witness ? verdict.witness->format() : "none") + ")");
      else if (verdict.verdict == FillingVerdict::unknown)
        rep.warnings.push_back("filling certificate inconclusive at the configured bound");
      auto grid = cfg::budget_grid(cfg::field(j, "L_grid"));
      double margin = j.value("margin", 1.6);
      int dim = F.presentation().signature().dimension();
      double nodes = std::pow(2.0 * margin * grid.back(), dim) * 0.05 + 1000;
      std::ostringstream est;
      est << "rough node estimate " << static_cast<long long>(nodes) << ", about "
          << static_cast<long long>(nodes * 400 / 1048576) << " MiB";
      rep.resource_estimate = est.str();
      if (experiment == "ratio") cfg::system(cfg::field(j, "system2"), F.presentation());
    } else if (experiment == "m-estimate") {
      auto F = cfg::functional(cfg::field(j, "functional"),
                               cfg::surface(cfg::field(j, "surface"), tolerance), tolerance);
      (void)cfg::field(j, "L").get<double>();
      rep.resource_estimate = "lattice sweep over the certified box";
    } else if (experiment == "length") {
      auto X = cfg::surface(cfg::field(j, "surface"), tolerance);
      cfg::system(cfg::field(j, "system"), X.presentation());
    } else if (experiment == "intersect") {
      auto X = cfg::surface(cfg::field(j, "surface"), tolerance);
      cfg::system(cfg::field(j, "system"), X.presentation());
      cfg::system(cfg::field(j, "system2"), X.presentation());
    } else if (experiment == "thurston-distance") {
      cfg::surface(cfg::field(j, "surface"), tolerance);
      cfg::surface(cfg::field(j, "surface2"), tolerance);
      (void)cfg::field(j, "bounds");
    } else {
      fail("unknown experiment '" + experiment + "'");
    }
  } catch (const error& e) {
    fail(e.what());
  } catch (const std::exception& e) {
    fail(std::string("config error: ") + e.what());
  }
  return rep;
}

}  // namespace orbitcount
