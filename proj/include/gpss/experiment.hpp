#pragma once

// Sweep runner. A sweep is a list of instances x strategies x seeds; each
// combination yields one ExperimentRow. The algorithm seed of a row is the
// row's `seed` column itself, so any row can be reproduced in isolation.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coloring.hpp"
#include "generators.hpp"
#include "geometry.hpp"
#include "hypergraph.hpp"
#include "selection.hpp"

namespace gpss {

inline constexpr int kCsvSchemaVersion = 1;

struct SweepSpec {
  std::string name = "sweep";
  std::vector<FamilySpec> instances;
  /// Subset strategies: greedy spencer spencer_ls local_search exact best.
  /// Coloring strategies: peel_exact peel_best peel_greedy lll signature.
  std::vector<std::string> strategies;
  std::vector<std::uint64_t> seeds{0};
  std::size_t k = 2;
  /// thm1 thm2 thm3 conj1 greedy spencer prop1 lll signature none
  std::string bound = "thm1";
  SelectOptions options;
  std::uint64_t lll_max_resamples = 1'000'000;
};

struct ExperimentRow {
  std::string sweep;
  FamilySpec family;
  std::size_t n = 0;
  std::size_t ell = 0;
  std::size_t k = 2;
  std::string strategy;
  std::uint64_t seed = 0;
  std::string measure;
  std::size_t value = 0;
  /// "1"/"0" for exact searches, empty otherwise.
  std::string proven;
  std::string bound;
  double bound_value = 0.0;
  std::string status = "ok";
  double wall_time_ms = 0.0;

  std::optional<double> ratio() const {
    if (status != "ok" || !(bound_value > 0.0)) return std::nullopt;
    return static_cast<double>(value) / bound_value;
  }
};

/// Evaluates the named shape formula at (n, ell, k). Constants are 1; ln ell
/// uses max(ell, 3).
inline double bound_value(const std::string& bound, std::size_t n, std::size_t ell, std::size_t k,
                          const FamilySpec& family, const BigInt& edges_k1) {
  const double nd = static_cast<double>(n);
  const double ld = static_cast<double>(ell);
  const double lnl = std::log(std::max(ld, 3.0));
  const double kd = static_cast<double>(k);
  if (bound == "none" || n == 0) return 0.0;
  if (bound == "thm1") return std::sqrt(nd / lnl);
  if (bound == "thm2") return std::sqrt(nd * std::log(nd) / lnl);
  if (bound == "thm3") return std::pow(nd, (kd - 1) / kd) / std::pow(ld, (kd - 2) / kd);
  if (bound == "conj1") return std::sqrt(nd);
  if (bound == "greedy") return ell <= 2 ? nd : std::sqrt(2.0 * nd / (ld - 2.0));
  if (bound == "spencer") return spencer_bound(n, edges_k1, k + 1);
  if (bound == "prop1") return std::sqrt(nd) * std::pow(std::log(nd), 1.5);
  if (bound == "lll") return std::sqrt(ld * nd);
  if (bound == "signature") {
    return to_double(binomial(family.d + family.ell - 1, family.ell - 1));
  }
  throw InvalidArgument("unknown bound '" + bound + "'");
}

inline const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> header{
      "schema", "sweep",    "family", "q",      "family_k",   "family_ell",  "d",     "family_n",
      "box",    "family_seed", "project", "n",  "ell",        "k",           "strategy", "seed",
      "measure", "value",   "proven", "bound",  "bound_value", "ratio",      "status", "wall_time_ms"};
  return header;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

inline std::vector<std::string> csv_fields(const ExperimentRow& r) {
  const auto& f = r.family;
  auto ratio = r.ratio();
  return {std::to_string(kCsvSchemaVersion),
          r.sweep,
          std::string(to_string(f.family)),
          std::to_string(f.q),
          std::to_string(f.k),
          std::to_string(f.ell),
          std::to_string(f.d),
          std::to_string(f.n),
          std::to_string(f.box),
          std::to_string(f.seed),
          f.project ? "1" : "0",
          std::to_string(r.n),
          std::to_string(r.ell),
          std::to_string(r.k),
          r.strategy,
          std::to_string(r.seed),
          r.measure,
          std::to_string(r.value),
          r.proven,
          r.bound,
          detail::fixed6(r.bound_value),
          ratio ? detail::fixed6(*ratio) : std::string(),
          r.status,
          detail::fixed6(r.wall_time_ms)};
}

inline void write_csv_header(std::ostream& out) {
  const auto& h = csv_header();
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
}

inline void write_csv_row(std::ostream& out, const ExperimentRow& r) {
  const auto fields = csv_fields(r);
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << detail::csv_escape(fields[i]);
  out << '\n';
}

inline nlohmann::json to_json(const ExperimentRow& r) {
  nlohmann::json row;
  const auto& header = csv_header();
  const auto fields = csv_fields(r);
  for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
  return row;
}

namespace detail {

inline void run_strategy(const SweepSpec& sweep, const PointSet& points, ExperimentRow& row) {
  const std::string& s = row.strategy;
  const std::size_t k = sweep.k;
  auto subset = [&](const SelectionResult& r) {
    row.measure = "subset_size";
    row.value = r.size();
    if (r.strategy() == Strategy::exact) row.proven = r.proven_optimal() ? "1" : "0";
  };
  auto colors = [&](const Coloring& c) {
    if (!verify_coloring(points, c, c.k, 0).valid) throw Error("coloring failed verification");
    row.measure = "num_colors";
    row.value = c.num_colors;
  };
  if (s == "best") {
    subset(select_best(points, k, {Strategy::greedy, Strategy::spencer, Strategy::spencer_local},
                       row.seed, sweep.options));
  } else if (s == "peel_exact" || s == "peel_best" || s == "peel_greedy") {
    colors(peel_coloring(points, parse_peel_selector(s.substr(5)), row.seed, k, sweep.options));
  } else if (s == "lll") {
    auto res = lll_coloring(points, default_lll_colors(points.size(), row.ell),
                            sweep.lll_max_resamples, row.seed, k);
    if (!res.success()) {
      throw Error("lll_coloring failed with " + res.residual_violations.str() + " violations");
    }
    colors(*res.coloring);
  } else if (s == "signature") {
    if (row.family.family != Family::lattice_hd || row.family.project) {
      throw InvalidArgument("signature coloring needs an unprojected lattice_hd instance");
    }
    colors(signature_coloring(points, row.family.ell, row.family.d).coloring);
  } else {
    const Strategy strategy = parse_strategy(s);
    if (strategy == Strategy::exact) {
      subset(exact_max_subset(points, k, sweep.options.exact_node_limit));
    } else {
      subset(select_best(points, k, {strategy}, row.seed, sweep.options));
    }
  }
}

}  // namespace detail

/// Runs one sweep. Failures of an instance or strategy become rows with a
/// status of "error: <message>"; the sweep continues.
inline std::vector<ExperimentRow> run_sweep(const SweepSpec& sweep) {
  using clock = std::chrono::steady_clock;
  std::vector<ExperimentRow> rows;
  for (const auto& family : sweep.instances) {
    std::optional<PointSet> points;
    std::string instance_error;
    std::size_t ell = 0;
    BigInt edges = 0;
    try {
      points.emplace(generate(family));
      ell = collinearity_profile(*points).ell_max;
      if (sweep.bound == "spencer") edges = CollinearHypergraph(*points, sweep.k + 1).m();
    } catch (const std::exception& e) {
      instance_error = std::string("error: ") + e.what();
    }
    for (const auto& strategy : sweep.strategies) {
      for (auto seed : sweep.seeds) {
        ExperimentRow row;
        row.sweep = sweep.name;
        row.family = family;
        row.k = sweep.k;
        row.strategy = strategy;
        row.seed = seed;
        row.bound = sweep.bound;
        if (!points) {
          row.status = instance_error;
          rows.push_back(std::move(row));
          continue;
        }
        row.n = points->size();
        row.ell = ell;
        const auto start = clock::now();
        try {
          row.bound_value = bound_value(sweep.bound, row.n, ell, sweep.k, family, edges);
          detail::run_strategy(sweep, *points, row);
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
          row.value = 0;
        }
        row.wall_time_ms =
            std::chrono::duration<double, std::milli>(clock::now() - start).count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Writes the CSV header and all rows of all sweeps. With include_wall_time
/// false the wall_time_ms column is blank, making the output a pure function
/// of the sweep description.
inline void run_experiment(const std::vector<SweepSpec>& sweeps, std::ostream& out,
                           bool include_wall_time = true) {
  write_csv_header(out);
  for (const auto& sweep : sweeps) {
    for (auto row : run_sweep(sweep)) {
      if (!include_wall_time) row.wall_time_ms = 0.0;
      write_csv_row(out, row);
    }
  }
}

inline std::vector<FamilySpec> grids(std::size_t lo, std::size_t hi) {
  std::vector<FamilySpec> out;
  for (std::size_t q = lo; q <= hi; ++q) out.push_back({.family = Family::grid2d, .q = q});
  return out;
}

/// Built-in sweeps. "default" concatenates the desk-scale probes.
inline std::vector<SweepSpec> preset_sweeps(const std::string& name) {
  std::vector<SweepSpec> out;
  auto want = [&](const char* preset) { return name == preset || name == "default"; };

  if (want("no-three-in-line")) {
    SweepSpec s;
    s.name = "no-three-in-line";
    s.instances = grids(3, 10);
    s.strategies = {"exact"};
    s.bound = "conj1";
    out.push_back(s);
  }
  if (want("conjecture1")) {
    SweepSpec s;
    s.name = "conjecture1";
    s.instances = grids(5, name == "default" ? 20 : 30);
    s.strategies = {"best"};
    s.seeds = {1, 2};
    s.bound = "conj1";
    out.push_back(s);
  }
  if (want("theorem1") || want("theorem2")) {
    SweepSpec s;
    s.instances = grids(4, 12);
    for (std::size_t n : {60, 120}) {
      for (std::size_t ell : {3, 5, 8}) {
        s.instances.push_back({.family = Family::random_bounded,
                               .ell = ell,
                               .n = n,
                               .box = static_cast<std::int64_t>(n / 2),
                               .seed = 17});
      }
    }
    s.strategies = {"greedy", "spencer", "spencer_ls"};
    s.seeds = {1, 2};
    if (want("theorem1")) {
      s.name = "theorem1";
      s.bound = "thm1";
      out.push_back(s);
    }
    if (want("theorem2")) {
      s.name = "theorem2";
      s.bound = "thm2";
      out.push_back(s);
    }
  }
  if (want("theorem3")) {
    SweepSpec s;
    s.name = "theorem3";
    s.instances = grids(5, 14);
    s.k = 3;
    s.strategies = {"greedy", "spencer_ls"};
    s.seeds = {1};
    s.bound = "thm3";
    out.push_back(s);
  }
  if (want("peel")) {
    SweepSpec s;
    s.name = "peel";
    s.instances = grids(5, name == "default" ? 12 : 20);
    s.strategies = {"peel_best"};
    s.seeds = {1};
    s.bound = "prop1";
    out.push_back(s);
  }
  if (want("lll")) {
    SweepSpec s;
    s.name = "lll";
    s.instances = grids(3, 12);
    s.strategies = {"lll"};
    s.seeds = {1, 2};
    s.bound = "lll";
    out.push_back(s);
  }
  if (want("signature")) {
    SweepSpec s;
    s.name = "signature";
    for (std::size_t ell : {2, 3, 4}) {
      for (std::size_t d = 2; d <= 4; ++d) {
        s.instances.push_back({.family = Family::lattice_hd, .ell = ell, .d = d});
      }
    }
    s.strategies = {"signature"};
    s.bound = "signature";
    out.push_back(s);
  }
  if (out.empty()) throw InvalidArgument("unknown experiment preset '" + name + "'");
  return out;
}

namespace detail {

inline std::vector<FamilySpec> expand_instance(const nlohmann::json& j) {
  FamilySpec base;
  base.family = parse_family(j.at("family").get<std::string>());
  base.project = j.value("project", false);
  std::vector<FamilySpec> out{base};
  auto expand = [&](const char* key, auto setter) {
    if (!j.contains(key)) return;
    std::vector<std::int64_t> values;
    if (j[key].is_array()) {
      values = j[key].get<std::vector<std::int64_t>>();
    } else {
      values = {j[key].get<std::int64_t>()};
    }
    std::vector<FamilySpec> next;
    for (const auto& spec : out) {
      for (auto v : values) {
        FamilySpec copy = spec;
        setter(copy, v);
        next.push_back(copy);
      }
    }
    out = std::move(next);
  };
  expand("q", [](FamilySpec& f, std::int64_t v) { f.q = static_cast<std::size_t>(v); });
  expand("k", [](FamilySpec& f, std::int64_t v) { f.k = static_cast<std::size_t>(v); });
  expand("ell", [](FamilySpec& f, std::int64_t v) { f.ell = static_cast<std::size_t>(v); });
  expand("d", [](FamilySpec& f, std::int64_t v) { f.d = static_cast<std::size_t>(v); });
  expand("n", [](FamilySpec& f, std::int64_t v) { f.n = static_cast<std::size_t>(v); });
  expand("box", [](FamilySpec& f, std::int64_t v) { f.box = v; });
  expand("seed", [](FamilySpec& f, std::int64_t v) { f.seed = static_cast<std::uint64_t>(v); });
  return out;
}

}  // namespace detail

/// Sweep from JSON:
///   {"name": "...", "k": 2, "bound": "thm1", "strategies": ["greedy"],
///    "seeds": [1, 2], "instances": [{"family": "grid2d", "q": [3, 4, 5]}]}
/// Any numeric instance field may be a list; lists expand as a product.
inline SweepSpec sweep_from_json(const nlohmann::json& j) {
  SweepSpec s;
  s.name = j.value("name", std::string("sweep"));
  s.k = j.value("k", std::size_t{2});
  s.bound = j.value("bound", std::string("thm1"));
  s.strategies = j.at("strategies").get<std::vector<std::string>>();
  if (j.contains("seeds")) s.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  s.options.spencer_trials = j.value("spencer_trials", s.options.spencer_trials);
  s.options.local_search_budget = j.value("local_search_budget", s.options.local_search_budget);
  s.options.exact_node_limit = j.value("exact_node_limit", s.options.exact_node_limit);
  s.lll_max_resamples = j.value("lll_max_resamples", s.lll_max_resamples);
  for (const auto& inst : j.at("instances")) {
    auto expanded = detail::expand_instance(inst);
    s.instances.insert(s.instances.end(), expanded.begin(), expanded.end());
  }
  if (s.strategies.empty()) throw InvalidArgument("sweep needs at least one strategy");
  if (s.seeds.empty()) throw InvalidArgument("sweep needs at least one seed");
  return s;
}

}  // namespace gpss
