// gpss: command-line front end for general position subset analysis.
//
//   gpss generate   --family grid2d|gpk_grid|lattice_hd|random_bounded ...
//   gpss analyze    points.txt [--r 3] [--t T --gamma G]
//   gpss select     points.txt --k 2 --strategy greedy,spencer,spencer_ls
//   gpss color      points.txt --method peel|lll|signature
//   gpss verify     points.txt (--subset sel.txt | --coloring col.txt) --k 2
//   gpss oracle     points.txt --k 2 [--gowers q]
//   gpss experiment (--preset name | --config sweep.json)
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gpss/gpss.hpp"

namespace {

using namespace gpss;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct Output {
  std::string path;
  std::ofstream file;

  std::ostream& stream() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path);
      if (!file) throw Error("cannot write " + path);
    }
    return file;
  }
};

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    for (std::string part; std::getline(ss, part, ',');) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct GenerateArgs {
  std::string family = "grid2d";
  std::size_t q = 0, k = 0, ell = 0, d = 0, n = 0;
  std::int64_t box = 0;
  std::uint64_t seed = 0;
  bool project = false;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  FamilySpec spec;
  spec.family = parse_family(a.family);
  spec.q = a.q;
  spec.k = a.k;
  spec.ell = a.ell;
  spec.d = a.d;
  spec.n = a.n;
  spec.box = a.box;
  spec.seed = a.seed;
  spec.project = a.project;
  auto points = generate(spec);
  Output out{a.out, {}};
  auto& os = out.stream();
  os << "# dim=" << points.dim() << '\n' << "# " << spec.to_kv() << '\n';
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? " " : "") << p[i];
    os << '\n';
  }
  return kOk;
}

struct AnalyzeArgs {
  std::string input;
  std::size_t r = 3;
  double t = 0.0;
  double gamma = 0.0;
  std::string format = "csv";
  std::string out;
};

int run_analyze(const AnalyzeArgs& a) {
  auto points = load_points(a.input);
  auto stats = collinearity_profile(points);
  auto h = build_collinearity_hypergraph(points, a.r);
  std::map<BigInt, std::size_t> degree_hist;
  for (std::size_t v = 0; v < h.n(); ++v) ++degree_hist[h.degree(v)];
  std::map<std::size_t, BigInt> pj;
  for (std::size_t j = 2; j < a.r; ++j) pj[j] = pair_overlap_counts(h, j);
  std::optional<BoundReport> report;
  if (stats.n > 0) report = bound_report(stats);
  std::optional<PrecondCertificate> cert;
  if (a.t > 0.0 && a.gamma > 0.0) cert = precondition_check(h, a.t, a.gamma);

  Output out{a.out, {}};
  auto& os = out.stream();
  if (a.format == "json") {
    json j;
    j["profile"] = {{"n", stats.n}, {"ell_max", stats.ell_max}, {"max_codegree", stats.max_codegree}};
    for (auto [i, c] : stats.s) j["profile"]["s"][std::to_string(i)] = c;
    if (report) {
      j["bounds"] = {{"ell", report->ell},
                     {"triples", report->triples.str()},
                     {"triple_ratio", report->triple_ratio},
                     {"st_constant", report->st_constant.str()}};
      for (const auto& [k, r] : report->ktuple_ratio) j["bounds"]["ktuple_ratio"][std::to_string(k)] = r.str();
      for (const auto& [i, r] : report->st_tail_ratios) j["bounds"]["st_tail"][std::to_string(i)] = r.str();
    }
    j["hypergraph"] = {{"r", h.r()}, {"n", h.n()}, {"m", h.m().str()}};
    for (const auto& [deg, count] : degree_hist) j["hypergraph"]["degree_hist"][deg.str()] = count;
    for (const auto& [jj, v] : pj) j["hypergraph"]["pj"][std::to_string(jj)] = v.str();
    if (cert) {
      j["precondition"] = {{"t", cert->t},
                           {"gamma", cert->gamma},
                           {"delta_max", cert->delta_max.str()},
                           {"degree_passed", cert->degree_passed},
                           {"all_passed", cert->all_passed()}};
      for (const auto& [jj, ok] : cert->pj_passed) j["precondition"]["pj_passed"][std::to_string(jj)] = ok;
    }
    os << j.dump(2) << '\n';
    return kOk;
  }
  os << "section,key,value\n";
  os << "profile,n," << stats.n << '\n';
  os << "profile,ell_max," << stats.ell_max << '\n';
  os << "profile,max_codegree," << stats.max_codegree << '\n';
  for (auto [i, c] : stats.s) os << "profile,s_" << i << ',' << c << '\n';
  if (report) {
    os << "bounds,ell," << report->ell << '\n';
    os << "bounds,triples," << report->triples << '\n';
    os << "bounds,triple_ratio," << fmt_double(report->triple_ratio) << '\n';
    for (const auto& [k, r] : report->ktuple_ratio) {
      os << "bounds,ktuple_ratio_" << k << ',' << fmt_double(to_double(r)) << '\n';
    }
    for (const auto& [i, r] : report->st_tail_ratios) {
      os << "bounds,st_tail_" << i << ',' << fmt_double(to_double(r)) << '\n';
    }
    os << "bounds,st_constant," << fmt_double(to_double(report->st_constant)) << '\n';
  }
  os << "hypergraph,r," << h.r() << '\n';
  os << "hypergraph,n," << h.n() << '\n';
  os << "hypergraph,m," << h.m() << '\n';
  for (const auto& [deg, count] : degree_hist) os << "degree_hist," << deg << ',' << count << '\n';
  for (const auto& [jj, v] : pj) os << "pj," << jj << ',' << v << '\n';
  if (cert) {
    os << "precondition,delta_max," << cert->delta_max << '\n';
    os << "precondition,degree_passed," << cert->degree_passed << '\n';
    for (const auto& [jj, ok] : cert->pj_passed) os << "precondition,pj_passed_" << jj << ',' << ok << '\n';
    os << "precondition,all_passed," << cert->all_passed() << '\n';
  }
  return kOk;
}

struct SelectArgs {
  std::string input;
  std::size_t k = 2;
  std::vector<std::string> strategies{"greedy,spencer,spencer_ls"};
  std::uint64_t seed = 0;
  SelectOptions options;
  std::string out;
};

int run_select(const SelectArgs& a) {
  auto points = load_points(a.input);
  std::vector<Strategy> strategies;
  for (const auto& s : split_list(a.strategies)) strategies.push_back(parse_strategy(s));
  auto result = select_best(points, a.k, strategies, a.seed, a.options);
  Output out{a.out, {}};
  write_selection(out.stream(), result);
  return kOk;
}

struct ColorArgs {
  std::string input;
  std::string method = "peel";
  std::string selector = "best";
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::size_t colors = 0;
  std::uint64_t max_resamples = 1'000'000;
  std::size_t ell = 0;
  std::string out;
};

int run_color(const ColorArgs& a) {
  auto points = load_points(a.input);
  Coloring coloring;
  if (a.method == "peel") {
    coloring = peel_coloring(points, parse_peel_selector(a.selector), a.seed, a.k);
  } else if (a.method == "lll") {
    std::size_t colors = a.colors;
    if (colors == 0) colors = default_lll_colors(points.size(), collinearity_profile(points).ell_max);
    auto res = lll_coloring(points, colors, a.max_resamples, a.seed, a.k);
    if (!res.success()) {
      std::cerr << "lll_coloring failed after " << res.resamples << " resamples; "
                << res.residual_violations << " violations remain\n";
      return kVerifyFailed;
    }
    std::cerr << "lll_coloring: " << colors << " colors, " << res.resamples << " resamples\n";
    coloring = *res.coloring;
  } else if (a.method == "signature") {
    std::size_t ell = a.ell;
    if (ell == 0) {
      for (const auto& p : points) {
        for (auto c : p.coords) ell = std::max<std::size_t>(ell, c < 0 ? 0 : static_cast<std::size_t>(c));
      }
    }
    coloring = signature_coloring(points, ell, points.dim()).coloring;
  } else {
    throw InvalidArgument("unknown coloring method '" + a.method + "'");
  }
  Output out{a.out, {}};
  write_coloring(out.stream(), points, coloring);
  return kOk;
}

struct VerifyArgs {
  std::string input;
  std::string subset;
  std::string coloring;
  std::size_t k = 2;
};

int run_verify(const VerifyArgs& a) {
  auto points = load_points(a.input);
  if (a.subset.empty() == a.coloring.empty()) {
    throw InvalidArgument("verify needs exactly one of --subset or --coloring");
  }
  if (!a.subset.empty()) {
    auto subset = load_points(a.subset);
    for (const auto& p : subset) {
      if (!points.contains(p)) {
        std::cout << "invalid: " << p.str() << " is not in the point set\n";
        return kVerifyFailed;
      }
    }
    auto stats = collinearity_profile(subset);
    if (stats.ell_max > a.k) {
      auto lines = find_lines(subset, a.k + 1).lines;
      std::cout << "invalid: " << lines.size() << " lines with more than " << a.k << " points\n";
      for (const auto& line : lines) {
        std::cout << " ";
        for (auto v : line.members) std::cout << ' ' << subset[v].str();
        std::cout << '\n';
      }
      return kVerifyFailed;
    }
    std::cout << "valid: " << subset.size() << " points, at most " << stats.ell_max << " collinear\n";
    return kOk;
  }
  std::ifstream in(a.coloring);
  if (!in) throw Error("cannot open " + a.coloring);
  auto file = read_coloring(in);
  auto coloring = coloring_for(points, file, a.k);
  auto verdict = verify_coloring(points, coloring, a.k);
  if (verdict.valid) {
    std::cout << "valid: " << coloring.num_colors << " colors\n";
    return kOk;
  }
  std::cout << "invalid: " << verdict.violation_count << " monochromatic collinear "
            << (a.k + 1) << "-subsets\n";
  for (const auto& v : verdict.violations) {
    std::cout << "  color " << v.color << ':';
    for (const auto& p : v.points) std::cout << ' ' << p.str();
    std::cout << '\n';
  }
  return kVerifyFailed;
}

struct OracleArgs {
  std::string input;
  std::size_t k = 2;
  std::uint64_t node_limit = 50'000'000;
  std::size_t gowers = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_oracle(const OracleArgs& a) {
  auto points = load_points(a.input);
  Output out{a.out, {}};
  if (a.gowers > 0) {
    SelectOptions opts;
    opts.exact_node_limit = a.node_limit;
    auto w = gowers_witness(points, a.gowers, a.seed, opts);
    write_points(out.stream(), w.points,
                 {{"witness", std::string(to_string(w.kind))},
                  {"q", std::to_string(a.gowers)},
                  {"neither_exists", w.neither_exists ? "1" : "0"}});
    return kOk;
  }
  auto result = exact_max_subset(points, a.k, a.node_limit);
  write_selection(out.stream(), result);
  return kOk;
}

struct ExperimentArgs {
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  std::vector<std::string> strategies;
  std::string config;
  std::string format = "csv";
  bool no_wall_time = false;
  std::string out;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  std::vector<SweepSpec> sweeps;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw Error("cannot open " + a.config);
    auto j = json::parse(in);
    if (j.is_array()) {
      for (const auto& s : j) sweeps.push_back(sweep_from_json(s));
    } else {
      sweeps.push_back(sweep_from_json(j));
    }
  } else {
    sweeps = preset_sweeps(a.preset.empty() ? "default" : a.preset);
  }
  for (auto& s : sweeps) {
    if (a.seed) s.seeds = {*a.seed};
    if (a.k) s.k = *a.k;
    if (!a.strategies.empty()) s.strategies = split_list(a.strategies);
  }
  Output out{a.out, {}};
  if (a.format == "json") {
    json rows = json::array();
    for (const auto& s : sweeps) {
      for (auto row : run_sweep(s)) {
        if (a.no_wall_time) row.wall_time_ms = 0.0;
        rows.push_back(to_json(row));
      }
    }
    out.stream() << rows.dump(2) << '\n';
  } else {
    run_experiment(sweeps, out.stream(), !a.no_wall_time);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"General position subset selection toolkit"};
  app.require_subcommand(1);
  int status = kOk;
  std::function<int()> action;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Emit a named point family");
  generate->add_option("--family", gen.family, "grid2d | gpk_grid | lattice_hd | random_bounded")
      ->required();
  generate->add_option("--q", gen.q, "grid side / Gowers parameter");
  generate->add_option("--k", gen.k, "gpk_grid collinearity bound");
  generate->add_option("--ell", gen.ell, "lattice side or collinearity bound");
  generate->add_option("--d", gen.d, "lattice dimension");
  generate->add_option("--n", gen.n, "number of random points");
  generate->add_option("--box", gen.box, "random_bounded box side");
  generate->add_option("--seed", gen.seed, "seed");
  generate->add_flag("--project", gen.project, "project lattice_hd to the plane");
  generate->add_option("--out", gen.out, "output path (default stdout)");
  generate->callback([&] { action = [&] { return run_generate(gen); }; });

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Collinearity profile, bounds and hypergraph stats");
  analyze->add_option("points", an.input)->required();
  analyze->add_option("--r", an.r, "hypergraph uniformity")->check(CLI::Range(3, 64));
  analyze->add_option("--t", an.t, "precondition parameter t");
  analyze->add_option("--gamma", an.gamma, "precondition parameter gamma");
  analyze->add_option("--format", an.format)->check(CLI::IsMember({"csv", "json"}));
  analyze->add_option("--out", an.out);
  analyze->callback([&] { action = [&] { return run_analyze(an); }; });

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "Large subset with at most k collinear");
  select->add_option("points", sel.input)->required();
  select->add_option("--k", sel.k)->check(CLI::Range(2, 1 << 20));
  select->add_option("--strategy", sel.strategies,
                     "comma list of greedy, spencer, spencer_ls, local_search, exact");
  select->add_option("--seed", sel.seed);
  select->add_option("--trials", sel.options.spencer_trials, "spencer trials");
  select->add_option("--budget", sel.options.local_search_budget, "local search swap attempts");
  select->add_option("--node-limit", sel.options.exact_node_limit);
  select->add_option("--out", sel.out);
  select->callback([&] { action = [&] { return run_select(sel); }; });

  ColorArgs col;
  auto* color = app.add_subcommand("color", "Partition into classes with at most k collinear");
  color->add_option("points", col.input)->required();
  color->add_option("--method", col.method)->check(CLI::IsMember({"peel", "lll", "signature"}));
  color->add_option("--selector", col.selector, "peel selector")
      ->check(CLI::IsMember({"exact", "best", "greedy"}));
  color->add_option("--k", col.k)->check(CLI::Range(2, 1 << 20));
  color->add_option("--seed", col.seed);
  color->add_option("--colors", col.colors, "lll palette size (default ceil(2 sqrt(ell n)))");
  color->add_option("--max-resamples", col.max_resamples);
  color->add_option("--ell", col.ell, "signature lattice side (default: max coordinate)");
  color->add_option("--out", col.out);
  color->callback([&] { action = [&] { return run_color(col); }; });

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check a subset or a coloring");
  verify->add_option("points", ver.input)->required();
  verify->add_option("--subset", ver.subset);
  verify->add_option("--coloring", ver.coloring);
  verify->add_option("--k", ver.k)->check(CLI::Range(1, 1 << 20));
  verify->callback([&] { action = [&] { return run_verify(ver); }; });

  OracleArgs ora;
  auto* oracle = app.add_subcommand("oracle", "Exact maximum subset or Gowers witness");
  oracle->add_option("points", ora.input)->required();
  oracle->add_option("--k", ora.k)->check(CLI::Range(1, 1 << 20));
  oracle->add_option("--node-limit", ora.node_limit);
  oracle->add_option("--gowers", ora.gowers, "search for q collinear or q in general position");
  oracle->add_option("--seed", ora.seed);
  oracle->add_option("--out", ora.out);
  oracle->callback([&] { action = [&] { return run_oracle(ora); }; });

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a sweep and emit CSV");
  experiment->add_option("--preset", exp.preset,
                         "default | no-three-in-line | conjecture1 | theorem1 | theorem2 | "
                         "theorem3 | peel | lll | signature");
  experiment->add_option("--config", exp.config, "JSON sweep description");
  experiment->add_option("--seed", exp.seed, "replace every sweep's seed list");
  experiment->add_option("--k", exp.k, "replace every sweep's k");
  experiment->add_option("--strategy", exp.strategies, "replace every sweep's strategies");
  experiment->add_option("--format", exp.format)->check(CLI::IsMember({"csv", "json"}));
  experiment->add_flag("--no-wall-time", exp.no_wall_time, "blank the timing column");
  experiment->add_option("--out", exp.out);
  experiment->callback([&] { action = [&] { return run_experiment_cmd(exp); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    status = action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return status;
}
