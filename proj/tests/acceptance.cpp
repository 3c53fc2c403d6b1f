// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gpss/gpss.hpp"
#include "oracle.hpp"

namespace {

using namespace gpss;

// Regression constants frozen from the first run of AC5 and AC8. The AC8
// curve constant is the observed 0.1385 rounded up.
constexpr double kTripleRatioMax = 0.19431624162797081;
constexpr const char* kQuadRatioMax = "3354109/51840000";
constexpr double kPeelCurveC = 0.15;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

struct Instance {
  std::string name;
  PointSet points;
};

PointSet on_line(std::size_t n, std::int64_t a, std::int64_t b) {
  PointSet out(2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = static_cast<std::int64_t>(i);
    out.push_back(Point{x, a * x + b});
  }
  return out;
}

PointSet star(std::size_t arm) {
  PointSet out(2);
  out.push_back(Point{0, 0});
  for (std::size_t i = 1; i <= arm; ++i) {
    const auto t = static_cast<std::int64_t>(i);
    for (Point p : {Point{t, 0}, Point{0, t}, Point{t, t}, Point{-t, t}}) out.push_back(p);
  }
  return out;
}

const std::vector<Instance>& corpus() {
  static const std::vector<Instance> instances = [] {
    std::vector<Instance> out;
    for (std::size_t q = 3; q <= 8; ++q) out.push_back({"grid" + std::to_string(q), grid_2d(q)});
    out.push_back({"gpk(10,3)", gpk_grid(10, 3)});
    out.push_back({"gpk(13,4)", gpk_grid(13, 4)});
    out.push_back({"rb(60,3)", random_bounded_collinear(60, 3, 30, 30, 17)});
    out.push_back({"rb(120,5)", random_bounded_collinear(120, 5, 40, 40, 17)});
    out.push_back({"rb(80,8)", random_bounded_collinear(80, 8, 20, 20, 5)});
    out.push_back({"lattice(3,3)", lattice_hd(3, 3)});
    out.push_back({"lattice(2,4)", lattice_hd(2, 4)});
    out.push_back({"proj(3,3)", generic_projection(lattice_hd(3, 3), 11).image});
    out.push_back({"line10", on_line(10, 2, 1)});
    out.push_back({"star4", star(4)});
    out.push_back({"random40", oracle::random_points(40, 12, 9)});
    return out;
  }();
  return instances;
}

bool independent(const PointSet& s, std::size_t k) {
  return collinearity_profile(s).ell_max <= k;
}

// 1. Exact counts against brute-force enumeration.
Outcome ac1() {
  Outcome o;
  std::vector<PointSet> sets;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 3 + seed % 10;
    const std::int64_t box = 3 + static_cast<std::int64_t>(seed % 5);
    sets.push_back(oracle::random_points(std::min<std::size_t>(n, box * box), box, 1000 + seed));
  }
  for (std::size_t ell = 2; ell <= 9; ++ell) {
    for (std::size_t d = 2; d <= 6; ++d) {
      if (std::pow(double(ell), double(d)) <= 81) sets.push_back(lattice_hd(ell, d));
    }
  }
  std::size_t checks = 0;
  for (const auto& pts : sets) {
    const auto stats = collinearity_profile(pts);
    for (std::size_t k = 3; k <= 5; ++k) {
      const BigInt got = count_collinear_ktuples(stats, k);
      const BigInt want = oracle::count_collinear(pts, k);
      ++checks;
      if (got != want) o.fail("T_" + std::to_string(k) + " mismatch on n=" + std::to_string(pts.size()));
    }
    for (std::size_t r = 3; r <= 4; ++r) {
      const auto h = build_collinearity_hypergraph(pts, r);
      const auto edges = oracle::collinear_subsets(pts, r);
      if (h.m() != edges.size()) o.fail("m mismatch for r=" + std::to_string(r));
      for (std::size_t j = 2; j < r; ++j) {
        ++checks;
        if (pair_overlap_counts(h, j) != oracle::pairs_sharing(edges, j)) {
          o.fail("p_" + std::to_string(j) + " mismatch for r=" + std::to_string(r));
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(sets.size()) + " sets, " + std::to_string(checks) + " counts";
  return o;
}

// 2. No-three-in-line optimum 2q for q = 2..5.
Outcome ac2() {
  Outcome o;
  std::ostringstream os;
  for (std::size_t q = 2; q <= 5; ++q) {
    const auto grid = grid_2d(q);
    const auto res = exact_max_subset(grid, 2, 50'000'000);
    os << " q=" << q << ':' << res.size();
    if (res.size() != 2 * q) o.fail("q=" + std::to_string(q) + " gave " + std::to_string(res.size()));
    if (!res.proven_optimal()) o.fail("q=" + std::to_string(q) + " not proven");
    if (!independent(res.subset(), 2)) o.fail("q=" + std::to_string(q) + " has 3 collinear");
    // Row capacity: at most 2 per row.
    std::map<std::int64_t, std::size_t> rows;
    for (const auto& p : res.subset()) ++rows[p[1]];
    for (auto [y, c] : rows) {
      if (c > 2) o.fail("row capacity exceeded");
    }
    if (q <= 4 && oracle::max_subset_exhaustive(grid, 2) != 2 * q) o.fail("oracle disagrees");
  }
  if (o.ok) o.detail = "proven" + os.str();
  return o;
}

// 3. Greedy termination inequality.
Outcome ac3() {
  Outcome o;
  std::vector<PointSet> sets;
  for (std::uint64_t i = 0; i < 80; ++i) {
    const std::size_t n = 20 + 5 * (i % 8);
    const std::size_t ell = 3 + i % 5;
    const auto side = static_cast<std::int64_t>(n / 2 + 2);
    sets.push_back(random_bounded_collinear(n, ell, side, side, 500 + i));
  }
  for (std::size_t q = 3; q <= 12; ++q) sets.push_back(grid_2d(q));
  for (std::size_t len = 3; len <= 12; ++len) sets.push_back(on_line(len, static_cast<std::int64_t>(len % 4), 3));
  std::size_t checks = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& pts = sets[i];
    const auto ell = collinearity_profile(pts).ell_max;
    for (std::size_t k = 2; k <= 3; ++k) {
      const auto res = greedy_select(pts, k, 7 * i + k);
      const auto* cert = std::get_if<GreedyCertificate>(&res.certificate());
      ++checks;
      if (cert == nullptr || !cert->holds()) {
        o.fail("certificate missing or false on instance " + std::to_string(i));
        continue;
      }
      const BigInt rhs = BigInt(res.size()) +
                         (ell > k ? binomial(res.size(), k) * (ell - k) : BigInt(0));
      if (BigInt(pts.size()) > rhs) o.fail("inequality fails on instance " + std::to_string(i));
      if (!independent(res.subset(), k)) o.fail("greedy output violates k on " + std::to_string(i));
    }
  }
  if (o.ok) o.detail = std::to_string(sets.size()) + " instances, " + std::to_string(checks) + " runs";
  return o;
}

// 4. Spencer mean against the lemma bound; every trial independent.
Outcome ac4() {
  Outcome o;
  std::ostringstream os;
  for (std::size_t q : {5, 10, 15}) {
    const auto h = build_collinearity_hypergraph(grid_2d(q), 3);
    const std::uint64_t seed = 4000 + q;
    std::vector<std::size_t> sizes;
    const auto best = spencer_select(h, 500, seed, &sizes);
    const auto rank = detail::lex_ranks(h.points());
    const double p = spencer_probability(h.n(), h.m(), 3);
    for (std::size_t t = 0; t < 500; ++t) {
      Rng rng(derive_seed(seed, t));
      const auto kept = detail::spencer_trial(h, rank, p, rng);
      if (kept.size() != sizes[t]) o.fail("trial replay differs");
      if (!independent(h.points().subset(kept), 2)) o.fail("trial " + std::to_string(t) + " not independent");
    }
    if (!independent(best.subset(), 2)) o.fail("best not independent");
    const double mean = to_double(std::get<SpencerTrace>(best.certificate()).mean_size);
    const double lemma = 2.0 / std::pow(3.0, 1.5) * double(h.n()) / std::sqrt(to_double(h.m()) / double(h.n()));
    char buf[96];
    std::snprintf(buf, sizeof buf, " q=%zu mean=%.2f bound=%.2f", q, mean, lemma);
    os << buf;
    if (mean < 0.9 * lemma) o.fail("q=" + std::to_string(q) + buf);
  }
  if (o.ok) o.detail = os.str().substr(1);
  return o;
}

// 5. Ratio regression over grid_2d(q), q = 3..60.
Outcome ac5() {
  Outcome o;
  double tmax = 0.0;
  Rational qmax = 0;
  std::size_t targ = 0, qarg = 0;
  for (std::size_t q = 3; q <= 60; ++q) {
    const auto rep = bound_report(collinearity_profile(grid_2d(q)), 0, 4);
    if (rep.triple_ratio > tmax) tmax = rep.triple_ratio, targ = q;
    if (rep.ktuple_ratio.at(4) > qmax) qmax = rep.ktuple_ratio.at(4), qarg = q;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "triple max %.17g (q=%zu), 4-tuple max %s (q=%zu)", tmax, targ,
                qmax.str().c_str(), qarg);
  std::printf("       %s\n", buf);
  if (tmax > kTripleRatioMax) o.fail("triple ratio above frozen constant");
  if (qmax > Rational(kQuadRatioMax)) o.fail("4-tuple ratio above frozen constant");
  if (tmax != kTripleRatioMax || qmax != Rational(kQuadRatioMax)) o.fail("maxima differ from frozen values");
  o.detail = buf;
  return o;
}

// 6. Degree truncation keeps at least half.
Outcome ac6() {
  Outcome o;
  std::size_t runs = 0;
  for (const auto& inst : corpus()) {
    for (std::size_t r = 3; r <= 4; ++r) {
      const auto h = build_collinearity_hypergraph(inst.points, r);
      const auto kept = degree_truncate(h, average_degree_threshold(h));
      ++runs;
      if (2 * kept.size() < inst.points.size()) o.fail(inst.name + " r=" + std::to_string(r));
    }
  }
  if (o.ok) o.detail = std::to_string(runs) + " truncations";
  return o;
}

// 7. Signature coloring on [ell]^d.
Outcome ac7() {
  Outcome o;
  std::size_t lattices = 0;
  for (std::size_t ell = 2; ell <= 4; ++ell) {
    for (std::size_t d = 2; d <= 6; ++d) {
      const auto pts = lattice_hd(ell, d);
      const auto sig = signature_coloring(pts, ell, d);
      const auto verdict = verify_coloring(pts, sig.coloring, 2);
      const std::string tag = "ell=" + std::to_string(ell) + " d=" + std::to_string(d);
      ++lattices;
      if (!verdict.valid) o.fail(tag + " invalid");
      if (BigInt(sig.coloring.num_colors) != binomial(d + ell - 1, ell - 1)) o.fail(tag + " color count");
      std::vector<std::vector<std::size_t>> classes(sig.coloring.num_colors);
      for (std::size_t v = 0; v < pts.size(); ++v) classes[sig.coloring.assignment[v]].push_back(v);
      for (const auto& cls : classes) {
        if (oracle::count_collinear(pts.subset(cls), 3) != 0) o.fail(tag + " oracle found a triple");
      }
    }
  }
  if (o.ok) o.detail = std::to_string(lattices) + " lattices";
  return o;
}

double peel_shape(std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::sqrt(nd) * std::pow(std::log(nd), 1.5);
}

// 8. Peel coloring validity and the color-count curve.
Outcome ac8() {
  Outcome o;
  std::size_t runs = 0;
  for (const auto& inst : corpus()) {
    // The exact selector ignores the seed, so one run covers all 50.
    for (auto sel : {PeelSelector::exact, PeelSelector::greedy, PeelSelector::best}) {
      const std::uint64_t seeds = sel == PeelSelector::exact ? 1 : 50;
      for (std::uint64_t s = 0; s < seeds; ++s) {
        const auto col = peel_coloring(inst.points, sel, 8000 + s);
        ++runs;
        if (!verify_coloring(inst.points, col, 2).valid) {
          o.fail(inst.name + " " + std::string(to_string(sel)) + " seed " + std::to_string(s));
        }
      }
    }
  }
  double worst = 0.0;
  for (std::size_t q = 5; q <= 20; ++q) {
    const auto pts = grid_2d(q);
    const auto col = peel_coloring(pts, PeelSelector::best, 8000);
    if (!verify_coloring(pts, col, 2).valid) o.fail("grid " + std::to_string(q) + " invalid");
    const double c = double(col.num_colors) / peel_shape(pts.size());
    worst = std::max(worst, c);
    if (double(col.num_colors) > kPeelCurveC * peel_shape(pts.size())) {
      o.fail("grid " + std::to_string(q) + " uses " + std::to_string(col.num_colors) + " colors");
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu colorings valid; max colors/(sqrt(n) ln^1.5 n) = %.4f < %.2f",
                runs, worst, kPeelCurveC);
  if (o.ok) o.detail = buf;
  else std::printf("       %s\n", buf);
  return o;
}

// 9. Moser-Tardos with ceil(2 sqrt(ell n)) colors.
Outcome ac9() {
  Outcome o;
  std::uint64_t worst = 0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const auto& inst = corpus()[i];
    const auto ell = collinearity_profile(inst.points).ell_max;
    const auto colors = default_lll_colors(inst.points.size(), ell);
    const auto res = lll_coloring(inst.points, colors, 1'000'000, 9000 + i);
    if (!res.success()) {
      o.fail(inst.name + " failed");
      continue;
    }
    worst = std::max(worst, res.resamples);
    if (!verify_coloring(inst.points, *res.coloring, 2).valid) o.fail(inst.name + " invalid");
  }
  if (o.ok) o.detail = std::to_string(corpus().size()) + " instances, max resamples " + std::to_string(worst);
  return o;
}

// 10. Projection keeps the profile.
Outcome ac10() {
  Outcome o;
  std::size_t count = 0;
  for (std::size_t ell = 2; ell <= 3; ++ell) {
    for (std::size_t d = 2; d <= 4; ++d) {
      const auto pts = lattice_hd(ell, d);
      const auto proj = generic_projection(pts, 100 * ell + d);
      const std::string tag = "ell=" + std::to_string(ell) + " d=" + std::to_string(d);
      ++count;
      if (proj.image.dim() != 2 || proj.image.size() != pts.size()) o.fail(tag + " shape");
      const auto before = collinearity_profile(pts).s;
      if (collinearity_profile(proj.image).s != before) o.fail(tag + " profile");
      std::map<std::size_t, std::uint64_t> want(before.begin(), before.end());
      if (oracle::profile(proj.image) != want) o.fail(tag + " oracle profile");
    }
  }
  if (o.ok) o.detail = std::to_string(count) + " lattices";
  return o;
}

// 11. select_best reaches sqrt(n) = q on grids.
Outcome ac11() {
  Outcome o;
  std::size_t smallest_margin = SIZE_MAX;
  for (std::size_t q = 5; q <= 30; ++q) {
    const auto pts = grid_2d(q);
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto res = select_best(pts, 2, {Strategy::greedy, Strategy::spencer, Strategy::spencer_local}, seed);
      if (!independent(res.subset(), 2)) o.fail("q=" + std::to_string(q) + " invalid");
      if (res.size() < q) {
        o.fail("q=" + std::to_string(q) + " seed " + std::to_string(seed) + " gave " + std::to_string(res.size()));
      } else {
        smallest_margin = std::min(smallest_margin, res.size() - q);
      }
    }
  }
  if (o.ok) o.detail = "78 runs, smallest excess over q: " + std::to_string(smallest_margin);
  return o;
}

std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  for (std::string line; std::getline(in, line);) {
    out << line.substr(0, line.rfind(',')) << '\n';
  }
  return out.str();
}

// 12. Byte-identical sweep output.
Outcome ac12() {
  Outcome o;
  const auto sweeps = preset_sweeps("default");
  std::ostringstream a, b;
  run_experiment(sweeps, a, true);
  run_experiment(sweeps, b, true);
  const auto sa = strip_wall_time(a.str());
  const auto sb = strip_wall_time(b.str());
  if (sa != sb) o.fail("sweep outputs differ");
  const auto rows = static_cast<std::size_t>(std::count(sa.begin(), sa.end(), '\n'));
  if (rows < 2) o.fail("sweep produced no rows");
  if (sa.find(",error") != std::string::npos) o.fail("sweep contains error rows");
  if (o.ok) o.detail = std::to_string(rows - 1) + " rows identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 counting oracle equivalence", ac1},
      {"AC2 no-three-in-line ground truth", ac2},
      {"AC3 greedy certificate", ac3},
      {"AC4 spencer statistical bound", ac4},
      {"AC5 ratio regression", ac5},
      {"AC6 degree truncation keeps half", ac6},
      {"AC7 signature coloring", ac7},
      {"AC8 peel coloring", ac8},
      {"AC9 lll coloring", ac9},
      {"AC10 projection fidelity", ac10},
      {"AC11 select_best reaches q", ac11},
      {"AC12 sweep reproducibility", ac12},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.1fs): %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
