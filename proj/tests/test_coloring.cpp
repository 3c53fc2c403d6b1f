#include <gtest/gtest.h>

#include "gpss/coloring.hpp"
#include "gpss/generators.hpp"
#include "oracle.hpp"

namespace gpss {
namespace {

PointSet collinear_points(std::size_t n) {
  PointSet out(2);
  for (std::size_t i = 0; i < n; ++i) out.push_back(Point{static_cast<std::int64_t>(i), 0});
  return out;
}

PointSet general_position(std::size_t n) {
  PointSet out(2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = static_cast<std::int64_t>(i);
    out.push_back(Point{x, x * x});
  }
  return out;
}

/// Independent validity check: no monochromatic collinear (k+1)-subset.
bool brute_valid(const PointSet& pts, const Coloring& c, std::size_t k) {
  bool ok = true;
  oracle::for_each_subset(pts.size(), k + 1, [&](const auto& s) {
    if (!ok) return;
    for (auto v : s) {
      if (c.assignment[v] != c.assignment[s[0]]) return;
    }
    if (oracle::collinear(pts, s)) ok = false;
  });
  return ok;
}

TEST(Verify, Examples) {
  auto gp = general_position(5);
  EXPECT_TRUE(verify_coloring(gp, Coloring{std::vector<std::size_t>(5, 0), 1, 2}, 2).valid);

  auto line = collinear_points(3);
  auto verdict = verify_coloring(line, Coloring{{0, 0, 0}, 1, 2}, 2);
  EXPECT_FALSE(verdict.valid);
  ASSERT_EQ(verdict.violations.size(), 1u);
  EXPECT_EQ(verdict.violations[0].color, 0u);
  EXPECT_EQ(verdict.violations[0].points, (std::vector<Point>{{0, 0}, {1, 0}, {2, 0}}));
  EXPECT_EQ(verdict.violation_count, 1);
}

TEST(Verify, PartialAssignmentIsError) {
  auto line = collinear_points(3);
  EXPECT_THROW(verify_coloring(line, Coloring{{0, 0}, 1, 2}, 2), InvalidArgument);
  EXPECT_THROW(verify_coloring(line, Coloring{{0, 0, 3}, 2, 2}, 2), InvalidArgument);
}

TEST(Verify, CountsAgreeWithBruteForce) {
  Rng rng(8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto pts = oracle::random_points(12, 4, 77 + seed);
    Coloring c{std::vector<std::size_t>(pts.size()), 3, 2};
    for (auto& a : c.assignment) a = rng.below(3);
    auto verdict = verify_coloring(pts, c, 2);
    std::uint64_t brute = 0;
    for (const auto& e : oracle::collinear_subsets(pts, 3)) {
      brute += c.assignment[e[0]] == c.assignment[e[1]] && c.assignment[e[1]] == c.assignment[e[2]];
    }
    EXPECT_EQ(verdict.violation_count, brute);
    EXPECT_EQ(verdict.valid, brute == 0);
    EXPECT_EQ(verdict.valid, brute_valid(pts, c, 2));
  }
}

TEST(Peel, Examples) {
  EXPECT_EQ(peel_coloring(general_position(8), PeelSelector::exact, 1).num_colors, 1u);

  auto line = collinear_points(8);
  auto c = peel_coloring(line, PeelSelector::exact, 1);
  EXPECT_EQ(c.num_colors, 4u);
  std::vector<std::size_t> sizes(c.num_colors, 0);
  for (auto a : c.assignment) ++sizes[a];
  for (auto s : sizes) EXPECT_EQ(s, 2u);

  // Both maximum general-position subsets of the 3x3 grid leave a diagonal,
  // which needs two more classes.
  auto grid = grid_2d(3);
  auto g = peel_coloring(grid, PeelSelector::exact, 7);
  EXPECT_TRUE(verify_coloring(grid, g, 2).valid);
  EXPECT_EQ(g.num_colors, 3u);
}

TEST(Peel, ExactClassesNonincreasing) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto pts = oracle::random_points(14, 5, 123 + seed);
    auto c = peel_coloring(pts, PeelSelector::exact, seed);
    std::vector<std::size_t> sizes(c.num_colors, 0);
    for (auto a : c.assignment) ++sizes[a];
    for (std::size_t i = 1; i < sizes.size(); ++i) EXPECT_GE(sizes[i - 1], sizes[i]);
    EXPECT_TRUE(brute_valid(pts, c, 2));
  }
}

TEST(Peel, AllSelectorsValid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto pts = oracle::random_points(16, 5, 900 + seed);
    for (auto sel : {PeelSelector::exact, PeelSelector::best, PeelSelector::greedy}) {
      for (std::size_t k : {2, 3}) {
        auto c = peel_coloring(pts, sel, seed, k);
        EXPECT_TRUE(verify_coloring(pts, c, k).valid);
        EXPECT_TRUE(brute_valid(pts, c, k));
      }
    }
  }
}

TEST(Lll, Examples) {
  auto gp = lll_coloring(general_position(7), 1, 10, 3);
  ASSERT_TRUE(gp.success());
  EXPECT_EQ(gp.resamples, 0u);

  auto grid = grid_2d(3);
  EXPECT_EQ(default_lll_colors(9, 3), 11u);
  auto res = lll_coloring(grid, 11, 1'000'000, 2024);
  ASSERT_TRUE(res.success());
  EXPECT_TRUE(verify_coloring(grid, *res.coloring, 2).valid);

  auto fail = lll_coloring(collinear_points(5), 1, 100, 1);
  EXPECT_FALSE(fail.success());
  EXPECT_EQ(fail.resamples, 100u);
  EXPECT_EQ(fail.residual_violations, 10);
}

TEST(Lll, DeterministicResampleCount) {
  auto pts = grid_2d(6);
  auto a = lll_coloring(pts, 6, 100000, 5);
  auto b = lll_coloring(pts, 6, 100000, 5);
  ASSERT_TRUE(a.success());
  EXPECT_EQ(a.resamples, b.resamples);
  EXPECT_EQ(a.coloring->assignment, b.coloring->assignment);
  EXPECT_TRUE(verify_coloring(pts, *a.coloring, 2).valid);
}

TEST(DefaultColors, CeilOfTwoSqrt) {
  EXPECT_EQ(default_lll_colors(16, 4), 16u);   // 2 sqrt(64) = 16
  EXPECT_EQ(default_lll_colors(10, 3), 11u);   // 2 sqrt(30) = 10.95
  EXPECT_EQ(default_lll_colors(100, 10), 64u); // 2 sqrt(1000) = 63.2
}

TEST(Signature, Examples) {
  EXPECT_EQ(signature_of(Point{1, 3, 1, 2}, 3).counts, (std::vector<std::size_t>{2, 1, 1}));

  auto full = signature_coloring(lattice_hd(3, 2), 3, 2);
  EXPECT_EQ(full.coloring.num_colors, 6u);
  for (const auto& key : full.palette) {
    EXPECT_EQ(key.counts[0] + key.counts[1] + key.counts[2], 2u);
  }

  PointSet row{{1, 1}, {1, 2}, {1, 3}};
  auto r = signature_coloring(row, 3, 2);
  EXPECT_EQ(signature_of(Point{1, 1}, 3).counts, (std::vector<std::size_t>{2, 0, 0}));
  EXPECT_EQ(signature_of(Point{1, 2}, 3).counts, (std::vector<std::size_t>{1, 1, 0}));
  EXPECT_EQ(signature_of(Point{1, 3}, 3).counts, (std::vector<std::size_t>{1, 0, 1}));
  EXPECT_EQ(r.coloring.num_colors, 3u);
}

TEST(Signature, OutOfRangeCoordinate) {
  EXPECT_THROW(signature_coloring(PointSet{{0, 1}, {1, 1}}, 3, 2), InvalidArgument);
  EXPECT_THROW(signature_coloring(PointSet{{4, 1}, {1, 1}}, 3, 2), InvalidArgument);
  EXPECT_THROW(signature_coloring(lattice_hd(2, 3), 2, 2), DimensionMismatchError);
}

TEST(Signature, ThreeCubeValidByBruteForce) {
  auto pts = lattice_hd(3, 3);
  auto sig = signature_coloring(pts, 3, 3);
  EXPECT_TRUE(brute_valid(pts, sig.coloring, 2));
  EXPECT_TRUE(verify_coloring(pts, sig.coloring, 2).valid);
  EXPECT_EQ(sig.coloring.num_colors, 10u);  // C(5, 2)
}

TEST(Signature, SortedPartitionWouldFail) {
  // Sorted count vectors put the diagonal (1,1),(2,2),(3,3) in one class.
  auto pts = lattice_hd(3, 2);
  Coloring by_partition{std::vector<std::size_t>(pts.size()), 0, 2};
  std::map<std::vector<std::size_t>, std::size_t> ids;
  for (std::size_t v = 0; v < pts.size(); ++v) {
    auto counts = signature_of(pts[v], 3).counts;
    std::sort(counts.begin(), counts.end());
    auto [it, _] = ids.emplace(counts, ids.size());
    by_partition.assignment[v] = it->second;
  }
  by_partition.num_colors = ids.size();
  EXPECT_FALSE(verify_coloring(pts, by_partition, 2).valid);
}

}  // namespace
}  // namespace gpss
