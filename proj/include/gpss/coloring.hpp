#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"
#include "numeric.hpp"
#include "point.hpp"
#include "random.hpp"
#include "selection.hpp"

namespace gpss {

/// Total assignment point index -> color id in [0, num_colors).
struct Coloring {
  std::vector<std::size_t> assignment;
  std::size_t num_colors = 0;
  std::size_t k = 2;
};

struct Violation {
  std::size_t color = 0;
  std::vector<Point> points;
};

struct ColoringVerdict {
  bool valid = true;
  /// Total number of monochromatic collinear (k+1)-subsets.
  BigInt violation_count = 0;
  /// The first `max_report` of them, lines in LineKey order, subsets in
  /// lexicographic order within a line.
  std::vector<Violation> violations;
};

inline ColoringVerdict verify_coloring(const PointSet& points, const Coloring& coloring,
                                       std::size_t k, std::size_t max_report = 1000) {
  if (coloring.assignment.size() != points.size()) {
    throw InvalidArgument("coloring assigns " + std::to_string(coloring.assignment.size()) +
                          " of " + std::to_string(points.size()) + " points");
  }
  for (auto c : coloring.assignment) {
    if (c >= coloring.num_colors) throw InvalidArgument("color id out of range");
  }
  ColoringVerdict verdict;
  const auto lines = find_lines(points, k + 1).lines;
  std::map<std::size_t, std::vector<std::size_t>> by_color;
  for (const auto& line : lines) {
    by_color.clear();
    for (auto v : line.members) by_color[coloring.assignment[v]].push_back(v);
    for (const auto& [color, members] : by_color) {
      if (members.size() <= k) continue;
      verdict.valid = false;
      verdict.violation_count += binomial(members.size(), k + 1);
      if (verdict.violations.size() >= max_report) continue;
      // Lexicographic (k+1)-subsets of this color's members on the line.
      std::vector<std::size_t> pos(k + 1);
      std::iota(pos.begin(), pos.end(), std::size_t{0});
      const std::size_t size = members.size();
      while (verdict.violations.size() < max_report) {
        Violation v{color, {}};
        for (auto p : pos) v.points.push_back(points[members[p]]);
        verdict.violations.push_back(std::move(v));
        std::size_t x = k + 1;
        while (x > 0 && pos[x - 1] == size - (k + 1) + x - 1) --x;
        if (x == 0) break;
        ++pos[x - 1];
        for (std::size_t y = x; y <= k; ++y) pos[y] = pos[y - 1] + 1;
      }
    }
  }
  return verdict;
}

/// Color classes produced by repeatedly extracting a subset selected by
/// `selector` from the uncolored points.
enum class PeelSelector { exact, best, greedy };

inline std::string_view to_string(PeelSelector s) {
  switch (s) {
    case PeelSelector::exact: return "exact";
    case PeelSelector::best: return "best";
    case PeelSelector::greedy: return "greedy";
  }
  return "?";
}

inline PeelSelector parse_peel_selector(std::string_view name) {
  for (auto s : {PeelSelector::exact, PeelSelector::best, PeelSelector::greedy}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown peel selector '" + std::string(name) + "'");
}

/// Round i selects from the remaining points with seed derive_seed(seed, i)
/// and gives the selection color i.
inline Coloring peel_coloring(const PointSet& points, PeelSelector selector, std::uint64_t seed,
                              std::size_t k = 2, const SelectOptions& options = {}) {
  Coloring out;
  out.k = k;
  out.assignment.assign(points.size(), SIZE_MAX);
  std::vector<std::size_t> remaining(points.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  for (std::size_t round = 0; !remaining.empty(); ++round) {
    const PointSet rest = points.subset(remaining);
    const std::uint64_t sub = derive_seed(seed, round);
    std::optional<SelectionResult> pick;
    switch (selector) {
      case PeelSelector::exact:
        pick.emplace(exact_max_subset(rest, k, options.exact_node_limit));
        break;
      case PeelSelector::best:
        pick.emplace(select_best(rest, k,
                                 {Strategy::greedy, Strategy::spencer, Strategy::spencer_local},
                                 sub, options));
        break;
      case PeelSelector::greedy:
        pick.emplace(greedy_select(rest, k, sub));
        break;
    }
    if (pick->size() == 0) throw Error("peel selection returned an empty class");
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (pick->subset().contains(rest[i])) {
        out.assignment[remaining[i]] = round;
      } else {
        next.push_back(remaining[i]);
      }
    }
    remaining = std::move(next);
    out.num_colors = round + 1;
  }
  return out;
}

struct LllResult {
  std::optional<Coloring> coloring;
  std::uint64_t resamples = 0;
  /// Monochromatic collinear (k+1)-subsets left when the budget ran out.
  BigInt residual_violations = 0;

  bool success() const { return coloring.has_value(); }
};

/// ceil(2 sqrt(ell n)).
inline std::size_t default_lll_colors(std::size_t n, std::size_t ell) {
  return static_cast<std::size_t>(ceil_sqrt(4 * static_cast<std::uint64_t>(ell) * n));
}

/// Moser-Tardos resampling. Colors start uniform in [0, num_colors). Each
/// step finds the first monochromatic collinear (k+1)-subset (lines in
/// LineKey order, lexicographic within a line) and recolors its points
/// uniformly. Stops after `max_resamples` steps with a failure value.
inline LllResult lll_coloring(const PointSet& points, std::size_t num_colors,
                              std::uint64_t max_resamples, std::uint64_t seed, std::size_t k = 2) {
  if (num_colors < 1) throw InvalidArgument("lll_coloring needs at least one color");
  Rng rng(seed);
  Coloring col;
  col.k = k;
  col.num_colors = num_colors;
  col.assignment.resize(points.size());
  for (auto& c : col.assignment) c = rng.below(num_colors);

  const auto lines = find_lines(points, k + 1).lines;

  // Returns the members of the first violating subset, or empty.
  auto first_violation = [&]() {
    std::vector<std::size_t> found;
    for (const auto& line : lines) {
      // Per color, the first k+1 positions form its least subset; the
      // line's least monochromatic subset is the least of those.
      std::map<std::size_t, std::vector<std::size_t>> prefix;
      for (std::size_t pos = 0; pos < line.members.size(); ++pos) {
        auto& list = prefix[col.assignment[line.members[pos]]];
        if (list.size() <= k) list.push_back(pos);
      }
      const std::vector<std::size_t>* winner = nullptr;
      for (const auto& [color, list] : prefix) {
        if (list.size() == k + 1 && (winner == nullptr || list < *winner)) winner = &list;
      }
      if (winner) {
        for (auto pos : *winner) found.push_back(line.members[pos]);
        return found;
      }
    }
    return found;
  };

  LllResult result;
  for (;;) {
    auto bad = first_violation();
    if (bad.empty()) {
      result.coloring = std::move(col);
      return result;
    }
    if (result.resamples >= max_resamples) break;
    ++result.resamples;
    for (auto v : bad) col.assignment[v] = rng.below(num_colors);
  }
  result.residual_violations = verify_coloring(points, col, k, 0).violation_count;
  return result;
}

/// counts[v] = number of coordinates equal to v + 1.
struct SignatureKey {
  std::vector<std::size_t> counts;
  auto operator<=>(const SignatureKey&) const = default;
};

inline SignatureKey signature_of(const Point& p, std::size_t ell) {
  SignatureKey key{std::vector<std::size_t>(ell, 0)};
  for (auto c : p.coords) {
    if (c < 1 || c > static_cast<std::int64_t>(ell)) {
      throw InvalidArgument("coordinate " + std::to_string(c) + " of " + p.str() +
                            " is outside 1.." + std::to_string(ell));
    }
    ++key.counts[static_cast<std::size_t>(c - 1)];
  }
  return key;
}

struct SignatureColoring {
  Coloring coloring;
  /// palette[c] is the signature of color c; palette is sorted.
  std::vector<SignatureKey> palette;
};

/// Colors each lattice point of [ell]^d by its signature (count vector).
inline SignatureColoring signature_coloring(const PointSet& points, std::size_t ell,
                                            std::size_t d) {
  if (ell < 1) throw InvalidArgument("ell must be >= 1");
  if (points.dim() != d) {
    throw DimensionMismatchError("points have dimension " + std::to_string(points.dim()) +
                                 ", expected " + std::to_string(d));
  }
  std::vector<SignatureKey> keys;
  keys.reserve(points.size());
  for (const auto& p : points) keys.push_back(signature_of(p, ell));
  SignatureColoring out;
  out.palette = keys;
  std::sort(out.palette.begin(), out.palette.end());
  out.palette.erase(std::unique(out.palette.begin(), out.palette.end()), out.palette.end());
  out.coloring.k = 2;
  out.coloring.num_colors = out.palette.size();
  for (const auto& key : keys) {
    auto it = std::lower_bound(out.palette.begin(), out.palette.end(), key);
    out.coloring.assignment.push_back(static_cast<std::size_t>(it - out.palette.begin()));
  }
  return out;
}

}  // namespace gpss
