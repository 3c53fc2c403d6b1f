#pragma once

// Brute-force reference computations for tests. Collinearity is decided
// from 2x2 minors of difference vectors, independently of line keys.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "gpss/errors.hpp"
#include "gpss/point.hpp"
#include "gpss/random.hpp"

namespace gpss::oracle {

/// True when all points of `idx` lie on one line.
inline bool collinear(const PointSet& pts, const std::vector<std::size_t>& idx) {
  if (idx.size() < 3) return true;
  const Point& a = pts[idx[0]];
  const Point& b = pts[idx[1]];
  const std::size_t d = pts.dim();
  for (std::size_t t = 2; t < idx.size(); ++t) {
    const Point& c = pts[idx[t]];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        const __int128 u1 = b[i] - a[i], u2 = b[j] - a[j];
        const __int128 v1 = c[i] - a[i], v2 = c[j] - a[j];
        if (u1 * v2 - u2 * v1 != 0) return false;
      }
    }
  }
  return true;
}

/// Calls f on every k-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> pos(k);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  for (;;) {
    f(pos);
    std::size_t x = k;
    while (x > 0 && pos[x - 1] == n - k + x - 1) --x;
    if (x == 0) return;
    ++pos[x - 1];
    for (std::size_t y = x; y < k; ++y) pos[y] = pos[y - 1] + 1;
  }
}

inline std::uint64_t count_collinear(const PointSet& pts, std::size_t k) {
  std::uint64_t count = 0;
  for_each_subset(pts.size(), k, [&](const auto& s) { count += collinear(pts, s) ? 1 : 0; });
  return count;
}

inline std::vector<std::vector<std::size_t>> collinear_subsets(const PointSet& pts, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for_each_subset(pts.size(), k, [&](const auto& s) {
    if (collinear(pts, s)) out.push_back(s);
  });
  return out;
}

inline std::uint64_t pairs_sharing(const std::vector<std::vector<std::size_t>>& edges,
                                   std::size_t j) {
  std::uint64_t count = 0;
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      std::size_t common = 0;
      for (auto u : edges[a]) {
        for (auto v : edges[b]) common += (u == v);
      }
      count += (common == j);
    }
  }
  return count;
}

/// Profile by pair enumeration: for every pair, the set of points collinear
/// with it; each line is counted once through its two smallest indices.
inline std::map<std::size_t, std::uint64_t> profile(const PointSet& pts) {
  std::map<std::size_t, std::uint64_t> s;
  const std::size_t n = pts.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      bool first = true;
      std::size_t size = 2;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        if (collinear(pts, {a, b, c})) {
          ++size;
          if (c < b) first = false;
        }
      }
      if (first) ++s[size];
    }
  }
  return s;
}

/// Largest number of collinear points.
inline std::size_t max_collinear(const PointSet& pts) {
  std::size_t best = std::min<std::size_t>(pts.size(), 2);
  for (auto [size, count] : profile(pts)) best = std::max(best, size);
  return best;
}

/// Maximum subset with at most k collinear, by exhaustive enumeration of
/// subsets (n <= ~20).
inline std::size_t max_subset_exhaustive(const PointSet& pts, std::size_t k) {
  const std::size_t n = pts.size();
  const auto bad = collinear_subsets(pts, k + 1);
  std::vector<std::uint64_t> masks;
  for (const auto& e : bad) {
    std::uint64_t m = 0;
    for (auto v : e) m |= std::uint64_t{1} << v;
    masks.push_back(m);
  }
  std::size_t best = 0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << n); ++sub) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(sub));
    if (size <= best) continue;
    bool ok = true;
    for (auto m : masks) {
      if ((sub & m) == m) {
        ok = false;
        break;
      }
    }
    if (ok) best = size;
  }
  return best;
}

inline PointSet random_points(std::size_t n, std::int64_t box, std::uint64_t seed) {
  if (static_cast<std::int64_t>(n) > box * box) throw InvalidArgument("box too small");
  Rng rng(seed);
  PointSet out(2);
  while (out.size() < n) {
    Point p{rng.between(0, box - 1), rng.between(0, box - 1)};
    if (!out.contains(p)) out.push_back(p);
  }
  return out;
}

}  // namespace gpss::oracle
