#pragma once

// Exact line structure of a point set: canonical line keys, the collinearity
// profile s_i (number of lines through exactly i points), k-tuple counts and
// the incidence-bound diagnostics built from them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "numeric.hpp"
#include "point.hpp"

namespace gpss {

/// Canonical description of a lattice line: `direction` is primitive with
/// its first nonzero entry positive, and `anchor` is the unique lattice point
/// of the line whose coordinate along that first nonzero axis lies in
/// [0, direction[axis]).
struct LineKey {
  Point anchor;
  Point direction;

  auto operator<=>(const LineKey&) const = default;
  bool operator==(const LineKey&) const = default;
};

namespace detail {

inline void check_delta(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw InvalidArgument("coordinate difference overflows 64-bit integers");
  }
}

/// Reduces `v` in place to a primitive vector with first nonzero entry > 0.
/// Returns the index of that entry, or dim when v == 0.
inline std::size_t make_primitive(std::span<std::int64_t> v) {
  std::int64_t g = 0;
  std::size_t lead = v.size();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0 && lead == v.size()) lead = i;
    g = std::gcd(g, v[i]);
  }
  if (lead == v.size()) return lead;
  if (v[lead] < 0) g = -g;
  for (auto& c : v) c /= g;
  return lead;
}

}  // namespace detail

inline LineKey canonical_line(const Point& p, const Point& q) {
  if (p.dim() != q.dim()) throw DimensionMismatchError("points of different dimension");
  if (p == q) throw DegenerateInputError("identical points " + p.str() + " span no line");
  Point dir = q;
  for (std::size_t i = 0; i < dir.dim(); ++i) {
    detail::check_delta(q[i], p[i]);
    dir[i] = q[i] - p[i];
  }
  const std::size_t lead = detail::make_primitive(dir.coords);
  const std::int64_t steps = floor_div(p[lead], dir[lead]);
  Point anchor = p;
  for (std::size_t i = 0; i < anchor.dim(); ++i) anchor[i] -= steps * dir[i];
  return {std::move(anchor), std::move(dir)};
}

/// Incidence profile: s[i] = number of lines containing exactly i points.
struct LineStats {
  std::size_t n = 0;
  std::map<std::size_t, std::uint64_t> s;
  /// Largest number of collinear points; equals n when n < 2.
  std::size_t ell_max = 0;
  /// Largest number of H_3 edges through a fixed pair, i.e. ell_max - 2.
  std::size_t max_codegree = 0;

  std::uint64_t lines_with(std::size_t i) const {
    auto it = s.find(i);
    return it == s.end() ? 0 : it->second;
  }

  /// Number of lines with at least i points.
  std::uint64_t tail(std::size_t i) const {
    std::uint64_t total = 0;
    for (auto it = s.lower_bound(i); it != s.end(); ++it) total += it->second;
    return total;
  }

  bool operator==(const LineStats&) const = default;
};

/// A line with its member indices, sorted lexicographically by point.
struct Line {
  LineKey key;
  std::vector<std::size_t> members;

  std::size_t size() const { return members.size(); }
};

struct LineArrangement {
  LineStats stats;
  /// Lines meeting the requested minimum size, sorted by key.
  std::vector<Line> lines;
};

/// Groups all C(n,2) pairs by line. Every line is counted in `stats`; only
/// lines with at least `min_size` points (and at least 2) are materialized.
/// For each point i the other points are bucketed by primitive direction;
/// a bucket is reported by i only when i has the smallest index on its line.
inline LineArrangement find_lines(const PointSet& points,
                                  std::size_t min_size = std::numeric_limits<std::size_t>::max()) {
  LineArrangement out;
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  out.stats.n = n;
  out.stats.ell_max = n;
  if (n < 2) return out;
  out.stats.ell_max = 2;

  std::vector<std::int64_t> dirs((n - 1) * d);
  std::vector<std::uint32_t> other(n - 1);
  std::vector<std::uint32_t> order(n - 1);

  auto dir_at = [&](std::uint32_t slot) {
    return std::span<const std::int64_t>(dirs.data() + static_cast<std::size_t>(slot) * d, d);
  };
  auto dir_less = [&](std::uint32_t a, std::uint32_t b) {
    auto da = dir_at(a);
    auto db = dir_at(b);
    return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end());
  };
  auto dir_equal = [&](std::uint32_t a, std::uint32_t b) {
    auto da = dir_at(a);
    auto db = dir_at(b);
    return std::equal(da.begin(), da.end(), db.begin());
  };

  // Planar directions are sorted as packed records; higher dimensions sort
  // slot indices over the flat direction buffer.
  struct Planar {
    std::int64_t x, y;
    std::uint32_t other;
  };
  std::vector<Planar> planar;
  if (d == 2) planar.resize(n - 1);
  std::vector<std::int64_t> flat(n * d);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < d; ++c) flat[j * d + c] = points[j][c];
  }
  std::vector<std::uint64_t> hist(n + 1, 0);

  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t slot = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::span<std::int64_t> v(dirs.data() + static_cast<std::size_t>(slot) * d, d);
      for (std::size_t c = 0; c < d; ++c) {
        if (__builtin_sub_overflow(flat[j * d + c], flat[i * d + c], &v[c])) {
          throw InvalidArgument("coordinate difference overflows 64-bit integers");
        }
      }
      detail::make_primitive(v);
      if (d == 2) {
        planar[slot] = {v[0], v[1], static_cast<std::uint32_t>(j)};
      } else {
        other[slot] = static_cast<std::uint32_t>(j);
        order[slot] = slot;
      }
      ++slot;
    }
    if (d == 2) {
      std::sort(planar.begin(), planar.end(), [](const Planar& a, const Planar& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
      });
      for (std::size_t s = 0; s < n - 1; ++s) {
        other[s] = planar[s].other;
        order[s] = static_cast<std::uint32_t>(s);
      }
    } else {
      std::sort(order.begin(), order.end(), dir_less);
    }
    auto same = [&](std::size_t a, std::size_t b) {
      if (d == 2) return planar[a].x == planar[b].x && planar[a].y == planar[b].y;
      return dir_equal(order[a], order[b]);
    };

    for (std::size_t a = 0; a < order.size();) {
      std::size_t b = a + 1;
      while (b < order.size() && same(a, b)) ++b;
      bool owner = true;
      for (std::size_t x = a; x < b; ++x) {
        if (other[order[x]] < i) {
          owner = false;
          break;
        }
      }
      if (owner) {
        const std::size_t size = b - a + 1;
        ++hist[size];
        if (size >= min_size && size >= 2) {
          Line line;
          line.members.reserve(size);
          line.members.push_back(i);
          for (std::size_t x = a; x < b; ++x) line.members.push_back(other[order[x]]);
          std::sort(line.members.begin(), line.members.end(),
                    [&](std::size_t u, std::size_t w) { return points[u] < points[w]; });
          line.key = canonical_line(points[line.members[0]], points[line.members[1]]);
          out.lines.push_back(std::move(line));
        }
      }
      a = b;
    }
  }
  for (std::size_t size = 2; size <= n; ++size) {
    if (hist[size] == 0) continue;
    out.stats.s[size] = hist[size];
    out.stats.ell_max = size;
  }
  out.stats.max_codegree = out.stats.ell_max - 2;
  std::sort(out.lines.begin(), out.lines.end(),
            [](const Line& a, const Line& b) { return a.key < b.key; });
  return out;
}

/// Exact collinearity profile of a set of distinct points.
inline LineStats collinearity_profile(const PointSet& points) { return find_lines(points).stats; }

/// Number of collinear k-subsets: sum over i of C(i,k) * s_i.
inline BigInt count_collinear_ktuples(const LineStats& stats, std::size_t k) {
  if (k < 3) throw InvalidArgument("k-tuple counting needs k >= 3");
  BigInt total = 0;
  for (auto [i, count] : stats.s) total += binomial(i, k) * count;
  return total;
}

/// Measured constants in the incidence bounds:
///   triple_ratio   = T_3 / (n^2 ln(ell) + ell^2 n)
///   ktuple_ratio_k = T_k / (ell^(k-3) n^2 + ell^(k-1) n), k >= 4
///   st_tail(i)     = (sum_{j>=i} s_j) / (n^2/i^3 + n/i)
/// Only the logarithm is evaluated in floating point.
struct BoundReport {
  std::size_t n = 0;
  std::size_t ell = 0;
  BigInt triples;
  double triple_ratio = 0.0;
  std::map<std::size_t, Rational> ktuple_ratio;
  std::map<std::size_t, Rational> st_tail_ratios;
  Rational st_constant;
};

inline Rational ktuple_ratio(const LineStats& stats, std::size_t k, std::size_t ell) {
  if (k < 4) throw InvalidArgument("k-tuple ratio is defined for k >= 4");
  const BigInt n = stats.n;
  BigInt denom = boost::multiprecision::pow(BigInt(ell), static_cast<unsigned>(k - 3)) * n * n +
                 boost::multiprecision::pow(BigInt(ell), static_cast<unsigned>(k - 1)) * n;
  if (denom == 0) return Rational(0);
  return Rational(count_collinear_ktuples(stats, k), denom);
}

inline Rational st_tail_ratio(const LineStats& stats, std::size_t i) {
  if (i < 2) throw InvalidArgument("tail index must be >= 2");
  // tail / (n^2/i^3 + n/i) = tail * i^3 / (n^2 + n i^2)
  const BigInt n = stats.n;
  const BigInt ii = i;
  const BigInt denom = n * n + n * ii * ii;
  if (denom == 0) return Rational(0);
  return Rational(BigInt(stats.tail(i)) * ii * ii * ii, denom);
}

/// `ell` is the collinearity bound the set is measured against; by default
/// ell_max, raised to 3 when the set has no three collinear points (any
/// ell >= ell_max is a valid bound for the set, and ln(ell) needs ell >= 3).
/// An explicit ell below 3 or below ell_max is rejected.
inline BoundReport bound_report(const LineStats& stats, std::size_t ell = 0,
                                std::size_t max_k = 6) {
  if (ell == 0) {
    ell = std::max<std::size_t>(stats.ell_max, 3);
  } else if (ell < 3) {
    throw BoundUndefinedError("triple bound needs ell >= 3, got " + std::to_string(ell));
  } else if (ell < stats.ell_max) {
    throw BoundUndefinedError("ell=" + std::to_string(ell) + " is below the set's " +
                              std::to_string(stats.ell_max) + " collinear points");
  }
  if (stats.n == 0) throw BoundUndefinedError("bounds are undefined for an empty set");

  BoundReport r;
  r.n = stats.n;
  r.ell = ell;
  r.triples = count_collinear_ktuples(stats, 3);
  const double n = static_cast<double>(stats.n);
  const double l = static_cast<double>(ell);
  r.triple_ratio = to_double(r.triples) / (n * n * std::log(l) + l * l * n);
  for (std::size_t k = 4; k <= max_k; ++k) r.ktuple_ratio[k] = ktuple_ratio(stats, k, ell);
  for (std::size_t i = 2; i <= stats.ell_max; ++i) {
    r.st_tail_ratios[i] = st_tail_ratio(stats, i);
    r.st_constant = std::max(r.st_constant, r.st_tail_ratios[i]);
  }
  return r;
}

}  // namespace gpss
