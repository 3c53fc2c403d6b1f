#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "geometry.hpp"
#include "numeric.hpp"
#include "point.hpp"

namespace gpss {

/// Implicit r-uniform hypergraph H_r(P): vertices are the points, edges are
/// the collinear r-subsets. Edges are never stored; each line with at least
/// r points stands for its C(i, r) edges.
class CollinearHypergraph {
 public:
  CollinearHypergraph(PointSet points, std::size_t r) : r_(r), points_(std::move(points)) {
    if (r_ < 3) throw InvalidArgument("hypergraph uniformity must be >= 3");
    auto arrangement = find_lines(points_, r_);
    stats_ = std::move(arrangement.stats);
    lines_ = std::move(arrangement.lines);
    incidence_.resize(points_.size());
    for (std::size_t li = 0; li < lines_.size(); ++li) {
      edges_ += binomial(lines_[li].size(), r_);
      for (auto v : lines_[li].members) incidence_[v].push_back(li);
    }
  }

  std::size_t r() const { return r_; }
  std::size_t n() const { return points_.size(); }
  const BigInt& m() const { return edges_; }
  const PointSet& points() const { return points_; }
  const LineStats& stats() const { return stats_; }
  /// Lines with at least r points, in LineKey order.
  const std::vector<Line>& lines() const { return lines_; }
  /// Indices into lines() of the lines through vertex v.
  const std::vector<std::size_t>& incidence(std::size_t v) const { return incidence_[v]; }

  /// Number of edges containing vertex v: sum over its lines of C(i-1, r-1).
  BigInt degree(std::size_t v) const {
    BigInt total = 0;
    for (auto li : incidence_[v]) total += binomial(lines_[li].size() - 1, r_ - 1);
    return total;
  }

  BigInt max_degree() const {
    BigInt best = 0;
    for (std::size_t v = 0; v < n(); ++v) best = std::max(best, degree(v));
    return best;
  }

 private:
  std::size_t r_;
  PointSet points_;
  LineStats stats_;
  std::vector<Line> lines_;
  std::vector<std::vector<std::size_t>> incidence_;
  BigInt edges_ = 0;
};

inline CollinearHypergraph build_collinearity_hypergraph(const PointSet& points, std::size_t r) {
  return CollinearHypergraph(points, r);
}

inline BigInt vertex_degree(const CollinearHypergraph& h, const Point& v) {
  auto idx = h.points().index_of(v);
  if (!idx) throw InvalidArgument("unknown vertex " + v.str());
  return h.degree(*idx);
}

using Edge = std::vector<std::size_t>;

/// All edges as vertex-index r-subsets. Order: lines by LineKey, then
/// r-subsets of each line's (lexicographically sorted) members in
/// lexicographic position order.
inline std::vector<Edge> enumerate_edges(const CollinearHypergraph& h, std::uint64_t cap) {
  if (h.m() > cap) throw CapacityError(h.m(), cap);
  std::vector<Edge> edges;
  edges.reserve(h.m().convert_to<std::size_t>());
  const std::size_t r = h.r();
  std::vector<std::size_t> pos(r);
  for (const auto& line : h.lines()) {
    const std::size_t size = line.size();
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    for (;;) {
      Edge e(r);
      for (std::size_t x = 0; x < r; ++x) e[x] = line.members[pos[x]];
      edges.push_back(std::move(e));
      std::size_t x = r;
      while (x > 0 && pos[x - 1] == size - r + x - 1) --x;
      if (x == 0) break;
      ++pos[x - 1];
      for (std::size_t y = x; y < r; ++y) pos[y] = pos[y - 1] + 1;
    }
  }
  return edges;
}

/// The averaging threshold 2 r m / n used when discarding high-degree vertices.
inline Rational average_degree_threshold(const CollinearHypergraph& h) {
  if (h.n() == 0) return Rational(0);
  return Rational(2 * BigInt(h.r()) * h.m(), BigInt(h.n()));
}

/// Points whose degree is at most `threshold` (exact rational comparison).
inline PointSet degree_truncate(const CollinearHypergraph& h, const Rational& threshold) {
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < h.n(); ++v) {
    if (Rational(h.degree(v)) <= threshold) keep.push_back(v);
  }
  return h.points().subset(keep);
}

/// p_j(H): unordered pairs of distinct edges sharing exactly j vertices, for
/// 2 <= j <= r-1. Such pairs lie on one line, which gives per line of size i
/// the count C(i,r) * C(r,j) * C(i-r, r-j) / 2.
inline BigInt pair_overlap_counts(const CollinearHypergraph& h, std::size_t j) {
  const std::size_t r = h.r();
  if (j < 2 || j + 1 > r) {
    throw InvalidArgument("overlap size j must lie in [2, r-1]; got " + std::to_string(j));
  }
  BigInt total = 0;
  for (const auto& line : h.lines()) {
    const std::size_t i = line.size();
    if (i < 2 * r - j) continue;
    total += binomial(i, r) * binomial(r, j) * binomial(i - r, r - j);
  }
  return total / 2;
}

/// Degree and overlap conditions of the Duke-Lefmann-Rodl independent set
/// theorem, evaluated for given t and gamma. Purely diagnostic.
struct PrecondCertificate {
  double t = 0.0;
  double gamma = 0.0;
  std::size_t r = 0;
  std::size_t n = 0;
  BigInt delta_max;
  std::map<std::size_t, BigInt> pj;
  bool degree_passed = false;
  std::map<std::size_t, bool> pj_passed;

  bool all_passed() const {
    return degree_passed &&
           std::all_of(pj_passed.begin(), pj_passed.end(), [](const auto& kv) { return kv.second; });
  }
};

inline PrecondCertificate precondition_check(const CollinearHypergraph& h, double t, double gamma) {
  if (!(t > 0.0) || !(gamma > 0.0)) throw InvalidArgument("t and gamma must be positive");
  PrecondCertificate cert;
  cert.t = t;
  cert.gamma = gamma;
  cert.r = h.r();
  cert.n = h.n();
  cert.delta_max = h.max_degree();
  const long double tl = t;
  const std::size_t r = h.r();
  cert.degree_passed = static_cast<long double>(to_double(cert.delta_max)) <=
                       std::pow(tl, static_cast<long double>(r - 1));
  for (std::size_t j = 2; j + 1 <= r; ++j) {
    cert.pj[j] = pair_overlap_counts(h, j);
    const long double limit =
        static_cast<long double>(h.n()) *
        std::pow(tl, static_cast<long double>(2 * r - j - 1) - static_cast<long double>(gamma));
    cert.pj_passed[j] = cert.pj[j].convert_to<long double>() <= limit;
  }
  return cert;
}

}  // namespace gpss
