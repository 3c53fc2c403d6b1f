#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace gpss {

/// A lattice point with exact integer coordinates.
struct Point {
  std::vector<std::int64_t> coords;

  Point() = default;
  Point(std::initializer_list<std::int64_t> c) : coords(c) {}
  explicit Point(std::vector<std::int64_t> c) : coords(std::move(c)) {}

  std::size_t dim() const { return coords.size(); }
  std::int64_t operator[](std::size_t i) const { return coords[i]; }
  std::int64_t& operator[](std::size_t i) { return coords[i]; }

  auto operator<=>(const Point&) const = default;
  bool operator==(const Point&) const = default;

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) os << ',';
      os << coords[i];
    }
    os << ')';
    return os.str();
  }
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto c : p.coords) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// A finite set of distinct points of one common dimension (>= 2).
/// Insertion order is preserved; indices into the set are stable.
class PointSet {
 public:
  explicit PointSet(std::size_t dim = 2) : dim_(dim) { check_dim(dim); }

  PointSet(std::size_t dim, std::vector<Point> points) : dim_(dim) {
    check_dim(dim);
    points_.reserve(points.size());
    for (auto& p : points) push_back(std::move(p));
  }

  /// Dimension taken from the first point (2 when empty).
  explicit PointSet(std::vector<Point> points)
      : PointSet(points.empty() ? 2 : points.front().dim(), std::move(points)) {}

  PointSet(std::initializer_list<Point> points) : PointSet(std::vector<Point>(points)) {}

  void push_back(Point p) {
    if (p.dim() != dim_) {
      throw DimensionMismatchError("point " + p.str() + " has dimension " +
                                   std::to_string(p.dim()) + ", expected " +
                                   std::to_string(dim_));
    }
    auto [it, inserted] = index_.emplace(p, points_.size());
    if (!inserted) throw DuplicatePointError(p.str());
    points_.push_back(std::move(p));
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return dim_; }

  const Point& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }
  const std::vector<Point>& points() const { return points_; }

  std::optional<std::size_t> index_of(const Point& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Point& p) const { return index_.contains(p); }

  PointSet subset(std::span<const std::size_t> indices) const {
    PointSet out(dim_);
    out.points_.reserve(indices.size());
    for (auto i : indices) out.push_back(points_[i]);
    return out;
  }

  /// Same points in lexicographic order.
  PointSet sorted() const {
    std::vector<Point> pts = points_;
    std::sort(pts.begin(), pts.end());
    return PointSet(dim_, std::move(pts));
  }

  /// Set equality (order-insensitive).
  bool same_set(const PointSet& other) const {
    if (dim_ != other.dim_ || size() != other.size()) return false;
    return std::all_of(points_.begin(), points_.end(),
                       [&](const Point& p) { return other.contains(p); });
  }

 private:
  static void check_dim(std::size_t dim) {
    if (dim < 2) throw InvalidArgument("point dimension must be at least 2");
  }

  std::size_t dim_;
  std::vector<Point> points_;
  std::unordered_map<Point, std::size_t, PointHash> index_;
};

}  // namespace gpss
