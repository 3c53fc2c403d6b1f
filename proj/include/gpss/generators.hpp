#pragma once

// Named point families. Planar grids use {0..q-1}^2; lattices use
// {1..ell}^d so they feed signature_coloring directly. to_unit_offset /
// to_zero_offset convert between the two conventions.

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"
#include "point.hpp"
#include "random.hpp"

namespace gpss {

inline PointSet grid_2d(std::size_t q) {
  if (q < 2) throw InvalidArgument("grid side must be >= 2");
  PointSet out(2);
  for (std::size_t x = 0; x < q; ++x) {
    for (std::size_t y = 0; y < q; ++y) {
      out.push_back(Point{static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)});
    }
  }
  return out;
}

/// Side of the grid that has fewer than q collinear points and no q points
/// with at most k collinear: floor((q-1)/k).
inline std::size_t gpk_side(std::size_t q, std::size_t k) { return (q - 1) / k; }

inline PointSet gpk_grid(std::size_t q, std::size_t k) {
  if (k < 3) throw InvalidArgument("gpk_grid needs k >= 3");
  if (q <= k) throw InvalidArgument("gpk_grid needs q > k");
  const std::size_t m = gpk_side(q, k);
  PointSet out(2);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      out.push_back(Point{static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)});
    }
  }
  return out;
}

inline PointSet lattice_hd(std::size_t ell, std::size_t d, std::size_t max_points = 1'000'000) {
  if (ell < 2) throw InvalidArgument("lattice side must be >= 2");
  if (d < 2) throw InvalidArgument("lattice dimension must be >= 2");
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > max_points / ell) {
      throw InvalidArgument("lattice [" + std::to_string(ell) + "]^" + std::to_string(d) +
                            " exceeds the size budget of " + std::to_string(max_points));
    }
    total *= ell;
  }
  PointSet out(d);
  Point p(std::vector<std::int64_t>(d, 1));
  for (std::size_t i = 0; i < total; ++i) {
    out.push_back(p);
    for (std::size_t c = d; c-- > 0;) {
      if (p[c] < static_cast<std::int64_t>(ell)) {
        ++p[c];
        break;
      }
      p[c] = 1;
    }
  }
  return out;
}

inline PointSet shifted(const PointSet& points, std::int64_t delta) {
  PointSet out(points.dim());
  for (auto p : points) {
    for (auto& c : p.coords) c += delta;
    out.push_back(std::move(p));
  }
  return out;
}
inline PointSet to_unit_offset(const PointSet& points) { return shifted(points, 1); }
inline PointSet to_zero_offset(const PointSet& points) { return shifted(points, -1); }

struct ProjectionResult {
  PointSet image;
  /// 2 x d integer matrix, row-major; empty for planar input.
  std::vector<std::int64_t> matrix;
  std::size_t attempts = 0;
};

/// Random integer linear map Z^d -> Z^2, accepted only when it is injective
/// on the points and leaves the collinearity profile unchanged. Attempt a
/// draws coefficients uniformly from [-B, B] with B = 4 * 2^a (capped at
/// 2^20). Planar input is returned unchanged.
inline ProjectionResult generic_projection(const PointSet& points, std::uint64_t seed,
                                           std::size_t max_attempts = 16) {
  const std::size_t d = points.dim();
  if (d == 2) return {points, {}, 0};
  const LineStats source = collinearity_profile(points);
  Rng rng(seed);
  std::string last_failure = "no attempts made";
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const std::int64_t bound = std::int64_t{4} << std::min<std::size_t>(attempt, 18);
    std::vector<std::int64_t> matrix(2 * d);
    for (auto& a : matrix) a = rng.between(-bound, bound);

    PointSet image(2);
    bool ok = true;
    for (const auto& p : points) {
      Point q{0, 0};
      for (std::size_t row = 0; row < 2 && ok; ++row) {
        std::int64_t acc = 0;
        for (std::size_t c = 0; c < d; ++c) {
          std::int64_t term;
          if (__builtin_mul_overflow(matrix[row * d + c], p[c], &term) ||
              __builtin_add_overflow(acc, term, &acc)) {
            ok = false;
            break;
          }
        }
        q[row] = acc;
      }
      if (!ok || image.contains(q)) {
        ok = false;
        last_failure = "attempt " + std::to_string(attempt) + ": projected points collide";
        break;
      }
      image.push_back(std::move(q));
    }
    if (!ok) continue;
    const LineStats projected = collinearity_profile(image);
    if (projected.s == source.s) return {std::move(image), std::move(matrix), attempt + 1};
    last_failure = "attempt " + std::to_string(attempt) + ": profile changed (ell_max " +
                   std::to_string(source.ell_max) + " -> " + std::to_string(projected.ell_max) +
                   ")";
  }
  throw ExhaustedError("generic_projection: " + std::to_string(max_attempts) +
                       " attempts exhausted; last " + last_failure);
}

/// n distinct points in [0, width) x [0, height) with no ell+1 collinear.
/// Candidates are drawn uniformly and rejected when they would complete
/// ell+1 collinear points; at most `max_draws` candidates are drawn
/// (default 200 n + 1000).
inline PointSet random_bounded_collinear(std::size_t n, std::size_t ell, std::int64_t width,
                                         std::int64_t height, std::uint64_t seed,
                                         std::uint64_t max_draws = 0) {
  if (ell < 2) throw InvalidArgument("ell must be >= 2");
  if (width < 1 || height < 1) throw InvalidArgument("box must be nonempty");
  const auto cells = static_cast<unsigned __int128>(width) * static_cast<unsigned __int128>(height);
  if (cells < n) {
    throw InvalidArgument("box " + std::to_string(width) + "x" + std::to_string(height) +
                          " holds fewer than " + std::to_string(n) + " lattice points");
  }
  if (max_draws == 0) max_draws = 200 * static_cast<std::uint64_t>(n) + 1000;
  Rng rng(seed);
  PointSet out(2);
  std::vector<std::pair<std::int64_t, std::int64_t>> dirs;
  for (std::uint64_t draw = 0; draw < max_draws && out.size() < n; ++draw) {
    Point cand{rng.between(0, width - 1), rng.between(0, height - 1)};
    if (out.contains(cand)) continue;
    dirs.clear();
    for (const auto& p : out) {
      std::int64_t v[2] = {p[0] - cand[0], p[1] - cand[1]};
      detail::make_primitive(v);
      dirs.emplace_back(v[0], v[1]);
    }
    std::sort(dirs.begin(), dirs.end());
    bool ok = true;
    for (std::size_t a = 0; a < dirs.size() && ok;) {
      std::size_t b = a;
      while (b < dirs.size() && dirs[b] == dirs[a]) ++b;
      if (b - a >= ell) ok = false;
      a = b;
    }
    if (ok) out.push_back(std::move(cand));
  }
  if (out.size() < n) {
    throw ExhaustedError("random_bounded_collinear: placed " + std::to_string(out.size()) +
                         " of " + std::to_string(n) + " points within " +
                         std::to_string(max_draws) + " draws");
  }
  return out;
}

enum class Family { grid2d, gpk_grid, lattice_hd, random_bounded };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::grid2d: return "grid2d";
    case Family::gpk_grid: return "gpk_grid";
    case Family::lattice_hd: return "lattice_hd";
    case Family::random_bounded: return "random_bounded";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (auto f : {Family::grid2d, Family::gpk_grid, Family::lattice_hd, Family::random_bounded}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

/// Parameters of one generated instance. Unused fields stay zero.
struct FamilySpec {
  Family family = Family::grid2d;
  std::size_t q = 0;
  std::size_t k = 0;
  std::size_t ell = 0;
  std::size_t d = 0;
  std::size_t n = 0;
  std::int64_t box = 0;
  std::uint64_t seed = 0;
  /// lattice_hd only: map to the plane with generic_projection.
  bool project = false;

  void validate() const {
    switch (family) {
      case Family::grid2d:
        if (q < 2) throw InvalidArgument("grid2d needs q >= 2");
        break;
      case Family::gpk_grid:
        if (k < 3 || q <= k) throw InvalidArgument("gpk_grid needs 3 <= k < q");
        break;
      case Family::lattice_hd:
        if (ell < 2 || d < 2) throw InvalidArgument("lattice_hd needs ell >= 2 and d >= 2");
        break;
      case Family::random_bounded:
        if (ell < 2 || box < 1) throw InvalidArgument("random_bounded needs ell >= 2, box >= 1");
        break;
    }
  }

  /// Space-separated key=value pairs, suitable for a header comment.
  std::string to_kv() const {
    std::ostringstream os;
    os << "family=" << to_string(family);
    switch (family) {
      case Family::grid2d: os << " q=" << q; break;
      case Family::gpk_grid: os << " q=" << q << " k=" << k; break;
      case Family::lattice_hd:
        os << " ell=" << ell << " d=" << d;
        if (project) os << " project=1 seed=" << seed;
        break;
      case Family::random_bounded:
        os << " n=" << n << " ell=" << ell << " box=" << box << " seed=" << seed;
        break;
    }
    return os.str();
  }
};

inline PointSet generate(const FamilySpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::grid2d: return grid_2d(spec.q);
    case Family::gpk_grid: return gpk_grid(spec.q, spec.k);
    case Family::lattice_hd: {
      auto lattice = lattice_hd(spec.ell, spec.d);
      if (!spec.project) return lattice;
      return generic_projection(lattice, spec.seed, 32).image;
    }
    case Family::random_bounded:
      return random_bounded_collinear(spec.n, spec.ell, spec.box, spec.box, spec.seed);
  }
  throw InvalidArgument("unhandled family");
}

}  // namespace gpss
