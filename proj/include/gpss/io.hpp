#pragma once

// Text formats.
//
// Point set: optional "# dim=<d>" header, then one point per line as
// whitespace-separated integers. '#' starts a comment anywhere on a line.
// Comment lines of the form "# key=value" are collected as metadata.
//
// Coloring: one point per line followed by "-> <color-id>".

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "coloring.hpp"
#include "point.hpp"
#include "selection.hpp"

namespace gpss {

using Metadata = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::int64_t> parse_ints(std::string_view body, std::size_t line_no) {
  std::vector<std::int64_t> out;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i == body.size()) break;
    std::size_t j = i;
    while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j]))) ++j;
    std::string_view token = body.substr(i, j - i);
    std::int64_t value = 0;
    const char* first = token.data();
    if (!token.empty() && token.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ParseError(line_no, "not an integer: '" + std::string(token) + "'");
    }
    out.push_back(value);
    i = j;
  }
  return out;
}

/// Parses "key=value" pairs from a comment body; returns false if the body
/// is not of that shape.
inline bool parse_kv_comment(std::string_view comment, Metadata& meta) {
  comment = trim(comment);
  if (comment.empty()) return false;
  Metadata found;
  std::size_t i = 0;
  while (i < comment.size()) {
    while (i < comment.size() && comment[i] == ' ') ++i;
    std::size_t j = i;
    while (j < comment.size() && comment[j] != ' ') ++j;
    std::string_view token = comment.substr(i, j - i);
    auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0) return false;
    found.emplace_back(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
    i = j;
  }
  meta.insert(meta.end(), found.begin(), found.end());
  return !found.empty();
}

}  // namespace detail

inline PointSet read_points(std::istream& in, Metadata* meta = nullptr) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool dim_from_header = false;
  std::vector<Point> pts;
  PointSet out;
  bool started = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    std::string_view body = line;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      body = line.substr(0, hash);
      std::string_view comment = detail::trim(line.substr(hash + 1));
      if (comment.starts_with("dim=")) {
        if (started) throw ParseError(line_no, "dim header after the first point");
        auto values = detail::parse_ints(comment.substr(4), line_no);
        if (values.size() != 1 || values[0] < 2) throw ParseError(line_no, "bad dim header");
        dim = static_cast<std::size_t>(values[0]);
        dim_from_header = true;
      } else if (meta) {
        detail::parse_kv_comment(comment, *meta);
      }
    }
    auto values = detail::parse_ints(body, line_no);
    if (values.empty()) continue;
    if (!started) {
      if (!dim_from_header) dim = values.size();
      if (dim < 2) throw ParseError(line_no, "points need at least 2 coordinates");
      out = PointSet(dim);
      started = true;
    }
    if (values.size() != dim) {
      throw ParseError(line_no, "expected " + std::to_string(dim) + " coordinates, got " +
                                    std::to_string(values.size()));
    }
    try {
      out.push_back(Point(std::move(values)));
    } catch (const DuplicatePointError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!started && dim_from_header) out = PointSet(dim);
  return out;
}

inline PointSet load_points(const std::string& path, Metadata* meta = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_points(in, meta);
}

inline void write_points(std::ostream& out, const PointSet& points, const Metadata& meta = {}) {
  out << "# dim=" << points.dim() << '\n';
  for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.dim(); ++i) out << (i ? " " : "") << p[i];
    out << '\n';
  }
}

inline void save_points(const std::string& path, const PointSet& points,
                        const Metadata& meta = {}) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_points(out, points, meta);
}

/// key=value metadata describing a selection result and its certificate.
inline Metadata selection_metadata(const SelectionResult& r) {
  Metadata meta{{"strategy", std::string(to_string(r.strategy()))},
                {"seed", std::to_string(r.seed())},
                {"k", std::to_string(r.k())},
                {"size", std::to_string(r.size())}};
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GreedyCertificate>) {
          meta.emplace_back("greedy_n", std::to_string(c.n));
          meta.emplace_back("greedy_ell", std::to_string(c.ell));
          meta.emplace_back("greedy_rejected", std::to_string(c.rejected));
          meta.emplace_back("greedy_certificate", c.holds() ? "holds" : "violated");
        } else if constexpr (std::is_same_v<T, SpencerTrace>) {
          std::ostringstream p;
          p.precision(17);
          p << c.p;
          meta.emplace_back("spencer_p", p.str());
          meta.emplace_back("spencer_trials", std::to_string(c.trials));
          meta.emplace_back("spencer_best_trial", std::to_string(c.best_trial));
          meta.emplace_back("spencer_mean_size", c.mean_size.str());
        } else if constexpr (std::is_same_v<T, ExactCertificate>) {
          meta.emplace_back("exact_nodes", std::to_string(c.nodes));
          meta.emplace_back("exact_root_bound", std::to_string(c.root_bound));
          meta.emplace_back("proven_optimal", c.proven_optimal ? "1" : "0");
        } else if constexpr (std::is_same_v<T, LocalSearchTrace>) {
          meta.emplace_back("ls_start_size", std::to_string(c.start_size));
          meta.emplace_back("ls_attempts", std::to_string(c.attempts));
          meta.emplace_back("ls_improvements", std::to_string(c.improvements));
        }
      },
      r.certificate());
  return meta;
}

/// Points of the selection followed by a metadata footer of comments.
inline void write_selection(std::ostream& out, const SelectionResult& r) {
  write_points(out, r.subset());
  for (const auto& [key, value] : selection_metadata(r)) out << "# " << key << '=' << value << '\n';
}

inline void write_coloring(std::ostream& out, const PointSet& points, const Coloring& coloring) {
  if (coloring.assignment.size() != points.size()) {
    throw InvalidArgument("coloring does not cover the point set");
  }
  out << "# dim=" << points.dim() << '\n';
  out << "# colors=" << coloring.num_colors << " k=" << coloring.k << '\n';
  for (std::size_t v = 0; v < points.size(); ++v) {
    for (std::size_t i = 0; i < points.dim(); ++i) out << (i ? " " : "") << points[v][i];
    out << " -> " << coloring.assignment[v] << '\n';
  }
}

struct ColoringFile {
  PointSet points;
  std::vector<std::size_t> colors;
};

inline ColoringFile read_coloring(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  ColoringFile out;
  bool started = false;
  std::size_t dim = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      std::string_view comment = detail::trim(line.substr(hash + 1));
      if (comment.starts_with("dim=") && !started) {
        auto v = detail::parse_ints(comment.substr(4), line_no);
        if (v.size() != 1 || v[0] < 2) throw ParseError(line_no, "bad dim header");
        dim = static_cast<std::size_t>(v[0]);
      }
      line = line.substr(0, hash);
    }
    if (detail::trim(line).empty()) continue;
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw ParseError(line_no, "missing '-> <color>'");
    auto coords = detail::parse_ints(line.substr(0, arrow), line_no);
    auto color = detail::parse_ints(line.substr(arrow + 2), line_no);
    if (color.size() != 1 || color[0] < 0) throw ParseError(line_no, "bad color id");
    if (!started) {
      if (dim == 0) dim = coords.size();
      if (dim < 2) throw ParseError(line_no, "points need at least 2 coordinates");
      out.points = PointSet(dim);
      started = true;
    }
    if (coords.size() != dim) throw ParseError(line_no, "wrong number of coordinates");
    try {
      out.points.push_back(Point(std::move(coords)));
    } catch (const DuplicatePointError& e) {
      throw ParseError(line_no, e.what());
    }
    out.colors.push_back(static_cast<std::size_t>(color[0]));
  }
  return out;
}

/// Re-indexes a coloring file onto `points`. Every point must be colored.
inline Coloring coloring_for(const PointSet& points, const ColoringFile& file, std::size_t k) {
  Coloring col;
  col.k = k;
  col.assignment.assign(points.size(), SIZE_MAX);
  for (std::size_t i = 0; i < file.points.size(); ++i) {
    auto idx = points.index_of(file.points[i]);
    if (!idx) throw InvalidArgument("colored point " + file.points[i].str() + " is not in the set");
    col.assignment[*idx] = file.colors[i];
    col.num_colors = std::max(col.num_colors, file.colors[i] + 1);
  }
  for (std::size_t v = 0; v < points.size(); ++v) {
    if (col.assignment[v] == SIZE_MAX) {
      throw InvalidArgument("point " + points[v].str() + " has no color");
    }
  }
  return col;
}

}  // namespace gpss
