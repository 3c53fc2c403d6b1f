#pragma once

// Subsets with at most k collinear points: seeded greedy, Spencer-style
// sample-and-delete on H_{k+1}, swap-based local search, a branch-and-bound
// exact oracle and the Gowers-question witness search.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geometry.hpp"
#include "hypergraph.hpp"
#include "numeric.hpp"
#include "point.hpp"
#include "random.hpp"

namespace gpss {

enum class Strategy { greedy, spencer, spencer_local, local_search, exact };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::greedy: return "greedy";
    case Strategy::spencer: return "spencer";
    case Strategy::spencer_local: return "spencer_ls";
    case Strategy::local_search: return "local_search";
    case Strategy::exact: return "exact";
  }
  return "?";
}

inline Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::greedy, Strategy::spencer, Strategy::spencer_local,
                 Strategy::local_search, Strategy::exact}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

/// Termination record of greedy selection. Every rejected point completes k
/// selected points to k+1 collinear ones, and each k-subset of the selection
/// spans at most one line, which holds at most ell-k further points; hence
/// n <= s + C(s,k) * (ell - k).
struct GreedyCertificate {
  std::size_t n = 0;
  std::size_t ell = 0;
  std::size_t k = 0;
  std::size_t s = 0;
  std::size_t rejected = 0;

  bool holds() const {
    if (ell <= k) return rejected == 0 && s == n;
    return BigInt(n) <= BigInt(s) + binomial(s, k) * (ell - k);
  }
};

struct SpencerTrace {
  double p = 1.0;
  std::size_t trials = 0;
  std::size_t best_size = 0;
  std::size_t best_trial = 0;
  Rational mean_size;
  /// Lower bound on alpha(H) from Spencer's lemma for this (n, m, r).
  double lemma_bound = 0.0;
};

struct ExactCertificate {
  std::uint64_t nodes = 0;
  bool proven_optimal = false;
  /// Row-capacity bound at the root of the search.
  std::size_t root_bound = 0;
};

struct LocalSearchTrace {
  std::size_t start_size = 0;
  std::uint64_t attempts = 0;
  std::uint64_t improvements = 0;
};

using Certificate =
    std::variant<std::monostate, GreedyCertificate, SpencerTrace, ExactCertificate, LocalSearchTrace>;

/// A subset with at most k collinear points. The bound is checked on
/// construction.
class SelectionResult {
 public:
  SelectionResult(PointSet subset, std::size_t k, Strategy strategy, std::uint64_t seed,
                  Certificate certificate = {})
      : subset_(std::move(subset)),
        k_(k),
        strategy_(strategy),
        seed_(seed),
        certificate_(std::move(certificate)) {
    const auto ell = collinearity_profile(subset_).ell_max;
    if (ell > k_) {
      throw Error("selection has " + std::to_string(ell) + " collinear points, limit " +
                  std::to_string(k_));
    }
  }

  const PointSet& subset() const { return subset_; }
  std::size_t size() const { return subset_.size(); }
  std::size_t k() const { return k_; }
  Strategy strategy() const { return strategy_; }
  std::uint64_t seed() const { return seed_; }
  const Certificate& certificate() const { return certificate_; }

  bool proven_optimal() const {
    auto* c = std::get_if<ExactCertificate>(&certificate_);
    return c != nullptr && c->proven_optimal;
  }

 private:
  PointSet subset_;
  std::size_t k_;
  Strategy strategy_;
  std::uint64_t seed_;
  Certificate certificate_;
};

/// Incremental "at most k collinear" bookkeeping over the lines of the
/// ground set that have more than k points.
class SubsetState {
 public:
  SubsetState(const PointSet& points, std::size_t k) : k_(k) {
    if (k_ < 1) throw InvalidArgument("k must be >= 1");
    auto arrangement = find_lines(points, k_ + 1);
    ell_ = arrangement.stats.ell_max;
    lines_ = std::move(arrangement.lines);
    incidence_.resize(points.size());
    for (std::size_t li = 0; li < lines_.size(); ++li) {
      for (auto v : lines_[li].members) incidence_[v].push_back(li);
    }
    on_line_.assign(lines_.size(), 0);
    selected_.assign(points.size(), false);
  }

  bool can_add(std::size_t v) const {
    if (selected_[v]) return false;
    return std::all_of(incidence_[v].begin(), incidence_[v].end(),
                       [&](std::size_t li) { return on_line_[li] < k_; });
  }
  void add(std::size_t v) {
    selected_[v] = true;
    ++count_;
    for (auto li : incidence_[v]) ++on_line_[li];
  }
  void remove(std::size_t v) {
    selected_[v] = false;
    --count_;
    for (auto li : incidence_[v]) --on_line_[li];
  }
  bool selected(std::size_t v) const { return selected_[v]; }
  std::size_t size() const { return count_; }
  std::size_t n() const { return selected_.size(); }
  std::size_t k() const { return k_; }
  std::size_t ell() const { return ell_; }
  const std::vector<Line>& lines() const { return lines_; }
  const std::vector<std::size_t>& incidence(std::size_t v) const { return incidence_[v]; }
  std::size_t on_line(std::size_t li) const { return on_line_[li]; }

  std::vector<std::size_t> selection() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < selected_.size(); ++v) {
      if (selected_[v]) out.push_back(v);
    }
    return out;
  }

 private:
  std::size_t k_;
  std::size_t ell_ = 0;
  std::vector<Line> lines_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::vector<std::size_t> on_line_;
  std::vector<bool> selected_;
  std::size_t count_ = 0;
};

/// Seed-shuffled greedy: scan points in random order, keep each point that
/// does not create k+1 collinear selected points. The result is maximal by
/// inclusion.
inline SelectionResult greedy_select(const PointSet& points, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("greedy selection needs k >= 2");
  SubsetState state(points, k);
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  GreedyCertificate cert{points.size(), state.ell(), k, 0, 0};
  for (auto v : order) {
    if (state.can_add(v)) {
      state.add(v);
    } else {
      ++cert.rejected;
    }
  }
  cert.s = state.size();
  auto chosen = state.selection();
  return SelectionResult(points.subset(chosen), k, Strategy::greedy, seed, cert);
}

/// Spencer's lower bound on alpha(H) for an r-uniform hypergraph with n
/// vertices and m edges: n/2 when m < n/r, else
/// (r-1)/r^(r/(r-1)) * n / (m/n)^(1/(r-1)).
inline double spencer_bound(std::size_t n, const BigInt& m, std::size_t r) {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  const double md = to_double(m);
  const double rd = static_cast<double>(r);
  if (md * rd < nd) return nd / 2.0;
  return (rd - 1.0) / std::pow(rd, rd / (rd - 1.0)) * nd / std::pow(md / nd, 1.0 / (rd - 1.0));
}

/// Keep probability min(1, (n/(r m))^(1/(r-1))); 1 when m < n/r.
inline double spencer_probability(std::size_t n, const BigInt& m, std::size_t r) {
  if (m == 0 || m * r < n) return 1.0;
  const double ratio = static_cast<double>(n) / (static_cast<double>(r) * to_double(m));
  return std::min(1.0, std::pow(ratio, 1.0 / (static_cast<double>(r) - 1.0)));
}

namespace detail {

/// One sample-then-delete trial. Survivors are drawn with probability p; then
/// while an edge survives, the vertex lying in the most surviving edges is
/// deleted (ties: lexicographically smallest point). Each deletion destroys
/// at least one surviving edge.
inline std::vector<std::size_t> spencer_trial(const CollinearHypergraph& h,
                                              const std::vector<std::size_t>& lex_rank, double p,
                                              Rng& rng) {
  const std::size_t n = h.n();
  const std::size_t r = h.r();
  const auto& lines = h.lines();
  std::vector<bool> alive(n);
  for (std::size_t v = 0; v < n; ++v) alive[v] = rng.bernoulli(p);

  std::vector<std::size_t> alive_on(lines.size(), 0);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    for (auto v : lines[li].members) alive_on[li] += alive[v] ? 1 : 0;
  }
  std::vector<unsigned __int128> deg(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    for (auto li : h.incidence(v)) deg[v] += binomial_u128(alive_on[li] - 1, r - 1);
  }

  for (;;) {
    std::size_t victim = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v] || deg[v] == 0) continue;
      if (victim == n || deg[v] > deg[victim] ||
          (deg[v] == deg[victim] && lex_rank[v] < lex_rank[victim])) {
        victim = v;
      }
    }
    if (victim == n) break;
    alive[victim] = false;
    deg[victim] = 0;
    for (auto li : h.incidence(victim)) {
      const std::size_t c = alive_on[li];
      if (c >= r) {
        // Each other survivor on the line loses C(c-2, r-2) edges.
        const auto loss = binomial_u128(c - 2, r - 2);
        for (auto u : lines[li].members) {
          if (alive[u]) deg[u] -= loss;
        }
      }
      alive_on[li] = c - 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (alive[v]) out.push_back(v);
  }
  return out;
}

inline std::vector<std::size_t> lex_ranks(const PointSet& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<std::size_t> rank(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  return rank;
}

}  // namespace detail

/// Best of `trials` independent sample-then-delete runs on H. Trial t draws
/// from derive_seed(seed, t). The result is independent in H, i.e. has at
/// most r-1 collinear points. `trial_sizes`, when given, receives every
/// trial's size.
inline SelectionResult spencer_select(const CollinearHypergraph& h, std::size_t trials,
                                      std::uint64_t seed,
                                      std::vector<std::size_t>* trial_sizes = nullptr) {
  if (trials < 1) throw InvalidArgument("spencer_select needs at least one trial");
  SpencerTrace trace;
  trace.p = spencer_probability(h.n(), h.m(), h.r());
  trace.trials = trials;
  trace.lemma_bound = spencer_bound(h.n(), h.m(), h.r());
  const auto rank = detail::lex_ranks(h.points());
  std::vector<std::size_t> best;
  bool have_best = false;
  BigInt total = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    auto kept = detail::spencer_trial(h, rank, trace.p, rng);
    total += kept.size();
    if (trial_sizes) trial_sizes->push_back(kept.size());
    if (!have_best || kept.size() > best.size()) {
      best = std::move(kept);
      trace.best_trial = t;
      have_best = true;
    }
  }
  trace.best_size = best.size();
  trace.mean_size = Rational(total, BigInt(trials));
  return SelectionResult(h.points().subset(best), h.r() - 1, Strategy::spencer, seed, trace);
}

/// Swap-based local search. The state is first made maximal; then each
/// attempt removes one random selected point x and greedily re-adds, in
/// random order, the points on x's long lines that became feasible (x
/// itself excluded). Two or more re-added points is an improvement, one is a
/// sideways move, none restores x. Size never decreases.
inline SelectionResult local_search_improve(const PointSet& points, const SelectionResult& start,
                                            std::uint64_t budget, std::uint64_t seed) {
  if (budget == 0) return start;
  const std::size_t k = start.k();
  SubsetState state(points, k);
  for (const auto& p : start.subset()) {
    auto idx = points.index_of(p);
    if (!idx) throw InvalidArgument("selection point " + p.str() + " is not in the point set");
    if (!state.can_add(*idx)) throw InvalidArgument("starting selection exceeds k collinear");
    state.add(*idx);
  }
  LocalSearchTrace trace{start.size(), 0, 0};
  Rng rng(seed);

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  for (auto v : order) {
    if (state.can_add(v)) {
      state.add(v);
      ++trace.improvements;
    }
  }

  std::vector<std::size_t> chosen = state.selection();
  std::vector<std::size_t> pos_in_chosen(points.size(), SIZE_MAX);
  for (std::size_t i = 0; i < chosen.size(); ++i) pos_in_chosen[chosen[i]] = i;
  auto drop = [&](std::size_t v) {
    const std::size_t i = pos_in_chosen[v];
    pos_in_chosen[chosen.back()] = i;
    chosen[i] = chosen.back();
    chosen.pop_back();
    pos_in_chosen[v] = SIZE_MAX;
  };
  auto keep = [&](std::size_t v) {
    pos_in_chosen[v] = chosen.size();
    chosen.push_back(v);
  };

  std::vector<std::size_t> candidates;
  std::vector<std::uint64_t> stamp(points.size(), 0);
  for (std::uint64_t attempt = 1; attempt <= budget && !chosen.empty(); ++attempt) {
    ++trace.attempts;
    const std::size_t x = chosen[rng.below(chosen.size())];
    state.remove(x);
    drop(x);
    candidates.clear();
    stamp[x] = attempt;
    for (auto li : state.incidence(x)) {
      for (auto u : state.lines()[li].members) {
        if (stamp[u] != attempt && !state.selected(u)) {
          stamp[u] = attempt;
          candidates.push_back(u);
        }
      }
    }
    rng.shuffle(candidates);
    std::size_t added = 0;
    for (auto u : candidates) {
      if (state.can_add(u)) {
        state.add(u);
        keep(u);
        ++added;
      }
    }
    if (added == 0) {
      state.add(x);
      keep(x);
    } else if (added >= 2) {
      ++trace.improvements;
    }
  }

  const Strategy tag =
      start.strategy() == Strategy::spencer ? Strategy::spencer_local : Strategy::local_search;
  return SelectionResult(points.subset(state.selection()), k, tag, seed, trace);
}

struct SelectOptions {
  std::size_t spencer_trials = 32;
  std::uint64_t local_search_budget = 4000;
  std::uint64_t exact_node_limit = 2'000'000;
};

SelectionResult exact_max_subset(const PointSet& points, std::size_t k, std::uint64_t node_limit);

/// Runs each requested strategy and returns the largest result; ties go to
/// the earlier strategy in the list. Strategy s uses the seed
/// derive_seed(seed, 1 + index of s in the Strategy enum), so its outcome
/// does not depend on which other strategies were requested.
inline SelectionResult select_best(const PointSet& points, std::size_t k,
                                   const std::vector<Strategy>& strategies, std::uint64_t seed,
                                   const SelectOptions& options = {}) {
  if (strategies.empty()) throw InvalidArgument("select_best needs at least one strategy");
  if (k < 2) throw InvalidArgument("selection needs k >= 2");
  std::optional<SelectionResult> best;
  std::optional<CollinearHypergraph> h;
  auto hypergraph = [&]() -> const CollinearHypergraph& {
    if (!h) h.emplace(points, k + 1);
    return *h;
  };
  for (auto s : strategies) {
    const std::uint64_t sub = derive_seed(seed, 1 + static_cast<std::uint64_t>(s));
    std::optional<SelectionResult> got;
    switch (s) {
      case Strategy::greedy:
        got.emplace(greedy_select(points, k, sub));
        break;
      case Strategy::spencer:
        got.emplace(spencer_select(hypergraph(), options.spencer_trials, sub));
        break;
      case Strategy::spencer_local: {
        auto base = spencer_select(hypergraph(), options.spencer_trials, sub);
        got.emplace(local_search_improve(points, base, options.local_search_budget,
                                         derive_seed(sub, 0x15)));
        break;
      }
      case Strategy::local_search: {
        auto base = greedy_select(points, k, sub);
        got.emplace(local_search_improve(points, base, options.local_search_budget,
                                         derive_seed(sub, 0x15)));
        break;
      }
      case Strategy::exact:
        got.emplace(exact_max_subset(points, k, options.exact_node_limit));
        break;
    }
    if (!best || got->size() > best->size()) best.emplace(std::move(*got));
  }
  return std::move(*best);
}

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const PointSet& points, std::size_t k, std::uint64_t node_limit)
      : state_(points, k), k_(k), node_limit_(node_limit) {
    build_classes();
  }

  void seed_incumbent(const std::vector<std::size_t>& chosen) {
    if (chosen.size() > best_.size()) best_ = chosen;
  }

  /// Returns true when the search finished within the node limit.
  bool run() {
    root_bound_ = bound(0);
    aborted_ = false;
    dfs(0);
    return !aborted_;
  }

  const std::vector<std::size_t>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }
  std::size_t root_bound() const { return root_bound_; }

 private:
  // Points are partitioned into classes: disjoint long lines chosen greedily
  // by size, then singletons. A class can contribute at most k points, so
  // size + sum over classes of min(k - chosen, open feasible members) bounds
  // every completion.
  void build_classes() {
    const std::size_t n = state_.n();
    class_of_.assign(n, SIZE_MAX);
    std::vector<std::size_t> line_order(state_.lines().size());
    std::iota(line_order.begin(), line_order.end(), std::size_t{0});
    std::stable_sort(line_order.begin(), line_order.end(), [&](std::size_t a, std::size_t b) {
      return state_.lines()[a].size() > state_.lines()[b].size();
    });
    for (auto li : line_order) {
      const auto& members = state_.lines()[li].members;
      if (std::any_of(members.begin(), members.end(),
                      [&](std::size_t v) { return class_of_[v] != SIZE_MAX; })) {
        continue;
      }
      for (auto v : members) {
        class_of_[v] = classes_.size();
        order_.push_back(v);
      }
      classes_.push_back(members);
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (class_of_[v] == SIZE_MAX) {
        class_of_[v] = classes_.size();
        classes_.push_back({v});
        order_.push_back(v);
      }
    }
    position_.assign(n, 0);
    for (std::size_t i = 0; i < order_.size(); ++i) position_[order_[i]] = i;
    chosen_in_class_.assign(classes_.size(), 0);
  }

  std::size_t bound(std::size_t pos) const {
    std::size_t total = state_.size();
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      std::size_t open = 0;
      const std::size_t room = k_ - std::min(k_, chosen_in_class_[c]);
      if (room == 0) continue;
      for (auto v : classes_[c]) {
        if (position_[v] >= pos && state_.can_add(v) && ++open == room) break;
      }
      total += open;
    }
    return total;
  }

  void dfs(std::size_t pos) {
    if (aborted_) return;
    if (++nodes_ > node_limit_) {
      aborted_ = true;
      return;
    }
    if (state_.size() > best_.size()) best_ = state_.selection();
    if (pos == order_.size()) return;
    if (bound(pos) <= best_.size()) return;
    const std::size_t v = order_[pos];
    if (state_.can_add(v)) {
      state_.add(v);
      ++chosen_in_class_[class_of_[v]];
      dfs(pos + 1);
      --chosen_in_class_[class_of_[v]];
      state_.remove(v);
    }
    dfs(pos + 1);
  }

  SubsetState state_;
  std::size_t k_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::size_t root_bound_ = 0;
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::size_t> class_of_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_;
  std::vector<std::size_t> chosen_in_class_;
  std::vector<std::size_t> best_;
};

}  // namespace detail

/// Maximum subset with at most k collinear points by branch and bound. When
/// the node limit is hit the best subset found so far is returned with
/// proven_optimal unset.
inline SelectionResult exact_max_subset(const PointSet& points, std::size_t k,
                                        std::uint64_t node_limit) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  detail::ExactSearch search(points, k, node_limit);
  if (k >= 2 && points.size() > 0) {
    // A greedy incumbent lets the bound prune from the first node.
    SubsetState warm(points, k);
    for (std::size_t v = 0; v < points.size(); ++v) {
      if (warm.can_add(v)) warm.add(v);
    }
    search.seed_incumbent(warm.selection());
  }
  ExactCertificate cert;
  cert.proven_optimal = search.run();
  cert.nodes = search.nodes();
  cert.root_bound = search.root_bound();
  auto chosen = search.best();
  std::sort(chosen.begin(), chosen.end());
  return SelectionResult(points.subset(chosen), k, Strategy::exact, 0, cert);
}

/// Outcome of the Gowers-question search: q collinear points, or q points in
/// general position, or neither found.
struct GowersWitness {
  enum class Kind { collinear, general_position, unresolved };
  Kind kind = Kind::unresolved;
  PointSet points;
  /// For unresolved: the exact search proved that no q points in general
  /// position exist (and ell_max < q), so the set has neither.
  bool neither_exists = false;
};

inline std::string_view to_string(GowersWitness::Kind kind) {
  switch (kind) {
    case GowersWitness::Kind::collinear: return "collinear";
    case GowersWitness::Kind::general_position: return "general_position";
    case GowersWitness::Kind::unresolved: return "unresolved";
  }
  return "?";
}

inline GowersWitness gowers_witness(const PointSet& points, std::size_t q, std::uint64_t seed,
                                    const SelectOptions& options = {}) {
  if (q < 3) throw InvalidArgument("gowers_witness needs q >= 3");
  GowersWitness out;
  out.points = PointSet(points.dim());
  auto arrangement = find_lines(points, q);
  if (!arrangement.lines.empty()) {
    const auto& line = arrangement.lines.front();
    std::vector<std::size_t> pick(line.members.begin(), line.members.begin() + q);
    out.points = points.subset(pick);
    if (collinearity_profile(out.points).ell_max != q) throw Error("collinear witness failed");
    out.kind = GowersWitness::Kind::collinear;
    return out;
  }

  auto take = [&](const SelectionResult& r) {
    std::vector<Point> pts(r.subset().begin(), r.subset().begin() + q);
    out.points = PointSet(points.dim(), std::move(pts));
    if (collinearity_profile(out.points).ell_max > 2) throw Error("general position witness failed");
    out.kind = GowersWitness::Kind::general_position;
  };
  auto best = select_best(points, 2, {Strategy::greedy, Strategy::spencer_local}, seed, options);
  if (best.size() >= q) {
    take(best);
    return out;
  }
  auto exact = exact_max_subset(points, 2, options.exact_node_limit);
  if (exact.size() >= q) {
    take(exact);
    return out;
  }
  out.neither_exists = exact.proven_optimal();
  return out;
}

}  // namespace gpss
