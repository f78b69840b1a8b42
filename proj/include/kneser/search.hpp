#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kneser/analysis.hpp"
#include "kneser/bitset.hpp"
#include "kneser/chamber_graph.hpp"
#include "kneser/clique.hpp"
#include "kneser/error.hpp"
#include "kneser/geometry.hpp"

namespace kneser {

struct SearchOptions {
  SearchBudget budget;
  unsigned workers = 1;
  // Restrict to sets containing chamber 0. The chamber graph is
  // vertex-transitive, so nothing is lost for sizes; counts are recovered by
  // orbit counting (n * anchored / size).
  bool anchored = true;
};

struct SearchResult {
  int q = 0;
  std::size_t alpha = 0;
  std::size_t threshold = 0;
  bool anchored = false;
  std::vector<std::vector<std::size_t>> witnesses;  // chamber ids, each sorted
  std::map<std::size_t, std::size_t> sizes;          // size -> number of maximal sets
  std::map<std::size_t, std::size_t> anchored_sizes;  // size -> sets through chamber 0 (anchored runs)
  std::optional<std::size_t> b2;
  std::optional<std::size_t> b3;
  SearchStats stats;
};

namespace detail {

inline void require_adjacency(const ChamberGraph& cg) {
  if (!cg.has_adjacency()) throw Error(ErrorCode::DegenerateInput, "search requires built adjacency");
}


inline void fill_b2_b3(SearchResult& r) {
  std::vector<std::size_t> desc;
  for (auto it = r.sizes.rbegin(); it != r.sizes.rend(); ++it) desc.push_back(it->first);
  if (!desc.empty() && desc[0] != r.alpha) return;
  if (desc.size() > 1) r.b2 = desc[1];
  if (desc.size() > 2) r.b3 = desc[2];
}

}  // namespace detail

/// Independence number with one witness, as a maximum clique of the
/// complement graph.
inline SearchResult max_independent_set(const ChamberGraph& cg, const SearchOptions& opt = {}) {
  detail::require_adjacency(cg);
  const auto comp = cg.complement_adjacency();
  SearchResult r;
  r.q = cg.q();
  r.anchored = opt.anchored;
  CliqueResult c;
  if (opt.anchored) {
    Bitset cand = comp[0];
    c = max_clique(comp, cand, opt.budget, opt.workers);
    c.clique.insert(c.clique.begin(), 0);
  } else {
    c = max_clique(comp, Bitset::full(cg.size()), opt.budget, opt.workers);
  }
  r.alpha = c.clique.size();
  r.witnesses.push_back(c.clique);
  r.stats = c.stats;
  return r;
}

/// Every maximal independent set of size >= threshold, reported by size.
/// Running out of budget raises ThresholdTooLow: a lower threshold means a
/// larger tree, so the caller should raise the threshold or the budget.
inline SearchResult enumerate_maximal_above(const ChamberGraph& cg, std::size_t threshold,
                                            const SearchOptions& opt = {}, std::size_t alpha_hint = 0) {
  detail::require_adjacency(cg);
  if (threshold == 0) throw Error(ErrorCode::ThresholdTooLow, "threshold must be positive");
  const auto comp = cg.complement_adjacency();
  SearchResult r;
  r.q = cg.q();
  r.threshold = threshold;
  r.anchored = opt.anchored;
  MaximalCliques m;
  try {
    if (opt.anchored)
      m = enumerate_maximal_cliques_containing(comp, Bitset::full(cg.size()), 0, threshold, opt.budget);
    else
      m = enumerate_maximal_cliques(comp, Bitset::full(cg.size()), threshold, opt.budget, opt.workers);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ScaleLimit) throw;
    throw Error(ErrorCode::ThresholdTooLow, std::string("enumeration above ") + std::to_string(threshold) +
                                                " exceeds the budget (" + e.what() + ")");
  }
  r.stats = m.stats;
  for (const auto& c : m.cliques) ++(opt.anchored ? r.anchored_sizes : r.sizes)[c.size()];
  if (opt.anchored) {
    for (auto [s, k] : r.anchored_sizes) {
      const std::size_t total = cg.size() * k;
      if (total % s != 0) throw Error(ErrorCode::DegenerateInput, "orbit count is not integral");
      r.sizes[s] = total / s;
    }
  }
  r.alpha = r.sizes.empty() ? 0 : r.sizes.rbegin()->first;
  if (alpha_hint > r.alpha) r.alpha = alpha_hint;
  const std::size_t top = r.alpha;
  for (const auto& c : m.cliques)
    if (c.size() == top) r.witnesses.push_back(c);
  detail::fill_b2_b3(r);
  return r;
}

/// All maximum independent sets (never anchored: the full list is the point).
inline std::vector<ChamberSet> enumerate_maximum_sets(const ChamberGraph& cg, const SearchOptions& opt = {}) {
  SearchOptions o = opt;
  std::size_t alpha = max_independent_set(cg, o).alpha;
  o.anchored = false;
  const auto comp = cg.complement_adjacency();
  MaximalCliques m = enumerate_maximal_cliques(comp, Bitset::full(cg.size()), alpha, o.budget, o.workers);
  std::vector<ChamberSet> out;
  for (const auto& c : m.cliques)
    if (c.size() == alpha) out.push_back(ChamberSet::from_ids(cg, c));
  return out;
}

/// The point or plane x with s = C(x), if any.
struct CenterOf {
  std::optional<PointId> point;
  std::optional<PlaneId> plane;
  bool found() const { return point.has_value() || plane.has_value(); }
};

inline CenterOf center_of(const ChamberSet& s) {
  const ChamberGraph& cg = s.graph();
  const Geometry& g = cg.geometry();
  auto cx = [&](auto pred) {
    ChamberSet c(cg);
    for (std::size_t i = 0; i < cg.size(); ++i)
      if (pred(cg.chambers()[i])) c.insert(ChamberId(i));
    return c == s;
  };
  if (s.empty()) return {};
  const Chamber& first = cg.chamber(s.ids().front());
  CenterOf out;
  for (PointId p : g.points_on_line(first.line))
    if (cx([&](const Chamber& c) { return g.on_line(p, c.line); })) out.point = p;
  for (PlaneId t : g.planes_on_line(first.line))
    if (cx([&](const Chamber& c) { return g.in_plane(c.line, t); })) out.plane = t;
  return out;
}

// ---------------------------------------------------------------------------
// Coloring

enum class Certificate {
  Assignment,          // a verified proper coloring
  IndependenceBound,   // k * alpha < number of chambers
  PartitionArgument,   // k * alpha = n and no k pairwise disjoint maximum sets
  CountingArgument,    // counting inequality with measured b2 and all maximum sets = C(x)
  Exhaustive,          // backtracking found no coloring
};

inline std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::Assignment: return "assignment";
    case Certificate::IndependenceBound: return "independence-bound";
    case Certificate::PartitionArgument: return "partition-argument";
    case Certificate::CountingArgument: return "counting-argument";
    case Certificate::Exhaustive: return "exhaustive";
  }
  return "?";
}

struct ColoringResult {
  int q = 0;
  std::size_t k = 0;
  bool colorable = false;
  Certificate certificate = Certificate::Assignment;
  std::vector<int> assignment;  // color per chamber id, when colorable
  std::string detail;
  std::optional<std::size_t> chromatic_number;
  std::vector<ColoringResult> steps;  // chromatic_number: upper and lower certificates
  SearchStats stats;
};

/// Colors are valid and every class is pairwise non-opposite.
inline bool is_proper_coloring(const ChamberGraph& cg, const std::vector<int>& color, std::size_t k) {
  if (color.size() != cg.size()) return false;
  for (int c : color)
    if (c < 0 || static_cast<std::size_t>(c) >= k) return false;
  for (std::size_t u = 0; u < cg.size(); ++u) {
    const Bitset& row = cg.neighbors(ChamberId(u));
    for (std::size_t v = row.next(u + 1); v < row.size(); v = row.next(v + 1))
      if (color[u] == color[v]) return false;
  }
  return true;
}

/// q^2+q colors from the sets C(x): take a line l and a plane pi through it;
/// every line meets one of the q^2 points of pi off l or lies in one of the q
/// other planes through l. Each chamber gets the first such x.
inline std::vector<int> cover_coloring(const ChamberGraph& cg) {
  const Geometry& g = cg.geometry();
  const LineId l(0);
  const PlaneId pi = g.planes_on_line(l).front();
  std::vector<PointId> pts;
  Bitset off = g.plane_point_set(pi);
  off.subtract(g.line_point_set(l));
  off.for_each([&](std::size_t p) { pts.push_back(PointId(p)); });
  std::vector<PlaneId> pls;
  for (PlaneId t : g.planes_on_line(l))
    if (t != pi) pls.push_back(t);

  std::vector<int> line_color(g.num_lines(), -1);
  for (std::size_t h = 0; h < g.num_lines(); ++h) {
    for (std::size_t i = 0; i < pts.size() && line_color[h] < 0; ++i)
      if (g.on_line(pts[i], LineId(h))) line_color[h] = static_cast<int>(i);
    for (std::size_t j = 0; j < pls.size() && line_color[h] < 0; ++j)
      if (g.in_plane(LineId(h), pls[j])) line_color[h] = static_cast<int>(pts.size() + j);
  }
  std::vector<int> color(cg.size());
  for (std::size_t c = 0; c < cg.size(); ++c) color[c] = line_color[cg.chamber(ChamberId(c)).line.index()];
  return color;
}

/// DSATUR greedy coloring; returns the color per vertex.
inline std::vector<int> dsatur(const ChamberGraph& cg) {
  const std::size_t n = cg.size();
  std::vector<int> color(n, -1);
  std::vector<Bitset> seen(n, Bitset(n + 1));
  std::vector<std::size_t> sat(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (color[v] >= 0) continue;
      if (best == n || sat[v] > sat[best]) best = v;
    }
    int c = 0;
    while (seen[best].test(static_cast<std::size_t>(c))) ++c;
    color[best] = c;
    cg.neighbors(ChamberId(best)).for_each([&](std::size_t u) {
      if (color[u] < 0 && !seen[u].test(static_cast<std::size_t>(c))) {
        seen[u].set(static_cast<std::size_t>(c));
        ++sat[u];
      }
    });
  }
  return color;
}

namespace detail {

/// Exact k-coloring by DSATUR-ordered backtracking with color symmetry breaking.
inline std::optional<std::vector<int>> backtrack_coloring(const ChamberGraph& cg, std::size_t k, BudgetGuard& guard) {
  const std::size_t n = cg.size();
  std::vector<int> color(n, -1);
  // forbidden[v][c]: number of neighbours of v colored c
  std::vector<std::vector<int>> forbidden(n, std::vector<int>(k, 0));
  auto saturation = [&](std::size_t v) {
    std::size_t s = 0;
    for (std::size_t c = 0; c < k; ++c) s += forbidden[v][c] > 0 ? 1 : 0;
    return s;
  };
  auto rec = [&](auto&& self, std::size_t done, int used) -> bool {
    guard.tick();
    if (done == n) return true;
    std::size_t v = n;
    std::size_t vs = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (color[u] >= 0) continue;
      std::size_t s = saturation(u);
      if (v == n || s > vs) {
        v = u;
        vs = s;
      }
    }
    if (vs == k) return false;
    const int limit = std::min<int>(static_cast<int>(k), used + 1);
    for (int c = 0; c < limit; ++c) {
      if (forbidden[v][static_cast<std::size_t>(c)] > 0) continue;
      color[v] = c;
      cg.neighbors(ChamberId(v)).for_each([&](std::size_t u) { ++forbidden[u][static_cast<std::size_t>(c)]; });
      if (self(self, done + 1, std::max(used, c + 1))) return true;
      cg.neighbors(ChamberId(v)).for_each([&](std::size_t u) { --forbidden[u][static_cast<std::size_t>(c)]; });
      color[v] = -1;
    }
    return false;
  };
  if (rec(rec, 0, 0)) return color;
  return std::nullopt;
}

}  // namespace detail

/// Either a verified proper k-coloring or a refutation.
inline ColoringResult k_colorable(const ChamberGraph& cg, std::size_t k, const SearchOptions& opt = {}) {
  detail::require_adjacency(cg);
  detail::BudgetGuard guard(opt.budget);
  ColoringResult r;
  r.q = cg.q();
  r.k = k;
  const std::size_t n = cg.size();
  const std::size_t q = static_cast<std::size_t>(cg.q());

  auto accept = [&](std::vector<int> color, const std::string& how) {
    std::size_t used = static_cast<std::size_t>(*std::max_element(color.begin(), color.end()) + 1);
    if (used > k || !is_proper_coloring(cg, color, k)) return false;
    r.colorable = true;
    r.certificate = Certificate::Assignment;
    r.assignment = std::move(color);
    r.detail = how + " coloring with " + std::to_string(used) + " colors";
    return true;
  };
  auto finish = [&] {
    r.stats = guard.stats();
    return r;
  };

  if (k >= q * q + q && accept(cover_coloring(cg), "line-cover")) return finish();
  if (accept(dsatur(cg), "DSATUR")) return finish();

  const std::size_t alpha = max_independent_set(cg, opt).alpha;
  if (k * alpha < n) {
    r.certificate = Certificate::IndependenceBound;
    r.detail = std::to_string(k) + " * " + std::to_string(alpha) + " < " + std::to_string(n);
    return finish();
  }
  if (k * alpha == n) {
    // every color class of a k-coloring is a maximum independent set, so a
    // coloring is the same as k pairwise disjoint maximum sets
    std::vector<ChamberSet> maxsets = enumerate_maximum_sets(cg, opt);
    std::vector<Bitset> disjoint(maxsets.size(), Bitset(maxsets.size()));
    for (std::size_t i = 0; i < maxsets.size(); ++i)
      for (std::size_t j = 0; j < maxsets.size(); ++j)
        if (i != j && !maxsets[i].bits().intersects(maxsets[j].bits())) disjoint[i].set(j);
    CliqueResult best = max_clique(disjoint, Bitset::full(maxsets.size()), opt.budget);
    if (best.clique.size() < k) {
      r.certificate = Certificate::PartitionArgument;
      r.detail = std::to_string(maxsets.size()) + " maximum sets, at most " + std::to_string(best.clique.size()) +
                 " pairwise disjoint, " + std::to_string(k) + " needed";
      return finish();
    }
    std::vector<int> color(n, -1);
    for (std::size_t c = 0; c < k; ++c)
      maxsets[best.clique[c]].bits().for_each([&](std::size_t v) { color[v] = static_cast<int>(c); });
    if (accept(std::move(color), "partition")) return finish();
  }
  if (auto color = detail::backtrack_coloring(cg, k, guard)) {
    accept(std::move(*color), "backtracking");
    return finish();
  }
  r.certificate = Certificate::Exhaustive;
  r.detail = "backtracking exhausted all colorings";
  return finish();
}

// ---------------------------------------------------------------------------
// Counting inequality

struct CountingCheck {
  int q = 0;
  std::size_t chi = 0;
  std::size_t theta = 0;
  std::size_t b2 = 0;
  bool b2_below = false;  // b2 < q^2 (q+1)^2
  std::size_t lhs = 0;    // (q^2+1) theta (q+1)^2
  std::size_t rhs = 0;    // (2 theta + chi q^2) (q+1)^2
  bool holds = false;     // lhs <= rhs
  // chi is ruled out: the inequality fails while its premise b2 < q^2(q+1)^2 holds
  bool excluded() const { return b2_below && !holds; }
};

/// The two inequalities with an explicit b2 (e.g. a measured one).
inline CountingCheck counting_inequality(int qi, std::size_t chi, std::size_t b2) {
  const std::size_t q = static_cast<std::size_t>(qi);
  CountingCheck c;
  c.q = qi;
  c.chi = chi;
  c.theta = q * q + q + 1;
  c.b2 = b2;
  c.b2_below = b2 < q * q * (q + 1) * (q + 1);
  c.lhs = (q * q + 1) * c.theta * (q + 1) * (q + 1);
  c.rhs = (2 * c.theta + chi * q * q) * (q + 1) * (q + 1);
  c.holds = c.lhs <= c.rhs;
  return c;
}

/// As above with b2 = 3q^3+5q^2+3q+1; only meaningful for q >= 4.
inline CountingCheck verify_counting_inequality(int q, std::size_t chi) {
  if (q < 4) throw Error(ErrorCode::UnsupportedOrder, "the counting inequality needs q >= 4");
  const std::size_t qq = static_cast<std::size_t>(q);
  return counting_inequality(q, chi, 3 * qq * qq * qq + 5 * qq * qq + 3 * qq + 1);
}

/// Least chi not excluded by the counting inequality.
inline std::size_t counting_lower_bound(int q, std::size_t b2) {
  std::size_t chi = 1;
  while (counting_inequality(q, chi, b2).excluded()) ++chi;
  return chi;
}

/// Lower bound certificate at orders where every maximum set is some C(x):
/// the counting inequality with the measured b2.
inline ColoringResult counting_refutation(const ChamberGraph& cg, std::size_t k, std::size_t b2,
                                          bool maximum_sets_are_cx) {
  ColoringResult r;
  r.q = cg.q();
  r.k = k;
  r.certificate = Certificate::CountingArgument;
  CountingCheck c = counting_inequality(cg.q(), k, b2);
  r.colorable = !(maximum_sets_are_cx && c.excluded());
  r.detail = "(q^2+1)theta(q+1)^2 = " + std::to_string(c.lhs) + ", (2theta+k q^2)(q+1)^2 = " + std::to_string(c.rhs) +
             ", b2 = " + std::to_string(b2) + (c.b2_below ? " < " : " >= ") + "q^2(q+1)^2";
  if (!maximum_sets_are_cx) r.detail += "; maximum sets are not all of the form C(x)";
  return r;
}

/// chi with an upper certificate (a coloring) and a lower one (refutation of
/// chi - 1). Exact at q = 2; larger q raises ScaleLimit unless the
/// refutation is cheap.
inline ColoringResult chromatic_number(const ChamberGraph& cg, const SearchOptions& opt = {}) {
  detail::require_adjacency(cg);
  const std::size_t q = static_cast<std::size_t>(cg.q());
  ColoringResult up = k_colorable(cg, q * q + q, opt);
  if (!up.colorable) throw Error(ErrorCode::DegenerateInput, "no (q^2+q)-coloring found");
  auto colors_used = [](const ColoringResult& c) {
    return static_cast<std::size_t>(*std::max_element(c.assignment.begin(), c.assignment.end()) + 1);
  };
  ColoringResult down;
  for (;;) {
    down = k_colorable(cg, colors_used(up) - 1, opt);
    if (!down.colorable) break;
    up = down;
  }
  ColoringResult out = up;
  out.k = colors_used(up);
  out.chromatic_number = out.k;
  out.steps = {up, down};
  return out;
}

}  // namespace kneser
