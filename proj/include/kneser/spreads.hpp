#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "kneser/bitset.hpp"
#include "kneser/clique.hpp"
#include "kneser/error.hpp"
#include "kneser/geometry.hpp"

namespace kneser {

/// q^2+1 pairwise skew lines covering every point once; ids sorted.
using Spread = std::vector<LineId>;

/// Maximum number of pairwise skew lines among `lines`.
inline std::size_t max_skew_subset(const Geometry& g, const Bitset& lines, const SearchBudget& budget = {}) {
  if (lines.none()) return 0;
  std::vector<Bitset> adj;
  adj.reserve(g.num_lines());
  for (std::size_t l = 0; l < g.num_lines(); ++l) adj.push_back(g.skew_set(LineId(l)));
  return max_clique(adj, lines, budget).clique.size();
}

/// Number of lines through at least one point of `points`.
inline std::size_t count_lines_meeting(const Geometry& g, const Bitset& points) {
  Bitset lines(g.num_lines());
  points.for_each([&](std::size_t p) { lines |= g.point_line_set(PointId(p)); });
  return lines.count();
}

/// The q+1 lines meeting every common transversal of three mutually skew lines.
inline std::vector<LineId> regulus(const Geometry& g, LineId a, LineId b, LineId c) {
  if (!g.skew(a, b) || !g.skew(a, c) || !g.skew(b, c))
    throw Error(ErrorCode::NotSkewTriple, "regulus needs three mutually skew lines");
  Bitset transversals = g.meet_set(a) & g.meet_set(b) & g.meet_set(c);
  Bitset out = Bitset::full(g.num_lines());
  transversals.for_each([&](std::size_t t) { out &= g.meet_set(LineId(t)); });
  std::vector<LineId> lines;
  out.for_each([&](std::size_t l) { lines.push_back(LineId(l)); });
  return lines;
}

/// Regular: the regulus through any three of its lines stays inside the spread.
inline bool is_regular(const Geometry& g, const Spread& s) {
  Bitset members(g.num_lines());
  for (LineId l : s) members.set(l.index());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      for (std::size_t k = j + 1; k < s.size(); ++k)
        for (LineId l : regulus(g, s[i], s[j], s[k]))
          if (!members.test(l.index())) return false;
  return true;
}

/// All spreads, by covering the least uncovered point with each admissible
/// line in turn. Only q <= 3 is accepted.
inline std::vector<Spread> enumerate_spreads(const Geometry& g) {
  if (g.q() > 3) throw Error(ErrorCode::ScaleLimit, "spread enumeration is limited to q <= 3");
  std::vector<Spread> out;
  Spread cur;
  Bitset covered(g.num_points());
  Bitset allowed = Bitset::full(g.num_lines());

  auto rec = [&](auto&& self) -> void {
    std::size_t p = covered.complement().first();
    if (p >= g.num_points()) {
      Spread s = cur;
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
      return;
    }
    Bitset options = g.point_line_set(PointId(p)) & allowed;
    options.for_each([&](std::size_t l) {
      const LineId line(l);
      Bitset saved = allowed;
      cur.push_back(line);
      covered |= g.line_point_set(line);
      allowed &= g.skew_set(line);
      self(self);
      allowed = std::move(saved);
      covered.subtract(g.line_point_set(line));
      cur.pop_back();
    });
  };
  rec(rec);
  std::sort(out.begin(), out.end());
  return out;
}

struct SpreadStats {
  std::size_t total = 0;
  std::size_t regular = 0;
  std::size_t per_line = 0;  // regular spreads through each line
  bool uniform = false;      // every line lies in the same number of regular spreads
};

inline SpreadStats spread_stats(const Geometry& g) {
  SpreadStats st;
  std::vector<std::size_t> through(g.num_lines(), 0);
  for (const Spread& s : enumerate_spreads(g)) {
    ++st.total;
    if (!is_regular(g, s)) continue;
    ++st.regular;
    for (LineId l : s) ++through[l.index()];
  }
  st.per_line = through.empty() ? 0 : through.front();
  st.uniform = std::all_of(through.begin(), through.end(), [&](std::size_t r) { return r == st.per_line; });
  return st;
}

}  // namespace kneser
