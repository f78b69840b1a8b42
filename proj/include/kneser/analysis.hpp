#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kneser/bitset.hpp"
#include "kneser/chamber_graph.hpp"
#include "kneser/clique.hpp"
#include "kneser/error.hpp"
#include "kneser/geometry.hpp"
#include "kneser/spreads.hpp"

namespace kneser {

/// A set of chambers of one chamber graph, stored as a bitset over chamber ids.
class ChamberSet {
 public:
  explicit ChamberSet(const ChamberGraph& cg) : cg_(&cg), bits_(cg.size()) {}
  ChamberSet(const ChamberGraph& cg, Bitset bits) : cg_(&cg), bits_(std::move(bits)) {
    if (bits_.size() != cg.size()) throw Error(ErrorCode::DegenerateInput, "bitset size does not match the chamber count");
  }
  template <typename Ids>
  static ChamberSet from_ids(const ChamberGraph& cg, const Ids& ids) {
    ChamberSet s(cg);
    for (auto id : ids) s.insert(ChamberId(static_cast<std::size_t>(id)));
    return s;
  }

  const ChamberGraph& graph() const noexcept { return *cg_; }
  const Bitset& bits() const noexcept { return bits_; }

  void insert(ChamberId c) {
    if (c.value < 0 || c.index() >= bits_.size()) throw Error(ErrorCode::DegenerateInput, "chamber id out of range");
    bits_.set(c.index());
  }
  void erase(ChamberId c) { bits_.reset(c.index()); }
  bool contains(ChamberId c) const { return bits_.test(c.index()); }
  std::size_t size() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }

  std::vector<ChamberId> ids() const {
    std::vector<ChamberId> out;
    bits_.for_each([&](std::size_t i) { out.push_back(ChamberId(i)); });
    return out;
  }

  friend bool operator==(const ChamberSet& a, const ChamberSet& b) { return a.bits_ == b.bits_; }

 private:
  const ChamberGraph* cg_;
  Bitset bits_;
};

/// Chambers opposite to c, from the adjacency when built and otherwise
/// directly: on a line m skew to c's line the opposite chambers are those
/// whose point is off c's plane and whose plane misses c's point.
inline Bitset opposite_chambers(const ChamberGraph& cg, ChamberId c) {
  if (cg.has_adjacency()) return cg.neighbors(c);
  const Geometry& g = cg.geometry();
  const Chamber& a = cg.chamber(c);
  const std::size_t per = cg.chambers_per_line();
  Bitset out(cg.size());
  g.skew_set(a.line).for_each([&](std::size_t m) {
    const std::size_t base = m * per;
    for (std::size_t k = 0; k < per; ++k) {
      const Chamber& b = cg.chambers()[base + k];
      if (!g.on_plane(a.point, b.plane) && !g.on_plane(b.point, a.plane)) out.set(base + k);
    }
  });
  return out;
}

/// Union of opposite_chambers over the members of s.
inline Bitset blocked_by(const ChamberSet& s) {
  Bitset blocked(s.graph().size());
  s.bits().for_each([&](std::size_t i) { blocked |= opposite_chambers(s.graph(), ChamberId(i)); });
  return blocked;
}

/// Some pair of opposite members, if any.
inline std::optional<std::pair<ChamberId, ChamberId>> find_opposite_pair(const ChamberSet& s) {
  const ChamberGraph& cg = s.graph();
  std::vector<ChamberId> ids = s.ids();
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (cg.opposite(ids[i], ids[j])) return std::make_pair(ids[i], ids[j]);
  return std::nullopt;
}

inline bool is_independent(const ChamberSet& s) { return !find_opposite_pair(s).has_value(); }

/// For an independent set: a chamber outside s that is opposite to no
/// member (a maximality counterexample), if any.
inline std::optional<ChamberId> find_extension(const ChamberSet& s) {
  Bitset free = blocked_by(s) | s.bits();
  std::size_t c = free.complement().first();
  if (c < s.graph().size()) return ChamberId(c);
  return std::nullopt;
}

inline bool is_maximal(const ChamberSet& s) { return is_independent(s) && !find_extension(s).has_value(); }

/// Extends s to a maximal independent set by scanning chambers in ascending
/// id and inserting each one opposite to no current member.
inline ChamberSet maximal_closure(const ChamberSet& s) {
  if (auto bad = find_opposite_pair(s))
    throw Error(ErrorCode::NotIndependent, "chambers " + std::to_string(bad->first.value) + " and " +
                                               std::to_string(bad->second.value) + " are opposite");
  const ChamberGraph& cg = s.graph();
  ChamberSet out = s;
  Bitset blocked = blocked_by(s);
  for (std::size_t c = 0; c < cg.size(); ++c) {
    if (out.contains(ChamberId(c)) || blocked.test(c)) continue;
    out.insert(ChamberId(c));
    blocked |= opposite_chambers(cg, ChamberId(c));
  }
  return out;
}

inline ChamberSet dualize(const ChamberSet& s) {
  ChamberSet out(s.graph());
  s.bits().for_each([&](std::size_t i) { out.insert(s.graph().dual(ChamberId(i))); });
  return out;
}

// ---------------------------------------------------------------------------
// Weights

inline std::size_t line_weight(const ChamberSet& s, LineId l) {
  const ChamberGraph& cg = s.graph();
  const std::size_t base = cg.first_on_line(l).index();
  std::size_t w = 0;
  for (std::size_t k = 0; k < cg.chambers_per_line(); ++k) w += s.bits().test(base + k) ? 1 : 0;
  return w;
}

/// Number of members containing the incident line-plane pair (l, plane).
inline std::size_t flag_weight(const ChamberSet& s, LineId l, PlaneId plane) {
  const ChamberGraph& cg = s.graph();
  const Geometry& g = cg.geometry();
  if (!g.in_plane(l, plane)) throw Error(ErrorCode::NonIncidentPair, "line is not in the plane");
  std::size_t w = 0;
  for (PointId p : g.points_on_line(l)) w += s.contains(cg.id_of({p, l, plane})) ? 1 : 0;
  return w;
}

/// Number of members containing the incident point-line pair (p, l).
inline std::size_t flag_weight(const ChamberSet& s, PointId p, LineId l) {
  const ChamberGraph& cg = s.graph();
  const Geometry& g = cg.geometry();
  if (!g.on_line(p, l)) throw Error(ErrorCode::NonIncidentPair, "point is not on the line");
  std::size_t w = 0;
  for (PlaneId t : g.planes_on_line(l)) w += s.contains(cg.id_of({p, l, t})) ? 1 : 0;
  return w;
}

/// Counts of lines of weight (q+1)^2, 2q+1, q+1 and 1.
struct WeightDistribution {
  std::size_t full = 0;
  std::size_t two_q_plus_one = 0;
  std::size_t q_plus_one = 0;
  std::size_t one = 0;
  friend bool operator==(const WeightDistribution&, const WeightDistribution&) = default;
};

struct WeightReport {
  int q = 0;
  std::size_t set_size = 0;
  std::vector<std::size_t> line_weights;
  std::map<std::size_t, std::size_t> spectrum;  // weight -> number of lines
  WeightDistribution distribution;
  std::size_t weight_two_lines = 0;
  // plane_pair_weights[l][k]: weight of (l, k-th plane on l); point_pair_weights likewise.
  std::vector<std::vector<std::size_t>> plane_pair_weights;
  std::vector<std::vector<std::size_t>> point_pair_weights;

  /// a(q+1)^2 + b(2q+1) + c(q+1) + 2*(#weight 2) + d.
  std::size_t distribution_total() const {
    const std::size_t qq = static_cast<std::size_t>(q);
    return distribution.full * (qq + 1) * (qq + 1) + distribution.two_q_plus_one * (2 * qq + 1) +
           distribution.q_plus_one * (qq + 1) + 2 * weight_two_lines + distribution.one;
  }
};

inline WeightReport weight_report(const ChamberSet& s) {
  const ChamberGraph& cg = s.graph();
  const Geometry& g = cg.geometry();
  const std::size_t q = static_cast<std::size_t>(g.q());
  const std::size_t q1 = q + 1;
  WeightReport r;
  r.q = g.q();
  r.set_size = s.size();
  r.line_weights.assign(g.num_lines(), 0);
  r.plane_pair_weights.assign(g.num_lines(), std::vector<std::size_t>(q1, 0));
  r.point_pair_weights.assign(g.num_lines(), std::vector<std::size_t>(q1, 0));
  s.bits().for_each([&](std::size_t c) {
    const std::size_t l = c / cg.chambers_per_line();
    const std::size_t off = c % cg.chambers_per_line();
    ++r.line_weights[l];
    ++r.point_pair_weights[l][off / q1];
    ++r.plane_pair_weights[l][off % q1];
  });
  for (std::size_t l = 0; l < g.num_lines(); ++l) {
    const std::size_t w = r.line_weights[l];
    ++r.spectrum[w];
    if (w == q1 * q1) ++r.distribution.full;
    else if (w == 2 * q + 1) ++r.distribution.two_q_plus_one;
    else if (w == q1) ++r.distribution.q_plus_one;
    else if (w == 1) ++r.distribution.one;
    else if (w == 2) ++r.weight_two_lines;
  }
  return r;
}

struct SpecialLines {
  std::vector<LineId> pi_lines;  // carry a line-plane pair of weight q+1
  std::vector<LineId> p_lines;   // carry a point-line pair of weight q+1
};

inline SpecialLines classify_special_lines(const ChamberSet& s, const WeightReport& w) {
  const std::size_t q1 = static_cast<std::size_t>(w.q + 1);
  SpecialLines out;
  for (std::size_t l = 0; l < w.line_weights.size(); ++l) {
    if (w.line_weights[l] == q1 * q1) continue;
    auto has = [&](const std::vector<std::size_t>& v) { return std::find(v.begin(), v.end(), q1) != v.end(); };
    if (has(w.plane_pair_weights[l])) out.pi_lines.push_back(LineId(l));
    if (has(w.point_pair_weights[l])) out.p_lines.push_back(LineId(l));
  }
  (void)s;
  return out;
}

inline SpecialLines classify_special_lines(const ChamberSet& s) {
  if (!is_maximal(s)) throw Error(ErrorCode::NotMaximal, "special lines are defined for maximal independent sets");
  return classify_special_lines(s, weight_report(s));
}

// ---------------------------------------------------------------------------
// Structural audit

struct AuditCheck {
  std::string name;
  bool passed = true;
  std::string detail;        // set on failure
  std::vector<int> witness;  // ids named in detail
};

enum class Trichotomy { NotApplicable = 0, Case1 = 1, Case2 = 2, Case3 = 3, Inconsistent = -1 };

inline std::string to_string(Trichotomy t) {
  switch (t) {
    case Trichotomy::NotApplicable: return "not-applicable";
    case Trichotomy::Case1: return "1";
    case Trichotomy::Case2: return "2";
    case Trichotomy::Case3: return "3";
    case Trichotomy::Inconsistent: return "inconsistent";
  }
  return "?";
}

struct AuditReport {
  bool maximal = false;
  std::optional<ChamberId> maximality_witness;
  std::optional<std::pair<ChamberId, ChamberId>> independence_witness;
  std::vector<AuditCheck> checks;
  SpecialLines special;
  Trichotomy pi_trichotomy = Trichotomy::NotApplicable;
  Trichotomy p_trichotomy = Trichotomy::NotApplicable;

  bool passed() const {
    if (!maximal) return false;
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
  }
  const AuditCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

class Auditor {
 public:
  explicit Auditor(const ChamberSet& s)
      : s_(s), cg_(s.graph()), g_(cg_.geometry()), q_(static_cast<std::size_t>(g_.q())), w_(weight_report(s)) {
    for (auto id : s.ids()) members_.push_back(cg_.chamber(id));
    m_lines_ = Bitset(g_.num_lines());
    for (const auto& c : members_) m_lines_.set(c.line.index());
  }

  const WeightReport& weights() const { return w_; }

  std::size_t weight(LineId l) const { return w_.line_weights[l.index()]; }
  std::size_t plane_pair(LineId l, PlaneId t) const {
    const auto& pls = g_.planes_on_line(l);
    auto k = static_cast<std::size_t>(std::lower_bound(pls.begin(), pls.end(), t) - pls.begin());
    return w_.plane_pair_weights[l.index()][k];
  }
  std::size_t point_pair(PointId p, LineId l) const {
    const auto& pts = g_.points_on_line(l);
    auto k = static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), p) - pts.begin());
    return w_.point_pair_weights[l.index()][k];
  }
  std::size_t full() const { return (q_ + 1) * (q_ + 1); }

  AuditCheck check(const std::string& name) const { return AuditCheck{name, true, {}, {}}; }
  static void fail(AuditCheck& c, std::string detail, std::vector<int> witness) {
    if (!c.passed) return;  // keep the first witness
    c.passed = false;
    c.detail = std::move(detail);
    c.witness = std::move(witness);
  }

  std::vector<LineId> lines_with_weight(std::size_t w) const {
    std::vector<LineId> out;
    for (std::size_t l = 0; l < g_.num_lines(); ++l)
      if (w_.line_weights[l] == w) out.push_back(LineId(l));
    return out;
  }

  AuditCheck flag_weights() const {
    auto c = check("flag_weights");
    for (std::size_t l = 0; l < g_.num_lines(); ++l)
      for (std::size_t k = 0; k <= q_; ++k) {
        std::size_t a = w_.plane_pair_weights[l][k];
        std::size_t b = w_.point_pair_weights[l][k];
        if (a > 1 && a != q_ + 1)
          fail(c, "line-plane pair weight " + std::to_string(a), {static_cast<int>(l), g_.planes_on_line(LineId(l))[k].value});
        if (b > 1 && b != q_ + 1)
          fail(c, "point-line pair weight " + std::to_string(b), {g_.points_on_line(LineId(l))[k].value, static_cast<int>(l)});
      }
    return c;
  }

  /// Pairs of weight q+1 constrain every member: (l, plane) forces h meets l
  /// or Q in plane; (P, l) forces h meets l or P in tau.
  AuditCheck flag_weight_consequence() const {
    auto c = check("flag_weight_consequence");
    for (std::size_t l = 0; l < g_.num_lines(); ++l)
      for (std::size_t k = 0; k <= q_; ++k) {
        const LineId line(l);
        if (w_.plane_pair_weights[l][k] == q_ + 1) {
          PlaneId pl = g_.planes_on_line(line)[k];
          for (const auto& m : members_)
            if (g_.skew(m.line, line) && !g_.on_plane(m.point, pl))
              fail(c, "member violates line-plane pair of weight q+1", {static_cast<int>(l), pl.value, cg_.id_of(m).value});
        }
        if (w_.point_pair_weights[l][k] == q_ + 1) {
          PointId pt = g_.points_on_line(line)[k];
          for (const auto& m : members_)
            if (g_.skew(m.line, line) && !g_.on_plane(pt, m.plane))
              fail(c, "member violates point-line pair of weight q+1", {pt.value, static_cast<int>(l), cg_.id_of(m).value});
        }
      }
    return c;
  }

  AuditCheck spectrum() const {
    auto c = check("line_weight_spectrum");
    for (std::size_t l = 0; l < g_.num_lines(); ++l) {
      std::size_t w = w_.line_weights[l];
      if (!(w == 0 || w == 1 || w == 2 || w == q_ + 1 || w == 2 * q_ + 1 || w == full()))
        fail(c, "line weight " + std::to_string(w), {static_cast<int>(l)});
    }
    return c;
  }

  AuditCheck full_weight_iff_meets_all() const {
    auto c = check("full_weight_iff_meets_all");
    for (std::size_t l = 0; l < g_.num_lines(); ++l) {
      bool meets_all = !m_lines_.intersects(g_.skew_set(LineId(l)));
      bool is_full = w_.line_weights[l] == full();
      if (meets_all != is_full)
        fail(c, is_full ? "full-weight line misses a member line" : "line meets all member lines but is not full",
             {static_cast<int>(l)});
    }
    return c;
  }

  AuditCheck weight_2q1_structure() const {
    auto c = check("weight_2q1_structure");
    for (LineId l : lines_with_weight(2 * q_ + 1)) {
      // the unique point pair and plane pair of weight q+1
      std::optional<PointId> pt;
      std::optional<PlaneId> pl;
      for (std::size_t k = 0; k <= q_; ++k) {
        if (w_.point_pair_weights[l.index()][k] == q_ + 1) pt = g_.points_on_line(l)[k];
        if (w_.plane_pair_weights[l.index()][k] == q_ + 1) pl = g_.planes_on_line(l)[k];
      }
      if (!pt || !pl) {
        fail(c, "weight 2q+1 line without a point pair and a plane pair of weight q+1", {l.value});
        continue;
      }
      const std::size_t base = cg_.first_on_line(l).index();
      for (std::size_t k = 0; k < cg_.chambers_per_line(); ++k) {
        const Chamber& ch = cg_.chambers()[base + k];
        bool expected = ch.point == *pt || ch.plane == *pl;
        if (s_.bits().test(base + k) != expected) fail(c, "chambers of the line are not those on P or pi", {l.value, static_cast<int>(base + k)});
      }
      for (const auto& m : members_) {
        if (!g_.skew(m.line, l)) continue;
        if (!g_.on_plane(m.point, *pl) || !g_.on_plane(*pt, m.plane))
          fail(c, "member on a skew line violates Q in pi and P in tau", {l.value, cg_.id_of(m).value});
        if (weight(m.line) != 1) fail(c, "member line skew to a 2q+1 line has weight != 1", {l.value, m.line.value});
      }
    }
    return c;
  }

  AuditCheck weight_q1_structure() const {
    auto c = check("weight_q1_structure");
    for (LineId l : lines_with_weight(q_ + 1)) {
      std::optional<PlaneId> pl;
      std::optional<PointId> pt;
      for (std::size_t k = 0; k <= q_; ++k) {
        if (w_.plane_pair_weights[l.index()][k] == q_ + 1) pl = g_.planes_on_line(l)[k];
        if (w_.point_pair_weights[l.index()][k] == q_ + 1) pt = g_.points_on_line(l)[k];
      }
      if (pl.has_value() == pt.has_value()) {
        fail(c, "weight q+1 line is not exactly one of plane type and point type", {l.value});
        continue;
      }
      for (const auto& m : members_) {
        if (!g_.skew(m.line, l)) continue;
        if (pl && !g_.on_plane(m.point, *pl)) fail(c, "plane-type line: member point off the plane", {l.value, cg_.id_of(m).value});
        if (pt && !g_.on_plane(*pt, m.plane)) fail(c, "point-type line: member plane misses the point", {l.value, cg_.id_of(m).value});
      }
    }
    return c;
  }

  AuditCheck weight_2_structure() const {
    auto c = check("weight_2_structure");
    for (LineId l : lines_with_weight(2)) {
      std::vector<Chamber> on;
      for (const auto& m : members_)
        if (m.line == l) on.push_back(m);
      const Chamber& a = on[0];
      const Chamber& b = on[1];
      if (a.point == b.point || a.plane == b.plane) {
        fail(c, "the two chambers of a weight-2 line share a point or plane", {l.value});
        continue;
      }
      for (const auto& m : members_) {
        if (!g_.skew(m.line, l)) continue;
        bool first = g_.on_plane(a.point, m.plane) && g_.on_plane(m.point, b.plane);
        bool second = g_.on_plane(b.point, m.plane) && g_.on_plane(m.point, a.plane);
        if (first == second) fail(c, "member on a skew line fails the either-or condition", {l.value, cg_.id_of(m).value});
      }
    }
    return c;
  }

  AuditCheck full_weight_count() const {
    auto c = check("full_weight_line_count");
    auto full_lines = lines_with_weight(full());
    const std::size_t n = full_lines.size();
    auto ints = [](const std::vector<LineId>& v) {
      std::vector<int> o;
      for (auto l : v) o.push_back(l.value);
      return o;
    };
    if (n <= 1) return c;
    Bitset pts = Bitset::full(g_.num_points());
    Bitset pls = Bitset::full(g_.num_planes());
    for (LineId l : full_lines) {
      pts &= g_.line_point_set(l);
      pls &= g_.line_plane_set(l);
    }
    if (n == q_ + 1) {
      if (pts.none() || pls.none()) fail(c, "q+1 full-weight lines do not form a pencil", ints(full_lines));
    } else if (n == q_ * q_ + q_ + 1) {
      if (pts.none() && pls.none()) fail(c, "q^2+q+1 full-weight lines share no point or plane", ints(full_lines));
    } else {
      fail(c, "number of full-weight lines is " + std::to_string(n), ints(full_lines));
    }
    return c;
  }

  AuditCheck skew_bound() const {
    auto c = check("skew_bound");
    const std::size_t theta = q_ * q_ + q_ + 1;
    auto test = [&](const Bitset& lines, const char* what) {
      std::size_t n = max_skew_subset(g_, lines);
      if (lines.count() > n * theta)
        fail(c, std::string(what) + ": " + std::to_string(lines.count()) + " lines but only " + std::to_string(n) + " mutually skew", {});
    };
    test(m_lines_, "member lines");
    Bitset two(g_.num_lines());
    for (LineId l : lines_with_weight(2)) two.set(l.index());
    test(two, "weight-2 lines");
    return c;
  }

  void points_in_plane(AuditCheck& bounds, AuditCheck& corollary) const {
    const std::size_t q = q_;
    for (std::size_t s = 0; s < g_.num_planes(); ++s) {
      const PlaneId pi(s);
      std::vector<Chamber> x;
      for (const auto& m : members_) {
        std::size_t w = weight(m.line);
        if ((w == 1 || w == 2) && !g_.in_plane(m.line, pi) && g_.on_plane(m.point, pi)) x.push_back(m);
      }
      if (x.empty()) continue;
      std::vector<int> distinct;
      for (const auto& m : x) distinct.push_back(m.line.value);
      std::sort(distinct.begin(), distinct.end());
      if (std::adjacent_find(distinct.begin(), distinct.end()) != distinct.end())
        fail(bounds, "two chambers of X share a line", {static_cast<int>(s)});

      Bitset xpts(g_.num_points());
      for (const auto& m : x) xpts.set(m.point.index());
      // lines of the plane through every X-point
      std::vector<LineId> carriers;
      for (LineId l : g_.lines_in_plane(pi))
        if (xpts.is_subset_of(g_.line_point_set(l))) carriers.push_back(l);
      const bool collinear = !carriers.empty();
      const std::size_t bound = collinear ? (q + 1) * q * q : 3 * q * q + 8 * q;
      if (x.size() > bound)
        fail(bounds, std::string(collinear ? "collinear" : "non-collinear") + " X of size " + std::to_string(x.size()),
             {static_cast<int>(s)});
      for (LineId l0 : carriers) {
        std::size_t off = 0;
        for (const auto& m : x)
          if (!g_.in_plane(l0, m.plane)) ++off;
        if (off > q * q + q) fail(corollary, "too many X chambers with planes off the carrier line", {static_cast<int>(s), l0.value});
      }
    }
  }

  /// The lines of `xs` mutually meet, have a common point or plane and number at most q^2+q+1.
  AuditCheck mutually_meet(const std::string& name, const std::vector<LineId>& xs) const {
    auto c = check(name);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j)
        if (g_.skew(xs[i], xs[j])) fail(c, "two skew lines", {xs[i].value, xs[j].value});
    if (c.passed && xs.size() >= 2) {
      Bitset pts = Bitset::full(g_.num_points());
      Bitset pls = Bitset::full(g_.num_planes());
      for (LineId l : xs) {
        pts &= g_.line_point_set(l);
        pls &= g_.line_plane_set(l);
      }
      if (pts.none() && pls.none()) fail(c, "no common point or plane", {});
    }
    if (xs.size() > q_ * q_ + q_ + 1) fail(c, "too many lines: " + std::to_string(xs.size()), {});
    return c;
  }

  AuditCheck weight_2_meets_heavier() const {
    auto c = check("weight_2_meets_heavier");
    for (LineId h : lines_with_weight(2))
      m_lines_.for_each([&](std::size_t l) {
        if (weight(LineId(l)) > 2 && g_.skew(h, LineId(l))) fail(c, "weight-2 line skew to a heavier member line", {h.value, static_cast<int>(l)});
      });
    return c;
  }

  AuditCheck weight_2_count() const {
    auto c = check("weight_2_count");
    std::size_t n = lines_with_weight(2).size();
    if (n > 2 * (q_ * q_ + q_ + 1)) fail(c, std::to_string(n) + " lines of weight 2", {});
    return c;
  }

  AuditCheck two_skew_weight_2() const {
    auto c = check("two_skew_weight_2");
    auto two = lines_with_weight(2);
    for (std::size_t i = 0; i < two.size(); ++i)
      for (std::size_t j = i + 1; j < two.size(); ++j) {
        if (!g_.skew(two[i], two[j])) continue;
        Bitset covered = g_.meet_set(two[i]) | g_.meet_set(two[j]);
        Bitset bad = m_lines_;
        bad.subtract(covered);
        if (bad.any()) fail(c, "member line misses both skew weight-2 lines", {two[i].value, two[j].value, static_cast<int>(bad.first())});
      }
    return c;
  }

  /// Trichotomy for the pi-lines of this set (applied to the dual set it
  /// covers the P-lines).
  std::pair<Trichotomy, AuditCheck> trichotomy(const std::string& name, const std::vector<LineId>& pi_lines) const {
    auto c = check(name);
    const std::size_t q = q_;
    if (pi_lines.size() < 3 * q + 2) return {Trichotomy::NotApplicable, c};

    std::vector<PlaneId> taus;
    for (LineId h : pi_lines)
      for (std::size_t k = 0; k <= q; ++k)
        if (w_.plane_pair_weights[h.index()][k] == q + 1) taus.push_back(g_.planes_on_line(h)[k]);

    Bitset common_pts = Bitset::full(g_.num_points());
    Bitset common_pls = Bitset::full(g_.num_planes());
    for (LineId h : pi_lines) {
      common_pts &= g_.line_point_set(h);
      common_pls &= g_.line_plane_set(h);
    }
    Bitset tau_meet = Bitset::full(g_.num_points());  // point set of the intersection of all tau_i
    for (PlaneId t : taus) tau_meet &= g_.plane_point_set(t);

    // Line whose point set is exactly `pts`, if any.
    auto as_line = [&](const Bitset& pts) -> std::optional<LineId> {
      if (pts.count() != q + 1) return std::nullopt;
      std::size_t a = pts.first();
      std::size_t b = pts.next(a + 1);
      LineId l = g_.join_points(PointId(a), PointId(b));
      if (g_.line_point_set(l) == pts) return l;
      return std::nullopt;
    };

    auto case1 = [&]() -> bool {
      if (common_pts.none()) return false;
      PointId Q(common_pts.first());
      auto l = as_line(tau_meet);
      if (!l || !g_.on_line(Q, *l) || weight(*l) != full()) return false;
      for (LineId h : g_.lines_through_point(Q))
        if (h != *l && plane_pair(h, g_.span_lines(h, *l)) != q + 1) return false;
      for (const auto& m : members_)
        if (!g_.on_line(Q, m.line) && !g_.on_line(m.point, *l)) return false;
      return true;
    };
    auto case2 = [&]() -> bool {
      if (common_pls.none()) return false;
      PlaneId pi(common_pls.first());
      for (PlaneId t : taus)
        if (t != pi) return false;
      for (LineId h : g_.lines_in_plane(pi))
        if (plane_pair(h, pi) != q + 1) return false;
      for (const auto& m : members_)
        if (!g_.on_plane(m.point, pi)) return false;
      return true;
    };
    auto case3 = [&]() -> bool {
      if (common_pls.none()) return false;
      PlaneId pi(common_pls.first());
      if (tau_meet.count() != 1) return false;
      PointId Q(tau_meet.first());
      if (g_.on_plane(Q, pi)) return false;
      for (LineId h : g_.lines_in_plane(pi))
        if (plane_pair(h, g_.span_line_point(h, Q)) != q + 1) return false;
      for (const auto& m : members_)
        if (!g_.in_plane(m.line, pi) && m.point != Q) return false;
      return true;
    };

    const bool c1 = case1();
    const bool c2 = case2();
    const bool c3 = case3();
    const int holding = int(c1) + int(c2) + int(c3);
    if (holding != 1) {
      fail(c, "expected exactly one case, got " + std::to_string(holding), {});
      return {Trichotomy::Inconsistent, c};
    }
    return {c1 ? Trichotomy::Case1 : c2 ? Trichotomy::Case2 : Trichotomy::Case3, c};
  }

 private:
  const ChamberSet& s_;
  const ChamberGraph& cg_;
  const Geometry& g_;
  std::size_t q_;
  WeightReport w_;
  std::vector<Chamber> members_;
  Bitset m_lines_;
};

}  // namespace detail

/// Runs every structural check that holds for maximal independent sets.
/// Failures are report entries carrying witness ids, never exceptions.
inline AuditReport audit_structure(const ChamberSet& s) {
  AuditReport r;
  r.independence_witness = find_opposite_pair(s);
  if (r.independence_witness) return r;
  r.maximality_witness = find_extension(s);
  r.maximal = !r.maximality_witness.has_value();
  if (!r.maximal) return r;

  detail::Auditor a(s);
  r.special = classify_special_lines(s, a.weights());
  r.checks.push_back(a.flag_weights());
  r.checks.push_back(a.flag_weight_consequence());
  r.checks.push_back(a.spectrum());
  r.checks.push_back(a.full_weight_iff_meets_all());
  r.checks.push_back(a.weight_2q1_structure());
  r.checks.push_back(a.weight_q1_structure());
  r.checks.push_back(a.weight_2_structure());
  r.checks.push_back(a.full_weight_count());
  r.checks.push_back(a.skew_bound());
  AuditCheck bounds{"points_in_plane", true, {}, {}};
  AuditCheck corollary{"points_in_plane_carrier", true, {}, {}};
  a.points_in_plane(bounds, corollary);
  r.checks.push_back(bounds);
  r.checks.push_back(corollary);

  auto with_full = [&](std::vector<LineId> xs) {
    for (LineId l : a.lines_with_weight(a.full())) xs.push_back(l);
    return xs;
  };
  r.checks.push_back(a.mutually_meet("pi_lines_meet", with_full(r.special.pi_lines)));
  r.checks.push_back(a.mutually_meet("p_lines_meet", with_full(r.special.p_lines)));
  r.checks.push_back(a.weight_2_meets_heavier());
  r.checks.push_back(a.weight_2_count());
  r.checks.push_back(a.two_skew_weight_2());

  auto [pi_case, pi_check] = a.trichotomy("pi_trichotomy", r.special.pi_lines);
  r.pi_trichotomy = pi_case;
  r.checks.push_back(pi_check);

  // P-lines of s are the pi-lines of the dual set.
  ChamberSet d = dualize(s);
  detail::Auditor ad(d);
  auto dual_special = classify_special_lines(d, ad.weights());
  auto [p_case, p_check] = ad.trichotomy("p_trichotomy", dual_special.pi_lines);
  r.p_trichotomy = p_case;
  r.checks.push_back(p_check);
  return r;
}

}  // namespace kneser
