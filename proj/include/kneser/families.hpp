#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "kneser/analysis.hpp"
#include "kneser/chamber_graph.hpp"
#include "kneser/error.hpp"
#include "kneser/geometry.hpp"

namespace kneser {

enum class FamilyKind { Cx, M1, M2, M3, M4, M5, M6, M7, Third };

inline constexpr std::array<FamilyKind, 9> kAllFamilies{FamilyKind::Cx, FamilyKind::M1, FamilyKind::M2,
                                                        FamilyKind::M3, FamilyKind::M4, FamilyKind::M5,
                                                        FamilyKind::M6, FamilyKind::M7, FamilyKind::Third};

inline std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Cx: return "Cx";
    case FamilyKind::M1: return "M1";
    case FamilyKind::M2: return "M2";
    case FamilyKind::M3: return "M3";
    case FamilyKind::M4: return "M4";
    case FamilyKind::M5: return "M5";
    case FamilyKind::M6: return "M6";
    case FamilyKind::M7: return "M7";
    case FamilyKind::Third: return "Third";
  }
  return "?";
}

inline std::optional<FamilyKind> parse_family_kind(std::string_view s) {
  for (FamilyKind k : kAllFamilies)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Kinds whose construction is mapped onto itself by the duality.
inline bool is_selfdual(FamilyKind k) {
  return k == FamilyKind::M2 || k == FamilyKind::M3 || k == FamilyKind::M5 || k == FamilyKind::M6;
}

/// Construction parameters. `point`, `line`, `plane` are Q, l, pi of the base
/// chamber; `aux_point` is Q'. For Cx exactly one of point/plane is the
/// centre x. Unset entries are filled by resolve_spec.
struct FamilySpec {
  FamilySpec() = default;
  FamilySpec(FamilyKind k) : kind(k) {}

  FamilyKind kind = FamilyKind::Cx;
  std::optional<PointId> point;
  std::optional<LineId> line;
  std::optional<PlaneId> plane;
  std::optional<PointId> aux_point;
  bool dualized = false;
};

struct FamilyVerdict {
  FamilyKind kind = FamilyKind::Cx;
  bool dualized = false;
  std::size_t size = 0;
  std::size_t expected_size = 0;
  bool maximal = false;
  WeightDistribution distribution;
  WeightDistribution expected_distribution;
  bool weight_two_free = false;
  bool identity_holds = false;  // weighted line count adds up to the size
  std::optional<bool> selfdual;

  bool passed() const {
    return size == expected_size && maximal && distribution == expected_distribution && weight_two_free &&
           identity_holds && selfdual.value_or(true);
  }
};

inline std::size_t expected_family_size(FamilyKind k, int qi) {
  const std::size_t q = static_cast<std::size_t>(qi);
  switch (k) {
    case FamilyKind::Cx: return q * q * q * q + 3 * q * q * q + 4 * q * q + 3 * q + 1;
    case FamilyKind::Third: return 3 * q * q * q + 4 * q * q + 3 * q + 2;
    default: return 3 * q * q * q + 5 * q * q + 3 * q + 1;
  }
}

inline WeightDistribution expected_distribution(FamilyKind k, int qi) {
  const std::size_t q = static_cast<std::size_t>(qi);
  switch (k) {
    case FamilyKind::Cx: return {q * q + q + 1, 0, 0, 0};
    case FamilyKind::M1: return {q + 1, q * q, 0, q * q};
    case FamilyKind::M2:
    case FamilyKind::M3: return {q + 1, 0, 2 * q * q, 0};
    case FamilyKind::M4: return {1, q * q + q, 0, q * q * q + q * q};
    case FamilyKind::M5:
    case FamilyKind::M6: return {1, q, 2 * q * q, q * q * q};
    case FamilyKind::M7: return {1, 0, 2 * (q * q + q), (q - 1) * (q * q + q)};
    case FamilyKind::Third: return {q + 1, q * q, 0, 1};
  }
  return {};
}

namespace detail {

inline bool uses_line(FamilyKind k) { return k != FamilyKind::Cx && k != FamilyKind::M2; }
inline bool uses_plane(FamilyKind k) { return k != FamilyKind::Cx && k != FamilyKind::M4 && k != FamilyKind::M7; }

}  // namespace detail

/// Validates incidences and fills missing parameters from the least chamber
/// (in chamber-id order) consistent with the given ones; Q' becomes the least
/// admissible point.
inline FamilySpec resolve_spec(const ChamberGraph& cg, FamilySpec spec) {
  const Geometry& g = cg.geometry();
  auto invalid = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  auto check_range = [&] {
    if (spec.point && spec.point->index() >= g.num_points()) invalid("point id out of range");
    if (spec.aux_point && spec.aux_point->index() >= g.num_points()) invalid("Q' id out of range");
    if (spec.line && spec.line->index() >= g.num_lines()) invalid("line id out of range");
    if (spec.plane && spec.plane->index() >= g.num_planes()) invalid("plane id out of range");
  };
  check_range();

  if (spec.kind == FamilyKind::Cx) {
    if (spec.point && spec.plane) invalid("Cx takes a point or a plane, not both");
    if (spec.line || spec.aux_point) invalid("Cx takes no line and no Q'");
    if (!spec.point && !spec.plane) spec.point = PointId(0);
    return spec;
  }
  if (!detail::uses_line(spec.kind) && spec.line) invalid(std::string(to_string(spec.kind)) + " takes no line");
  if (!detail::uses_plane(spec.kind) && spec.plane) invalid(std::string(to_string(spec.kind)) + " takes no plane");
  const bool wants_aux = spec.kind == FamilyKind::M7 || spec.kind == FamilyKind::Third;
  if (!wants_aux && spec.aux_point) invalid(std::string(to_string(spec.kind)) + " takes no Q'");

  if (spec.point && spec.line && !g.on_line(*spec.point, *spec.line)) invalid("Q must lie on l");
  if (spec.line && spec.plane && !g.in_plane(*spec.line, *spec.plane)) invalid("l must lie in pi");
  if (spec.point && spec.plane && !g.on_plane(*spec.point, *spec.plane)) invalid("Q must lie in pi");

  std::optional<Chamber> base;
  for (const Chamber& c : cg.chambers()) {
    if (spec.point && c.point != *spec.point) continue;
    if (spec.line && c.line != *spec.line) continue;
    if (spec.plane && c.plane != *spec.plane) continue;
    base = c;
    break;
  }
  if (!base) invalid("no chamber matches the given parameters");
  spec.point = base->point;
  if (detail::uses_line(spec.kind)) spec.line = base->line;
  if (detail::uses_plane(spec.kind)) spec.plane = base->plane;

  if (spec.kind == FamilyKind::M7) {
    if (spec.aux_point) {
      if (!g.on_line(*spec.aux_point, *spec.line)) invalid("Q' must lie on l");
      if (*spec.aux_point == *spec.point) invalid("Q' must differ from Q");
    } else {
      for (PointId p : g.points_on_line(*spec.line))
        if (p != *spec.point) {
          spec.aux_point = p;
          break;
        }
    }
  }
  if (spec.kind == FamilyKind::Third) {
    if (spec.aux_point) {
      if (g.on_plane(*spec.aux_point, *spec.plane)) invalid("Q' must not lie in pi");
    } else {
      Bitset off = g.plane_point_set(*spec.plane).complement();
      spec.aux_point = PointId(off.first());
    }
  }
  return spec;
}

namespace detail {

/// Membership predicate of a (resolved, undualized) family.
inline std::function<bool(const Chamber&)> family_predicate(const Geometry& g, const FamilySpec& s) {
  const PointId Q = s.point.value_or(PointId());
  const LineId l = s.line.value_or(LineId());
  const PlaneId pi = s.plane.value_or(PlaneId());
  const PointId Q2 = s.aux_point.value_or(PointId());
  const Geometry* gp = &g;

  // <h, l> for a line h != l meeting l
  auto span_l = [gp, l](LineId h) { return gp->span_lines(h, l); };
  // h meets l at a single point, which is P
  auto meets_l_at = [gp, l](LineId h, PointId P) {
    auto x = gp->meet_lines(h, l);
    return x && *x == P;
  };

  switch (s.kind) {
    case FamilyKind::Cx:
      if (s.point) return [gp, Q](const Chamber& c) { return gp->on_line(Q, c.line); };
      return [gp, pi](const Chamber& c) { return gp->in_plane(c.line, pi); };

    case FamilyKind::M1:
      return [=](const Chamber& c) {
        const bool Qh = gp->on_line(Q, c.line);
        const bool hpi = gp->in_plane(c.line, pi);
        if (Qh && hpi) return true;
        if (Qh && !hpi && (c.plane == span_l(c.line) || c.point == Q)) return true;
        return !Qh && hpi && meets_l_at(c.line, c.point) && c.plane == pi;
      };

    case FamilyKind::M2:
      return [=](const Chamber& c) {
        const bool Qh = gp->on_line(Q, c.line);
        const bool hpi = gp->in_plane(c.line, pi);
        if (Qh && hpi) return true;
        if (!Qh && hpi && c.plane == pi) return true;
        return Qh && !hpi && c.point == Q;
      };

    case FamilyKind::M3:
      return [=](const Chamber& c) {
        const bool Qh = gp->on_line(Q, c.line);
        const bool hpi = gp->in_plane(c.line, pi);
        if (Qh && hpi) return true;
        if (Qh && !hpi && c.plane == span_l(c.line)) return true;
        return !Qh && hpi && meets_l_at(c.line, c.point);
      };

    case FamilyKind::M4:
      return [=](const Chamber& c) {
        if (c.line == l) return true;
        if (gp->on_line(Q, c.line) && (c.plane == span_l(c.line) || c.point == Q)) return true;
        return c.point != Q && meets_l_at(c.line, c.point) && c.plane == span_l(c.line);
      };

    case FamilyKind::M5:
      return [=](const Chamber& c) {
        if (c.line == l) return true;
        const bool hpi = gp->in_plane(c.line, pi);
        if (hpi && c.plane == pi) return true;
        if (gp->on_line(Q, c.line) && c.point == Q) return true;
        return !gp->on_line(Q, c.line) && !hpi && meets_l_at(c.line, c.point) && c.plane == span_l(c.line);
      };

    case FamilyKind::M6:
      return [=](const Chamber& c) {
        if (c.line == l) return true;
        const bool hpi = gp->in_plane(c.line, pi);
        if (hpi && meets_l_at(c.line, c.point)) return true;
        if (gp->on_line(Q, c.line) && c.plane == span_l(c.line)) return true;
        return !gp->on_line(Q, c.line) && !hpi && meets_l_at(c.line, c.point) && c.plane == span_l(c.line);
      };

    case FamilyKind::M7:
      return [=](const Chamber& c) {
        if (c.line == l) return true;
        const bool Qh = gp->on_line(Q, c.line);
        const bool Q2h = gp->on_line(Q2, c.line);
        if (Qh && c.plane == span_l(c.line)) return true;
        if (Q2h && c.point == Q2) return true;
        return !Qh && !Q2h && meets_l_at(c.line, c.point) && c.plane == span_l(c.line);
      };

    case FamilyKind::Third:
      return [=](const Chamber& c) {
        const bool Qh = gp->on_line(Q, c.line);
        const bool hpi = gp->in_plane(c.line, pi);
        if (Qh && hpi) return true;
        if (!Qh && hpi && (c.plane == gp->span_line_point(c.line, Q2) || meets_l_at(c.line, c.point))) return true;
        return Qh && !hpi && c.point == Q2 && c.plane == span_l(c.line);
      };
  }
  return [](const Chamber&) { return false; };
}

}  // namespace detail

/// The set of chambers satisfying at least one defining condition of the
/// kind; the dual image when spec.dualized.
inline ChamberSet build_family(const ChamberGraph& cg, const FamilySpec& spec_in) {
  const FamilySpec spec = resolve_spec(cg, spec_in);
  auto pred = detail::family_predicate(cg.geometry(), spec);
  ChamberSet s(cg);
  for (std::size_t i = 0; i < cg.size(); ++i)
    if (pred(cg.chambers()[i])) s.insert(ChamberId(i));
  return spec.dualized ? dualize(s) : s;
}

/// Parameters of the dual construction: Q -> pi*, l -> l*, pi -> Q*, and for
/// Cx the centre switches between point and plane.
inline FamilySpec dual_parameters(const Geometry& g, const FamilySpec& spec) {
  FamilySpec d = spec;
  d.point = spec.plane ? std::optional<PointId>(g.dual(*spec.plane)) : std::nullopt;
  d.plane = spec.point ? std::optional<PlaneId>(g.dual(*spec.point)) : std::nullopt;
  d.line = spec.line ? std::optional<LineId>(g.dual(*spec.line)) : std::nullopt;
  d.aux_point = std::nullopt;
  return d;
}

inline FamilyVerdict verify_family(const ChamberGraph& cg, const FamilySpec& spec_in) {
  const FamilySpec spec = resolve_spec(cg, spec_in);
  ChamberSet s = build_family(cg, spec);
  WeightReport w = weight_report(s);
  FamilyVerdict v;
  v.kind = spec.kind;
  v.dualized = spec.dualized;
  v.size = s.size();
  v.expected_size = expected_family_size(spec.kind, cg.q());
  v.maximal = is_maximal(s);
  v.distribution = w.distribution;
  v.expected_distribution = expected_distribution(spec.kind, cg.q());
  v.weight_two_free = w.weight_two_lines == 0;
  v.identity_holds = w.distribution_total() == v.size;
  if (is_selfdual(spec.kind)) {
    FamilySpec other = dual_parameters(cg.geometry(), spec);
    other.dualized = spec.dualized;
    v.selfdual = dualize(s) == build_family(cg, other);
  }
  return v;
}

/// Chambers whose point-plane pair (P, tau) satisfies P = Q, tau = pi, or
/// P on l inside tau, for the base chamber F = (Q, l, pi).
inline ChamberSet m5_from_point_plane_flags(const ChamberGraph& cg, ChamberId base) {
  const Geometry& g = cg.geometry();
  const Chamber& f = cg.chamber(base);
  ChamberSet s(cg);
  for (std::size_t i = 0; i < cg.size(); ++i) {
    const Chamber& c = cg.chambers()[i];
    if (c.point == f.point || c.plane == f.plane || (g.on_line(c.point, f.line) && g.in_plane(f.line, c.plane)))
      s.insert(ChamberId(i));
  }
  return s;
}

inline FamilySpec spec_from_chamber(FamilyKind kind, const Chamber& c) {
  FamilySpec s;
  s.kind = kind;
  if (kind == FamilyKind::Cx) {
    s.point = c.point;
    return s;
  }
  s.point = c.point;
  if (detail::uses_line(kind)) s.line = c.line;
  if (detail::uses_plane(kind)) s.plane = c.plane;
  return s;
}

}  // namespace kneser
