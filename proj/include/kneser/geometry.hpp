#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "kneser/bitset.hpp"
#include "kneser/error.hpp"
#include "kneser/galois.hpp"

namespace kneser {

/// Integer id tagged with the kind of object it indexes.
template <typename Tag>
struct StrongId {
  int value = -1;

  constexpr StrongId() = default;
  constexpr explicit StrongId(int v) : value(v) {}
  constexpr explicit StrongId(std::size_t v) : value(static_cast<int>(v)) {}

  constexpr std::size_t index() const noexcept { return static_cast<std::size_t>(value); }
  friend constexpr auto operator<=>(StrongId, StrongId) = default;
};

using PointId = StrongId<struct PointTag>;
using LineId = StrongId<struct LineTag>;
using PlaneId = StrongId<struct PlaneTag>;

using Vec4 = std::array<Elem, 4>;

struct Point {
  PointId id;
  Vec4 coords{};
};

/// The plane {x : coeffs . x = 0}.
struct Plane {
  PlaneId id;
  Vec4 coeffs{};
};

struct Line {
  LineId id;
  std::array<Vec4, 2> basis{};  // reduced row-echelon form
  std::array<Elem, 6> pluecker{};  // p01 p02 p03 p12 p13 p23, first nonzero = 1
};

/// Result of intersecting a line with a plane.
struct Contained {
  friend bool operator==(Contained, Contained) = default;
};
using LinePlaneMeet = std::variant<PointId, Contained>;

namespace detail {

/// Gaussian elimination to reduced row-echelon form; returns the rank and
/// leaves the nonzero rows first.
inline int rref(const Field& f, std::vector<Vec4>& rows) {
  int rank = 0;
  for (int col = 0; col < 4 && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    Elem s = f.inv(rows[rank][col]);
    for (auto& x : rows[rank]) x = f.mul(x, s);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Elem c = rows[r][col];
      for (int j = 0; j < 4; ++j) rows[r][j] = f.sub(rows[r][j], f.mul(c, rows[rank][j]));
    }
    ++rank;
  }
  return rank;
}

inline Vec4 normalize(const Field& f, Vec4 v) {
  for (Elem x : v)
    if (x != 0) {
      Elem s = f.inv(x);
      for (auto& y : v) y = f.mul(y, s);
      return v;
    }
  return v;
}

inline Elem dot(const Field& f, const Vec4& a, const Vec4& b) {
  Elem s = 0;
  for (int i = 0; i < 4; ++i) s = f.add(s, f.mul(a[i], b[i]));
  return s;
}

inline std::array<Elem, 6> pluecker(const Field& f, const Vec4& a, const Vec4& b) {
  std::array<Elem, 6> p{};
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) p[k++] = f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
  for (Elem x : p)
    if (x != 0) {
      Elem s = f.inv(x);
      for (auto& y : p) y = f.mul(y, s);
      break;
    }
  return p;
}

/// Null space basis of the row space of `rows` (assumed RREF).
inline std::vector<Vec4> null_space(const Field& f, const std::vector<Vec4>& rows, int rank) {
  std::array<int, 4> pivot_of_col{-1, -1, -1, -1};
  for (int r = 0; r < rank; ++r)
    for (int c = 0; c < 4; ++c)
      if (rows[r][c] != 0) {
        pivot_of_col[c] = r;
        break;
      }
  std::vector<Vec4> out;
  for (int free = 0; free < 4; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    Vec4 v{};
    v[free] = 1;
    for (int c = 0; c < 4; ++c)
      if (pivot_of_col[c] >= 0) v[c] = f.neg(rows[pivot_of_col[c]][free]);
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Canonical model of PG(3,q) with precomputed incidence and skewness.
///
/// Points and planes share one enumeration of normalized 4-vectors in
/// lexicographic order, so the standard duality maps point id i to plane id i.
/// Lines are ordered lexicographically on their flattened RREF basis.
class Geometry {
 public:
  explicit Geometry(int q) : field_(q) { build(); }

  const Field& field() const noexcept { return field_; }
  int q() const noexcept { return field_.order(); }

  std::size_t num_points() const noexcept { return points_.size(); }
  std::size_t num_lines() const noexcept { return lines_.size(); }
  std::size_t num_planes() const noexcept { return planes_.size(); }

  const Point& point(PointId p) const { return points_.at(p.index()); }
  const Line& line(LineId l) const { return lines_.at(l.index()); }
  const Plane& plane(PlaneId s) const { return planes_.at(s.index()); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<Line>& lines() const noexcept { return lines_; }
  const std::vector<Plane>& planes() const noexcept { return planes_; }

  // Sorted id lists.
  const std::vector<PointId>& points_on_line(LineId l) const { return points_on_line_.at(l.index()); }
  const std::vector<PlaneId>& planes_on_line(LineId l) const { return planes_on_line_.at(l.index()); }
  const std::vector<LineId>& lines_through_point(PointId p) const { return lines_through_point_.at(p.index()); }
  const std::vector<LineId>& lines_in_plane(PlaneId s) const { return lines_in_plane_.at(s.index()); }

  // Bitset views.
  const Bitset& line_point_set(LineId l) const { return line_points_[l.index()]; }
  const Bitset& line_plane_set(LineId l) const { return line_planes_[l.index()]; }
  const Bitset& point_line_set(PointId p) const { return point_lines_[p.index()]; }
  const Bitset& plane_line_set(PlaneId s) const { return plane_lines_[s.index()]; }
  const Bitset& plane_point_set(PlaneId s) const { return plane_points_[s.index()]; }
  const Bitset& point_plane_set(PointId p) const { return point_planes_[p.index()]; }
  /// Lines skew to l.
  const Bitset& skew_set(LineId l) const { return skew_[l.index()]; }
  /// Lines meeting l, including l itself.
  const Bitset& meet_set(LineId l) const { return meets_[l.index()]; }

  bool on_line(PointId p, LineId l) const { return line_points_[l.index()].test(p.index()); }
  bool on_plane(PointId p, PlaneId s) const { return plane_points_[s.index()].test(p.index()); }
  bool in_plane(LineId l, PlaneId s) const { return line_planes_[l.index()].test(s.index()); }
  bool skew(LineId a, LineId b) const { return skew_[a.index()].test(b.index()); }
  bool meet(LineId a, LineId b) const { return !skew(a, b); }

  /// Symplectic pairing of Pluecker vectors; nonzero exactly for skew lines.
  Elem pluecker_pairing(LineId a, LineId b) const {
    const auto& p = lines_[a.index()].pluecker;
    const auto& r = lines_[b.index()].pluecker;
    const Field& f = field_;
    Elem s = f.add(f.mul(p[0], r[5]), f.mul(p[5], r[0]));
    s = f.sub(s, f.add(f.mul(p[1], r[4]), f.mul(p[4], r[1])));
    s = f.add(s, f.add(f.mul(p[2], r[3]), f.mul(p[3], r[2])));
    return s;
  }

  /// Line through two distinct points.
  LineId join_points(PointId a, PointId b) const {
    if (a == b) throw Error(ErrorCode::DegenerateInput, "join of a point with itself");
    return LineId(join_[a.index() * points_.size() + b.index()]);
  }

  /// Plane spanned by a line and a point off it.
  PlaneId span_line_point(LineId l, PointId p) const {
    if (on_line(p, l)) throw Error(ErrorCode::DegenerateInput, "point lies on the line");
    return PlaneId((line_planes_[l.index()] & point_planes_[p.index()]).first());
  }

  /// Plane spanned by two distinct meeting lines.
  PlaneId span_lines(LineId a, LineId b) const {
    if (a == b || skew(a, b)) throw Error(ErrorCode::DegenerateInput, "lines do not span a plane");
    return PlaneId((line_planes_[a.index()] & line_planes_[b.index()]).first());
  }

  /// Line of intersection of two distinct planes.
  LineId meet_planes(PlaneId s, PlaneId t) const {
    if (s == t) throw Error(ErrorCode::DegenerateInput, "meet of a plane with itself");
    return dual_line(join_[s.index() * points_.size() + t.index()]);
  }

  LinePlaneMeet meet_line_plane(LineId l, PlaneId s) const {
    if (in_plane(l, s)) return Contained{};
    return PointId((line_points_[l.index()] & plane_points_[s.index()]).first());
  }

  /// Common point of two distinct meeting lines.
  std::optional<PointId> meet_lines(LineId a, LineId b) const {
    if (a == b || skew(a, b)) return std::nullopt;
    return PointId((line_points_[a.index()] & line_points_[b.index()]).first());
  }

  // Standard duality x -> x^perp with respect to the identity bilinear form.
  PlaneId dual(PointId p) const { return PlaneId(p.value); }
  PointId dual(PlaneId s) const { return PointId(s.value); }
  LineId dual(LineId l) const { return LineId(dual_line_[l.index()]); }

  /// Id of the line with the given spanning vectors; nullopt if they are dependent.
  std::optional<LineId> line_from_vectors(const Vec4& a, const Vec4& b) const {
    std::vector<Vec4> rows{a, b};
    if (detail::rref(field_, rows) != 2) return std::nullopt;
    return LineId(line_index_.at(key(rows[0], rows[1])));
  }

  std::optional<PointId> point_from_vector(const Vec4& v) const {
    Vec4 n = detail::normalize(field_, v);
    if (n == Vec4{}) return std::nullopt;
    return PointId(vec_index_[vec_key(n)]);
  }
  std::optional<PlaneId> plane_from_vector(const Vec4& v) const {
    auto p = point_from_vector(v);
    if (!p) return std::nullopt;
    return PlaneId(p->value);
  }

 private:
  std::size_t vec_key(const Vec4& v) const {
    std::size_t k = 0;
    for (Elem x : v) k = k * static_cast<std::size_t>(q()) + x;
    return k;
  }
  std::uint64_t key(const Vec4& a, const Vec4& b) const {
    return static_cast<std::uint64_t>(vec_key(a)) * 10000U + vec_key(b);
  }
  LineId dual_line(int l) const { return LineId(dual_line_[static_cast<std::size_t>(l)]); }

  void build() {
    const int qq = q();
    const std::size_t nvec = static_cast<std::size_t>(qq) * qq * qq * qq;

    vec_index_.assign(nvec, -1);
    for (std::size_t k = 1; k < nvec; ++k) {
      Vec4 v{};
      std::size_t r = k;
      for (int i = 3; i >= 0; --i) {
        v[i] = static_cast<Elem>(r % qq);
        r /= qq;
      }
      if (detail::normalize(field_, v) != v) continue;
      vec_index_[k] = static_cast<int>(points_.size());
      points_.push_back({PointId(points_.size()), v});
      planes_.push_back({PlaneId(planes_.size()), v});
    }

    // RREF 2x4 matrices of rank 2, one per line.
    std::vector<std::array<Vec4, 2>> bases;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        std::vector<int> free0;  // free positions of row 0: after a, not b
        std::vector<int> free1;  // free positions of row 1: after b
        for (int c = a + 1; c < 4; ++c)
          if (c != b) free0.push_back(c);
        for (int c = b + 1; c < 4; ++c) free1.push_back(c);
        const std::size_t nfree = free0.size() + free1.size();
        std::size_t total = 1;
        for (std::size_t i = 0; i < nfree; ++i) total *= static_cast<std::size_t>(qq);
        for (std::size_t code = 0; code < total; ++code) {
          std::array<Vec4, 2> m{};
          m[0][a] = 1;
          m[1][b] = 1;
          std::size_t r = code;
          for (int c : free0) {
            m[0][c] = static_cast<Elem>(r % qq);
            r /= qq;
          }
          for (int c : free1) {
            m[1][c] = static_cast<Elem>(r % qq);
            r /= qq;
          }
          bases.push_back(m);
        }
      }
    std::sort(bases.begin(), bases.end());
    const std::size_t np = points_.size();
    const std::size_t nl = bases.size();

    line_points_.assign(nl, Bitset(np));
    point_lines_.assign(np, Bitset(nl));
    points_on_line_.assign(nl, {});
    lines_through_point_.assign(np, {});
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& m = bases[l];
      lines_.push_back({LineId(l), m, detail::pluecker(field_, m[0], m[1])});
      line_index_[key(m[0], m[1])] = static_cast<int>(l);
      for (int s = 0; s < qq; ++s)
        for (int t = 0; t < qq; ++t) {
          if (s == 0 && t == 0) continue;
          Vec4 v{};
          for (int i = 0; i < 4; ++i)
            v[i] = field_.add(field_.mul(static_cast<Elem>(s), m[0][i]), field_.mul(static_cast<Elem>(t), m[1][i]));
          auto p = static_cast<std::size_t>(vec_index_[vec_key(detail::normalize(field_, v))]);
          if (!line_points_[l].test(p)) {
            line_points_[l].set(p);
            point_lines_[p].set(l);
          }
        }
      line_points_[l].for_each([&](std::size_t p) {
        points_on_line_[l].push_back(PointId(p));
        lines_through_point_[p].push_back(LineId(l));
      });
    }

    plane_points_.assign(np, Bitset(np));
    point_planes_.assign(np, Bitset(np));
    for (std::size_t s = 0; s < np; ++s)
      for (std::size_t p = 0; p < np; ++p)
        if (detail::dot(field_, planes_[s].coeffs, points_[p].coords) == 0) {
          plane_points_[s].set(p);
          point_planes_[p].set(s);
        }

    dual_line_.assign(nl, -1);
    for (std::size_t l = 0; l < nl; ++l) {
      std::vector<Vec4> rows{lines_[l].basis[0], lines_[l].basis[1]};
      auto ns = detail::null_space(field_, rows, 2);
      detail::rref(field_, ns);
      dual_line_[l] = line_index_.at(key(ns[0], ns[1]));
    }

    line_planes_.assign(nl, Bitset(np));
    plane_lines_.assign(np, Bitset(nl));
    planes_on_line_.assign(nl, {});
    lines_in_plane_.assign(np, {});
    for (std::size_t l = 0; l < nl; ++l) {
      line_planes_[l] = line_points_[static_cast<std::size_t>(dual_line_[l])];
      line_planes_[l].for_each([&](std::size_t s) {
        planes_on_line_[l].push_back(PlaneId(s));
        plane_lines_[s].set(l);
      });
    }
    for (std::size_t s = 0; s < np; ++s) plane_lines_[s].for_each([&](std::size_t l) { lines_in_plane_[s].push_back(LineId(l)); });

    join_.assign(np * np, -1);
    for (std::size_t l = 0; l < nl; ++l)
      for (PointId a : points_on_line_[l])
        for (PointId b : points_on_line_[l])
          if (a != b) join_[a.index() * np + b.index()] = static_cast<int>(l);

    skew_.assign(nl, Bitset(nl));
    meets_.assign(nl, Bitset(nl));
    for (std::size_t l = 0; l < nl; ++l) {
      Bitset m(nl);
      line_points_[l].for_each([&](std::size_t p) { m |= point_lines_[p]; });
      meets_[l] = m;
      skew_[l] = m.complement();
    }
  }

  Field field_;
  std::vector<Point> points_;
  std::vector<Line> lines_;
  std::vector<Plane> planes_;
  std::vector<int> vec_index_;
  std::unordered_map<std::uint64_t, int> line_index_;

  std::vector<std::vector<PointId>> points_on_line_;
  std::vector<std::vector<PlaneId>> planes_on_line_;
  std::vector<std::vector<LineId>> lines_through_point_;
  std::vector<std::vector<LineId>> lines_in_plane_;

  std::vector<Bitset> line_points_, point_lines_;
  std::vector<Bitset> line_planes_, plane_lines_;
  std::vector<Bitset> plane_points_, point_planes_;
  std::vector<Bitset> skew_, meets_;
  std::vector<int> dual_line_;
  std::vector<int> join_;
};

inline Geometry build_geometry(int q) { return Geometry(q); }

}  // namespace kneser
