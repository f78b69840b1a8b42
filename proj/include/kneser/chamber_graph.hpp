#pragma once

#include <cstddef>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kneser/bitset.hpp"
#include "kneser/error.hpp"
#include "kneser/geometry.hpp"

namespace kneser {

using ChamberId = StrongId<struct ChamberTag>;

/// A mutually incident (point, line, plane) triple.
struct Chamber {
  PointId point;
  LineId line;
  PlaneId plane;
  friend auto operator<=>(const Chamber&, const Chamber&) = default;
};

/// Vertices are the chambers of PG(3,q), edges join opposite chambers.
///
/// Chambers are numbered lexicographically by (line, point, plane). Since
/// every line carries (q+1)^2 chambers, the ids of line l occupy the block
/// [l*(q+1)^2, (l+1)*(q+1)^2).
class ChamberGraph {
 public:
  explicit ChamberGraph(std::shared_ptr<const Geometry> geom) : geom_(std::move(geom)) {
    const Geometry& g = *geom_;
    per_line_ = static_cast<std::size_t>((g.q() + 1) * (g.q() + 1));
    chambers_.reserve(g.num_lines() * per_line_);
    for (const auto& l : g.lines())
      for (PointId p : g.points_on_line(l.id))
        for (PlaneId s : g.planes_on_line(l.id)) chambers_.push_back({p, l.id, s});
  }

  const Geometry& geometry() const noexcept { return *geom_; }
  std::shared_ptr<const Geometry> geometry_ptr() const noexcept { return geom_; }
  int q() const noexcept { return geom_->q(); }
  std::size_t size() const noexcept { return chambers_.size(); }
  std::size_t chambers_per_line() const noexcept { return per_line_; }

  const Chamber& chamber(ChamberId c) const { return chambers_.at(c.index()); }
  const std::vector<Chamber>& chambers() const noexcept { return chambers_; }

  ChamberId first_on_line(LineId l) const { return ChamberId(l.index() * per_line_); }

  ChamberId id_of(const Chamber& c) const {
    const Geometry& g = *geom_;
    const auto& pts = g.points_on_line(c.line);
    const auto& pls = g.planes_on_line(c.line);
    auto pi = std::lower_bound(pts.begin(), pts.end(), c.point);
    auto si = std::lower_bound(pls.begin(), pls.end(), c.plane);
    if (pi == pts.end() || *pi != c.point || si == pls.end() || *si != c.plane)
      throw Error(ErrorCode::NonIncidentPair, "triple is not a chamber");
    const std::size_t q1 = static_cast<std::size_t>(g.q() + 1);
    return ChamberId(c.line.index() * per_line_ + static_cast<std::size_t>(pi - pts.begin()) * q1 +
                     static_cast<std::size_t>(si - pls.begin()));
  }

  bool is_chamber(const Chamber& c) const {
    const Geometry& g = *geom_;
    return c.point.index() < g.num_points() && c.line.index() < g.num_lines() && c.plane.index() < g.num_planes() &&
           g.on_line(c.point, c.line) && g.in_plane(c.line, c.plane);
  }

  /// Opposition straight from the definition.
  bool opposite(const Chamber& a, const Chamber& b) const {
    const Geometry& g = *geom_;
    return g.skew(a.line, b.line) && !g.on_plane(a.point, b.plane) && !g.on_plane(b.point, a.plane);
  }
  bool opposite(ChamberId a, ChamberId b) const {
    if (has_adjacency()) return adj_[a.index()].test(b.index());
    return opposite(chambers_[a.index()], chambers_[b.index()]);
  }

  ChamberId dual(ChamberId c) const {
    const Chamber& ch = chambers_[c.index()];
    return id_of({geom_->dual(ch.plane), geom_->dual(ch.line), geom_->dual(ch.point)});
  }

  bool has_adjacency() const noexcept { return !adj_.empty(); }

  void build_adjacency() {
    if (has_adjacency()) return;
    const Geometry& g = *geom_;
    const std::size_t n = size();
    adj_.assign(n, Bitset(n));
    for (std::size_t i = 0; i < n; ++i) {
      const Chamber& a = chambers_[i];
      g.skew_set(a.line).for_each([&](std::size_t m) {
        const std::size_t base = m * per_line_;
        for (std::size_t k = 0; k < per_line_; ++k) {
          const Chamber& b = chambers_[base + k];
          if (!g.on_plane(a.point, b.plane) && !g.on_plane(b.point, a.plane)) adj_[i].set(base + k);
        }
      });
    }
  }

  /// Opposite chambers of c; requires build_adjacency().
  const Bitset& neighbors(ChamberId c) const {
    require_adjacency();
    return adj_[c.index()];
  }
  const std::vector<Bitset>& adjacency() const {
    require_adjacency();
    return adj_;
  }

  /// Non-opposite chambers other than c itself, i.e. the complement graph.
  std::vector<Bitset> complement_adjacency() const {
    require_adjacency();
    std::vector<Bitset> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      Bitset b = adj_[i].complement();
      b.reset(i);
      out.push_back(std::move(b));
    }
    return out;
  }

  std::size_t edge_count() const {
    require_adjacency();
    std::size_t s = 0;
    for (const auto& row : adj_) s += row.count();
    return s / 2;
  }

 private:
  void require_adjacency() const {
    if (!has_adjacency()) throw Error(ErrorCode::DegenerateInput, "adjacency has not been built");
  }

  std::shared_ptr<const Geometry> geom_;
  std::size_t per_line_ = 0;
  std::vector<Chamber> chambers_;
  std::vector<Bitset> adj_;
};

inline ChamberGraph enumerate_chambers(std::shared_ptr<const Geometry> g) { return ChamberGraph(std::move(g)); }

inline ChamberGraph build_chamber_graph(int q, bool with_adjacency = true) {
  ChamberGraph cg(std::make_shared<const Geometry>(q));
  if (with_adjacency) cg.build_adjacency();
  return cg;
}

enum class GraphFormat { Dimacs, Json };

/// DIMACS ("p edge n m", 1-based "e u v" with u < v) or JSON adjacency lists.
inline std::string export_graph(const ChamberGraph& cg, GraphFormat format) {
  if (!cg.has_adjacency()) throw Error(ErrorCode::IOFailure, "export requires built adjacency");
  const std::size_t n = cg.size();
  if (format == GraphFormat::Dimacs) {
    std::ostringstream os;
    os << "c Kneser graph on chambers of PG(3," << cg.q() << ")\n";
    os << "p edge " << n << ' ' << cg.edge_count() << '\n';
    for (std::size_t u = 0; u < n; ++u) {
      const Bitset& row = cg.neighbors(ChamberId(u));
      for (std::size_t v = row.next(u + 1); v < n; v = row.next(v + 1)) os << "e " << u + 1 << ' ' << v + 1 << '\n';
    }
    return os.str();
  }
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["q"] = cg.q();
  j["vertices"] = n;
  j["edges"] = cg.edge_count();
  nlohmann::json chambers = nlohmann::json::array();
  nlohmann::json adjacency = nlohmann::json::array();
  for (std::size_t u = 0; u < n; ++u) {
    const Chamber& c = cg.chamber(ChamberId(u));
    chambers.push_back({c.point.value, c.line.value, c.plane.value});
    std::vector<std::size_t> nb = cg.neighbors(ChamberId(u)).indices();
    adjacency.push_back(nb);
  }
  j["chambers"] = std::move(chambers);
  j["adjacency"] = std::move(adjacency);
  return j.dump() + "\n";
}

}  // namespace kneser
