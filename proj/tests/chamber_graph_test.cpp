#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "kneser/chamber_graph.hpp"

using namespace kneser;

TEST(ChamberGraph, CountMatchesTripleEnumeration) {
  for (int q : {2, 3}) {
    auto g = std::make_shared<const Geometry>(q);
    std::size_t brute = 0;
    for (std::size_t p = 0; p < g->num_points(); ++p)
      for (std::size_t l = 0; l < g->num_lines(); ++l)
        for (std::size_t s = 0; s < g->num_planes(); ++s)
          brute += g->on_line(PointId(p), LineId(l)) && g->in_plane(LineId(l), PlaneId(s));
    ChamberGraph cg = enumerate_chambers(g);
    EXPECT_EQ(cg.size(), brute);
  }
  EXPECT_EQ(build_chamber_graph(2, false).size(), 315u);
}

TEST(ChamberGraph, CountFormula) {
  for (int qi : {2, 3, 4, 5, 7}) {
    const std::size_t q = static_cast<std::size_t>(qi);
    ChamberGraph cg = build_chamber_graph(qi, false);
    EXPECT_EQ(cg.size(), (q * q + 1) * (q * q + q + 1) * (q + 1) * (q + 1));
    EXPECT_EQ(cg.chambers_per_line(), (q + 1) * (q + 1));
  }
}

TEST(ChamberGraph, OrderingAndIds) {
  ChamberGraph cg = build_chamber_graph(3, false);
  for (std::size_t i = 0; i < cg.size(); ++i) {
    const Chamber& c = cg.chamber(ChamberId(i));
    ASSERT_TRUE(cg.is_chamber(c));
    ASSERT_EQ(cg.id_of(c), ChamberId(i));
    ASSERT_EQ(c.line.index(), i / cg.chambers_per_line());
    if (i) {
      const Chamber& p = cg.chamber(ChamberId(i - 1));
      ASSERT_LT(std::tie(p.line, p.point, p.plane), std::tie(c.line, c.point, c.plane));
    }
  }
  try {
    const Geometry& g = cg.geometry();
    PointId off(g.line_point_set(LineId(0)).complement().first());
    cg.id_of({off, LineId(0), g.planes_on_line(LineId(0)).front()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonIncidentPair);
  }
}

TEST(ChamberGraph, OppositionOnCoordinateChambers) {
  ChamberGraph cg = build_chamber_graph(2, false);
  const Geometry& g = cg.geometry();
  const Vec4 e0{1, 0, 0, 0}, e1{0, 1, 0, 0}, e2{0, 0, 1, 0}, e3{0, 0, 0, 1};
  Chamber c1{*g.point_from_vector(e0), *g.line_from_vectors(e0, e1), *g.plane_from_vector(e2)};
  Chamber c2{*g.point_from_vector(e2), *g.line_from_vectors(e2, e3), *g.plane_from_vector(e0)};
  ASSERT_TRUE(cg.is_chamber(c1));
  ASSERT_TRUE(cg.is_chamber(c2));
  EXPECT_TRUE(cg.opposite(c1, c2));
  EXPECT_FALSE(cg.opposite(c1, c1));
  // moving the point of c2 into the plane of c1 breaks opposition
  Chamber c3{*g.point_from_vector(e3), c2.line, c2.plane};
  EXPECT_FALSE(cg.opposite(c1, c3));
}

TEST(ChamberGraph, AdjacencyMatchesDefinition) {
  for (int qi : {2, 3}) {
    ChamberGraph cg = build_chamber_graph(qi);
    const Geometry& g = cg.geometry();
    const std::size_t q = static_cast<std::size_t>(qi);
    for (std::size_t a = 0; a < cg.size(); ++a) {
      const Chamber& x = cg.chamber(ChamberId(a));
      const Bitset& row = cg.neighbors(ChamberId(a));
      ASSERT_FALSE(row.test(a));
      ASSERT_EQ(row.count(), q * q * q * q * q * q);
      for (std::size_t b = 0; b < cg.size(); ++b) {
        const Chamber& y = cg.chamber(ChamberId(b));
        bool def = g.skew(x.line, y.line) && !g.on_plane(x.point, y.plane) && !g.on_plane(y.point, x.plane);
        ASSERT_EQ(row.test(b), def);
        ASSERT_EQ(row.test(b), cg.neighbors(ChamberId(b)).test(a));
        if (x.line == y.line) {
          ASSERT_FALSE(def);
        }
      }
    }
  }
  EXPECT_EQ(build_chamber_graph(2).edge_count(), 315u * 64u / 2u);
}

TEST(ChamberGraph, NeighborsRequireAdjacency) {
  ChamberGraph cg = build_chamber_graph(2, false);
  EXPECT_FALSE(cg.has_adjacency());
  EXPECT_THROW(cg.neighbors(ChamberId(0)), Error);
  // opposition still works without it
  EXPECT_FALSE(cg.opposite(ChamberId(0), ChamberId(1)));
}

TEST(ChamberGraph, DualityPreservesOpposition) {
  ChamberGraph cg = build_chamber_graph(2);
  for (std::size_t a = 0; a < cg.size(); ++a) {
    ChamberId da = cg.dual(ChamberId(a));
    ASSERT_EQ(cg.dual(da), ChamberId(a));
    for (std::size_t b = 0; b < cg.size(); ++b)
      ASSERT_EQ(cg.opposite(ChamberId(a), ChamberId(b)), cg.opposite(da, cg.dual(ChamberId(b))));
  }
  ChamberGraph c3 = build_chamber_graph(3, false);
  std::mt19937_64 rng(5);
  std::size_t failures = 0;
  for (int i = 0; i < 100000; ++i) {
    ChamberId a(rng() % c3.size()), b(rng() % c3.size());
    failures += c3.dual(c3.dual(a)) != a;
    failures += c3.opposite(a, b) != c3.opposite(c3.dual(a), c3.dual(b));
  }
  EXPECT_EQ(failures, 0u);
}

TEST(ChamberGraph, DimacsExport) {
  ChamberGraph cg = build_chamber_graph(2);
  std::string d = export_graph(cg, GraphFormat::Dimacs);
  EXPECT_EQ(d, export_graph(cg, GraphFormat::Dimacs));
  std::istringstream in(d);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line[0], 'c');
  std::getline(in, line);
  EXPECT_EQ(line, "p edge 315 10080");
  std::size_t edges = 0;
  while (std::getline(in, line)) {
    std::istringstream e(line);
    char tag;
    std::size_t u, v;
    e >> tag >> u >> v;
    ASSERT_EQ(tag, 'e');
    ASSERT_LT(u, v);
    ASSERT_GE(u, 1u);
    ASSERT_LE(v, 315u);
    ASSERT_TRUE(cg.opposite(ChamberId(u - 1), ChamberId(v - 1)));
    ++edges;
  }
  EXPECT_EQ(edges, 10080u);
}

TEST(ChamberGraph, JsonExport) {
  ChamberGraph cg = build_chamber_graph(2);
  auto j = nlohmann::json::parse(export_graph(cg, GraphFormat::Json));
  EXPECT_EQ(j["format_version"], 1);
  EXPECT_EQ(j["vertices"], 315);
  EXPECT_EQ(j["edges"], 10080);
  EXPECT_EQ(j["adjacency"].size(), 315u);
  EXPECT_EQ(j["adjacency"][7].size(), 64u);
  EXPECT_EQ(j["chambers"][0][1], 0);
}

TEST(ChamberGraph, ExportWithoutAdjacencyFails) {
  ChamberGraph cg = build_chamber_graph(2, false);
  try {
    export_graph(cg, GraphFormat::Dimacs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IOFailure);
  }
}
