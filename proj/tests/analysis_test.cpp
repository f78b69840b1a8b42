#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "kneser/analysis.hpp"
#include "kneser/families.hpp"

using namespace kneser;

namespace {

ChamberSet c_of_point(const ChamberGraph& cg, PointId p) {
  ChamberSet s(cg);
  for (std::size_t i = 0; i < cg.size(); ++i)
    if (cg.geometry().on_line(p, cg.chamber(ChamberId(i)).line)) s.insert(ChamberId(i));
  return s;
}

// A random independent seed of random size, completed by the closure.
ChamberSet random_closure(const ChamberGraph& cg, std::mt19937_64& rng) {
  std::vector<std::size_t> order(cg.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t target = 1 + rng() % 40;
  ChamberSet s(cg);
  for (std::size_t c : order) {
    if (s.size() >= target) break;
    bool ok = true;
    for (ChamberId m : s.ids()) ok = ok && !cg.opposite(m, ChamberId(c));
    if (ok) s.insert(ChamberId(c));
  }
  return maximal_closure(s);
}

void expect_all_checks_pass(const AuditReport& r) {
  EXPECT_TRUE(r.maximal);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

}  // namespace

TEST(Analysis, ChamberSetBasics) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet s(cg);
  EXPECT_TRUE(s.empty());
  s.insert(ChamberId(3));
  s.insert(ChamberId(3));
  EXPECT_EQ(s.size(), 1u);
  EXPECT_TRUE(s.contains(ChamberId(3)));
  s.erase(ChamberId(3));
  EXPECT_TRUE(s.empty());
  EXPECT_THROW(s.insert(ChamberId(315)), Error);
}

TEST(Analysis, ClosureOfEmptySetIsMaximal) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet c = maximal_closure(ChamberSet(cg));
  EXPECT_TRUE(is_independent(c));
  EXPECT_TRUE(is_maximal(c));
  EXPECT_EQ(c, maximal_closure(ChamberSet(cg)));
}

TEST(Analysis, ClosureIsDeterministicAndAscending) {
  ChamberGraph cg = build_chamber_graph(3, false);
  ChamberSet seed = ChamberSet::from_ids(cg, std::vector<int>{1000});
  ChamberSet a = maximal_closure(seed), b = maximal_closure(seed);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.contains(ChamberId(1000)));
  // the closure adds the least free chamber first
  std::size_t least = (blocked_by(seed) | seed.bits()).complement().first();
  EXPECT_TRUE(a.contains(ChamberId(least)));
}

TEST(Analysis, CentreSetIsMaximal) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet s = c_of_point(cg, PointId(0));
  EXPECT_EQ(s.size(), 63u);
  EXPECT_TRUE(is_maximal(s));
}

TEST(Analysis, OppositePairIsDependent) {
  ChamberGraph cg = build_chamber_graph(2);
  std::size_t b = cg.neighbors(ChamberId(0)).first();
  ChamberSet s = ChamberSet::from_ids(cg, std::vector<std::size_t>{0, b});
  EXPECT_FALSE(is_independent(s));
  EXPECT_FALSE(is_maximal(s));
  try {
    maximal_closure(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotIndependent);
  }
}

TEST(Analysis, OnTheFlyOppositionMatchesAdjacency) {
  ChamberGraph with = build_chamber_graph(3);
  ChamberGraph without = build_chamber_graph(3, false);
  for (std::size_t c = 0; c < with.size(); c += 37)
    EXPECT_EQ(opposite_chambers(with, ChamberId(c)), opposite_chambers(without, ChamberId(c)));
}

TEST(Analysis, WeightsOfCentreSet) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet s = c_of_point(cg, PointId(0));
  WeightReport w = weight_report(s);
  EXPECT_EQ(w.spectrum.at(9), 7u);
  EXPECT_EQ(w.spectrum.at(0), 28u);
  EXPECT_EQ(w.spectrum.size(), 2u);
  EXPECT_EQ((WeightDistribution{7, 0, 0, 0}), w.distribution);
  for (LineId l : cg.geometry().lines_through_point(PointId(0))) EXPECT_EQ(line_weight(s, l), 9u);
  SpecialLines sp = classify_special_lines(s);
  EXPECT_TRUE(sp.pi_lines.empty());
  EXPECT_TRUE(sp.p_lines.empty());
}

TEST(Analysis, FlagWeights) {
  ChamberGraph cg = build_chamber_graph(2, false);
  const Geometry& g = cg.geometry();
  ChamberSet s = c_of_point(cg, PointId(0));
  LineId l = g.lines_through_point(PointId(0)).front();
  EXPECT_EQ(flag_weight(s, l, g.planes_on_line(l).front()), 3u);
  EXPECT_EQ(flag_weight(s, g.points_on_line(l).back(), l), 3u);
  PlaneId off(g.line_plane_set(l).complement().first());
  try {
    flag_weight(s, l, off);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonIncidentPair);
  }
  PointId offp(g.line_point_set(l).complement().first());
  EXPECT_THROW(flag_weight(s, offp, l), Error);
}

TEST(Analysis, WeightReportSumsAndIdentity) {
  ChamberGraph cg = build_chamber_graph(3, false);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    ChamberSet s(cg);
    for (int i = 0; i < 200; ++i) s.insert(ChamberId(rng() % cg.size()));
    WeightReport w = weight_report(s);
    EXPECT_EQ(std::accumulate(w.line_weights.begin(), w.line_weights.end(), std::size_t{0}), s.size());
    for (std::size_t l = 0; l < cg.geometry().num_lines(); ++l) {
      EXPECT_EQ(w.line_weights[l], line_weight(s, LineId(l)));
      std::size_t a = 0, b = 0;
      for (auto x : w.plane_pair_weights[l]) a += x;
      for (auto x : w.point_pair_weights[l]) b += x;
      EXPECT_EQ(a, w.line_weights[l]);
      EXPECT_EQ(b, w.line_weights[l]);
    }
  }
}

TEST(Analysis, FirstExampleDistributionAtQ2) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet m1 = build_family(cg, FamilySpec{FamilyKind::M1});
  WeightReport w = weight_report(m1);
  EXPECT_EQ((WeightDistribution{3, 4, 0, 4}), w.distribution);
  EXPECT_EQ(w.weight_two_lines, 0u);
  EXPECT_EQ(w.distribution_total(), m1.size());
  SpecialLines sp = classify_special_lines(m1);
  std::vector<LineId> heavy;
  for (std::size_t l = 0; l < w.line_weights.size(); ++l)
    if (w.line_weights[l] == 5) heavy.push_back(LineId(l));
  ASSERT_EQ(heavy.size(), 4u);
  for (LineId l : heavy) {
    EXPECT_NE(std::find(sp.pi_lines.begin(), sp.pi_lines.end(), l), sp.pi_lines.end());
    EXPECT_NE(std::find(sp.p_lines.begin(), sp.p_lines.end(), l), sp.p_lines.end());
  }
}

TEST(Analysis, ThirdLargestPlaneLinesAreBothSpecial) {
  ChamberGraph cg = build_chamber_graph(2, false);
  FamilySpec spec{FamilyKind::Third};
  spec = resolve_spec(cg, spec);
  ChamberSet m = build_family(cg, spec);
  SpecialLines sp = classify_special_lines(m);
  WeightReport w = weight_report(m);
  std::size_t both = 0;
  for (LineId l : cg.geometry().lines_in_plane(*spec.plane)) {
    if (w.line_weights[l.index()] != 5) continue;
    bool pi = std::find(sp.pi_lines.begin(), sp.pi_lines.end(), l) != sp.pi_lines.end();
    bool p = std::find(sp.p_lines.begin(), sp.p_lines.end(), l) != sp.p_lines.end();
    both += pi && p;
  }
  EXPECT_EQ(both, 4u);
}

TEST(Analysis, SpecialLinesNeedMaximalSet) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet s = ChamberSet::from_ids(cg, std::vector<int>{0});
  try {
    classify_special_lines(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotMaximal);
  }
}

TEST(Analysis, AuditFirstExamplePencil) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet m1 = build_family(cg, FamilySpec{FamilyKind::M1});
  AuditReport r = audit_structure(m1);
  expect_all_checks_pass(r);
  ASSERT_NE(r.find("full_weight_line_count"), nullptr);
  EXPECT_TRUE(r.find("full_weight_line_count")->passed);
  WeightReport w = weight_report(m1);
  std::vector<LineId> full;
  for (std::size_t l = 0; l < w.line_weights.size(); ++l)
    if (w.line_weights[l] == 9) full.push_back(LineId(l));
  ASSERT_EQ(full.size(), 3u);
  const Geometry& g = cg.geometry();
  Bitset pts = g.line_point_set(full[0]) & g.line_point_set(full[1]) & g.line_point_set(full[2]);
  Bitset pls = g.line_plane_set(full[0]) & g.line_plane_set(full[1]) & g.line_plane_set(full[2]);
  EXPECT_EQ(pts.count(), 1u);
  EXPECT_EQ(pls.count(), 1u);
}

TEST(Analysis, AuditStopsOnDependentOrNonMaximalSets) {
  ChamberGraph cg = build_chamber_graph(2);
  std::size_t b = cg.neighbors(ChamberId(0)).first();
  AuditReport dep = audit_structure(ChamberSet::from_ids(cg, std::vector<std::size_t>{0, b}));
  EXPECT_TRUE(dep.independence_witness.has_value());
  EXPECT_FALSE(dep.passed());
  EXPECT_TRUE(dep.checks.empty());

  ChamberSet m1 = build_family(cg, FamilySpec{FamilyKind::M1});
  ChamberId removed = m1.ids()[7];
  m1.erase(removed);
  AuditReport r = audit_structure(m1);
  EXPECT_FALSE(r.maximal);
  ASSERT_TRUE(r.maximality_witness.has_value());
  ChamberSet extended = m1;
  extended.insert(*r.maximality_witness);
  EXPECT_TRUE(is_independent(extended));
}

TEST(Analysis, RandomClosuresPassAuditAtQ2) {
  ChamberGraph cg = build_chamber_graph(2, false);
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 100; ++t) {
    ChamberSet s = random_closure(cg, rng);
    ASSERT_TRUE(is_maximal(s));
    expect_all_checks_pass(audit_structure(s));
  }
}

TEST(Analysis, RandomClosuresPassAuditAtQ3) {
  ChamberGraph cg = build_chamber_graph(3, false);
  std::mt19937_64 rng(2027);
  for (int t = 0; t < 25; ++t) expect_all_checks_pass(audit_structure(random_closure(cg, rng)));
}

TEST(Analysis, FamiliesPassAudit) {
  for (int q : {2, 3, 4}) {
    ChamberGraph cg = build_chamber_graph(q, false);
    for (FamilyKind k : kAllFamilies)
      for (bool dual : {false, true}) {
        FamilySpec spec{k};
        spec.dualized = dual;
        SCOPED_TRACE(std::string(to_string(k)) + (dual ? " dual" : "") + " q=" + std::to_string(q));
        expect_all_checks_pass(audit_structure(build_family(cg, spec)));
      }
  }
}

TEST(Analysis, TrichotomyNeedsEnoughPiLines) {
  // at q=2 no M7 has 3q+2 = 8 pi-lines
  ChamberGraph cg = build_chamber_graph(2, false);
  AuditReport r = audit_structure(build_family(cg, FamilySpec{FamilyKind::M7}));
  EXPECT_EQ(r.special.pi_lines.size(), 6u);
  EXPECT_EQ(r.pi_trichotomy, Trichotomy::NotApplicable);
  EXPECT_EQ(r.p_trichotomy, Trichotomy::NotApplicable);
}

TEST(Analysis, TrichotomyCasesAtQ3) {
  ChamberGraph cg = build_chamber_graph(3, false);
  AuditReport r = audit_structure(build_family(cg, FamilySpec{FamilyKind::M7}));
  expect_all_checks_pass(r);
  EXPECT_EQ(r.special.pi_lines.size(), 12u);
  EXPECT_EQ(r.pi_trichotomy, Trichotomy::Case1);
  EXPECT_EQ(r.p_trichotomy, Trichotomy::Case2);

  // the dual set swaps the two classifications
  FamilySpec d{FamilyKind::M7};
  d.dualized = true;
  AuditReport rd = audit_structure(build_family(cg, d));
  EXPECT_EQ(rd.pi_trichotomy, Trichotomy::Case2);
  EXPECT_EQ(rd.p_trichotomy, Trichotomy::Case1);

  for (FamilyKind k : {FamilyKind::M4, FamilyKind::M5, FamilyKind::M6}) {
    AuditReport x = audit_structure(build_family(cg, FamilySpec{k}));
    EXPECT_NE(x.pi_trichotomy, Trichotomy::NotApplicable) << to_string(k);
    EXPECT_NE(x.pi_trichotomy, Trichotomy::Inconsistent) << to_string(k);
    EXPECT_NE(x.p_trichotomy, Trichotomy::Inconsistent) << to_string(k);
  }
}

TEST(Analysis, DualizeIsInvolution) {
  ChamberGraph cg = build_chamber_graph(3, false);
  ChamberSet m = build_family(cg, FamilySpec{FamilyKind::Third});
  ChamberSet d = dualize(m);
  EXPECT_EQ(d.size(), m.size());
  EXPECT_EQ(dualize(d), m);
  EXPECT_TRUE(is_maximal(d));
}
