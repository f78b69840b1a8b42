#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "kneser/families.hpp"
#include "kneser/search.hpp"

using namespace kneser;

namespace {

const ChamberGraph& graph(int q) {
  static const ChamberGraph g2 = build_chamber_graph(2);
  static const ChamberGraph g3 = build_chamber_graph(3);
  return q == 2 ? g2 : g3;
}

ChamberSet as_set(const ChamberGraph& cg, const std::vector<std::size_t>& ids) { return ChamberSet::from_ids(cg, ids); }

}  // namespace

TEST(Search, IndependenceNumberAtQ2) {
  const ChamberGraph& cg = graph(2);
  SearchResult r = max_independent_set(cg);
  EXPECT_EQ(r.alpha, 63u);
  ASSERT_EQ(r.witnesses.size(), 1u);
  ChamberSet w = as_set(cg, r.witnesses[0]);
  EXPECT_EQ(w.size(), 63u);
  EXPECT_TRUE(is_maximal(w));

  SearchOptions full;
  full.anchored = false;
  EXPECT_EQ(max_independent_set(cg, full).alpha, 63u);
}

TEST(Search, IndependenceNumberAtQ3) {
  const ChamberGraph& cg = graph(3);
  SearchResult r = max_independent_set(cg);
  EXPECT_EQ(r.alpha, 208u);
  ChamberSet w = as_set(cg, r.witnesses.at(0));
  EXPECT_TRUE(is_maximal(w));
  EXPECT_TRUE(center_of(w).found());
}

TEST(Search, MaximalSetsAboveThresholdAtQ2) {
  const ChamberGraph& cg = graph(2);
  SearchResult r = enumerate_maximal_above(cg, 48);
  EXPECT_EQ(r.alpha, 63u);
  std::map<std::size_t, std::size_t> expected{{48, 5040}, {51, 2310}, {63, 30}};
  EXPECT_EQ(r.sizes, expected);
  ASSERT_TRUE(r.b2.has_value());
  ASSERT_TRUE(r.b3.has_value());
  EXPECT_EQ(*r.b2, 51u);
  EXPECT_EQ(*r.b3, 48u);
  for (const auto& w : r.witnesses) EXPECT_EQ(w.size(), 63u);
}

TEST(Search, AnchoredAndFullEnumerationAgree) {
  const ChamberGraph& cg = graph(2);
  SearchOptions full;
  full.anchored = false;
  full.workers = 2;
  SearchResult a = enumerate_maximal_above(cg, 50);
  SearchResult f = enumerate_maximal_above(cg, 50, full);
  EXPECT_EQ(a.sizes, f.sizes);
  EXPECT_TRUE(f.anchored_sizes.empty());
  EXPECT_FALSE(a.anchored_sizes.empty());
  // chamber 0 lies in a fraction size/n of each orbit
  for (auto [s, k] : a.anchored_sizes) EXPECT_EQ(k * cg.size(), f.sizes.at(s) * s);
}

TEST(Search, EnumeratedSetsAreMaximalAndIndependent) {
  // an independent check that the enumerator returns what it claims
  const ChamberGraph& cg = graph(2);
  std::vector<ChamberSet> maxsets = enumerate_maximum_sets(cg);
  ASSERT_EQ(maxsets.size(), 30u);
  std::set<std::vector<bool>> distinct;
  for (const ChamberSet& s : maxsets) {
    EXPECT_EQ(s.size(), 63u);
    EXPECT_TRUE(is_maximal(s));
    std::vector<bool> bits(cg.size());
    for (ChamberId c : s.ids()) bits[c.index()] = true;
    distinct.insert(bits);
  }
  EXPECT_EQ(distinct.size(), 30u);
}

TEST(Search, MaximumSetsAreCentreSetsAndClosedUnderDuality) {
  const ChamberGraph& cg = graph(2);
  std::vector<ChamberSet> maxsets = enumerate_maximum_sets(cg);
  std::size_t points = 0, planes = 0;
  for (const ChamberSet& s : maxsets) {
    CenterOf c = center_of(s);
    ASSERT_TRUE(c.found());
    points += c.point.has_value();
    planes += c.plane.has_value();
    FamilySpec spec{FamilyKind::Cx};
    spec.point = c.point;
    spec.plane = c.plane;
    EXPECT_EQ(build_family(cg, spec), s);
    ChamberSet d = dualize(s);
    EXPECT_TRUE(std::find(maxsets.begin(), maxsets.end(), d) != maxsets.end());
  }
  EXPECT_EQ(points, 15u);
  EXPECT_EQ(planes, 15u);
}

TEST(Search, CentreOfOtherSets) {
  const ChamberGraph& cg = graph(2);
  EXPECT_FALSE(center_of(build_family(cg, FamilySpec{FamilyKind::M1})).found());
  EXPECT_FALSE(center_of(ChamberSet(cg)).found());
}

TEST(Search, ChromaticNumberAtQ2) {
  const ChamberGraph& cg = graph(2);
  ColoringResult r = chromatic_number(cg);
  ASSERT_TRUE(r.chromatic_number.has_value());
  EXPECT_EQ(*r.chromatic_number, 6u);
  EXPECT_TRUE(is_proper_coloring(cg, r.assignment, 6));
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_TRUE(r.steps[0].colorable);
  EXPECT_FALSE(r.steps[1].colorable);
  EXPECT_EQ(r.steps[1].k, 5u);
}

TEST(Search, RefutationsBelowSix) {
  const ChamberGraph& cg = graph(2);
  ColoringResult five = k_colorable(cg, 5);
  EXPECT_FALSE(five.colorable);
  EXPECT_EQ(five.certificate, Certificate::PartitionArgument);
  ColoringResult four = k_colorable(cg, 4);
  EXPECT_FALSE(four.colorable);
  EXPECT_EQ(four.certificate, Certificate::IndependenceBound);
  ColoringResult six = k_colorable(cg, 6);
  EXPECT_TRUE(six.colorable);
  EXPECT_TRUE(is_proper_coloring(cg, six.assignment, 6));
}

TEST(Search, ColoringsAreMonotone) {
  const ChamberGraph& cg = graph(2);
  bool prev = false;
  for (std::size_t k = 1; k <= 8; ++k) {
    bool now = k_colorable(cg, k).colorable;
    EXPECT_TRUE(!prev || now) << k;
    prev = now;
  }
}

TEST(Search, CoverColoringAtQ3) {
  const ChamberGraph& cg = graph(3);
  std::vector<int> c = cover_coloring(cg);
  EXPECT_TRUE(is_proper_coloring(cg, c, 12));
  EXPECT_EQ(*std::max_element(c.begin(), c.end()), 11);
  // each class is a centre set, hence of size at most alpha
  std::vector<std::size_t> count(12, 0);
  for (int x : c) ++count[static_cast<std::size_t>(x)];
  for (std::size_t n : count) EXPECT_LE(n, 208u);
}

TEST(Search, ProperColoringRejectsConflicts) {
  const ChamberGraph& cg = graph(2);
  std::vector<int> c(cg.size(), 0);
  EXPECT_FALSE(is_proper_coloring(cg, c, 1));
  std::vector<int> good = cover_coloring(cg);
  EXPECT_TRUE(is_proper_coloring(cg, good, 6));
  EXPECT_FALSE(is_proper_coloring(cg, good, 5));
}

TEST(Search, CountingInequalityAtQ4) {
  CountingCheck c19 = verify_counting_inequality(4, 19);
  EXPECT_EQ(c19.b2, 285u);
  EXPECT_TRUE(c19.b2_below);
  EXPECT_EQ(c19.lhs, 17u * 21u * 25u);
  EXPECT_EQ(c19.rhs, (42u + 19u * 16u) * 25u);
  EXPECT_TRUE(c19.excluded());
  CountingCheck c20 = verify_counting_inequality(4, 20);
  EXPECT_FALSE(c20.excluded());
  EXPECT_TRUE(c20.holds);
  EXPECT_LT(c20.b2, 400u);
}

TEST(Search, CountingLowerBounds) {
  for (int q : {4, 5, 7, 8, 9}) {
    const std::size_t qq = static_cast<std::size_t>(q);
    std::size_t b2 = 3 * qq * qq * qq + 5 * qq * qq + 3 * qq + 1;
    EXPECT_EQ(counting_lower_bound(q, b2), qq * qq + qq) << q;
  }
  EXPECT_EQ(counting_lower_bound(7, 3 * 343 + 5 * 49 + 22), 56u);
}

TEST(Search, CountingInequalityNeedsLargeOrder) {
  for (int q : {2, 3}) {
    try {
      verify_counting_inequality(q, 6);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnsupportedOrder);
    }
  }
}

TEST(Search, CountingRefutationAtQ3) {
  const ChamberGraph& cg = graph(3);
  ColoringResult r = counting_refutation(cg, 11, 136, true);
  EXPECT_FALSE(r.colorable);
  EXPECT_EQ(r.certificate, Certificate::CountingArgument);
  // without the structure premise nothing is refuted
  EXPECT_TRUE(counting_refutation(cg, 11, 136, false).colorable);
  EXPECT_TRUE(counting_refutation(cg, 12, 136, true).colorable);
}

TEST(Search, ThresholdTooLow) {
  const ChamberGraph& cg = graph(2);
  try {
    enumerate_maximal_above(cg, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ThresholdTooLow);
  }
  SearchOptions tiny;
  tiny.budget.max_nodes = 50;
  try {
    enumerate_maximal_above(cg, 10, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ThresholdTooLow);
  }
}

TEST(Search, BudgetExhaustionIsScaleLimit) {
  const ChamberGraph& cg = graph(3);
  SearchOptions tiny;
  tiny.budget.max_nodes = 10;
  tiny.anchored = false;
  try {
    max_independent_set(cg, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScaleLimit);
  }
}

TEST(Search, SearchNeedsAdjacency) {
  ChamberGraph cg = build_chamber_graph(2, false);
  EXPECT_THROW(max_independent_set(cg), Error);
  EXPECT_THROW(k_colorable(cg, 6), Error);
}

TEST(Search, DeterministicResults) {
  const ChamberGraph& cg = graph(2);
  SearchResult a = enumerate_maximal_above(cg, 51), b = enumerate_maximal_above(cg, 51);
  EXPECT_EQ(a.sizes, b.sizes);
  EXPECT_EQ(a.witnesses, b.witnesses);
  EXPECT_EQ(a.stats.nodes, b.stats.nodes);
}
