#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "kneser/io.hpp"

using namespace kneser;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::DegenerateInput;
}

}  // namespace

TEST(Io, ChamberSetRoundTrip) {
  for (int q : {2, 3}) {
    ChamberGraph cg = build_chamber_graph(q, false);
    for (FamilyKind k : kAllFamilies) {
      ChamberSet s = build_family(cg, FamilySpec{k});
      Json j = to_json(s);
      EXPECT_EQ(j["format_version"], kFormatVersion);
      EXPECT_EQ(j["q"], q);
      EXPECT_EQ(j["chambers"].size(), s.size());
      EXPECT_EQ(chamber_set_from_json(Json::parse(j.dump()), cg), s);
    }
  }
}

TEST(Io, TriplesAreIncidentChambers) {
  ChamberGraph cg = build_chamber_graph(2, false);
  Json j = to_json(build_family(cg, FamilySpec{FamilyKind::M1}));
  for (const auto& t : j["chambers"]) {
    Chamber c{PointId(t[0].get<int>()), LineId(t[1].get<int>()), PlaneId(t[2].get<int>())};
    EXPECT_TRUE(cg.is_chamber(c));
  }
}

TEST(Io, RawIdLists) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet s = ChamberSet::from_ids(cg, std::vector<int>{0, 5, 314});
  EXPECT_EQ(chamber_set_from_json(Json::parse("[0, 5, 314]"), cg), s);
  EXPECT_EQ(chamber_set_from_json(Json::parse(R"({"q": 2, "ids": [314, 5, 0, 5]})"), cg), s);
  EXPECT_EQ(chamber_set_order(Json::parse(R"({"q": 3, "ids": []})")), 3);
  EXPECT_FALSE(chamber_set_order(Json::parse("[1]")).has_value());
}

TEST(Io, MalformedSets) {
  ChamberGraph cg = build_chamber_graph(2, false);
  auto load = [&](const char* text) { return [&cg, text] { chamber_set_from_json(Json::parse(text), cg); }; };
  EXPECT_EQ(code_of(load(R"({"q": 2})")), ErrorCode::IOFailure);
  EXPECT_EQ(code_of(load(R"({"q": 3, "chambers": []})")), ErrorCode::IOFailure);
  EXPECT_EQ(code_of(load(R"({"chambers": [[0, 0]]})")), ErrorCode::IOFailure);
  EXPECT_EQ(code_of(load(R"({"chambers": [[0, "a", 0]]})")), ErrorCode::IOFailure);
  EXPECT_EQ(code_of(load(R"({"ids": "nope"})")), ErrorCode::IOFailure);
  EXPECT_EQ(code_of(load("[1.5]")), ErrorCode::IOFailure);
  EXPECT_EQ(code_of(load("[315]")), ErrorCode::DegenerateInput);
  EXPECT_EQ(code_of(load("[-1]")), ErrorCode::DegenerateInput);

  const Geometry& g = cg.geometry();
  PointId off(g.line_point_set(LineId(0)).complement().first());
  Json bad{{"chambers", Json::array({Json::array({off.value, 0, g.planes_on_line(LineId(0)).front().value})})}};
  EXPECT_EQ(code_of([&] { chamber_set_from_json(bad, cg); }), ErrorCode::NonIncidentPair);
}

TEST(Io, FileHelpers) {
  auto path = (std::filesystem::temp_directory_path() / "kneser_io_test.json").string();
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet s = build_family(cg, FamilySpec{FamilyKind::Third});
  write_text_file(path, to_json(s).dump(2));
  EXPECT_EQ(chamber_set_from_json(read_json_file(path), cg), s);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_EQ(code_of([&] { read_json_file(path); }), ErrorCode::IOFailure);
  std::remove(path.c_str());
  EXPECT_EQ(code_of([&] { read_json_file(path); }), ErrorCode::IOFailure);
  EXPECT_EQ(code_of([] { write_text_file("/nonexistent-dir/x.json", "{}"); }), ErrorCode::IOFailure);
}

TEST(Io, FamilySpecRoundTrip) {
  ChamberGraph cg = build_chamber_graph(3, false);
  for (FamilyKind k : kAllFamilies) {
    FamilySpec s = resolve_spec(cg, FamilySpec{k});
    s.dualized = k == FamilyKind::M4;
    FamilySpec back = family_spec_from_json(Json::parse(to_json(s, 3).dump()));
    EXPECT_EQ(back.kind, s.kind);
    EXPECT_EQ(back.point, s.point);
    EXPECT_EQ(back.line, s.line);
    EXPECT_EQ(back.plane, s.plane);
    EXPECT_EQ(back.aux_point, s.aux_point);
    EXPECT_EQ(back.dualized, s.dualized);
  }
  FamilySpec partial = family_spec_from_json(Json::parse(R"({"plane": 4})"), FamilyKind::M2);
  EXPECT_EQ(partial.kind, FamilyKind::M2);
  EXPECT_EQ(partial.plane, PlaneId(4));
  EXPECT_FALSE(partial.point.has_value());
}

TEST(Io, MalformedFamilySpecs) {
  auto parse = [](const char* text) { return [text] { family_spec_from_json(Json::parse(text)); }; };
  EXPECT_EQ(code_of(parse("[]")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse("{}")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"kind": "M9"})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"kind": 1})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"kind": "M1", "point": "x"})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"kind": "M1", "dualized": 1})")), ErrorCode::InvalidSpec);
}

TEST(Io, ReportShapes) {
  ChamberGraph cg = build_chamber_graph(2, false);
  ChamberSet s = build_family(cg, FamilySpec{FamilyKind::M1});
  Json w = to_json(weight_report(s));
  EXPECT_TRUE(w.is_object());
  Json v = to_json(verify_family(cg, FamilySpec{FamilyKind::M1}));
  EXPECT_EQ(v["size"], 51);
  EXPECT_EQ(v["distribution"], Json::parse("[3, 4, 0, 4]"));
  EXPECT_EQ(v["passed"], true);
  Json a = to_json(audit_structure(s));
  EXPECT_EQ(a["passed"], true);

  SearchStats st{123, 4.5};
  EXPECT_FALSE(to_json(st, true).contains("seconds"));
  EXPECT_TRUE(to_json(st, false).contains("seconds"));
}
