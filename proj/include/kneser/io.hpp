#pragma once

// JSON forms of the library's inputs and reports.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kneser/analysis.hpp"
#include "kneser/chamber_graph.hpp"
#include "kneser/error.hpp"
#include "kneser/families.hpp"
#include "kneser/search.hpp"

namespace kneser {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IOFailure, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorCode::IOFailure, "cannot write " + path);
}

// ---------------------------------------------------------------------------
// ChamberSet files: {"format_version", "q", "chambers": [[point, line, plane], ...]}.
// Raw id lists are accepted as {"q", "ids": [...]} or a bare array.

inline Json to_json(const ChamberSet& s) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["q"] = s.graph().q();
  Json triples = Json::array();
  for (ChamberId id : s.ids()) {
    const Chamber& c = s.graph().chamber(id);
    triples.push_back({c.point.value, c.line.value, c.plane.value});
  }
  j["chambers"] = std::move(triples);
  return j;
}

/// q recorded in a set file, if any.
inline std::optional<int> chamber_set_order(const Json& j) {
  if (j.is_object() && j.contains("q") && j["q"].is_number_integer()) return j["q"].get<int>();
  return std::nullopt;
}

inline ChamberSet chamber_set_from_json(const Json& j, const ChamberGraph& cg) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::IOFailure, "malformed chamber set: " + what); };
  if (auto q = chamber_set_order(j); q && *q != cg.q())
    bad("file is for q=" + std::to_string(*q) + ", graph has q=" + std::to_string(cg.q()));
  ChamberSet s(cg);
  auto add_id = [&](const Json& v) {
    if (!v.is_number_integer()) bad("chamber id is not an integer");
    long long id = v.get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= cg.size())
      throw Error(ErrorCode::DegenerateInput, "chamber id " + std::to_string(id) + " out of range");
    s.insert(ChamberId(static_cast<std::size_t>(id)));
  };
  const Json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object() && j.contains("ids")) {
    list = &j["ids"];
  }
  if (list) {
    if (!list->is_array()) bad("ids is not an array");
    for (const auto& v : *list) add_id(v);
    return s;
  }
  if (!j.is_object() || !j.contains("chambers") || !j["chambers"].is_array()) bad("no chambers array");
  for (const auto& t : j["chambers"]) {
    if (!t.is_array() || t.size() != 3) bad("chamber is not a [point, line, plane] triple");
    for (const auto& v : t)
      if (!v.is_number_integer()) bad("chamber entry is not an integer");
    Chamber c{PointId(t[0].get<int>()), LineId(t[1].get<int>()), PlaneId(t[2].get<int>())};
    if (!cg.is_chamber(c))
      throw Error(ErrorCode::NonIncidentPair, "[" + std::to_string(c.point.value) + ", " + std::to_string(c.line.value) +
                                                  ", " + std::to_string(c.plane.value) + "] is not a chamber");
    s.insert(cg.id_of(c));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const WeightDistribution& d) { return Json::array({d.full, d.two_q_plus_one, d.q_plus_one, d.one}); }

inline Json to_json(const WeightReport& w) {
  Json j;
  j["q"] = w.q;
  j["size"] = w.set_size;
  Json spectrum = Json::array();
  for (auto [weight, count] : w.spectrum) spectrum.push_back({{"weight", weight}, {"lines", count}});
  j["spectrum"] = std::move(spectrum);
  j["distribution"] = to_json(w.distribution);
  j["weight_two_lines"] = w.weight_two_lines;
  j["distribution_total"] = w.distribution_total();
  j["line_weights"] = w.line_weights;
  return j;
}

inline Json ids_json(const std::vector<LineId>& v) {
  Json a = Json::array();
  for (LineId l : v) a.push_back(l.value);
  return a;
}

inline Json to_json(const AuditReport& r) {
  Json j;
  j["independent"] = !r.independence_witness.has_value();
  if (r.independence_witness)
    j["independence_witness"] = {r.independence_witness->first.value, r.independence_witness->second.value};
  j["maximal"] = r.maximal;
  if (r.maximality_witness) j["maximality_witness"] = r.maximality_witness->value;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    if (!c.passed) {
      e["detail"] = c.detail;
      e["witness"] = c.witness;
    }
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["pi_lines"] = ids_json(r.special.pi_lines);
  j["p_lines"] = ids_json(r.special.p_lines);
  j["pi_trichotomy"] = to_string(r.pi_trichotomy);
  j["p_trichotomy"] = to_string(r.p_trichotomy);
  j["passed"] = r.passed();
  return j;
}

inline Json to_json(const SearchStats& s, bool deterministic) {
  Json j;
  j["nodes"] = s.nodes;
  if (!deterministic) j["seconds"] = s.seconds;
  return j;
}

inline Json to_json(const SearchResult& r, bool deterministic = false) {
  Json j;
  j["q"] = r.q;
  j["alpha"] = r.alpha;
  if (r.threshold) j["threshold"] = r.threshold;
  j["anchored"] = r.anchored;
  Json sizes = Json::array();
  for (auto [s, count] : r.sizes) {
    Json e{{"size", s}, {"count", count}};
    if (r.anchored) e["through_chamber_0"] = r.anchored_sizes.at(s);
    sizes.push_back(std::move(e));
  }
  j["sizes"] = std::move(sizes);
  j["b2"] = r.b2 ? Json(*r.b2) : Json(nullptr);
  j["b3"] = r.b3 ? Json(*r.b3) : Json(nullptr);
  j["stats"] = to_json(r.stats, deterministic);
  return j;
}

inline Json to_json(const ColoringResult& r, bool deterministic = false, bool with_assignment = true) {
  Json j;
  j["q"] = r.q;
  j["k"] = r.k;
  j["colorable"] = r.colorable;
  j["certificate"] = to_string(r.certificate);
  j["detail"] = r.detail;
  if (r.chromatic_number) j["chi"] = *r.chromatic_number;
  if (with_assignment && r.colorable) j["assignment"] = r.assignment;
  if (!r.steps.empty()) {
    Json steps = Json::array();
    for (const auto& s : r.steps) steps.push_back(to_json(s, deterministic, false));
    j["certificates"] = std::move(steps);
  }
  j["stats"] = to_json(r.stats, deterministic);
  return j;
}

inline Json to_json(const FamilySpec& s, int q) {
  Json j;
  j["kind"] = std::string(to_string(s.kind));
  j["q"] = q;
  auto put = [&](const char* key, const auto& v) { j[key] = v ? Json(v->value) : Json(nullptr); };
  put("point", s.point);
  put("line", s.line);
  put("plane", s.plane);
  put("aux_point", s.aux_point);
  j["dualized"] = s.dualized;
  return j;
}

/// Reads {kind, q?, point?, line?, plane?, aux_point?, dualized?}; `kind`
/// is optional when the caller supplies one.
inline FamilySpec family_spec_from_json(const Json& j, std::optional<FamilyKind> kind = std::nullopt) {
  auto invalid = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (!j.is_object()) invalid("family spec must be a JSON object");
  FamilySpec s;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) invalid("kind must be a string");
    auto k = parse_family_kind(j["kind"].get<std::string>());
    if (!k) invalid("unknown family kind " + j["kind"].get<std::string>());
    s.kind = *k;
  } else if (kind) {
    s.kind = *kind;
  } else {
    invalid("family spec has no kind");
  }
  auto get = [&](const char* key, auto& out) {
    if (!j.contains(key) || j[key].is_null()) return;
    if (!j[key].is_number_integer()) invalid(std::string(key) + " must be an integer id");
    out = std::remove_reference_t<decltype(*out)>(j[key].get<int>());
  };
  get("point", s.point);
  get("line", s.line);
  get("plane", s.plane);
  get("aux_point", s.aux_point);
  if (j.contains("dualized")) {
    if (!j["dualized"].is_boolean()) invalid("dualized must be a boolean");
    s.dualized = j["dualized"].get<bool>();
  }
  return s;
}

inline Json to_json(const FamilyVerdict& v) {
  Json j;
  j["kind"] = std::string(to_string(v.kind));
  j["dualized"] = v.dualized;
  j["size"] = v.size;
  j["expected_size"] = v.expected_size;
  j["maximal"] = v.maximal;
  j["distribution"] = to_json(v.distribution);
  j["expected_distribution"] = to_json(v.expected_distribution);
  j["weight_two_free"] = v.weight_two_free;
  j["identity_holds"] = v.identity_holds;
  j["selfdual"] = v.selfdual ? Json(*v.selfdual) : Json(nullptr);
  j["passed"] = v.passed();
  return j;
}

}  // namespace kneser
