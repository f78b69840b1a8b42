#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kneser/kneser.hpp"

namespace {

using kneser::Json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Config {
  int q = 2;
  std::string out;
  std::string format = "json";
  bool deterministic = false;
  bool json_errors = false;
  std::uint64_t budget = 0;
  double seconds = 0.0;
  unsigned workers = 1;

  // family
  std::string kind;
  bool dual = false;
  std::string params;

  // verify
  std::string set_file;

  // search
  std::string mode;
  std::size_t min_size = 0;
  bool full = false;
  bool extended = false;

  // export / geom
  std::string graph_format = "dimacs";
  bool incidence = false;
};

std::uint64_t default_budget() {
  if (const char* env = std::getenv("KNESER_NODE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "ignoring malformed KNESER_NODE_BUDGET=" << env << '\n';
  }
  return kneser::SearchBudget{}.max_nodes;
}

kneser::SearchOptions search_options(const Config& c, bool anchored = true) {
  kneser::SearchOptions o;
  o.budget.max_nodes = c.budget;
  o.budget.max_seconds = c.seconds;
  o.workers = c.workers;
  o.anchored = anchored;
  return o;
}

Json config_json(const Config& c, const std::string& command) {
  Json j;
  j["command"] = command;
  j["q"] = c.q;
  if (!c.kind.empty()) j["kind"] = c.kind;
  if (command == "family build") j["dualized"] = c.dual;
  if (!c.params.empty()) j["params"] = c.params;
  if (!c.set_file.empty()) j["set"] = c.set_file;
  if (!c.mode.empty()) j["mode"] = c.mode;
  if (c.min_size) j["min"] = c.min_size;
  if (command.rfind("search", 0) == 0 || command == "table") {
    j["budget_nodes"] = c.budget;
    j["budget_seconds"] = c.seconds;
    j["workers"] = c.workers;
    j["full"] = c.full;
    j["extended"] = c.extended;
  }
  j["format"] = c.format;
  j["deterministic"] = c.deterministic;
  return j;
}

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

Json envelope(const Config& c, const std::string& command, Json result) {
  Json j;
  j["format_version"] = kneser::kFormatVersion;
  if (!c.deterministic) j["generated_at"] = timestamp();
  j["config"] = config_json(c, command);
  j["result"] = std::move(result);
  return j;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    kneser::write_text_file(c.out, text);
    std::cerr << "wrote " << c.out << '\n';
  }
}

void emit_json(const Config& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

void progress(const std::string& msg) { std::cerr << "[kneser] " << msg << std::endl; }

void require_search_order(const Config& c, bool needs_extended) {
  if (c.q != 2 && c.q != 3)
    throw kneser::Error(kneser::ErrorCode::UnsupportedOrder, "search commands support q = 2 and q = 3");
  if (c.q == 3 && needs_extended && !c.extended)
    throw kneser::Error(kneser::ErrorCode::ScaleLimit, "q = 3 runs are long; pass --extended to allow them");
}

// ---------------------------------------------------------------------------

int cmd_geom_info(const Config& c) {
  kneser::ChamberGraph cg = kneser::build_chamber_graph(c.q, false);
  const kneser::Geometry& g = cg.geometry();
  Json r;
  r["q"] = c.q;
  r["points"] = g.num_points();
  r["lines"] = g.num_lines();
  r["planes"] = g.num_planes();
  r["chambers"] = cg.size();
  r["skew_per_line"] = g.skew_set(kneser::LineId(0)).count();
  const std::size_t q = static_cast<std::size_t>(c.q);
  r["degree"] = q * q * q * q * q * q;
  if (c.incidence) {
    Json lines = Json::array();
    for (const auto& l : g.lines()) {
      Json e;
      e["id"] = l.id.value;
      Json pts = Json::array();
      for (auto p : g.points_on_line(l.id)) pts.push_back(p.value);
      Json pls = Json::array();
      for (auto s : g.planes_on_line(l.id)) pls.push_back(s.value);
      e["points"] = std::move(pts);
      e["planes"] = std::move(pls);
      lines.push_back(std::move(e));
    }
    r["incidence"] = std::move(lines);
  }
  if (c.format == "text") {
    emit(c, "PG(3," + std::to_string(c.q) + "): " + std::to_string(g.num_points()) + " points, " +
                std::to_string(g.num_lines()) + " lines, " + std::to_string(g.num_planes()) + " planes, " +
                std::to_string(cg.size()) + " chambers\n");
  } else {
    emit_json(c, envelope(c, "geom info", r));
  }
  return kExitOk;
}

kneser::FamilySpec family_spec(const Config& c) {
  auto kind = kneser::parse_family_kind(c.kind);
  if (!kind) throw kneser::Error(kneser::ErrorCode::InvalidSpec, "unknown family kind " + c.kind);
  kneser::FamilySpec s;
  if (!c.params.empty()) s = kneser::family_spec_from_json(kneser::read_json_file(c.params), *kind);
  s.kind = *kind;
  if (c.dual) s.dualized = true;
  return s;
}

int cmd_family_build(const Config& c) {
  kneser::ChamberGraph cg = kneser::build_chamber_graph(c.q, false);
  kneser::FamilySpec spec = kneser::resolve_spec(cg, family_spec(c));
  kneser::ChamberSet s = kneser::build_family(cg, spec);
  kneser::FamilyVerdict v = kneser::verify_family(cg, spec);
  Json j = kneser::to_json(s);
  j["family"] = kneser::to_json(spec, c.q);
  emit(c, j.dump() + "\n");
  std::cerr << kneser::to_string(spec.kind) << (spec.dualized ? " (dual)" : "") << " at q=" << c.q << ": size "
            << v.size << ", " << (v.passed() ? "verified" : "VERIFICATION FAILED") << '\n';
  return v.passed() ? kExitOk : kExitFailed;
}

int cmd_verify(const Config& c) {
  Json in = kneser::read_json_file(c.set_file);
  int q = kneser::chamber_set_order(in).value_or(c.q);
  Config cc = c;
  cc.q = q;
  kneser::ChamberGraph cg = kneser::build_chamber_graph(q, false);
  kneser::ChamberSet s = kneser::chamber_set_from_json(in, cg);
  kneser::AuditReport audit = kneser::audit_structure(s);
  Json r;
  r["q"] = q;
  r["size"] = s.size();
  r["independent"] = !audit.independence_witness.has_value();
  r["maximal"] = audit.maximal;
  r["weights"] = kneser::to_json(kneser::weight_report(s));
  r["audit"] = kneser::to_json(audit);
  r["passed"] = audit.passed();
  if (c.format == "text") {
    std::string t = "size " + std::to_string(s.size()) + ", independent " + (r["independent"].get<bool>() ? "yes" : "no") +
                    ", maximal " + (audit.maximal ? "yes" : "no");
    if (audit.maximality_witness) t += " (chamber " + std::to_string(audit.maximality_witness->value) + " can be added)";
    if (audit.independence_witness)
      t += " (chambers " + std::to_string(audit.independence_witness->first.value) + " and " +
           std::to_string(audit.independence_witness->second.value) + " are opposite)";
    for (const auto& ch : audit.checks) t += "\n  " + ch.name + ": " + (ch.passed ? "pass" : "FAIL " + ch.detail);
    emit(cc, t + "\n");
  } else {
    emit_json(cc, envelope(cc, "verify", r));
  }
  return audit.passed() ? kExitOk : kExitFailed;
}

int cmd_search(const Config& c) {
  const std::size_t q = static_cast<std::size_t>(c.q);
  if (c.mode == "alpha") {
    require_search_order(c, false);
    kneser::ChamberGraph cg = kneser::build_chamber_graph(c.q);
    progress("maximum independent set search at q=" + std::to_string(c.q));
    kneser::SearchResult r = kneser::max_independent_set(cg, search_options(c, !c.full));
    Json j = kneser::to_json(r, c.deterministic);
    j["witness"] = kneser::to_json(kneser::ChamberSet::from_ids(cg, r.witnesses.front()));
    j["witness_maximal"] = kneser::is_maximal(kneser::ChamberSet::from_ids(cg, r.witnesses.front()));
    emit_json(c, envelope(c, "search alpha", j));
    return kExitOk;
  }
  if (c.mode == "maximal") {
    require_search_order(c, true);
    const std::size_t min = c.min_size ? c.min_size : 3 * q * q * q + 4 * q * q + 3 * q + 2;
    Config cc = c;
    cc.min_size = min;
    kneser::ChamberGraph cg = kneser::build_chamber_graph(c.q);
    progress("enumerating maximal independent sets of size >= " + std::to_string(min) + " at q=" + std::to_string(c.q));
    kneser::SearchResult r = kneser::enumerate_maximal_above(cg, min, search_options(c, !c.full));
    progress("done after " + std::to_string(r.stats.nodes) + " nodes");
    emit_json(cc, envelope(cc, "search maximal", kneser::to_json(r, c.deterministic)));
    return kExitOk;
  }
  if (c.mode == "chroma") {
    require_search_order(c, true);
    if (c.q == 3) throw kneser::Error(kneser::ErrorCode::UnsupportedOrder, "use 'table --extended-q3' for q = 3");
    kneser::ChamberGraph cg = kneser::build_chamber_graph(c.q);
    progress("chromatic number at q=" + std::to_string(c.q));
    kneser::ColoringResult r = kneser::chromatic_number(cg, search_options(c));
    emit_json(c, envelope(c, "search chroma", kneser::to_json(r, c.deterministic)));
    return kExitOk;
  }
  throw kneser::Error(kneser::ErrorCode::InvalidSpec, "unknown search mode " + c.mode);
}

struct Row {
  int q;
  std::size_t b1, b2, b3, chi;
  std::string source;  // "searched" or "formula"
};

Row formula_row(int qi) {
  const std::size_t q = static_cast<std::size_t>(qi);
  return {qi, q * q * q * q + 3 * q * q * q + 4 * q * q + 3 * q + 1, 3 * q * q * q + 5 * q * q + 3 * q + 1,
          3 * q * q * q + 4 * q * q + 3 * q + 2, q * q + q, "formula"};
}

Row searched_row(const Config& c, int qi) {
  const std::size_t q = static_cast<std::size_t>(qi);
  kneser::ChamberGraph cg = kneser::build_chamber_graph(qi);
  kneser::SearchOptions opt = search_options(c);
  const Row f = formula_row(qi);
  progress("q=" + std::to_string(qi) + ": enumerating maximal sets of size >= " + std::to_string(f.b3));
  kneser::SearchResult r = kneser::enumerate_maximal_above(cg, f.b3, opt);
  if (!r.b2 || !r.b3) throw kneser::Error(kneser::ErrorCode::DegenerateInput, "fewer than three sizes found");
  progress("q=" + std::to_string(qi) + ": chromatic number");
  std::size_t chi = 0;
  if (qi == 2) {
    chi = *kneser::chromatic_number(cg, opt).chromatic_number;
  } else {
    // (q^2+q)-coloring from the line cover, lower bound from the counting
    // inequality with the searched b2; every maximum set through chamber 0
    // must be some C(x)
    kneser::ColoringResult up = kneser::k_colorable(cg, q * q + q, opt);
    bool all_cx = true;
    for (const auto& w : r.witnesses) all_cx = all_cx && kneser::center_of(kneser::ChamberSet::from_ids(cg, w)).found();
    kneser::ColoringResult down = kneser::counting_refutation(cg, q * q + q - 1, *r.b2, all_cx);
    if (up.colorable && !down.colorable) chi = q * q + q;
  }
  return {qi, r.alpha, *r.b2, *r.b3, chi, "searched"};
}

int cmd_table(const Config& c) {
  std::vector<Row> rows;
  if (c.q == 2 || c.q == 3) {
    if (c.q == 2) rows.push_back(searched_row(c, 2));
    if (c.q == 3 || c.extended) rows.push_back(c.extended ? searched_row(c, 3) : formula_row(3));
  } else {
    if (c.q < 2 || !kneser::Field::is_supported(c.q))
      throw kneser::Error(kneser::ErrorCode::UnsupportedOrder, "unsupported order " + std::to_string(c.q));
    Row f = formula_row(c.q);
    if (c.q >= 4 && !kneser::verify_counting_inequality(c.q, f.chi - 1).excluded()) f.chi = 0;
    rows.push_back(f);
  }
  if (c.format == "json") {
    Json a = Json::array();
    for (const Row& r : rows)
      a.push_back({{"q", r.q}, {"b1", r.b1}, {"b2", r.b2}, {"b3", r.b3}, {"chi", r.chi}, {"source", r.source}});
    emit_json(c, envelope(c, "table", a));
  } else if (c.format == "csv") {
    std::string t = "q,b1,b2,b3,chi,source\n";
    for (const Row& r : rows)
      t += std::to_string(r.q) + "," + std::to_string(r.b1) + "," + std::to_string(r.b2) + "," + std::to_string(r.b3) +
           "," + std::to_string(r.chi) + "," + r.source + "\n";
    emit(c, t);
  } else {
    std::string t = "| q | b1 | b2 | b3 | chi | source |\n";
    for (const Row& r : rows)
      t += "| " + std::to_string(r.q) + " | " + std::to_string(r.b1) + " | " + std::to_string(r.b2) + " | " +
           std::to_string(r.b3) + " | " + std::to_string(r.chi) + " | " + r.source + " |\n";
    emit(c, t);
  }
  for (const Row& r : rows)
    if (r.chi == 0) return kExitFailed;
  return kExitOk;
}

int cmd_export(const Config& c) {
  kneser::ChamberGraph cg = kneser::build_chamber_graph(c.q);
  if (c.graph_format == "dimacs") {
    emit(c, kneser::export_graph(cg, kneser::GraphFormat::Dimacs));
  } else {
    emit(c, kneser::export_graph(cg, kneser::GraphFormat::Json));
  }
  return kExitOk;
}

int exit_code_for(kneser::ErrorCode code) {
  switch (code) {
    case kneser::ErrorCode::ScaleLimit:
    case kneser::ErrorCode::ThresholdTooLow: return kExitBudget;
    case kneser::ErrorCode::NotIndependent:
    case kneser::ErrorCode::NotMaximal: return kExitFailed;
    default: return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  c.budget = default_budget();

  CLI::App app{"Kneser graph on chambers of PG(3,q): families, audits and exact search"};
  app.require_subcommand(1);
  app.add_flag("--deterministic", c.deterministic, "omit timestamps and timings from reports");
  app.add_flag("--json-errors", c.json_errors, "print errors as JSON on stderr");

  auto add_q = [&](CLI::App* sub) { sub->add_option("--q", c.q, "field order")->check(CLI::IsMember({2, 3, 4, 5, 7, 8, 9})); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", c.out, "output file (default: stdout)"); };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", c.budget, "node budget (default: $KNESER_NODE_BUDGET or 1e9)")->check(CLI::PositiveNumber);
    sub->add_option("--seconds", c.seconds, "wall-time budget in seconds (0 = none)")->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* geom = app.add_subcommand("geom", "geometry summaries");
  geom->require_subcommand(1);
  auto* geom_info = geom->add_subcommand("info", "counts of PG(3,q)");
  add_q(geom_info);
  add_out(geom_info);
  geom_info->add_flag("--incidence", c.incidence, "include points and planes of every line");
  geom_info->add_option("--format", c.format)->check(CLI::IsMember({"json", "text"}));

  auto* family = app.add_subcommand("family", "example families");
  family->require_subcommand(1);
  auto* family_build = family->add_subcommand("build", "build a family as a chamber set file");
  add_q(family_build);
  add_out(family_build);
  family_build->add_option("--kind", c.kind, "Cx, M1..M7 or Third")->required()->check(
      CLI::IsMember({"Cx", "M1", "M2", "M3", "M4", "M5", "M6", "M7", "Third"}));
  family_build->add_flag("--dual", c.dual, "build the dual set");
  family_build->add_option("--params", c.params, "JSON file with point/line/plane/aux_point ids")->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "independence, maximality, weights and structural audit");
  verify->add_option("--set", c.set_file, "chamber set file")->required()->check(CLI::ExistingFile);
  verify->add_option("--q", c.q, "field order for raw id lists");
  add_out(verify);
  verify->add_option("--format", c.format)->check(CLI::IsMember({"json", "text"}));

  auto* search = app.add_subcommand("search", "exact search (q = 2; q = 3 with --extended)");
  search->add_option("mode", c.mode, "alpha, maximal or chroma")->required()->check(CLI::IsMember({"alpha", "maximal", "chroma"}));
  add_q(search);
  add_out(search);
  add_budget(search);
  search->add_option("--min", c.min_size, "size threshold for 'maximal' (default 3q^3+4q^2+3q+2)");
  search->add_flag("--full", c.full, "do not anchor chamber 0 (slower, no orbit counting)");
  search->add_flag("--extended", c.extended, "allow long q = 3 runs");

  auto* table = app.add_subcommand("table", "q, b1, b2, b3, chi with provenance");
  add_q(table);
  add_out(table);
  add_budget(table);
  table->add_flag("--extended-q3", c.extended, "also search q = 3 (long)");
  table->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv", "text"}));

  auto* exp = app.add_subcommand("export", "export the chamber graph");
  exp->add_option("format", c.graph_format, "dimacs or json")->check(CLI::IsMember({"dimacs", "json"}));
  add_q(exp);
  add_out(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (geom_info->parsed()) return cmd_geom_info(c);
    if (family_build->parsed()) return cmd_family_build(c);
    if (verify->parsed()) return cmd_verify(c);
    if (search->parsed()) return cmd_search(c);
    if (table->parsed()) {
      if (c.format == "json" && !table->count("--format")) c.format = "text";
      return cmd_table(c);
    }
    if (exp->parsed()) return cmd_export(c);
  } catch (const kneser::Error& e) {
    if (c.json_errors) {
      Json j{{"error", std::string(kneser::to_string(e.code()))}, {"message", e.what()}};
      std::cerr << j.dump() << '\n';
    } else {
      std::cerr << "error (" << kneser::to_string(e.code()) << "): " << e.what() << '\n';
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
