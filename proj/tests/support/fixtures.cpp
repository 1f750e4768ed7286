#include "fixtures.hpp"

#include <cstdio>
#include <stdexcept>

#include "recap/bundle_format.hpp"
#include "recap/contamination.hpp"
#include "recap/layer_registry.hpp"
#include "recap/reporting.hpp"
#include "recap/routing.hpp"
#include "recap/tiering.hpp"

#ifndef RECAP_FIXTURE_DIR
#define RECAP_FIXTURE_DIR "tests/fixtures"
#endif

namespace recap::fixtures {

std::string ts(int minutes) {
  int day = 1 + minutes / (24 * 60);
  int rest = minutes % (24 * 60);
  int hour = 9 + rest / 60;
  if (hour >= 24) {
    hour -= 24;
    ++day;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "2025-03-%02dT%02d:%02d:00Z", day, hour, rest % 60);
  return buf;
}

EventContext at(int minutes, const std::string& actor) { return EventContext{ts(minutes), actor}; }

std::string describe(const Diagnostics& d) {
  std::string out;
  for (const auto& x : d) out += x.code + " " + x.location + " " + x.message + "\n";
  return out;
}

ProjectBundle must(Result<ProjectBundle> r) {
  if (!r) throw std::runtime_error("operation rejected:\n" + describe(r.diagnostics()));
  return std::move(r).value();
}

Identifier gp(const std::string& name) { return Identifier{Namespace::gp, "", name}; }
Identifier par(const std::string& owner, const std::string& name) { return Identifier{Namespace::parent, owner, name}; }
Identifier chi(const std::string& owner, const std::string& name) { return Identifier{Namespace::child, owner, name}; }

Identifier toy_project() { return chi("C", "toy"); }
Identifier toy_unit(const std::string& name) { return chi("C", name); }
Identifier toy_route(const std::string& name) { return chi("C", name); }

ProjectBundle toy_skeleton() {
  ProjectBundle b;
  b.recap_version = "v1.0";
  LawSet extra = {
      Law{gp("construct_definitions"), "Constructs are declared as abstract inference targets before any measurement.",
          false, false},
      Law{gp("tiering_rules"), "Evidence is tiered by construct alignment, measurement, design and reporting.", false,
          false},
      Law{gp("contamination_laws"), "Information crosses layer boundaries only as the boundary rules allow.", false,
          false},
  };
  b.layers.push_back(make_grandparent(
      "G", "v1.0", extra,
      {"operationalization", "stability", "declared", "dimension", "construct", "measurement", "assumption", "route",
       "tier", "evidence", "insight", "law", "inference", "bias", "design", "reporting", "alignment", "proxy",
       "validity"}));

  LayerDecl p;
  p.id = "P";
  p.kind = LayerKind::parent;
  p.parent_ref = "G";
  p.version = "P1.0";
  auto construct = [](const char* name, const char* def) {
    return Abstraction{par("P", name), AbstractionKind::construct, def, {}, false};
  };
  auto measure = [](const char* name, const char* def, const char* target) {
    Abstraction a{par("P", name), AbstractionKind::measurement_class, def, {}, false};
    if (target) a.correspondence[par("P", name)] = par("P", target);
    return a;
  };
  p.abstractions = {
      construct("A", "Abstract exposure construct."),
      construct("B", "Abstract intermediate construct."),
      construct("C", "Abstract outcome construct."),
      measure("m1", "Measurement procedure one.", "A"),
      measure("m2", "Measurement procedure two.", "B"),
      measure("m3", "Measurement procedure three.", nullptr),
  };
  p.vocabulary = {"exposure", "mediator", "outcome", "association", "proxy", "monotonic"};
  b.layers.push_back(p);

  LayerDecl c;
  c.id = "C";
  c.kind = LayerKind::child;
  c.parent_ref = "P";
  c.definitions = {
      Definition{chi("C", "S1_m1"), "S1 measures A through parent:P:m1.", false},
      Definition{chi("C", "S1_m2"), "S1 proxies B through parent:P:m2.", false},
      Definition{chi("C", "S2_m1"), "S2 measures A through parent:P:m1.", false},
  };
  b.layers.push_back(c);

  b.projects.push_back(ProjectDecl{toy_project(), "C", "How does A relate to C, mediated through B?"});
  return b;
}

namespace {

EvidentialUnit base_unit(const std::string& name, const std::string& design, Assessment a) {
  EvidentialUnit u;
  u.study_id = toy_unit(name);
  u.project_ref = toy_project();
  u.design_type = design;
  u.interpretations = {a};
  return u;
}

RouteAssumption assumption(const std::string& name, const std::string& text, std::vector<Identifier> tested_by) {
  RouteAssumption a;
  a.id = toy_route(name);
  a.text = text;
  a.plausibility = "Supported by the declared measurement correspondence.";
  a.failure_modes = "The procedure drifts from the construct it approximates.";
  a.consequences_for_inference = "Estimates along the route lose their construct reading.";
  a.tested_by = std::move(tested_by);
  return a;
}

Route exploratory(const std::string& name, const std::string& objective) {
  Route r;
  r.id = toy_route(name);
  r.project_ref = toy_project();
  r.status = RouteStatus::exploratory;
  r.body.construct_ref = par("P", "A");
  r.body.objective = objective;
  r.body.assumptions = {assumption(name + "_a1", "Candidate route assumption for " + name + ".", {})};
  r.body.disconfirming_models = {"No relation between A and C under " + objective + " analysis."};
  return r;
}

}  // namespace

EvidentialUnit toy_s1() {
  auto u = base_unit("S1", "Observational (Abstract)",
                     {ConstructAlignment::aligned, Measurement::minor_limitation, Design::sufficient,
                      Reporting::transparent, false});
  u.measurement_refs = {chi("C", "S1_m1"), chi("C", "S1_m2")};
  u.study_log = StudyLogRecord{"Proxy for B → nondirectional risk", "Partial misalignment for B", "Adequate for R2"};
  u.tier_table = TierTableRecord{"Association between A and C via m1–m3 mapping", "Clear construct A; transparent m1",
                                 "Proxy for B"};
  return u;
}

EvidentialUnit toy_s2() {
  auto u = base_unit("S2", "Cross-sectional (Abstract)",
                     {ConstructAlignment::partial, Measurement::conditional_proxy, Design::sufficient,
                      Reporting::ambiguous, false});
  u.explicit_assumptions = {DeclaredAssumption{
      "S2_a1", "Ambiguous A/B readings are usable as conditional proxies.",
      {Dimension::construct_alignment, Dimension::measurement, Dimension::reporting}}};
  u.measurement_refs = {chi("C", "S2_m1")};
  u.study_log = StudyLogRecord{"Ambiguous A/B attenuates the association", "Ambiguous A/B", "Sensitivity use only"};
  u.tier_table = TierTableRecord{"Agreement of m1 and m2 with A and B", "Independent sample", "Ambiguous A/B"};
  return u;
}

EvidentialUnit toy_s3() {
  auto u = base_unit("S3", "Unreported (Abstract)",
                     {ConstructAlignment::mismatch, Measurement::failed, Design::sufficient, Reporting::opaque, false});
  u.study_log = StudyLogRecord{"Unreported design elements; nondirectional risk", "Non-correspondence",
                               "Recorded but not used"};
  return u;
}

Route toy_committed_route() {
  Route r;
  r.id = toy_route("R2");
  r.project_ref = toy_project();
  r.status = RouteStatus::committed;
  r.body.construct_ref = par("P", "A");
  r.body.objective = "associational";
  r.body.assumptions = {assumption("R2_a1", "m1 valid for A", {toy_unit("S1")}),
                        assumption("R2_a2", "proxy B monotonic", {toy_unit("S2")})};
  r.body.disconfirming_models = {"C may influence B rather than vice versa"};
  r.body.rejected_alternatives = {
      RejectedAlternative{toy_route("R1"), "Comparative estimation", "No comparison groups are declared."},
      RejectedAlternative{toy_route("R3"), "Measurement evaluation", "Measurement is not the inference target."},
      RejectedAlternative{toy_route("R4"), "Predictive modeling", "Prediction does not answer the question."},
  };
  return r;
}

std::vector<Route> toy_exploratory_routes() {
  return {exploratory("R1", "comparative"), exploratory("R3", "measurement-evaluation"),
          exploratory("R4", "predictive")};
}

ReviewerBlock toy_reviewer_block() {
  ReviewerBlock rb;
  rb.project_ref = toy_project();
  rb.methodological_findings = {"Construct A measured reliably.", "Proxy B introduces potential attenuation."};
  rb.conceptual_insight = "Operationalization of B remains unstable.";
  rb.anticipated_critique = AnticipatedCritique{"Why was a stronger proxy not used?", {toy_route("R2")}};
  rb.disconfirming_model = "C may influence B rather than vice versa.";
  rb.assumptions_ref = {toy_route("R2_a1"), toy_route("R2_a2")};
  return rb;
}

AnalyticMemo toy_memo() {
  AnalyticMemo m;
  m.project_ref = toy_project();
  m.sections = {
      {"interpretation_under_assumptions", "Under R2_a1 and R2_a2 the A to C association is readable through B."},
      {"uncertainty", "The proxy for B limits precision."},
      {"boundary_evaluation", "S3 stays excluded and outside the route."},
      {"supplement_roles", "S2 evaluates measurement only."},
      {"inheritance_compliance", "No declaration rewrites inherited abstractions."},
  };
  return m;
}

ProjectBundle toy_bundle() {
  ProjectBundle b = toy_skeleton();
  int t = 0;
  for (const auto& u : {toy_s1(), toy_s2(), toy_s3()}) b = must(declare_unit(b, u, at(t++)));
  b = must(declare_tier(b, toy_unit("S1"), Tier::core, "Construct alignment", at(t++)));
  b = must(declare_tier(b, toy_unit("S2"), Tier::supplement, "Partial mismatch", at(t++)));
  b = must(declare_tier(b, toy_unit("S3"), Tier::excluded, "Definition opacity", at(t++)));
  for (const auto& r : toy_exploratory_routes()) b = must(declare_route(b, r, at(t++)));
  b = must(declare_route(b, toy_committed_route(), at(t++)));
  b = must(assign_role(b, toy_unit("S1"), {toy_route("R2"), EvidenceRole::primary_inference, ""}, at(t++)));
  b = must(assign_role(b, toy_unit("S2"),
                       {toy_route("R2"), EvidenceRole::measurement_evaluation,
                        "Measurement evaluation of m1 and m2 (exploratory R3 sketch)"},
                       at(t++)));
  b = must(freeze_route(b, toy_project(), at(t++)));
  b = must(add_reviewer_block(b, toy_reviewer_block(), at(t++)));
  b = must(add_memo(b, toy_memo(), at(t++)));
  return b;
}

namespace {

CorpusEntry entry(std::string name, const ProjectBundle& b, int exit, std::string code) {
  return CorpusEntry{std::move(name), serialize_bundle(b), exit, std::move(code)};
}

EvidentialUnit& unit_of(ProjectBundle& b, const std::string& name) { return *b.find_unit(toy_unit(name)); }

// Adds a sibling child layer D under P with one definition.
void add_sibling(ProjectBundle& b) {
  LayerDecl d;
  d.id = "D";
  d.kind = LayerKind::child;
  d.parent_ref = "P";
  d.definitions = {Definition{chi("D", "proxy_b"), "D reads B through parent:P:m2 as a monotonic proxy.", false}};
  b.layers.push_back(d);
}

}  // namespace

std::vector<CorpusEntry> corpus() {
  const ProjectBundle toy = toy_bundle();
  int t = 100;
  std::vector<CorpusEntry> out;

  // --- exit 0 ---
  out.push_back(entry("toy.json", toy, 0, ""));
  {
    ProjectBundle b;
    b.recap_version = "v1.0";
    b.layers.push_back(make_grandparent("G", "v1.0"));
    out.push_back(entry("minimal.json", b, 0, ""));
  }
  {
    Json doc = bundle_to_json(toy);
    doc["x_extension"] = {{"note", "ignored by this engine"}};
    out.push_back(CorpusEntry{"unknown_key.json", doc.dump(2) + "\n", 0, "W_UNKNOWN_KEY"});
  }

  // --- exit 1: contamination ---
  {
    FlowEvent f;
    f.id = "f_m1_to_g";
    f.source_layer = "C";
    f.dest_layer = "G";
    f.info_class = InfoClass::measurement;
    f.payload = "m1 redefines A";
    f.timestamp = ts(t);
    out.push_back(entry("contaminated_upward.json", must(record_flow(toy, f, at(t))), 1, "R1_upward_content"));
  }
  {
    ProjectBundle b = toy;
    b.find_layer("C")->definitions.push_back(
        Definition{chi("C", "A"), "A means whatever child:C:S1_m1 measures", false});
    out.push_back(entry("downward_rewrite.json", b, 1, "R2_downward_rewrite"));
  }
  {
    ProjectBundle b = toy;
    add_sibling(b);
    b.find_layer("C")->definitions.push_back(
        Definition{chi("C", "S2_m2"), "S2 reuses child:D:proxy_b for B.", false});
    out.push_back(entry("horizontal_borrow.json", b, 1, "R3_horizontal_borrowing"));
  }
  {
    ProjectBundle b = toy;
    add_sibling(b);
    BoundaryContract c{"ct_content", InfoClass::content, "D", "C", "Shared reading of B.", true, 1};
    b = must(add_contract(b, c, at(t)));
    FlowEvent f;
    f.id = "f_assumption_d_to_c";
    f.source_layer = "D";
    f.dest_layer = "C";
    f.info_class = InfoClass::assumption;
    f.payload = "proxy B monotonic";
    f.contract_ref = "ct_content";
    f.timestamp = ts(t + 1);
    b = must(record_flow(b, f, at(t + 1)));
    out.push_back(entry("missing_contract.json", b, 1, "R4_missing_contract"));
  }

  // --- exit 1: tiering ---
  {
    ProjectBundle b = toy;
    unit_of(b, "S3").declared_tier = Tier::core;
    out.push_back(entry("tier_mismatch.json", b, 1, "E_TIER_MISMATCH"));
  }
  {
    ProjectBundle b = toy;
    ReTierEvent e;
    e.timestamp = ts(t);
    e.justification = "Reread the report.";
    e.implications_for_route = "None.";
    e.old_tier = Tier::supplement;
    e.new_tier = Tier::supplement;
    unit_of(b, "S2").retier_events.push_back(e);
    out.push_back(entry("silent_retier.json", b, 1, "E_SILENT_RETIER"));
  }

  // --- exit 1: routing ---
  {
    ProjectBundle b = toy;
    b.find_route(toy_route("R1"))->status = RouteStatus::committed;
    out.push_back(entry("second_route.json", b, 1, "E_SECOND_ROUTE"));
  }
  {
    ProjectBundle b = toy;
    b.find_route(toy_route("R2"))->frozen_at.clear();
    out.push_back(entry("unfrozen_route.json", b, 1, "E_ROUTE_NOT_FROZEN"));
  }
  {
    ProjectBundle b = toy;
    unit_of(b, "S3").assignment = EvidenceRoleAssignment{toy_route("R2"), EvidenceRole::contextual, ""};
    out.push_back(entry("excluded_assigned.json", b, 1, "E_EXCLUDED_ASSIGNED"));
  }

  // --- exit 1: outputs and layers ---
  {
    ProjectBundle b = toy;
    for (auto& u : b.units) u.study_log.reset();
    out.push_back(entry("no_study_log.json", b, 1, "E_NO_STUDY_LOG"));
  }
  {
    ProjectBundle b = toy;
    b.reviewer_blocks.front().methodological_findings.pop_back();
    out.push_back(entry("bad_reviewer_block.json", b, 1, "E_RB_FINDINGS"));
  }
  {
    ProjectBundle b = toy;
    b.grandparent()->laws[1].text = "A project may pursue several routes in parallel.";
    out.push_back(entry("law_rewritten.json", b, 1, "E_CORE_TOUCHED"));
  }

  // --- exit 2: unreadable documents ---
  {
    auto text = serialize_bundle(toy);
    out.push_back(CorpusEntry{"malformed_syntax.json", text.substr(0, text.size() / 2), 2, "E_SYNTAX"});
  }
  {
    Json doc = bundle_to_json(toy);
    doc["units"][0]["measurement_refs"].push_back("child:C:nowhere");
    out.push_back(CorpusEntry{"dangling_ref.json", doc.dump(2) + "\n", 2, "E_UNRESOLVED_REF"});
  }
  {
    Json doc = bundle_to_json(toy);
    Json layers = Json::array();
    for (const auto& l : doc["layers"])
      if (l.value("kind", "") != "grandparent") layers.push_back(l);
    doc["layers"] = layers;
    out.push_back(CorpusEntry{"no_grandparent.json", doc.dump(2) + "\n", 2, "E_NO_GRANDPARENT"});
  }
  return out;
}

std::string fixture_path(const std::string& name) { return std::string(RECAP_FIXTURE_DIR) + "/" + name; }

}  // namespace recap::fixtures
