#include "generators.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "recap/bundle_format.hpp"
#include "recap/tiering.hpp"

namespace recap::gen {

using fixtures::chi;
using fixtures::gp;
using fixtures::par;

// ---------------------------------------------------------------------------
// Tiering
// ---------------------------------------------------------------------------

namespace {

const std::vector<ConstructAlignment> kAlign = {ConstructAlignment::aligned, ConstructAlignment::partial,
                                                ConstructAlignment::mismatch};
const std::vector<Measurement> kMeasure = {Measurement::adequate, Measurement::minor_limitation,
                                           Measurement::conditional_proxy, Measurement::failed};
const std::vector<Design> kDesign = {Design::sufficient, Design::limited, Design::incompatible};
const std::vector<Reporting> kReport = {Reporting::transparent, Reporting::ambiguous, Reporting::opaque};
const std::vector<Dimension> kDims = {Dimension::construct_alignment, Dimension::measurement, Dimension::design,
                                      Dimension::reporting};

// Grade of one dimension value.
enum class Grade { clean, qualified, opaque_or_mismatch, unusable };

Grade grade(ConstructAlignment v) {
  static const std::map<ConstructAlignment, Grade> t = {{ConstructAlignment::aligned, Grade::clean},
                                                         {ConstructAlignment::partial, Grade::qualified},
                                                         {ConstructAlignment::mismatch, Grade::opaque_or_mismatch}};
  return t.at(v);
}
Grade grade(Measurement v) {
  static const std::map<Measurement, Grade> t = {{Measurement::adequate, Grade::clean},
                                                  {Measurement::minor_limitation, Grade::clean},
                                                  {Measurement::conditional_proxy, Grade::qualified},
                                                  {Measurement::failed, Grade::unusable}};
  return t.at(v);
}
Grade grade(Design v) {
  static const std::map<Design, Grade> t = {
      {Design::sufficient, Grade::clean}, {Design::limited, Grade::qualified}, {Design::incompatible, Grade::unusable}};
  return t.at(v);
}
Grade grade(Reporting v) {
  static const std::map<Reporting, Grade> t = {{Reporting::transparent, Grade::clean},
                                                {Reporting::ambiguous, Grade::qualified},
                                                {Reporting::opaque, Grade::opaque_or_mismatch}};
  return t.at(v);
}

template <class T>
std::optional<T> worse(T v, const std::vector<T>& scale) {
  auto it = std::find(scale.begin(), scale.end(), v);
  if (it == scale.end() || it + 1 == scale.end()) return std::nullopt;
  return *(it + 1);
}

}  // namespace

std::vector<Assessment> all_assessments() {
  std::vector<Assessment> out;
  for (auto al : kAlign)
    for (auto me : kMeasure)
      for (auto de : kDesign)
        for (auto re : kReport)
          for (bool spec : {false, true}) out.push_back(Assessment{al, me, de, re, spec});
  return out;
}

std::vector<DeclaredAssumption> assumptions_covering(const std::vector<Dimension>& dims) {
  std::vector<DeclaredAssumption> out;
  for (auto d : dims)
    out.push_back(DeclaredAssumption{std::string("cover_") + to_string(d), std::string("Assumed usable despite ") +
                                                                             to_string(d) + " limits.",
                                     {d}});
  return out;
}

std::vector<TierCase> tier_cases() {
  std::vector<TierCase> out;
  for (const auto& a : all_assessments())
    for (bool covered : {false, true}) out.push_back(TierCase{a, covered});
  return out;
}

OracleTier oracle_tier(const Assessment& a, const std::vector<Dimension>& covered) {
  const std::pair<Dimension, Grade> grades[] = {{Dimension::construct_alignment, grade(a.construct_alignment)},
                                                {Dimension::measurement, grade(a.measurement)},
                                                {Dimension::design, grade(a.design)},
                                                {Dimension::reporting, grade(a.reporting)}};
  auto any = [&](Grade g) {
    return std::any_of(std::begin(grades), std::end(grades), [&](const auto& x) { return x.second == g; });
  };
  if (any(Grade::opaque_or_mismatch)) return {Tier::excluded, "R_STEP1_MISMATCH"};
  if (a.speculation_required) return {Tier::excluded, "R_SPECULATION"};
  if (any(Grade::unusable)) return {Tier::excluded, "R_STEP3_FAILED"};
  bool qualified = false, all_covered = true;
  for (const auto& [dim, g] : grades) {
    if (g != Grade::qualified) continue;
    qualified = true;
    all_covered = all_covered && std::find(covered.begin(), covered.end(), dim) != covered.end();
  }
  if (!qualified) return {Tier::core, "R_CORE"};
  if (all_covered) return {Tier::supplement, "R_SUPPLEMENT_COVERED"};
  return {Tier::excluded, "R_UNCOVERED_AMBIGUITY"};
}

std::vector<Assessment> single_step_degradations(const Assessment& a) {
  std::vector<Assessment> out;
  if (auto v = worse(a.construct_alignment, kAlign)) {
    auto x = a;
    x.construct_alignment = *v;
    out.push_back(x);
  }
  if (auto v = worse(a.measurement, kMeasure)) {
    auto x = a;
    x.measurement = *v;
    out.push_back(x);
  }
  if (auto v = worse(a.design, kDesign)) {
    auto x = a;
    x.design = *v;
    out.push_back(x);
  }
  if (auto v = worse(a.reporting, kReport)) {
    auto x = a;
    x.reporting = *v;
    out.push_back(x);
  }
  if (!a.speculation_required) {
    auto x = a;
    x.speculation_required = true;
    out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flow matrix
// ---------------------------------------------------------------------------

namespace {

const std::vector<InfoClass> kClasses = {InfoClass::content, InfoClass::measurement, InfoClass::assumption,
                                         InfoClass::methodological_insight};

struct Form {
  const char* name;
  const char* source;
  const char* dest;
};

const std::vector<Form> kForms = {
    {"self", "C", "C"},
    {"grandparent->parent", "G", "P"},
    {"parent->child", "P", "C"},
    {"grandparent->child", "G", "C"},
    {"child->parent", "C", "P"},
    {"parent->grandparent", "P", "G"},
    {"child->grandparent", "C", "G"},
    {"child->sibling", "C", "D"},
    {"child->uncle", "C", "Q"},
    {"child->cousin", "C", "E"},
    {"parent->sibling", "P", "Q"},
};

std::string contract_id(const std::string& src, const std::string& dst, InfoClass info) {
  return "k_" + src + "_" + dst + "_" + to_string(info);
}

InfoClass other_class(InfoClass info) {
  auto it = std::find(kClasses.begin(), kClasses.end(), info);
  return kClasses[(static_cast<std::size_t>(it - kClasses.begin()) + 1) % kClasses.size()];
}

LayerDecl layer(const std::string& id, LayerKind kind, const std::string& parent, std::vector<std::string> vocab = {}) {
  LayerDecl l;
  l.id = id;
  l.kind = kind;
  l.parent_ref = parent;
  if (kind == LayerKind::parent) l.version = id + "1.0";
  l.vocabulary = std::move(vocab);
  return l;
}

const std::vector<std::string>& gp_vocabulary() {
  static const std::vector<std::string> v = {"operationalization", "stability", "declared", "dimension", "construct",
                                             "measurement",        "assumption", "route",   "tier",      "evidence"};
  return v;
}

}  // namespace

std::string clean_insight_statement() { return "operationalization stability should be a declared dimension"; }

ProjectBundle flow_matrix_bundle() {
  ProjectBundle b;
  b.recap_version = "v1.0";
  b.layers.push_back(make_grandparent("G", "v1.0", {}, gp_vocabulary()));
  b.layers.push_back(layer("P", LayerKind::parent, "G", {"exposure"}));
  b.layers.push_back(layer("Q", LayerKind::parent, "G", {"outcome"}));
  b.layers.push_back(layer("C", LayerKind::child, "P"));
  b.layers.push_back(layer("D", LayerKind::child, "P"));
  b.layers.push_back(layer("E", LayerKind::child, "Q"));
  // Event 1 documents every contract.
  FlowEvent doc;
  doc.id = "contract_review";
  doc.source_layer = "G";
  doc.dest_layer = "P";
  doc.info_class = InfoClass::content;
  doc.payload = "Boundary contracts reviewed.";
  doc.timestamp = fixtures::ts(0);
  b = fixtures::must(record_flow(b, doc, fixtures::at(0)));
  int t = 1;
  for (const auto& f : kForms) {
    for (auto info : kClasses) {
      BoundaryContract c{contract_id(f.source, f.dest, info), info, f.source, f.dest,
                         "Declared reuse across the boundary.", true, 1};
      b = fixtures::must(add_contract(b, c, fixtures::at(t++)));
    }
  }
  return b;
}

std::vector<FlowCase> flow_cases() {
  std::vector<FlowCase> out;
  for (const auto& f : kForms)
    for (auto info : kClasses)
      for (auto state : {ContractState::absent, ContractState::matching, ContractState::mismatched})
        out.push_back(FlowCase{f.name, f.source, f.dest, info, state});
  return out;
}

FlowEvent flow_for(const FlowCase& c) {
  FlowEvent f;
  f.id = "case";
  f.source_layer = c.source;
  f.dest_layer = c.dest;
  f.info_class = c.info;
  f.payload = c.info == InfoClass::methodological_insight ? clean_insight_statement() : "proxy B monotonic";
  f.timestamp = fixtures::ts(0);
  if (c.contract == ContractState::matching) f.contract_ref = contract_id(c.source, c.dest, c.info);
  if (c.contract == ContractState::mismatched) f.contract_ref = contract_id(c.source, c.dest, other_class(c.info));
  return f;
}

ExpectedVerdict flow_truth(const FlowCase& c) {
  const bool insight = c.info == InfoClass::methodological_insight;
  const ExpectedVerdict allowed_down{true, Direction::downward, std::nullopt};
  const ExpectedVerdict r1{false, Direction::upward, RuleViolated::R1_upward_content};
  const ExpectedVerdict r5{false, Direction::upward, RuleViolated::R5_meta_engine_insulation};
  const ExpectedVerdict insight_ok{true, Direction::upward, std::nullopt};

  if (c.form == "self") return {true, std::nullopt, std::nullopt};
  if (c.form == "grandparent->parent" || c.form == "parent->child" || c.form == "grandparent->child")
    return allowed_down;
  // Contracts never matter for upward movement.
  if (c.form == "child->parent" || c.form == "parent->grandparent") return insight ? insight_ok : r1;
  if (c.form == "child->grandparent") return insight ? r5 : r1;
  // Everything else crosses sideways.
  switch (c.contract) {
    case ContractState::absent: return {false, Direction::horizontal, RuleViolated::R3_horizontal_borrowing};
    case ContractState::matching: return {true, Direction::horizontal, std::nullopt};
    case ContractState::mismatched: return {false, Direction::horizontal, RuleViolated::R4_missing_contract};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Fault injection
// ---------------------------------------------------------------------------

namespace {

struct Tree {
  std::vector<std::string> parents = {"P1", "P2"};
  std::map<std::string, std::string> child_parent = {{"C1", "P1"}, {"C2", "P1"}, {"C3", "P2"}};
  std::map<std::string, int> abstractions;  // parent -> count
  std::map<std::string, int> definitions;   // child -> count
  int laws = 0;
};

std::string aname(int j) { return "a_" + std::to_string(j); }
std::string dname(int j) { return "d_" + std::to_string(j); }
std::string lname(int j) { return "l_" + std::to_string(j); }

}  // namespace

FaultBundle fault_bundle(Rng& rng, int k) {
  Tree tree;
  tree.laws = uniform(rng, 1, 3);
  ProjectBundle b;
  b.recap_version = "v1.0";
  LawSet extra;
  for (int j = 0; j < tree.laws; ++j)
    extra.push_back(Law{gp(lname(j)), "Law " + std::to_string(j) + " refines gp:anti_reification.", false, false});
  b.layers.push_back(make_grandparent("G", "v1.0", extra, gp_vocabulary()));
  for (const auto& p : tree.parents) {
    LayerDecl l = layer(p, LayerKind::parent, "G");
    int n = uniform(rng, 5, 7);
    tree.abstractions[p] = n;
    for (int j = 0; j < n; ++j)
      l.abstractions.push_back(Abstraction{par(p, aname(j)), AbstractionKind::construct,
                                           "Construct under gp:" + lname(uniform(rng, 0, tree.laws - 1)) + ".", {},
                                           false});
    b.layers.push_back(l);
  }
  for (const auto& [c, p] : tree.child_parent) {
    LayerDecl l = layer(c, LayerKind::child, p);
    int n = uniform(rng, 2, 4);
    tree.definitions[c] = n;
    for (int j = 0; j < n; ++j) {
      std::string text = "Reads parent:" + p + ":" + aname(uniform(rng, 0, tree.abstractions[p] - 1)) + " under gp:" +
                         lname(uniform(rng, 0, tree.laws - 1));
      if (j > 0) text += " after child:" + c + ":" + dname(j - 1);
      l.definitions.push_back(Definition{chi(c, dname(j)), text + ".", false});
    }
    b.layers.push_back(l);
  }
  // Legal movements.
  b.flows.push_back(FlowEvent{"f_down", "G", "P1", InfoClass::content, "Constraint text.", "", {}, fixtures::ts(0), false});
  b.flows.push_back(FlowEvent{"f_self", "C1", "C1", InfoClass::assumption, "Local note.", "", {}, fixtures::ts(0), false});

  FaultBundle out;
  std::map<std::string, std::set<std::string>> shadowed;  // child -> inherited names already redefined
  auto random_child = [&] {
    std::vector<std::string> cs;
    for (const auto& [c, _] : tree.child_parent) cs.push_back(c);
    return pick(rng, cs);
  };
  auto random_def = [&](const std::string& c) {
    return chi(c, dname(uniform(rng, 0, tree.definitions[c] - 1))).str();
  };
  auto random_abs = [&](const std::string& p) {
    return par(p, aname(uniform(rng, 0, tree.abstractions[p] - 1))).str();
  };

  for (int i = 0; i < k; ++i) {
    std::string tag = "inj_" + std::to_string(i);
    int kind = uniform(rng, 0, 5);
    Injection inj;
    if (kind == 0) {
      std::string target = chance(rng, 0.5) ? random_abs(pick(rng, tree.parents)) : random_def(random_child());
      b.grandparent()->laws.push_back(Law{gp("l_" + tag), "Law citing " + target + ".", false, false});
      inj = {"gp_cites_lower", gp("l_" + tag).str(), Direction::upward, RuleViolated::R1_upward_content};
    } else if (kind == 1) {
      std::string p = pick(rng, tree.parents);
      std::string c = p == "P1" ? (chance(rng, 0.5) ? "C1" : "C2") : "C3";
      b.find_layer(p)->abstractions.push_back(Abstraction{par(p, "a_" + tag), AbstractionKind::construct,
                                                          "Abstraction citing " + random_def(c) + ".", {}, false});
      inj = {"parent_cites_child", par(p, "a_" + tag).str(), Direction::upward, RuleViolated::R1_upward_content};
    } else if (kind == 2) {
      std::string c = random_child();
      const std::string& p = tree.child_parent[c];
      std::vector<std::string> free;
      for (int j = 0; j < tree.abstractions[p]; ++j)
        if (!shadowed[c].count(aname(j))) free.push_back(aname(j));
      std::string name = pick(rng, free);
      shadowed[c].insert(name);
      b.find_layer(c)->definitions.push_back(Definition{chi(c, name), "Local redefinition of " + name + ".", false});
      inj = {"child_shadows_parent", chi(c, name).str(), Direction::downward, RuleViolated::R2_downward_rewrite};
    } else if (kind == 3) {
      std::string c = chance(rng, 0.5) ? "C1" : "C2";
      std::string sibling = c == "C1" ? "C2" : "C1";
      b.find_layer(c)->definitions.push_back(
          Definition{chi(c, "d_" + tag), "Borrows " + random_def(sibling) + ".", false});
      inj = {"child_cites_sibling", chi(c, "d_" + tag).str(), Direction::horizontal,
             RuleViolated::R3_horizontal_borrowing};
    } else if (kind == 4) {
      std::string c = random_child();
      std::string uncle = tree.child_parent[c] == "P1" ? "P2" : "P1";
      b.find_layer(c)->definitions.push_back(
          Definition{chi(c, "d_" + tag), "Borrows " + random_abs(uncle) + ".", false});
      inj = {"child_cites_uncle", chi(c, "d_" + tag).str(), Direction::horizontal,
             RuleViolated::R3_horizontal_borrowing};
    } else {
      FlowEvent f;
      f.id = "f_" + tag;
      f.payload = "Moved text.";
      f.timestamp = fixtures::ts(i + 1);
      switch (uniform(rng, 0, 3)) {
        case 0:
          f.source_layer = random_child();
          f.dest_layer = "G";
          f.info_class = InfoClass::content;
          inj = {"flow_upward", "", Direction::upward, RuleViolated::R1_upward_content};
          break;
        case 1:
          f.source_layer = "C1";
          f.dest_layer = "C2";
          f.info_class = InfoClass::assumption;
          inj = {"flow_sideways", "", Direction::horizontal, RuleViolated::R3_horizontal_borrowing};
          break;
        case 2:
          f.source_layer = "P1";
          f.dest_layer = "P2";
          f.info_class = InfoClass::measurement;
          inj = {"flow_parents", "", Direction::horizontal, RuleViolated::R3_horizontal_borrowing};
          break;
        default:
          f.source_layer = random_child();
          f.dest_layer = "G";
          f.info_class = InfoClass::methodological_insight;
          f.payload = clean_insight_statement();
          inj = {"flow_insight_skip", "", Direction::upward, RuleViolated::R5_meta_engine_insulation};
          break;
      }
      inj.site = "flow:" + f.id;
      b.flows.push_back(f);
    }
    out.injected.push_back(inj);
  }
  out.bundle = std::move(b);
  return out;
}

// ---------------------------------------------------------------------------
// Reporting partition
// ---------------------------------------------------------------------------

namespace {

std::vector<DeclaredAssumption> random_assumptions(Rng& rng, const std::vector<Assessment>& interps) {
  std::set<Dimension> dims;
  if (chance(rng, 0.6)) {
    for (const auto& a : interps)
      for (auto d : sub_core_dimensions(a)) dims.insert(d);
  } else {
    for (auto d : kDims)
      if (chance(rng, 0.3)) dims.insert(d);
  }
  return assumptions_covering({dims.begin(), dims.end()});
}

Assessment random_assessment(Rng& rng) {
  static const std::vector<Assessment> all = all_assessments();
  return pick(rng, all);
}

EvidentialUnit documented_unit(Rng& rng, const std::string& name, std::vector<Assessment> interps) {
  EvidentialUnit u;
  u.study_id = chi("C", name);
  u.project_ref = fixtures::toy_project();
  u.design_type = "Observational (Abstract)";
  u.interpretations = std::move(interps);
  u.explicit_assumptions = random_assumptions(rng, u.interpretations);
  auto t = tier_unit(u);
  if (t) u.declared_tier = t.value().tier;
  u.tier_justification = "Tier follows the declared assessment.";
  u.study_log = StudyLogRecord{"Nondirectional risk from measurement.", "None noted.", "Generated unit."};
  u.tier_table = TierTableRecord{"Generated methods summary.", "Declared alignment.", "Generated limitation."};
  return u;
}

}  // namespace

ProjectBundle random_tiered_bundle(Rng& rng) {
  ProjectBundle b = fixtures::toy_skeleton();
  int n = uniform(rng, 0, 14);
  for (int i = 0; i < n; ++i) {
    std::string name = "U" + std::to_string(i);
    int kind = uniform(rng, 0, 9);
    if (kind == 0) {
      // Split unit: the original is superseded by its parts.
      std::vector<Assessment> interps = {random_assessment(rng), random_assessment(rng)};
      EvidentialUnit whole = documented_unit(rng, name, interps);
      whole.splittable = true;
      whole.declared_tier.reset();
      for (int k = 0; k < 2; ++k) {
        auto part = documented_unit(rng, name + "_" + std::to_string(k), {interps[k]});
        part.split_from = whole.study_id;
        whole.superseded_by.push_back(part.study_id);
        b.units.push_back(part);
      }
      b.units.push_back(whole);
      continue;
    }
    std::vector<Assessment> interps = {random_assessment(rng)};
    if (kind == 1) interps.push_back(random_assessment(rng));  // unsplittable, merged conservatively
    auto u = documented_unit(rng, name, interps);
    if (kind == 2) u.quarantined = true;
    if (u.declared_tier == Tier::excluded && chance(rng, 0.5)) u.tier_table.reset();
    b.units.push_back(u);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Command sequences
// ---------------------------------------------------------------------------

ProjectBundle command_skeleton() {
  ProjectBundle b = fixtures::toy_skeleton();
  b.projects.push_back(ProjectDecl{chi("C", "alt"), "C", "Does B predict C?"});
  return b;
}

namespace {

std::vector<const EvidentialUnit*> active_units(const ProjectBundle& b, const std::optional<Identifier>& project = {}) {
  std::vector<const EvidentialUnit*> out;
  for (const auto& u : b.units)
    if (u.active() && (!project || u.project_ref == *project)) out.push_back(&u);
  return out;
}

std::vector<const Route*> live_routes(const ProjectBundle& b) {
  std::vector<const Route*> out;
  for (const auto& r : b.routes)
    if (!r.quarantined) out.push_back(&r);
  return out;
}

RouteBody random_body(Rng& rng, const ProjectBundle& b, const Identifier& project, const std::string& prefix) {
  static const std::vector<std::string> objectives = {"associational", "comparative", "predictive",
                                                      "measurement-evaluation", "descriptive"};
  RouteBody body;
  body.construct_ref = par("P", pick(rng, std::vector<std::string>{"A", "B", "C"}));
  body.objective = pick(rng, objectives);
  auto units = active_units(b, project);
  int n = uniform(rng, chance(rng, 0.05) ? 0 : 1, 2);
  for (int i = 0; i < n; ++i) {
    RouteAssumption a;
    a.id = chi("C", prefix + "_a" + std::to_string(i));
    a.text = "Assumption " + std::to_string(i) + " of the route.";
    a.plausibility = "Plausible.";
    a.failure_modes = chance(rng, 0.9) ? "Measurement drift." : "";
    a.consequences_for_inference = "Weakens the estimate.";
    a.untestable_by_evidence = chance(rng, 0.25);
    if (!units.empty() && chance(rng, 0.8)) a.tested_by.push_back(pick(rng, units)->study_id);
    body.assumptions.push_back(a);
  }
  if (chance(rng, 0.95)) body.disconfirming_models.push_back("The association reverses under a stronger proxy.");
  return body;
}

Json assessments_json(const std::vector<Assessment>& interps) {
  Json arr = Json::array();
  for (const auto& a : interps) arr.push_back(to_json(a));
  return arr;
}

Json assumptions_json(const std::vector<DeclaredAssumption>& as) {
  Json arr = Json::array();
  for (const auto& a : as) {
    Json covers = Json::array();
    for (auto d : a.covers) covers.push_back(to_string(d));
    arr.push_back({{"id", a.id}, {"text", a.text}, {"covers", covers}});
  }
  return arr;
}

Tier random_tier(Rng& rng) { return static_cast<Tier>(uniform(rng, 0, 2)); }

}  // namespace

Json CommandGenerator::next(const ProjectBundle& b, int step) {
  Rng& rng = rng_;
  Json cmd = {{"at", fixtures::ts(step)}, {"actor", "generator"}};
  const std::vector<Identifier> projects = {fixtures::toy_project(), chi("C", "alt")};
  auto units = active_units(b);
  auto routes = live_routes(b);
  int n = counter_++;

  // Weighted choice of operation; unavailable ones fall back to declare_unit.
  static const std::vector<std::pair<const char*, int>> kWeights = {
      {"declare_unit", 14}, {"declare_tier", 14}, {"update_assessment", 6}, {"retier", 8},
      {"split_unit", 3},    {"declare_route", 12}, {"edit_route", 8},       {"freeze_route", 10},
      {"revise_route", 10}, {"assign_role", 14},  {"record_flow", 3}};
  int total = 0;
  for (const auto& [_, w] : kWeights) total += w;
  int roll = uniform(rng, 1, total);
  std::string op;
  for (const auto& [name, w] : kWeights) {
    if (roll <= w) {
      op = name;
      break;
    }
    roll -= w;
  }
  bool needs_unit = op == "declare_tier" || op == "update_assessment" || op == "retier" || op == "split_unit" ||
                    op == "assign_role";
  bool needs_route = op == "edit_route" || op == "assign_role";
  if ((needs_unit && units.empty()) || (needs_route && routes.empty())) op = units.empty() ? "declare_unit" : "declare_route";
  cmd["op"] = op;

  if (op == "declare_unit") {
    EvidentialUnit u;
    u.study_id = chi("C", "U" + std::to_string(n));
    u.project_ref = pick(rng, projects);
    u.design_type = "Observational (Abstract)";
    u.interpretations = {random_assessment(rng)};
    if (chance(rng, 0.15)) {
      u.interpretations.push_back(random_assessment(rng));
      u.splittable = chance(rng, 0.5);
    }
    u.explicit_assumptions = random_assumptions(rng, u.interpretations);
    if (chance(rng, 0.2)) {
      auto t = tier_unit(u);
      u.declared_tier = t ? t.value().tier : random_tier(rng);
      u.tier_justification = "Declared on entry.";
    }
    cmd["unit"] = to_json(u);
  } else if (op == "declare_tier") {
    const auto* u = pick(rng, units);
    auto t = tier_unit(*u);
    Tier tier = t && chance(rng, 0.85) ? t.value().tier : random_tier(rng);
    cmd["unit"] = u->study_id.str();
    cmd["tier"] = to_string(tier);
    cmd["justification"] = chance(rng, 0.95) ? "Tier follows the assessment." : "";
  } else if (op == "update_assessment") {
    const auto* u = pick(rng, units);
    std::vector<Assessment> interps = chance(rng, 0.5) ? u->interpretations : std::vector<Assessment>{random_assessment(rng)};
    cmd["unit"] = u->study_id.str();
    cmd["interpretations"] = assessments_json(interps);
    cmd["assumptions"] = assumptions_json(random_assumptions(rng, interps));
  } else if (op == "retier") {
    const auto* u = pick(rng, units);
    std::vector<Assessment> interps = {random_assessment(rng)};
    auto assumptions = random_assumptions(rng, interps);
    EvidentialUnit probe = *u;
    probe.interpretations = interps;
    probe.explicit_assumptions = assumptions;
    probe.splittable = false;
    auto computed = tier_unit(probe);
    auto current = effective_tier(*u);
    ReTierEvent e;
    e.timestamp = fixtures::ts(step);
    e.source_of_information = chance(rng, 0.9) ? "Corrected report from the authors." : "";
    e.justification = "New information changes the assessment.";
    e.implications_for_route = "Role on the route is reviewed.";
    e.old_tier = current && chance(rng, 0.9) ? *current : random_tier(rng);
    e.new_tier = computed && chance(rng, 0.85) ? computed.value().tier : random_tier(rng);
    cmd["unit"] = u->study_id.str();
    cmd["event"] = to_json(e);
    cmd["interpretations"] = assessments_json(interps);
    cmd["assumptions"] = assumptions_json(assumptions);
  } else if (op == "split_unit") {
    const auto* u = pick(rng, units);
    Json names = Json::array();
    std::size_t count = chance(rng, 0.85) ? u->interpretations.size() : u->interpretations.size() + 1;
    for (std::size_t i = 0; i < count; ++i) names.push_back("U" + std::to_string(n) + "p" + std::to_string(i));
    cmd["unit"] = u->study_id.str();
    cmd["names"] = names;
  } else if (op == "declare_route") {
    Route r;
    r.id = chi("C", "R" + std::to_string(n));
    r.project_ref = pick(rng, projects);
    r.status = chance(rng, 0.5) ? RouteStatus::committed : RouteStatus::exploratory;
    r.body = random_body(rng, b, r.project_ref, r.id.local_name);
    cmd["route"] = to_json(r);
  } else if (op == "edit_route") {
    const auto* r = pick(rng, routes);
    cmd["route"] = r->id.str();
    cmd["body"] = to_json(random_body(rng, b, r->project_ref, r->id.local_name + "e" + std::to_string(n)));
  } else if (op == "freeze_route") {
    cmd["project"] = pick(rng, projects).str();
  } else if (op == "revise_route") {
    auto project = pick(rng, projects);
    const Route* r = b.committed_route(project);
    std::string prefix = (r ? r->id.local_name : std::string("R")) + "v" + std::to_string(n);
    RouteRevision rev;
    rev.timestamp = fixtures::ts(step);
    rev.justification = "New evidence changes an assumption.";
    rev.downstream_implications = chance(rng, 0.9) ? "Units are re-checked against the route." : "";
    rev.change_description = "Assumptions restated.";
    cmd["project"] = project.str();
    cmd["revision"] = to_json(rev);
    cmd["body"] = to_json(random_body(rng, b, project, prefix));
  } else if (op == "assign_role") {
    const auto* u = pick(rng, units);
    const Route* r = b.committed_route(u->project_ref);
    if (!r || chance(rng, 0.2)) r = pick(rng, routes);
    auto tier = current_tier(*u);
    EvidenceRole role;
    if (tier == Tier::core && chance(rng, 0.8)) role = EvidenceRole::primary_inference;
    else if (tier == Tier::supplement && chance(rng, 0.8))
      role = static_cast<EvidenceRole>(uniform(rng, 1, 4));
    else role = static_cast<EvidenceRole>(uniform(rng, 0, 4));
    cmd["unit"] = u->study_id.str();
    cmd["assignment"] = {{"route_ref", r->id.str()}, {"role", to_string(role)}};
  } else {  // record_flow
    static const std::vector<std::string> layers = {"G", "P", "C"};
    FlowEvent f;
    f.id = "f" + std::to_string(n);
    f.source_layer = pick(rng, layers);
    f.dest_layer = pick(rng, layers);
    f.info_class = static_cast<InfoClass>(uniform(rng, 0, 3));
    f.payload = f.info_class == InfoClass::methodological_insight ? clean_insight_statement() : "Moved text.";
    f.timestamp = fixtures::ts(step);
    cmd["flow"] = to_json(f);
  }
  return cmd;
}

// ---------------------------------------------------------------------------
// Law evolution
// ---------------------------------------------------------------------------

const char* to_string(BumpKind k) {
  switch (k) {
    case BumpKind::append: return "append";
    case BumpKind::rescind: return "rescind";
    case BumpKind::rewrite: return "rewrite";
    case BumpKind::touch_core: return "touch_core";
    case BumpKind::upward_text: return "upward_text";
    case BumpKind::stale_version: return "stale_version";
    case BumpKind::incomplete: return "incomplete";
  }
  return "append";
}

BumpAttempt random_bump(Rng& rng, const ProjectBundle& current, int step) {
  const LayerDecl* g = current.grandparent();
  auto v = parse_version(g->version).value();
  Version to = chance(rng, 0.1) ? Version{v.major + 1, 0} : Version{v.major, v.minor + 1};
  auto render = [](const Version& x) { return "v" + std::to_string(x.major) + "." + std::to_string(x.minor); };

  BumpAttempt a;
  a.entry.from_version = g->version;
  a.entry.to_version = render(to);
  a.entry.motivating_insight = "Repeated projects left tier justifications unstated.";
  a.entry.boundary_affected = "Tiering documentation.";
  a.entry.generalizability_reasoning = "The gap appears regardless of domain.";
  a.entry.timestamp = fixtures::ts(step);
  a.laws = g->laws;
  Law added{gp("l_step_" + std::to_string(step)), "Each declared tier cites the evidence dimension it rests on.",
            false, false};

  static const std::vector<std::pair<BumpKind, int>> kWeights = {
      {BumpKind::append, 40},     {BumpKind::rescind, 10},       {BumpKind::rewrite, 10},
      {BumpKind::touch_core, 10}, {BumpKind::upward_text, 10},   {BumpKind::stale_version, 10},
      {BumpKind::incomplete, 10}};
  int roll = uniform(rng, 1, 100);
  for (const auto& [kind, w] : kWeights) {
    if (roll <= w) {
      a.kind = kind;
      break;
    }
    roll -= w;
  }
  a.must_reject = a.kind != BumpKind::append;
  switch (a.kind) {
    case BumpKind::append:
      a.laws.push_back(added);
      break;
    case BumpKind::rescind:
      a.laws.erase(a.laws.begin() + uniform(rng, 0, static_cast<int>(a.laws.size()) - 1));
      a.laws.push_back(added);
      break;
    case BumpKind::rewrite: {
      auto& law = a.laws[uniform(rng, 0, static_cast<int>(a.laws.size()) - 1)];
      law.text += " Amended.";
      break;
    }
    case BumpKind::touch_core: {
      auto& law = a.laws[uniform(rng, 0, static_cast<int>(core_laws().size()) - 1)];
      if (chance(rng, 0.5)) law.immutable_core = false;
      else law.text = "Replaced.";
      break;
    }
    case BumpKind::upward_text:
      added.text = "Every project treats parent:P:m1 as the definition of parent:P:A.";
      a.laws.push_back(added);
      break;
    case BumpKind::stale_version:
      a.laws.push_back(added);
      if (chance(rng, 0.5)) a.entry.to_version = a.entry.from_version;
      else a.entry.from_version = render(Version{v.major, v.minor + 7});
      break;
    case BumpKind::incomplete:
      a.laws.push_back(added);
      a.entry.generalizability_reasoning = " ";
      break;
  }
  return a;
}

}  // namespace recap::gen
