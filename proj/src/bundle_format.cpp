#include "recap/bundle_format.hpp"

#include <algorithm>
#include <set>

#include "recap/references.hpp"

namespace recap {

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

namespace {

// Ordered objects are vectors of pairs with const keys, so growing one copies
// every member. Encoders reserve their capacity up front and move subtrees in.
Json object(std::size_t capacity) {
  Json j = Json::object();
  j.get_ref<Json::object_t&>().reserve(capacity);
  return j;
}

Json ids_json(const std::vector<Identifier>& ids) {
  Json arr = Json::array();
  for (const auto& id : ids) arr.push_back(id.str());
  return arr;
}

Json strings_json(const std::vector<std::string>& v) {
  Json arr = Json::array();
  for (const auto& s : v) arr.push_back(s);
  return arr;
}

template <class T>
Json list_json(const std::vector<T>& items) {
  Json arr = Json::array();
  arr.get_ref<Json::array_t&>().reserve(items.size());
  for (const auto& x : items) arr.push_back(to_json(x));
  return arr;
}

}  // namespace

Json to_json(const Law& v) {
  Json j = object(4);
  j["id"] = v.id.str();
  j["text"] = v.text;
  j["immutable_core"] = v.immutable_core;
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

Json to_json(const LawSet& v) { return list_json(v); }

Json to_json(const Abstraction& v) {
  Json j = object(5);
  j["id"] = v.id.str();
  j["kind"] = to_string(v.kind);
  j["definition"] = v.definition;
  if (!v.correspondence.empty()) {
    Json c = object(v.correspondence.size());
    for (const auto& [m, k] : v.correspondence) c[m.str()] = k.str();
    j["correspondence"] = std::move(c);
  }
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

Json to_json(const Definition& v) {
  Json j = object(3);
  j["id"] = v.id.str();
  j["text"] = v.text;
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

Json to_json(const LayerDecl& v) {
  Json j = object(8);
  j["id"] = v.id;
  j["kind"] = to_string(v.kind);
  if (!v.parent_ref.empty()) j["parent_ref"] = v.parent_ref;
  j["version"] = v.version;
  if (v.kind == LayerKind::grandparent || !v.laws.empty()) j["laws"] = to_json(v.laws);
  if (v.kind == LayerKind::parent || !v.abstractions.empty()) j["abstractions"] = list_json(v.abstractions);
  if (v.kind == LayerKind::child || !v.definitions.empty()) j["definitions"] = list_json(v.definitions);
  j["vocabulary"] = strings_json(v.vocabulary);
  return j;
}

Json to_json(const ProjectDecl& v) {
  Json j = object(3);
  j["id"] = v.id.str();
  j["layer"] = v.layer;
  j["question"] = v.question;
  return j;
}

Json to_json(const Assessment& v) {
  Json j = object(5);
  j["construct_alignment"] = to_string(v.construct_alignment);
  j["measurement"] = to_string(v.measurement);
  j["design"] = to_string(v.design);
  j["reporting"] = to_string(v.reporting);
  j["speculation_required"] = v.speculation_required;
  return j;
}

Json to_json(const ReTierEvent& v) {
  Json j = object(6);
  j["timestamp"] = v.timestamp;
  j["source_of_information"] = v.source_of_information;
  j["justification"] = v.justification;
  j["implications_for_route"] = v.implications_for_route;
  j["old_tier"] = to_string(v.old_tier);
  j["new_tier"] = to_string(v.new_tier);
  return j;
}

Json to_json(const EvidentialUnit& v) {
  Json j = object(18);
  j["study_id"] = v.study_id.str();
  j["project_ref"] = v.project_ref.str();
  j["design_type"] = v.design_type;
  j["interpretations"] = list_json(v.interpretations);
  j["splittable"] = v.splittable;
  if (v.declared_tier) j["declared_tier"] = to_string(*v.declared_tier);
  j["tier_justification"] = v.tier_justification;
  Json assumptions = Json::array();
  for (const auto& a : v.explicit_assumptions) {
    Json covers = Json::array();
    for (auto d : a.covers) covers.push_back(to_string(d));
    Json aj = object(3);
    aj["id"] = a.id;
    aj["text"] = a.text;
    aj["covers"] = std::move(covers);
    assumptions.push_back(std::move(aj));
  }
  j["explicit_assumptions"] = std::move(assumptions);
  j["retier_events"] = list_json(v.retier_events);
  j["measurement_refs"] = ids_json(v.measurement_refs);
  if (!v.contradicts_assumptions.empty()) j["contradicts_assumptions"] = ids_json(v.contradicts_assumptions);
  if (v.assignment) {
    Json a = object(3);
    a["route_ref"] = v.assignment->route_ref.str();
    a["role"] = to_string(v.assignment->role);
    if (!v.assignment->route_sketch.empty()) a["route_sketch"] = v.assignment->route_sketch;
    j["assignment"] = std::move(a);
  }
  if (v.study_log) {
    Json s = object(3);
    s["bias_considerations"] = v.study_log->bias_considerations;
    s["measurement_definition_issues"] = v.study_log->measurement_definition_issues;
    s["notes"] = v.study_log->notes;
    j["study_log"] = std::move(s);
  }
  if (v.tier_table) {
    Json t = object(3);
    t["methods_summary"] = v.tier_table->methods_summary;
    t["strengths"] = v.tier_table->strengths;
    t["limitations"] = v.tier_table->limitations;
    j["tier_table"] = std::move(t);
  }
  if (v.split_from) j["split_from"] = v.split_from->str();
  if (!v.superseded_by.empty()) j["superseded_by"] = ids_json(v.superseded_by);
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

namespace {

void encode_route_body(const RouteBody& v, Json& j) {
  j["construct_ref"] = v.construct_ref.str();
  j["objective"] = v.objective;
  Json assumptions = Json::array();
  for (const auto& a : v.assumptions) {
    Json aj = object(7);
    aj["id"] = a.id.str();
    aj["text"] = a.text;
    aj["plausibility"] = a.plausibility;
    aj["failure_modes"] = a.failure_modes;
    aj["consequences_for_inference"] = a.consequences_for_inference;
    aj["tested_by"] = ids_json(a.tested_by);
    if (a.untestable_by_evidence) aj["untestable_by_evidence"] = true;
    assumptions.push_back(std::move(aj));
  }
  j["assumptions"] = std::move(assumptions);
  j["disconfirming_models"] = strings_json(v.disconfirming_models);
  Json alts = Json::array();
  for (const auto& alt : v.rejected_alternatives) {
    Json aj = object(3);
    if (alt.route_ref) aj["route_ref"] = alt.route_ref->str();
    aj["sketch"] = alt.sketch;
    aj["rationale"] = alt.rationale;
    alts.push_back(std::move(aj));
  }
  j["rejected_alternatives"] = std::move(alts);
}

}  // namespace

Json to_json(const RouteBody& v) {
  Json j = object(5);
  encode_route_body(v, j);
  return j;
}

Json to_json(const RouteRevision& v) {
  Json j = object(4);
  j["timestamp"] = v.timestamp;
  j["justification"] = v.justification;
  j["downstream_implications"] = v.downstream_implications;
  j["change_description"] = v.change_description;
  return j;
}

Json to_json(const Route& v) {
  Json j = object(11);
  j["id"] = v.id.str();
  j["project_ref"] = v.project_ref.str();
  j["status"] = to_string(v.status);
  encode_route_body(v.body, j);
  j["frozen_at"] = v.frozen_at.empty() ? Json(nullptr) : Json(v.frozen_at);
  j["revisions"] = list_json(v.revisions);
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

Json to_json(const FlowEvent& v) {
  Json j = object(9);
  j["id"] = v.id;
  j["source_layer"] = v.source_layer;
  j["dest_layer"] = v.dest_layer;
  j["info_class"] = to_string(v.info_class);
  j["payload"] = v.payload;
  if (!v.contract_ref.empty()) j["contract_ref"] = v.contract_ref;
  if (!v.modifies.empty()) j["modifies"] = ids_json(v.modifies);
  j["timestamp"] = v.timestamp;
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

Json to_json(const BoundaryContract& v) {
  Json j = object(7);
  j["id"] = v.id;
  j["info_type"] = to_string(v.info_type);
  j["origin_layer"] = v.origin_layer;
  j["destination_layer"] = v.destination_layer;
  j["legal_justification"] = v.legal_justification;
  j["no_reinterpretation_clause"] = v.no_reinterpretation_clause;
  j["documentation_ref"] = v.documentation_ref ? Json(*v.documentation_ref) : Json(nullptr);
  return j;
}

Json to_json(const ReviewerBlock& v) {
  Json j = object(7);
  j["project_ref"] = v.project_ref.str();
  j["methodological_findings"] = strings_json(v.methodological_findings);
  j["conceptual_insight"] = v.conceptual_insight;
  Json critique = object(2);
  critique["text"] = v.anticipated_critique.text;
  critique["referenced_decisions"] = ids_json(v.anticipated_critique.referenced_decisions);
  j["anticipated_critique"] = std::move(critique);
  j["disconfirming_model"] = v.disconfirming_model;
  j["assumptions_ref"] = ids_json(v.assumptions_ref);
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

Json to_json(const AnalyticMemo& v) {
  Json sections = object(v.sections.size());
  for (const auto& [k, text] : v.sections) sections[k] = text;
  Json j = object(3);
  j["project_ref"] = v.project_ref.str();
  j["sections"] = std::move(sections);
  if (v.quarantined) j["quarantined"] = true;
  return j;
}

Json to_json(const AuditEvent& v) {
  Json j = object(6);
  j["sequence"] = v.sequence;
  j["timestamp"] = v.timestamp;
  j["actor"] = v.actor;
  j["kind"] = to_string(v.kind);
  j["payload"] = v.payload;
  j["affected"] = strings_json(v.affected);
  return j;
}

Json bundle_to_json(const ProjectBundle& b) {
  Json j = object(10);
  j["recap_version"] = b.recap_version;
  j["layers"] = list_json(b.layers);
  j["projects"] = list_json(b.projects);
  j["units"] = list_json(b.units);
  j["routes"] = list_json(b.routes);
  j["flows"] = list_json(b.flows);
  j["contracts"] = list_json(b.contracts);
  j["events"] = list_json(b.events);
  j["reviewer_blocks"] = list_json(b.reviewer_blocks);
  j["memos"] = list_json(b.memos);
  return j;
}

std::string serialize_bundle(const ProjectBundle& bundle) {
  return bundle_to_json(bundle).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

namespace {

std::string child_path(const std::string& base, const std::string& key) {
  return base + "/" + key;
}
std::string child_path(const std::string& base, std::size_t i) {
  return base + "/" + std::to_string(i);
}

struct Scope {
  Namespace ns = Namespace::gp;
  std::string owner;
};

// Schema-checking reader. Problems accumulate as E_SYNTAX diagnostics; the
// caller decides when the collected model is usable.
class Reader {
 public:
  Diagnostics diags;

  void error(const std::string& path, const std::string& message) {
    diags.push_back(make_error("E_SYNTAX", path, message));
  }

  bool expect_object(const Json& j, const std::string& path) {
    if (j.is_object()) return true;
    error(path, "expected an object");
    return false;
  }

  void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> known) {
    for (const auto& [key, _] : j.items()) {
      bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
      if (!ok) diags.push_back(make_warning("W_UNKNOWN_FIELD", child_path(path, key), "unknown field '" + key + "' ignored"));
    }
  }

  std::string str(const Json& j, const char* key, const std::string& path, bool required = true) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) error(child_path(path, key), std::string("missing field '") + key + "'");
      return {};
    }
    if (!it->is_string()) {
      error(child_path(path, key), std::string("field '") + key + "' must be a string");
      return {};
    }
    return it->get<std::string>();
  }

  bool boolean(const Json& j, const char* key, const std::string& path, bool def = false) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return def;
    if (!it->is_boolean()) {
      error(child_path(path, key), std::string("field '") + key + "' must be a boolean");
      return def;
    }
    return it->get<bool>();
  }

  template <class E>
  std::optional<E> enumeration(const Json& j, const char* key, const std::string& path,
                               bool required = true) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) error(child_path(path, key), std::string("missing field '") + key + "'");
      return std::nullopt;
    }
    if (!it->is_string()) {
      error(child_path(path, key), std::string("field '") + key + "' must be a string");
      return std::nullopt;
    }
    auto v = enum_from_string<E>(it->get<std::string>());
    if (!v) error(child_path(path, key), "unknown value '" + it->get<std::string>() + "' for '" + key + "'");
    return v;
  }

  // Array field; absent means empty.
  const Json* array(const Json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    if (!it->is_array()) {
      error(child_path(path, key), std::string("field '") + key + "' must be an array");
      return nullptr;
    }
    return &*it;
  }

  std::vector<std::string> strings(const Json& j, const char* key, const std::string& path) {
    std::vector<std::string> out;
    const Json* arr = array(j, key, path);
    if (!arr) return out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      if (!v.is_string()) {
        error(child_path(child_path(path, key), i), "expected a string");
        continue;
      }
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  std::optional<Identifier> ident_value(const Json& v, const std::string& path, const Scope& scope) {
    if (!v.is_string()) {
      error(path, "identifier must be a string");
      return std::nullopt;
    }
    auto text = v.get<std::string>();
    auto id = Identifier::parse_in(text, scope.ns, scope.owner);
    if (!id) error(path, "malformed identifier '" + text + "'");
    return id;
  }

  std::optional<Identifier> ident(const Json& j, const char* key, const std::string& path,
                                  const Scope& scope, bool required = true) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) error(child_path(path, key), std::string("missing field '") + key + "'");
      return std::nullopt;
    }
    return ident_value(*it, child_path(path, key), scope);
  }

  std::vector<Identifier> idents(const Json& j, const char* key, const std::string& path,
                                 const Scope& scope) {
    std::vector<Identifier> out;
    const Json* arr = array(j, key, path);
    if (!arr) return out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      if (auto id = ident_value((*arr)[i], child_path(child_path(path, key), i), scope))
        out.push_back(*id);
    }
    return out;
  }

  // ---- records ----

  Law law(const Json& j, const std::string& path, const Scope& scope) {
    Law v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "text", "immutable_core", "quarantined"});
    if (auto id = ident(j, "id", path, scope)) v.id = *id;
    v.text = str(j, "text", path);
    v.immutable_core = boolean(j, "immutable_core", path);
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  LawSet laws(const Json& arr, const std::string& path, const Scope& scope) {
    LawSet out;
    if (!arr.is_array()) {
      error(path, "expected an array of laws");
      return out;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(law(arr[i], child_path(path, i), scope));
    return out;
  }

  Abstraction abstraction(const Json& j, const std::string& path, const Scope& scope) {
    Abstraction v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "kind", "definition", "correspondence", "quarantined"});
    if (auto id = ident(j, "id", path, scope)) v.id = *id;
    if (auto k = enumeration<AbstractionKind>(j, "kind", path)) v.kind = *k;
    v.definition = str(j, "definition", path);
    if (auto it = j.find("correspondence"); it != j.end() && !it->is_null()) {
      if (!it->is_object()) {
        error(child_path(path, "correspondence"), "correspondence must be an object");
      } else {
        for (const auto& [key, val] : it->items()) {
          auto kp = child_path(child_path(path, "correspondence"), key);
          auto m = Identifier::parse_in(key, scope.ns, scope.owner);
          if (!m) {
            error(kp, "malformed identifier '" + key + "'");
            continue;
          }
          if (auto c = ident_value(val, kp, scope)) v.correspondence[*m] = *c;
        }
      }
    }
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  Definition definition(const Json& j, const std::string& path, const Scope& scope) {
    Definition v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "text", "quarantined"});
    if (auto id = ident(j, "id", path, scope)) v.id = *id;
    v.text = str(j, "text", path);
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  LayerDecl layer(const Json& j, const std::string& path) {
    LayerDecl v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "kind", "parent_ref", "version", "laws", "abstractions", "definitions", "vocabulary"});
    v.id = str(j, "id", path);
    if (!v.id.empty() && !is_valid_name(v.id)) error(child_path(path, "id"), "malformed layer id '" + v.id + "'");
    if (auto k = enumeration<LayerKind>(j, "kind", path)) v.kind = *k;
    v.parent_ref = str(j, "parent_ref", path, false);
    v.version = str(j, "version", path, false);
    if (const Json* arr = array(j, "laws", path))
      v.laws = laws(*arr, child_path(path, "laws"), Scope{Namespace::gp, ""});
    if (const Json* arr = array(j, "abstractions", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i)
        v.abstractions.push_back(abstraction((*arr)[i], child_path(child_path(path, "abstractions"), i),
                                             Scope{Namespace::parent, v.id}));
    }
    if (const Json* arr = array(j, "definitions", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i)
        v.definitions.push_back(definition((*arr)[i], child_path(child_path(path, "definitions"), i),
                                           Scope{Namespace::child, v.id}));
    }
    v.vocabulary = strings(j, "vocabulary", path);
    return v;
  }

  ProjectDecl project(const Json& j, const std::string& path) {
    ProjectDecl v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "layer", "question"});
    v.layer = str(j, "layer", path);
    if (auto id = ident(j, "id", path, Scope{Namespace::child, v.layer})) v.id = *id;
    v.question = str(j, "question", path, false);
    return v;
  }

  Assessment assessment(const Json& j, const std::string& path) {
    Assessment v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"construct_alignment", "measurement", "design", "reporting", "speculation_required"});
    if (auto x = enumeration<ConstructAlignment>(j, "construct_alignment", path)) v.construct_alignment = *x;
    if (auto x = enumeration<Measurement>(j, "measurement", path)) v.measurement = *x;
    if (auto x = enumeration<Design>(j, "design", path)) v.design = *x;
    if (auto x = enumeration<Reporting>(j, "reporting", path)) v.reporting = *x;
    if (!j.contains("speculation_required")) error(child_path(path, "speculation_required"), "missing field 'speculation_required'");
    v.speculation_required = boolean(j, "speculation_required", path);
    return v;
  }

  ReTierEvent retier(const Json& j, const std::string& path) {
    ReTierEvent v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"timestamp", "source_of_information", "justification", "implications_for_route", "old_tier", "new_tier"});
    v.timestamp = str(j, "timestamp", path);
    v.source_of_information = str(j, "source_of_information", path);
    v.justification = str(j, "justification", path);
    v.implications_for_route = str(j, "implications_for_route", path);
    if (auto t = enumeration<Tier>(j, "old_tier", path)) v.old_tier = *t;
    if (auto t = enumeration<Tier>(j, "new_tier", path)) v.new_tier = *t;
    return v;
  }

  DeclaredAssumption declared_assumption(const Json& aj, const std::string& ap) {
    DeclaredAssumption a;
    if (!expect_object(aj, ap)) return a;
    check_keys(aj, ap, {"id", "text", "covers"});
    a.id = str(aj, "id", ap);
    a.text = str(aj, "text", ap);
    for (const auto& name : strings(aj, "covers", ap)) {
      if (auto d = enum_from_string<Dimension>(name)) a.covers.push_back(*d);
      else error(child_path(ap, "covers"), "unknown dimension '" + name + "'");
    }
    if (a.covers.empty()) error(child_path(ap, "covers"), "an assumption must cover at least one dimension");
    return a;
  }

  EvidentialUnit unit(const Json& j, const std::string& path, const Scope& scope) {
    EvidentialUnit v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"study_id", "project_ref", "design_type", "interpretations", "splittable",
                         "declared_tier", "tier_justification", "explicit_assumptions", "retier_events",
                         "measurement_refs", "contradicts_assumptions", "assignment", "study_log",
                         "tier_table", "split_from", "superseded_by", "quarantined"});
    if (auto id = ident(j, "study_id", path, scope)) v.study_id = *id;
    if (auto id = ident(j, "project_ref", path, scope)) v.project_ref = *id;
    v.design_type = str(j, "design_type", path, false);
    if (const Json* arr = array(j, "interpretations", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i)
        v.interpretations.push_back(assessment((*arr)[i], child_path(child_path(path, "interpretations"), i)));
    }
    if (v.interpretations.empty()) error(child_path(path, "interpretations"), "a unit needs at least one interpretation");
    v.splittable = boolean(j, "splittable", path);
    v.declared_tier = enumeration<Tier>(j, "declared_tier", path, false);
    v.tier_justification = str(j, "tier_justification", path, false);
    if (const Json* arr = array(j, "explicit_assumptions", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i)
        v.explicit_assumptions.push_back(
            declared_assumption((*arr)[i], child_path(child_path(path, "explicit_assumptions"), i)));
    }
    if (const Json* arr = array(j, "retier_events", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i)
        v.retier_events.push_back(retier((*arr)[i], child_path(child_path(path, "retier_events"), i)));
    }
    v.measurement_refs = idents(j, "measurement_refs", path, scope);
    v.contradicts_assumptions = idents(j, "contradicts_assumptions", path, scope);
    if (auto it = j.find("assignment"); it != j.end() && !it->is_null()) {
      auto ap = child_path(path, "assignment");
      if (expect_object(*it, ap)) {
        check_keys(*it, ap, {"route_ref", "role", "route_sketch"});
        EvidenceRoleAssignment a;
        if (auto r = ident(*it, "route_ref", ap, scope)) a.route_ref = *r;
        if (auto role = enumeration<EvidenceRole>(*it, "role", ap)) a.role = *role;
        a.route_sketch = str(*it, "route_sketch", ap, false);
        v.assignment = a;
      }
    }
    if (auto it = j.find("study_log"); it != j.end() && !it->is_null()) {
      auto sp = child_path(path, "study_log");
      if (expect_object(*it, sp)) {
        check_keys(*it, sp, {"bias_considerations", "measurement_definition_issues", "notes"});
        v.study_log = StudyLogRecord{str(*it, "bias_considerations", sp, false),
                                     str(*it, "measurement_definition_issues", sp, false),
                                     str(*it, "notes", sp, false)};
      }
    }
    if (auto it = j.find("tier_table"); it != j.end() && !it->is_null()) {
      auto tp = child_path(path, "tier_table");
      if (expect_object(*it, tp)) {
        check_keys(*it, tp, {"methods_summary", "strengths", "limitations"});
        v.tier_table = TierTableRecord{str(*it, "methods_summary", tp, false),
                                       str(*it, "strengths", tp, false),
                                       str(*it, "limitations", tp, false)};
      }
    }
    v.split_from = ident(j, "split_from", path, scope, false);
    v.superseded_by = idents(j, "superseded_by", path, scope);
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  RouteBody route_body(const Json& j, const std::string& path, const Scope& scope) {
    RouteBody v;
    if (auto id = ident(j, "construct_ref", path, scope)) v.construct_ref = *id;
    v.objective = str(j, "objective", path);
    if (const Json* arr = array(j, "assumptions", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto& aj = (*arr)[i];
        auto ap = child_path(child_path(path, "assumptions"), i);
        if (!expect_object(aj, ap)) continue;
        check_keys(aj, ap, {"id", "text", "plausibility", "failure_modes", "consequences_for_inference",
                            "tested_by", "untestable_by_evidence"});
        RouteAssumption a;
        if (auto id = ident(aj, "id", ap, scope)) a.id = *id;
        a.text = str(aj, "text", ap);
        a.plausibility = str(aj, "plausibility", ap, false);
        a.failure_modes = str(aj, "failure_modes", ap, false);
        a.consequences_for_inference = str(aj, "consequences_for_inference", ap, false);
        a.tested_by = idents(aj, "tested_by", ap, scope);
        a.untestable_by_evidence = boolean(aj, "untestable_by_evidence", ap);
        v.assumptions.push_back(std::move(a));
      }
    }
    v.disconfirming_models = strings(j, "disconfirming_models", path);
    if (const Json* arr = array(j, "rejected_alternatives", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto& aj = (*arr)[i];
        auto ap = child_path(child_path(path, "rejected_alternatives"), i);
        if (!expect_object(aj, ap)) continue;
        check_keys(aj, ap, {"route_ref", "sketch", "rationale"});
        RejectedAlternative alt;
        alt.route_ref = ident(aj, "route_ref", ap, scope, false);
        alt.sketch = str(aj, "sketch", ap);
        alt.rationale = str(aj, "rationale", ap, false);
        v.rejected_alternatives.push_back(std::move(alt));
      }
    }
    return v;
  }

  RouteRevision revision(const Json& j, const std::string& path) {
    RouteRevision v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"timestamp", "justification", "downstream_implications", "change_description"});
    v.timestamp = str(j, "timestamp", path, false);
    v.justification = str(j, "justification", path, false);
    v.downstream_implications = str(j, "downstream_implications", path, false);
    v.change_description = str(j, "change_description", path, false);
    return v;
  }

  Route route(const Json& j, const std::string& path, const Scope& scope) {
    Route v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "project_ref", "status", "construct_ref", "objective", "assumptions",
                         "disconfirming_models", "rejected_alternatives", "frozen_at", "revisions",
                         "quarantined"});
    if (auto id = ident(j, "id", path, scope)) v.id = *id;
    if (auto id = ident(j, "project_ref", path, scope)) v.project_ref = *id;
    if (auto s = enumeration<RouteStatus>(j, "status", path, false)) v.status = *s;
    v.body = route_body(j, path, scope);
    v.frozen_at = str(j, "frozen_at", path, false);
    if (const Json* arr = array(j, "revisions", path)) {
      for (std::size_t i = 0; i < arr->size(); ++i)
        v.revisions.push_back(revision((*arr)[i], child_path(child_path(path, "revisions"), i)));
    }
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  FlowEvent flow(const Json& j, const std::string& path) {
    FlowEvent v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "source_layer", "dest_layer", "info_class", "payload", "contract_ref",
                         "modifies", "timestamp", "quarantined"});
    v.id = str(j, "id", path);
    v.source_layer = str(j, "source_layer", path);
    v.dest_layer = str(j, "dest_layer", path);
    if (auto c = enumeration<InfoClass>(j, "info_class", path)) v.info_class = *c;
    v.payload = str(j, "payload", path, false);
    v.contract_ref = str(j, "contract_ref", path, false);
    v.modifies = idents(j, "modifies", path, Scope{Namespace::gp, ""});
    v.timestamp = str(j, "timestamp", path, false);
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  BoundaryContract contract(const Json& j, const std::string& path) {
    BoundaryContract v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"id", "info_type", "origin_layer", "destination_layer", "legal_justification",
                         "no_reinterpretation_clause", "documentation_ref"});
    v.id = str(j, "id", path);
    if (auto c = enumeration<InfoClass>(j, "info_type", path)) v.info_type = *c;
    v.origin_layer = str(j, "origin_layer", path);
    v.destination_layer = str(j, "destination_layer", path);
    v.legal_justification = str(j, "legal_justification", path, false);
    v.no_reinterpretation_clause = boolean(j, "no_reinterpretation_clause", path);
    if (auto it = j.find("documentation_ref"); it != j.end() && !it->is_null()) {
      if (it->is_number_integer()) v.documentation_ref = it->get<long long>();
      else error(child_path(path, "documentation_ref"), "documentation_ref must be an event sequence number");
    }
    return v;
  }

  ReviewerBlock reviewer_block(const Json& j, const std::string& path, const Scope& scope) {
    ReviewerBlock v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"project_ref", "methodological_findings", "conceptual_insight", "anticipated_critique",
                         "disconfirming_model", "assumptions_ref", "quarantined"});
    if (auto id = ident(j, "project_ref", path, scope)) v.project_ref = *id;
    v.methodological_findings = strings(j, "methodological_findings", path);
    v.conceptual_insight = str(j, "conceptual_insight", path, false);
    if (auto it = j.find("anticipated_critique"); it != j.end() && !it->is_null()) {
      auto cp = child_path(path, "anticipated_critique");
      if (expect_object(*it, cp)) {
        check_keys(*it, cp, {"text", "referenced_decisions"});
        v.anticipated_critique.text = str(*it, "text", cp, false);
        v.anticipated_critique.referenced_decisions = idents(*it, "referenced_decisions", cp, scope);
      }
    }
    v.disconfirming_model = str(j, "disconfirming_model", path, false);
    v.assumptions_ref = idents(j, "assumptions_ref", path, scope);
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  AnalyticMemo memo(const Json& j, const std::string& path, const Scope& scope) {
    AnalyticMemo v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"project_ref", "sections", "quarantined"});
    if (auto id = ident(j, "project_ref", path, scope)) v.project_ref = *id;
    if (auto it = j.find("sections"); it != j.end() && !it->is_null()) {
      if (!it->is_object()) {
        error(child_path(path, "sections"), "sections must be an object");
      } else {
        for (const auto& [key, val] : it->items()) {
          if (val.is_string()) v.sections[key] = val.get<std::string>();
          else error(child_path(child_path(path, "sections"), key), "section text must be a string");
        }
      }
    }
    v.quarantined = boolean(j, "quarantined", path);
    return v;
  }

  AuditEvent event(const Json& j, const std::string& path) {
    AuditEvent v;
    if (!expect_object(j, path)) return v;
    check_keys(j, path, {"sequence", "timestamp", "actor", "kind", "payload", "affected"});
    if (auto it = j.find("sequence"); it != j.end() && it->is_number_integer()) {
      v.sequence = it->get<long long>();
    } else {
      error(child_path(path, "sequence"), "sequence must be an integer");
    }
    v.timestamp = str(j, "timestamp", path);
    v.actor = str(j, "actor", path, false);
    if (auto k = enumeration<EventKind>(j, "kind", path)) v.kind = *k;
    if (auto it = j.find("payload"); it != j.end() && !it->is_null()) {
      if (it->is_object()) v.payload = *it;
      else error(child_path(path, "payload"), "payload must be an object");
    }
    v.affected = strings(j, "affected", path);
    return v;
  }
};

// Resolves a unit/route/block project reference to the owning child layer so
// bare local names can be qualified.
std::optional<Scope> project_scope(const Json& j, const std::vector<ProjectDecl>& projects) {
  auto it = j.find("project_ref");
  if (it == j.end() || !it->is_string()) return std::nullopt;
  auto text = it->get<std::string>();
  if (auto id = Identifier::parse(text)) return Scope{Namespace::child, id->owner};
  const ProjectDecl* match = nullptr;
  for (const auto& p : projects) {
    if (p.id.local_name != text) continue;
    if (match) return std::nullopt;  // ambiguous bare name
    match = &p;
  }
  if (!match) return std::nullopt;
  return Scope{Namespace::child, match->layer};
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

template <class T>
Result<T> finish(Reader& r, T value) {
  Diagnostics errors;
  for (auto& d : r.diags)
    if (d.severity == Severity::error) errors.push_back(d);
  if (!errors.empty()) return errors;
  return value;
}

Scope scope_of_qualified(const Json& j, const char* key) {
  if (auto it = j.find(key); it != j.end() && it->is_string())
    if (auto id = Identifier::parse(it->get<std::string>())) return Scope{id->ns, id->owner};
  return Scope{Namespace::child, ""};
}

}  // namespace

ParseOutcome parse_bundle_json(const Json& doc) {
  ParseOutcome out;
  Reader r;
  if (!doc.is_object()) {
    out.diagnostics.push_back(make_error("E_SYNTAX", "line 1", "bundle must be a JSON object"));
    return out;
  }
  static const std::set<std::string> kTopLevel = {"recap_version", "layers", "projects", "units", "routes",
                                                  "flows", "contracts", "events", "reviewer_blocks", "memos"};
  for (const auto& [key, _] : doc.items()) {
    if (!kTopLevel.count(key))
      r.diags.push_back(make_warning("W_UNKNOWN_KEY", "/" + key, "unknown top-level key '" + key + "' ignored"));
  }

  ProjectBundle b;
  b.recap_version = r.str(doc, "recap_version", "");
  if (!doc.contains("layers")) r.error("/layers", "missing field 'layers'");
  auto each = [&](const char* key, auto&& fn) {
    if (const Json* arr = r.array(doc, key, "")) {
      for (std::size_t i = 0; i < arr->size(); ++i) fn((*arr)[i], "/" + std::string(key) + "/" + std::to_string(i));
    }
  };
  each("layers", [&](const Json& j, const std::string& p) { b.layers.push_back(r.layer(j, p)); });
  each("projects", [&](const Json& j, const std::string& p) { b.projects.push_back(r.project(j, p)); });

  auto scoped = [&](const Json& j, const std::string& p) -> std::optional<Scope> {
    if (!j.is_object()) return Scope{Namespace::child, ""};
    auto scope = project_scope(j, b.projects);
    if (!scope) {
      std::string ref = j.contains("project_ref") && j["project_ref"].is_string() ? j["project_ref"].get<std::string>() : "";
      if (ref.empty()) r.error(p + "/project_ref", "missing field 'project_ref'");
      else out.diagnostics.push_back(make_error("E_UNRESOLVED_REF", p + "/project_ref", "unresolved project reference '" + ref + "'"));
    }
    return scope;
  };
  each("units", [&](const Json& j, const std::string& p) {
    if (auto s = scoped(j, p)) b.units.push_back(r.unit(j, p, *s));
  });
  each("routes", [&](const Json& j, const std::string& p) {
    if (auto s = scoped(j, p)) b.routes.push_back(r.route(j, p, *s));
  });
  each("flows", [&](const Json& j, const std::string& p) { b.flows.push_back(r.flow(j, p)); });
  each("contracts", [&](const Json& j, const std::string& p) { b.contracts.push_back(r.contract(j, p)); });
  each("events", [&](const Json& j, const std::string& p) { b.events.push_back(r.event(j, p)); });
  each("reviewer_blocks", [&](const Json& j, const std::string& p) {
    if (auto s = scoped(j, p)) b.reviewer_blocks.push_back(r.reviewer_block(j, p, *s));
  });
  each("memos", [&](const Json& j, const std::string& p) {
    if (auto s = scoped(j, p)) b.memos.push_back(r.memo(j, p, *s));
  });

  for (auto& d : r.diags) out.diagnostics.push_back(d);
  if (has_errors(out.diagnostics)) {
    sort_diagnostics(out.diagnostics);
    return out;
  }
  auto integrity = check_integrity(b);
  if (!integrity.empty()) {
    for (auto& d : integrity) out.diagnostics.push_back(d);
    sort_diagnostics(out.diagnostics);
    return out;
  }
  out.bundle = std::move(b);
  return out;
}

ParseOutcome parse_bundle(std::string_view text) {
  bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) {
    ParseOutcome out;
    out.diagnostics.push_back(make_error("E_SYNTAX", "line 1", "empty document"));
    return out;
  }
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    ParseOutcome out;
    out.diagnostics.push_back(make_error("E_SYNTAX", "line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)),
                                         "malformed JSON: " + std::string(e.what())));
    return out;
  }
  return parse_bundle_json(doc);
}

// ---------------------------------------------------------------------------
// Single-record decoders
// ---------------------------------------------------------------------------

Result<Law> law_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.law(j, path, Scope{Namespace::gp, ""});
  return finish(r, std::move(v));
}

Result<LawSet> laws_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.laws(j, path, Scope{Namespace::gp, ""});
  return finish(r, std::move(v));
}

Result<EvidentialUnit> unit_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.unit(j, path, scope_of_qualified(j, "project_ref"));
  return finish(r, std::move(v));
}

Result<Route> route_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.route(j, path, scope_of_qualified(j, "project_ref"));
  return finish(r, std::move(v));
}

Result<RouteBody> route_body_from_json(const Json& j, const std::string& path) {
  Reader r;
  if (!r.expect_object(j, path)) return r.diags;
  auto v = r.route_body(j, path, scope_of_qualified(j, "construct_ref"));
  return finish(r, std::move(v));
}

Result<RouteRevision> revision_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.revision(j, path);
  return finish(r, std::move(v));
}

Result<ReTierEvent> retier_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.retier(j, path);
  return finish(r, std::move(v));
}

Result<FlowEvent> flow_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.flow(j, path);
  return finish(r, std::move(v));
}

Result<ReviewerBlock> reviewer_block_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.reviewer_block(j, path, scope_of_qualified(j, "project_ref"));
  return finish(r, std::move(v));
}

Result<Assessment> assessment_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.assessment(j, path);
  return finish(r, std::move(v));
}

Result<std::vector<Assessment>> assessments_from_json(const Json& j, const std::string& path) {
  Reader r;
  std::vector<Assessment> out;
  if (!j.is_array()) r.error(path, "expected an array of assessments");
  else
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(r.assessment(j[i], child_path(path, i)));
  return finish(r, std::move(out));
}

Result<std::vector<DeclaredAssumption>> declared_assumptions_from_json(const Json& j, const std::string& path) {
  Reader r;
  std::vector<DeclaredAssumption> out;
  if (!j.is_array()) r.error(path, "expected an array of assumptions");
  else
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(r.declared_assumption(j[i], child_path(path, i)));
  return finish(r, std::move(out));
}

Result<BoundaryContract> contract_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.contract(j, path);
  return finish(r, std::move(v));
}

Result<AnalyticMemo> memo_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.memo(j, path, scope_of_qualified(j, "project_ref"));
  return finish(r, std::move(v));
}

Result<AuditEvent> event_from_json(const Json& j, const std::string& path) {
  Reader r;
  auto v = r.event(j, path);
  return finish(r, std::move(v));
}

// ---------------------------------------------------------------------------
// Integrity
// ---------------------------------------------------------------------------

Diagnostics check_integrity(const ProjectBundle& b) {
  Diagnostics d;
  auto unresolved = [&](const std::string& path, const std::string& what) {
    d.push_back(make_error("E_UNRESOLVED_REF", path, "unresolved reference '" + what + "'"));
  };

  // Layers: unique ids, one grandparent, kind-consistent parent links.
  std::set<std::string> layer_ids;
  int grandparents = 0;
  for (std::size_t i = 0; i < b.layers.size(); ++i) {
    const auto& l = b.layers[i];
    auto path = "/layers/" + std::to_string(i);
    if (!layer_ids.insert(l.id).second) d.push_back(make_error("E_DUP_ID", path + "/id", "duplicate layer id '" + l.id + "'"));
    if (l.kind == LayerKind::grandparent) ++grandparents;
  }
  if (grandparents != 1) {
    d.push_back(make_error("E_NO_GRANDPARENT", "/layers",
                           "expected exactly one grandparent layer, found " + std::to_string(grandparents)));
  }
  for (std::size_t i = 0; i < b.layers.size(); ++i) {
    const auto& l = b.layers[i];
    auto path = "/layers/" + std::to_string(i);
    if (l.kind == LayerKind::grandparent) {
      if (!l.parent_ref.empty()) d.push_back(make_error("E_LAYER_KIND", path + "/parent_ref", "the grandparent has no parent"));
    } else {
      const LayerDecl* parent = b.find_layer(l.parent_ref);
      if (!parent) {
        unresolved(path + "/parent_ref", l.parent_ref);
      } else {
        auto want = l.kind == LayerKind::parent ? LayerKind::grandparent : LayerKind::parent;
        if (parent->kind != want) {
          d.push_back(make_error("E_LAYER_KIND", path + "/parent_ref",
                                 "a " + std::string(to_string(l.kind)) + " layer must sit under a " + to_string(want)));
        }
      }
    }
    if (!l.laws.empty() && l.kind != LayerKind::grandparent)
      d.push_back(make_error("E_LAYER_KIND", path + "/laws", "only the grandparent declares laws"));
    if (!l.abstractions.empty() && l.kind != LayerKind::parent)
      d.push_back(make_error("E_LAYER_KIND", path + "/abstractions", "only parent layers declare abstractions"));
    if (!l.definitions.empty() && l.kind != LayerKind::child)
      d.push_back(make_error("E_LAYER_KIND", path + "/definitions", "only child layers declare definitions"));
  }

  // Declarations: uniqueness and namespace ownership.
  std::set<std::string> seen;
  auto declare = [&](const Identifier& id, const std::string& path, Namespace ns, const std::string& owner) {
    if (id.ns != ns || (ns != Namespace::gp && id.owner != owner)) {
      std::string want = ns == Namespace::gp ? "gp:" : std::string(to_string(ns)) + ":" + owner + ":";
      d.push_back(make_error("E_NAMESPACE", path, "identifier '" + id.str() + "' must use the '" + want + "' namespace"));
    }
    if (!seen.insert(id.str()).second) d.push_back(make_error("E_DUP_ID", path, "duplicate declaration '" + id.str() + "'"));
  };
  for (std::size_t i = 0; i < b.layers.size(); ++i) {
    const auto& l = b.layers[i];
    auto path = "/layers/" + std::to_string(i);
    for (std::size_t k = 0; k < l.laws.size(); ++k)
      declare(l.laws[k].id, path + "/laws/" + std::to_string(k) + "/id", Namespace::gp, "");
    for (std::size_t k = 0; k < l.abstractions.size(); ++k)
      declare(l.abstractions[k].id, path + "/abstractions/" + std::to_string(k) + "/id", Namespace::parent, l.id);
    for (std::size_t k = 0; k < l.definitions.size(); ++k)
      declare(l.definitions[k].id, path + "/definitions/" + std::to_string(k) + "/id", Namespace::child, l.id);
  }
  for (std::size_t i = 0; i < b.projects.size(); ++i) {
    const auto& p = b.projects[i];
    auto path = "/projects/" + std::to_string(i);
    const LayerDecl* layer = b.find_layer(p.layer);
    if (!layer) unresolved(path + "/layer", p.layer);
    else if (layer->kind != LayerKind::child)
      d.push_back(make_error("E_LAYER_KIND", path + "/layer", "projects live in child layers"));
    declare(p.id, path + "/id", Namespace::child, p.layer);
  }
  auto project_layer = [&](const Identifier& project) -> std::string {
    const ProjectDecl* p = b.find_project(project);
    return p ? p->layer : project.owner;
  };
  for (std::size_t i = 0; i < b.units.size(); ++i) {
    const auto& u = b.units[i];
    declare(u.study_id, "/units/" + std::to_string(i) + "/study_id", Namespace::child, project_layer(u.project_ref));
  }
  for (std::size_t i = 0; i < b.routes.size(); ++i) {
    const auto& r = b.routes[i];
    auto path = "/routes/" + std::to_string(i);
    auto owner = project_layer(r.project_ref);
    declare(r.id, path + "/id", Namespace::child, owner);
    for (std::size_t k = 0; k < r.body.assumptions.size(); ++k)
      declare(r.body.assumptions[k].id, path + "/assumptions/" + std::to_string(k) + "/id", Namespace::child, owner);
  }
  std::set<std::string> flow_ids;
  for (std::size_t i = 0; i < b.flows.size(); ++i)
    if (!flow_ids.insert(b.flows[i].id).second)
      d.push_back(make_error("E_DUP_ID", "/flows/" + std::to_string(i) + "/id", "duplicate flow id '" + b.flows[i].id + "'"));
  std::set<std::string> contract_ids;
  for (std::size_t i = 0; i < b.contracts.size(); ++i)
    if (!contract_ids.insert(b.contracts[i].id).second)
      d.push_back(make_error("E_DUP_ID", "/contracts/" + std::to_string(i) + "/id", "duplicate contract id '" + b.contracts[i].id + "'"));
  std::set<std::string> block_projects, memo_projects;
  for (std::size_t i = 0; i < b.reviewer_blocks.size(); ++i)
    if (!block_projects.insert(b.reviewer_blocks[i].project_ref.str()).second)
      d.push_back(make_error("E_DUP_ID", "/reviewer_blocks/" + std::to_string(i), "second reviewer block for one project"));
  for (std::size_t i = 0; i < b.memos.size(); ++i)
    if (!memo_projects.insert(b.memos[i].project_ref.str()).second)
      d.push_back(make_error("E_DUP_ID", "/memos/" + std::to_string(i), "second analytic memo for one project"));

  // References: every qualified identifier must resolve, and typed fields
  // must name the right kind of declaration.
  DeclIndex index = build_decl_index(b);
  for (const auto& site : enumerate_sites(b, true)) {
    for (const auto& ref : collect_references(site.json, site.path)) {
      if (!index.count(ref.id.str())) unresolved(ref.path, ref.id.str());
    }
  }
  auto expect_kind = [&](const Identifier& id, SiteKind kind, const std::string& path) {
    auto it = index.find(id.str());
    if (it != index.end() && it->second.kind != kind) {
      d.push_back(make_error("E_UNRESOLVED_REF", path,
                             "'" + id.str() + "' does not name a " + std::string(to_string(kind))));
    }
  };
  for (std::size_t i = 0; i < b.units.size(); ++i) {
    const auto& u = b.units[i];
    auto path = "/units/" + std::to_string(i);
    expect_kind(u.project_ref, SiteKind::project, path + "/project_ref");
    if (u.assignment) expect_kind(u.assignment->route_ref, SiteKind::route, path + "/assignment/route_ref");
    for (std::size_t k = 0; k < u.contradicts_assumptions.size(); ++k)
      expect_kind(u.contradicts_assumptions[k], SiteKind::route_assumption, path + "/contradicts_assumptions/" + std::to_string(k));
  }
  for (std::size_t i = 0; i < b.routes.size(); ++i) {
    const auto& r = b.routes[i];
    auto path = "/routes/" + std::to_string(i);
    expect_kind(r.project_ref, SiteKind::project, path + "/project_ref");
    for (std::size_t k = 0; k < r.body.assumptions.size(); ++k) {
      const auto& a = r.body.assumptions[k];
      for (std::size_t t = 0; t < a.tested_by.size(); ++t)
        expect_kind(a.tested_by[t], SiteKind::unit, path + "/assumptions/" + std::to_string(k) + "/tested_by/" + std::to_string(t));
    }
  }
  for (std::size_t i = 0; i < b.reviewer_blocks.size(); ++i) {
    const auto& rb = b.reviewer_blocks[i];
    auto path = "/reviewer_blocks/" + std::to_string(i);
    expect_kind(rb.project_ref, SiteKind::project, path + "/project_ref");
    for (std::size_t k = 0; k < rb.assumptions_ref.size(); ++k)
      expect_kind(rb.assumptions_ref[k], SiteKind::route_assumption, path + "/assumptions_ref/" + std::to_string(k));
  }
  for (std::size_t i = 0; i < b.memos.size(); ++i)
    expect_kind(b.memos[i].project_ref, SiteKind::project, "/memos/" + std::to_string(i) + "/project_ref");

  for (std::size_t i = 0; i < b.flows.size(); ++i) {
    const auto& f = b.flows[i];
    auto path = "/flows/" + std::to_string(i);
    if (!b.find_layer(f.source_layer)) unresolved(path + "/source_layer", f.source_layer);
    if (!b.find_layer(f.dest_layer)) unresolved(path + "/dest_layer", f.dest_layer);
    if (!f.contract_ref.empty() && !b.find_contract(f.contract_ref)) unresolved(path + "/contract_ref", f.contract_ref);
  }
  std::set<long long> sequences;
  for (const auto& e : b.events) sequences.insert(e.sequence);
  for (std::size_t i = 0; i < b.contracts.size(); ++i) {
    const auto& c = b.contracts[i];
    auto path = "/contracts/" + std::to_string(i);
    if (!b.find_layer(c.origin_layer)) unresolved(path + "/origin_layer", c.origin_layer);
    if (!b.find_layer(c.destination_layer)) unresolved(path + "/destination_layer", c.destination_layer);
    if (c.documentation_ref && !sequences.count(*c.documentation_ref))
      unresolved(path + "/documentation_ref", "event " + std::to_string(*c.documentation_ref));
  }
  sort_diagnostics(d);
  return d;
}

}  // namespace recap
