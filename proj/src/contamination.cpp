#include "recap/contamination.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "op_support.hpp"
#include "recap/audit_log.hpp"
#include "recap/bundle_format.hpp"
#include "recap/layer_registry.hpp"
#include "recap/references.hpp"
#include "recap/tiering.hpp"

namespace recap {

using detail::blank;

const char* to_string(Direction v) {
  switch (v) {
    case Direction::upward: return "upward";
    case Direction::downward: return "downward";
    case Direction::horizontal: return "horizontal";
  }
  return "upward";
}

const char* to_string(RuleViolated v) {
  switch (v) {
    case RuleViolated::R1_upward_content: return "R1_upward_content";
    case RuleViolated::R2_downward_rewrite: return "R2_downward_rewrite";
    case RuleViolated::R3_horizontal_borrowing: return "R3_horizontal_borrowing";
    case RuleViolated::R4_missing_contract: return "R4_missing_contract";
    case RuleViolated::R5_meta_engine_insulation: return "R5_meta_engine_insulation";
  }
  return "R1_upward_content";
}

const char* to_string(Nature v) {
  switch (v) {
    case Nature::content: return "content";
    case Nature::assumption: return "assumption";
    case Nature::measurement: return "measurement";
    case Nature::structural: return "structural";
  }
  return "content";
}

const char* to_string(CorrectiveAction v) {
  switch (v) {
    case CorrectiveAction::quarantined: return "quarantined";
    case CorrectiveAction::reversed: return "reversed";
    case CorrectiveAction::insight_extracted: return "insight_extracted";
  }
  return "quarantined";
}

FindingRank rank_of(Direction d) {
  switch (d) {
    case Direction::upward: return FindingRank::upward;
    case Direction::downward: return FindingRank::downward;
    case Direction::horizontal: return FindingRank::horizontal;
  }
  return FindingRank::other;
}

namespace {

int depth_of(const LayerDecl& l) {
  switch (l.kind) {
    case LayerKind::grandparent: return 0;
    case LayerKind::parent: return 1;
    case LayerKind::child: return 2;
  }
  return 0;
}

// True when `ancestor` lies on the parent chain above `layer`.
bool is_ancestor(const ProjectBundle& b, const std::string& ancestor, const std::string& layer) {
  const LayerDecl* cur = b.find_layer(layer);
  for (int guard = 0; cur && !cur->parent_ref.empty() && guard < 4; ++guard) {
    if (cur->parent_ref == ancestor) return true;
    cur = b.find_layer(cur->parent_ref);
  }
  return false;
}

Nature nature_of(InfoClass c) {
  switch (c) {
    case InfoClass::content: return Nature::content;
    case InfoClass::measurement: return Nature::measurement;
    case InfoClass::assumption: return Nature::assumption;
    case InfoClass::methodological_insight: return Nature::structural;
  }
  return Nature::content;
}

InfoClass info_of(Nature n) {
  switch (n) {
    case Nature::measurement: return InfoClass::measurement;
    case Nature::assumption: return InfoClass::assumption;
    case Nature::structural: return InfoClass::methodological_insight;
    case Nature::content: return InfoClass::content;
  }
  return InfoClass::content;
}

std::vector<std::string> layer_vocabulary(const ProjectBundle& b, const std::string& layer) {
  std::vector<std::string> out;
  const LayerDecl* cur = b.find_layer(layer);
  for (int guard = 0; cur && guard < 4; ++guard) {
    out.insert(out.end(), cur->vocabulary.begin(), cur->vocabulary.end());
    cur = cur->parent_ref.empty() ? nullptr : b.find_layer(cur->parent_ref);
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

bool contract_complete(const BoundaryContract& c, const ProjectBundle& b) {
  if (blank(c.legal_justification) || !c.no_reinterpretation_clause || !c.documentation_ref) return false;
  if (!b.find_layer(c.origin_layer) || !b.find_layer(c.destination_layer)) return false;
  return std::any_of(b.events.begin(), b.events.end(),
                     [&](const AuditEvent& e) { return e.sequence == *c.documentation_ref; });
}

bool contract_matches(const BoundaryContract& c, InfoClass info, const std::string& origin,
                      const std::string& destination, const ProjectBundle& b) {
  return c.info_type == info && c.origin_layer == origin && c.destination_layer == destination &&
         contract_complete(c, b);
}

// ---------------------------------------------------------------------------
// Insight transmission
// ---------------------------------------------------------------------------

bool is_function_word(std::string_view w) {
  static const std::set<std::string, std::less<>> kWords = {
      "a", "about", "above", "across", "after", "again", "against", "all", "also", "an", "and", "any", "are",
      "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can",
      "could", "did", "do", "does", "each", "either", "every", "for", "from", "had", "has", "have", "how", "if",
      "in", "into", "is", "it", "its", "may", "might", "more", "most", "must", "neither", "no", "nor", "not",
      "of", "on", "once", "only", "or", "other", "our", "over", "own", "same", "shall", "should", "so", "some",
      "such", "than", "that", "the", "their", "them", "then", "there", "these", "they", "this", "those",
      "through", "to", "under", "until", "up", "upon", "very", "was", "we", "were", "what", "when", "where",
      "whether", "which", "while", "who", "whom", "why", "will", "with", "within", "without", "would"};
  return kWords.count(w) > 0;
}

InsightProposal make_insight(std::string id, std::string origin, std::string target, std::string statement) {
  InsightProposal p;
  p.id = std::move(id);
  p.origin_layer = std::move(origin);
  p.target_layer = std::move(target);
  p.statement = std::move(statement);
  for (const auto& ref : extract_references(p.statement)) p.referenced_terms.push_back(ref.id);
  return p;
}

InsightVerdict validate_insight_transmission(const InsightProposal& p, const ProjectBundle& b) {
  InsightVerdict v;
  auto& d = v.diagnostics;
  const LayerDecl* origin = b.find_layer(p.origin_layer);
  const LayerDecl* target = b.find_layer(p.target_layer);
  if (!origin) d.push_back(make_error("E_UNKNOWN_LAYER", p.id, "no layer named '" + p.origin_layer + "'"));
  if (!target) d.push_back(make_error("E_UNKNOWN_LAYER", p.id, "no layer named '" + p.target_layer + "'"));
  if (!origin || !target) return v;
  if (origin->parent_ref != target->id)
    d.push_back(make_error("E_INSIGHT_HOP", p.id,
                           "insight must target the layer directly above " + origin->id + ", not " + target->id));

  // Domain independence.
  std::set<Identifier> terms(p.referenced_terms.begin(), p.referenced_terms.end());
  for (const auto& ref : extract_references(p.statement)) terms.insert(ref.id);
  for (const auto& t : terms) {
    bool domain = t.ns == Namespace::child || (t.ns == Namespace::parent && target->kind == LayerKind::grandparent);
    if (domain) d.push_back(make_error("E_DOMAIN_TERM", p.id, "insight names domain declaration " + t.str()));
  }

  // Expressibility: every content word must already be admitted upstream.
  std::set<std::string> vocab;
  for (const auto& w : layer_vocabulary(b, target->id)) vocab.insert(lower(w));
  std::string text = p.statement;
  auto refs = extract_references(text);
  for (auto it = refs.rbegin(); it != refs.rend(); ++it) text.replace(it->offset, it->length, " ");
  std::set<std::string> foreign;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                               text[j] == '-' || text[j] == '\''))
      ++j;
    std::string word = lower(text.substr(i, j - i));
    while (!word.empty() && (word.back() == '-' || word.back() == '\'')) word.pop_back();
    if (word.size() > 1 && !is_function_word(word) && !vocab.count(word)) foreign.insert(word);
    i = j;
  }
  for (const auto& w : foreign)
    d.push_back(make_error("E_FOREIGN_VOCAB", p.id, "'" + w + "' is not in the vocabulary of " + target->id));

  // Refine, never rewrite.
  for (const auto& m : p.modifies)
    d.push_back(make_error("E_REWRITE_ATTEMPT", p.id, "insight would modify existing declaration " + m.str()));
  if (p.appends) {
    auto index = build_decl_index(b);
    if (index.count(p.appends->str()))
      d.push_back(make_error("E_REWRITE_ATTEMPT", p.id, "insight would overwrite existing declaration " + p.appends->str()));
    bool ns_ok = target->kind == LayerKind::grandparent
                     ? p.appends->ns == Namespace::gp
                     : (p.appends->ns == Namespace::parent && p.appends->owner == target->id);
    if (!ns_ok)
      d.push_back(make_error("E_NAMESPACE", p.id, p.appends->str() + " is outside the namespace of " + target->id));
  }
  v.passes = d.empty();
  return v;
}

Diagnostics check_upward_text(std::string_view text, const std::string& location) {
  Diagnostics d;
  for (const auto& ref : extract_references(text)) {
    if (ref.id.ns == Namespace::gp) continue;
    auto diag = make_error("E_UPWARD_CONTENT", location,
                           "grandparent-bound text names lower-layer declaration " + ref.id.str());
    diag.rank = FindingRank::upward;
    d.push_back(diag);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Flow matrix
// ---------------------------------------------------------------------------

Result<FlowVerdict> check_flow(const FlowEvent& f, const ProjectBundle& b) {
  const LayerDecl* src = b.find_layer(f.source_layer);
  const LayerDecl* dst = b.find_layer(f.dest_layer);
  Diagnostics missing;
  if (!src) missing.push_back(make_error("E_UNKNOWN_LAYER", f.id, "no layer named '" + f.source_layer + "'"));
  if (!dst) missing.push_back(make_error("E_UNKNOWN_LAYER", f.id, "no layer named '" + f.dest_layer + "'"));
  if (!missing.empty()) return missing;

  FlowVerdict v;
  auto violation = [&](Direction dir, RuleViolated rule, std::string reason) {
    v.allowed = false;
    v.direction = dir;
    v.rule = rule;
    v.reason = std::move(reason);
    return v;
  };
  if (src->id == dst->id) {
    v.reason = "flow stays inside one layer";
    return v;
  }
  if (is_ancestor(b, src->id, dst->id)) {
    v.direction = Direction::downward;
    v.reason = "constraints flow downward";
    return v;
  }
  bool insight = f.info_class == InfoClass::methodological_insight;
  if (is_ancestor(b, dst->id, src->id)) {
    if (!insight) return violation(Direction::upward, RuleViolated::R1_upward_content,
                                   std::string(to_string(f.info_class)) + " may not move upward");
    if (src->parent_ref != dst->id)
      return violation(Direction::upward, RuleViolated::R5_meta_engine_insulation,
                       "insight must pass through each layer in turn");
    auto proposal = make_insight(f.id, src->id, dst->id, f.payload);
    proposal.modifies = f.modifies;
    auto check = validate_insight_transmission(proposal, b);
    if (!check.passes) {
      violation(Direction::upward, RuleViolated::R5_meta_engine_insulation, "insight fails transmission checks");
      v.insight_diagnostics = check.diagnostics;
      return v;
    }
    v.direction = Direction::upward;
    v.reason = "validated methodological insight";
    return v;
  }
  // Siblings, cousins, and cross-branch movements.
  v.direction = Direction::horizontal;
  if (f.contract_ref.empty())
    return violation(Direction::horizontal, RuleViolated::R3_horizontal_borrowing,
                     "cross-boundary flow without a boundary contract");
  const BoundaryContract* c = b.find_contract(f.contract_ref);
  if (!c || !contract_matches(*c, f.info_class, src->id, dst->id, b))
    return violation(Direction::horizontal, RuleViolated::R4_missing_contract,
                     "contract " + f.contract_ref + " does not authorize this flow");
  v.reason = "authorized by contract " + c->id;
  return v;
}

// ---------------------------------------------------------------------------
// Downstream tracing
// ---------------------------------------------------------------------------

namespace {

bool is_citation(const std::string& path) {
  for (const char* structural : {"/project_ref", "/tested_by", "/superseded_by", "/assignment/route_ref"})
    if (path.find(structural) != std::string::npos) return false;
  return true;
}

struct TraceGraph {
  std::map<std::string, std::set<std::string>> citers;
  std::map<std::string, SiteKind> kinds;
};

TraceGraph build_trace_graph(const ProjectBundle& b) {
  TraceGraph g;
  for (const auto& site : enumerate_sites(b, false)) {
    if (site.kind == SiteKind::flow) continue;
    if (site.kind == SiteKind::unit) {
      const EvidentialUnit* u = b.find_unit(*Identifier::parse(site.id));
      if (!u || !u->active()) continue;
    }
    g.kinds[site.id] = site.kind;
    for (const auto& ref : collect_references(site.json, site.path)) {
      if (!is_citation(ref.path)) continue;
      auto key = ref.id.str();
      if (key != site.id) g.citers[key].insert(site.id);
    }
  }
  for (const auto& r : b.routes) {
    if (r.quarantined) continue;
    for (const auto& a : r.body.assumptions) g.kinds[a.id.str()] = SiteKind::route_assumption;
  }
  return g;
}

std::vector<std::string> projects_under(const ProjectBundle& b, const std::string& layer) {
  std::vector<std::string> out;
  for (const auto& p : b.projects)
    if (p.layer == layer || is_ancestor(b, layer, p.layer)) out.push_back("project:" + p.id.str());
  return out;
}

}  // namespace

std::vector<std::string> trace_from(const std::string& start, const ProjectBundle& b) {
  TraceGraph g = build_trace_graph(b);
  std::set<std::string> out;
  std::set<std::string> seen{start};
  std::deque<std::string> queue{start};
  while (!queue.empty()) {
    auto node = queue.front();
    queue.pop_front();
    auto kind = g.kinds.find(node);
    if (kind != g.kinds.end()) {
      auto id = Identifier::parse(node);
      switch (kind->second) {
        case SiteKind::law:
          for (const auto& p : b.projects) out.insert("project:" + p.id.str());
          break;
        case SiteKind::abstraction:
          if (id)
            for (auto& p : projects_under(b, id->owner)) out.insert(p);
          break;
        case SiteKind::unit: {
          const EvidentialUnit* u = b.find_unit(*id);
          out.insert("tier:" + node);
          out.insert("study_log:" + node);
          auto tier = current_tier(*u);
          if (tier && *tier != Tier::excluded) out.insert("tier_table:" + node);
          if (u->assignment) out.insert("coherence:" + u->assignment->route_ref.str());
          break;
        }
        case SiteKind::route: {
          out.insert("coherence:" + node);
          for (const auto& a : b.find_route(*id)->body.assumptions) {
            auto key = a.id.str();
            if (seen.insert(key).second) queue.push_back(key);
          }
          break;
        }
        case SiteKind::route_assumption:
          out.insert("assumption:" + node);
          break;
        case SiteKind::reviewer_block:
          out.insert("reviewer_block:" + node.substr(std::string("reviewer_block:").size()));
          break;
        case SiteKind::project:
          out.insert("project:" + node);
          continue;  // membership is not citation
        case SiteKind::definition:
        case SiteKind::memo:
        case SiteKind::flow:
          break;
      }
    }
    if (auto it = g.citers.find(node); it != g.citers.end()) {
      for (const auto& c : it->second)
        if (seen.insert(c).second) queue.push_back(c);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> trace_downstream(const ContaminationEvent& e, const ProjectBundle& b) {
  static const std::string kFlow = "flow:";
  if (e.site.rfind(kFlow, 0) == 0) {
    auto flow_id = e.site.substr(kFlow.size());
    auto it = std::find_if(b.flows.begin(), b.flows.end(), [&](const FlowEvent& f) { return f.id == flow_id; });
    if (it == b.flows.end()) return {};
    auto out = projects_under(b, it->dest_layer);
    std::sort(out.begin(), out.end());
    return out;
  }
  return trace_from(e.site, b);
}

// ---------------------------------------------------------------------------
// Scanning
// ---------------------------------------------------------------------------

Json to_json(const ContaminationEvent& e) {
  Json affected = Json::array();
  for (const auto& a : e.decisions_affected) affected.push_back(a);
  Json j = {{"id", e.id},
            {"rule_violated", to_string(e.rule)},
            {"direction", to_string(e.direction)},
            {"nature", to_string(e.nature)},
            {"site", e.site},
            {"site_path", e.site_path},
            {"reference", e.reference},
            {"message", e.message},
            {"decisions_affected", affected}};
  if (!e.risks_introduced.empty()) j["risks_introduced"] = e.risks_introduced;
  if (e.corrective_action) j["corrective_action"] = to_string(*e.corrective_action);
  if (!e.versioned_update.empty()) j["versioned_update"] = e.versioned_update;
  if (!e.timestamp.empty()) j["timestamp"] = e.timestamp;
  return j;
}

namespace {

Nature nature_of_declaration(const std::string& id, const ProjectBundle& b, const DeclIndex& index) {
  auto it = index.find(id);
  if (it == index.end()) return Nature::content;
  if (it->second.kind == SiteKind::route_assumption) return Nature::assumption;
  if (it->second.kind == SiteKind::abstraction) {
    auto parsed = Identifier::parse(id);
    if (const LayerDecl* l = parsed ? b.find_layer(parsed->owner) : nullptr) {
      for (const auto& a : l->abstractions)
        if (a.id == *parsed && a.kind == AbstractionKind::measurement_class) return Nature::measurement;
    }
  }
  return Nature::content;
}

// Declarations a layer inherits, keyed by local name, with their bodies.
std::map<std::string, std::pair<Identifier, std::string>> inherited_bodies(const ProjectBundle& b,
                                                                            const LayerDecl& layer) {
  std::map<std::string, std::pair<Identifier, std::string>> out;
  const LayerDecl* cur = layer.parent_ref.empty() ? nullptr : b.find_layer(layer.parent_ref);
  for (int guard = 0; cur && guard < 4; ++guard) {
    for (const auto& a : cur->abstractions)
      if (!a.quarantined) out.emplace(a.id.local_name, std::make_pair(a.id, a.definition));
    for (const auto& law : cur->laws)
      if (!law.quarantined) out.emplace(law.id.local_name, std::make_pair(law.id, law.text));
    cur = cur->parent_ref.empty() ? nullptr : b.find_layer(cur->parent_ref);
  }
  return out;
}

}  // namespace

std::vector<ContaminationEvent> scan_bundle(const ProjectBundle& b) {
  std::map<std::string, ContaminationEvent> found;
  DeclIndex index = build_decl_index(b);
  auto add = [&](ContaminationEvent e) {
    e.id = std::string(to_string(e.rule)) + "@" + e.site + "->" + e.reference;
    found.emplace(e.id, std::move(e));
  };

  // Recorded flows (steps 1-4 over explicit movements).
  for (std::size_t i = 0; i < b.flows.size(); ++i) {
    const auto& f = b.flows[i];
    if (f.quarantined) continue;
    auto verdict = check_flow(f, b);
    if (!verdict || verdict.value().allowed) continue;
    ContaminationEvent e;
    e.rule = *verdict.value().rule;
    e.direction = *verdict.value().direction;
    e.nature = nature_of(f.info_class);
    e.site = "flow:" + f.id;
    e.site_path = "/flows/" + std::to_string(i);
    e.reference = f.dest_layer;
    e.message = f.source_layer + " -> " + f.dest_layer + ": " + verdict.value().reason;
    add(std::move(e));
  }

  // Static references between declarations.
  for (const auto& site : enumerate_sites(b, false)) {
    if (site.kind == SiteKind::flow) continue;
    const LayerDecl* layer = b.find_layer(site.layer);
    if (!layer) continue;
    std::set<std::string> done;
    for (const auto& ref : collect_references(site.json, site.path)) {
      auto key = ref.id.str();
      if (!done.insert(key).second || !index.count(key)) continue;
      std::string owner = owning_layer(ref.id, b);
      if (owner == layer->id) continue;
      const LayerDecl* origin = b.find_layer(owner);
      if (!origin) continue;
      int od = depth_of(*origin), ld = depth_of(*layer);
      if (od < ld && is_ancestor(b, origin->id, layer->id)) continue;  // inherited from above
      ContaminationEvent e;
      e.site = site.id;
      e.site_path = site.path;
      e.reference = key;
      e.nature = nature_of_declaration(key, b, index);
      if (od > ld) {
        e.rule = RuleViolated::R1_upward_content;
        e.direction = Direction::upward;
        e.message = std::string(to_string(site.kind)) + " in " + layer->id + " draws on lower-layer " + key;
      } else {
        e.direction = Direction::horizontal;
        auto info = info_of(e.nature);
        bool authorized = false, attempted = false;
        for (const auto& c : b.contracts) {
          if (c.origin_layer != origin->id || c.destination_layer != layer->id) continue;
          attempted = true;
          authorized = authorized || contract_matches(c, info, origin->id, layer->id, b);
        }
        if (authorized) continue;
        e.rule = attempted ? RuleViolated::R4_missing_contract : RuleViolated::R3_horizontal_borrowing;
        e.message = std::string(to_string(site.kind)) + " in " + layer->id + " borrows " + key + " from " +
                    origin->id + (attempted ? " under an inadequate contract" : " without a boundary contract");
      }
      add(std::move(e));
    }

    // Redefinition of an inherited declaration under the same name.
    std::optional<std::pair<Identifier, std::string>> own;
    if (site.kind == SiteKind::definition || site.kind == SiteKind::abstraction) {
      auto id = Identifier::parse(site.id);
      auto inherited = inherited_bodies(b, *layer);
      auto it = id ? inherited.find(id->local_name) : inherited.end();
      if (it != inherited.end()) {
        std::string body = site.kind == SiteKind::definition ? site.json.value("text", std::string())
                                                             : site.json.value("definition", std::string());
        if (body != it->second.second) {
          ContaminationEvent e;
          e.rule = RuleViolated::R2_downward_rewrite;
          e.direction = Direction::downward;
          e.nature = Nature::structural;
          e.site = site.id;
          e.site_path = site.path;
          e.reference = it->second.first.str();
          e.message = site.id + " redefines inherited " + it->second.first.str();
          add(std::move(e));
        }
      }
    }
  }

  std::vector<ContaminationEvent> out;
  for (auto& [_, e] : found) {
    e.decisions_affected = trace_downstream(e, b);
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const ContaminationEvent& x, const ContaminationEvent& y) {
    return std::tie(x.direction, x.id) < std::tie(y.direction, y.id);
  });
  return out;
}

Diagnostics contamination_findings(const ProjectBundle& b) {
  Diagnostics d;
  for (const auto& e : scan_bundle(b)) {
    auto diag = make_error(to_string(e.rule), e.site_path,
                           std::string(to_string(e.direction)) + " " + to_string(e.nature) + " contamination: " +
                               e.message);
    diag.rank = rank_of(e.direction);
    d.push_back(diag);
  }
  return d;
}

Diagnostics validate_contracts(const ProjectBundle& b) {
  Diagnostics d;
  for (std::size_t i = 0; i < b.contracts.size(); ++i) {
    if (!contract_complete(b.contracts[i], b))
      d.push_back(make_error("E_CONTRACT_INCOMPLETE", "/contracts/" + std::to_string(i),
                             "contract " + b.contracts[i].id +
                                 " needs a legal justification, a no-reinterpretation clause and a documentation event"));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

namespace {

// Removes every trace of `ref` from a declaration's JSON, leaving its own
// identifier untouched.
void scrub(Json& j, const std::string& ref) {
  if (j.is_object()) {
    if (auto it = j.find("assignment"); it != j.end() && it->is_object() && it->value("route_ref", "") == ref)
      j.erase("assignment");
    std::vector<std::string> drop;
    for (auto& [key, val] : j.items()) {
      if (key == "id" || key == "study_id") continue;
      if (key == ref || (val.is_string() && val.get<std::string>() == ref)) {
        drop.push_back(key);
        continue;
      }
      scrub(val, ref);
    }
    for (const auto& key : drop) j.erase(key);
    return;
  }
  if (j.is_array()) {
    Json kept = Json::array();
    for (auto& val : j) {
      if (val.is_string() && val.get<std::string>() == ref) continue;
      scrub(val, ref);
      kept.push_back(val);
    }
    j = kept;
    return;
  }
  if (j.is_string()) {
    auto id = Identifier::parse(ref);
    if (id) j = erase_reference(j.get<std::string>(), *id);
  }
}

void erase_at(Json& doc, const std::string& path) {
  auto slash = path.find_last_of('/');
  Json::json_pointer parent(path.substr(0, slash));
  auto index = std::stoul(path.substr(slash + 1));
  doc[parent].erase(index);
}

}  // namespace

Result<ProjectBundle> resolve_contamination(const ProjectBundle& b, const ResolutionRequest& req,
                                            const EventContext& ctx) {
  auto events = scan_bundle(b);
  auto it = std::find_if(events.begin(), events.end(), [&](const ContaminationEvent& e) { return e.id == req.event_id; });
  if (it == events.end())
    return make_error("E_UNKNOWN_EVENT", req.event_id, "no unresolved contamination event '" + req.event_id + "'");
  ContaminationEvent event = *it;

  Diagnostics d;
  if (blank(req.risks_introduced))
    d.push_back(make_error("E_UNDOCUMENTED", req.event_id + "/risks_introduced", "downstream risks are not documented"));
  if (blank(req.versioned_update))
    d.push_back(make_error("E_UNDOCUMENTED", req.event_id + "/versioned_update", "no versioned update is recorded"));
  if (!is_timestamp(ctx.timestamp))
    d.push_back(make_error("E_UNDOCUMENTED", req.event_id + "/timestamp", "resolution needs an ISO-8601 UTC timestamp"));
  if (!d.empty()) return d;

  bool is_flow = event.site.rfind("flow:", 0) == 0;
  auto site_id = Identifier::parse(event.site);
  DeclIndex index = build_decl_index(b);
  SiteKind kind = SiteKind::flow;
  if (!is_flow) {
    auto di = index.find(event.site);
    if (di != index.end()) kind = di->second.kind;
    else if (event.site.rfind("reviewer_block:", 0) == 0) kind = SiteKind::reviewer_block;
    else if (event.site.rfind("memo:", 0) == 0) kind = SiteKind::memo;
  }
  bool core_law = kind == SiteKind::law && site_id && is_core_law_id(*site_id);

  Json doc = bundle_to_json(b);
  Json::json_pointer ptr(event.site_path);
  Json effects = {{"quarantined", Json::array()}, {"removed", Json::array()}};
  Json insight_json;

  auto quarantine = [&]() -> std::optional<Diagnostic> {
    if (kind == SiteKind::project || core_law)
      return make_error("E_ACTION_UNSUPPORTED", event.id, std::string("a ") + to_string(kind) + " cannot be quarantined");
    doc[ptr]["quarantined"] = true;
    effects["quarantined"].push_back(event.site);
    return std::nullopt;
  };

  switch (req.action) {
    case CorrectiveAction::quarantined:
      if (auto problem = quarantine()) return *problem;
      break;
    case CorrectiveAction::reversed:
      if (kind == SiteKind::law)
        return make_error("E_ACTION_UNSUPPORTED", event.id,
                          "grandparent law text changes only through a version bump; quarantine instead");
      if (is_flow || event.rule == RuleViolated::R2_downward_rewrite) {
        erase_at(doc, event.site_path);
        effects["removed"].push_back(event.site);
      } else {
        scrub(doc[ptr], event.reference);
      }
      break;
    case CorrectiveAction::insight_extracted: {
      if (!req.insight) return make_error("E_INSIGHT_REJECTED", event.id, "no insight proposal supplied");
      InsightProposal p = *req.insight;
      const LayerDecl* target = b.find_layer(p.target_layer);
      if (target && target->kind == LayerKind::grandparent)
        return make_error("E_INSIGHT_REJECTED", event.id,
                          "grandparent laws grow only through a version bump with a changelog");
      if (!p.appends && target) {
        for (int n = 1;; ++n) {
          Identifier candidate{Namespace::parent, target->id, "insight_" + std::to_string(n)};
          if (!index.count(candidate.str())) {
            p.appends = candidate;
            break;
          }
        }
      }
      auto verdict = validate_insight_transmission(p, b);
      if (!verdict.passes) {
        Diagnostics out{make_error("E_INSIGHT_REJECTED", event.id, "insight proposal fails transmission checks")};
        for (auto& x : verdict.diagnostics) out.push_back(x);
        return out;
      }
      if (auto problem = quarantine()) return *problem;
      Abstraction a;
      a.id = *p.appends;
      a.kind = AbstractionKind::insight;
      a.definition = p.statement;
      auto li = std::find_if(b.layers.begin(), b.layers.end(), [&](const LayerDecl& l) { return l.id == target->id; });
      doc["layers"][static_cast<std::size_t>(li - b.layers.begin())]["abstractions"].push_back(to_json(a));
      insight_json = {{"id", p.id}, {"origin_layer", p.origin_layer}, {"target_layer", p.target_layer},
                      {"statement", p.statement}, {"appended", a.id.str()}};
      break;
    }
  }

  auto reparsed = parse_bundle_json(doc);
  if (!reparsed.ok()) {
    Diagnostics out{make_error("E_ACTION_UNSUPPORTED", event.id, "the corrective action would leave the bundle invalid")};
    for (auto& x : reparsed.diagnostics)
      if (x.severity == Severity::error) out.push_back(x);
    return out;
  }
  ProjectBundle next = std::move(*reparsed.bundle);
  next.events = b.events;  // unchanged; the parse copy is identical

  for (const auto& e : scan_bundle(next)) {
    if (e.id == event.id)
      return make_error("E_ACTION_UNSUPPORTED", event.id, "the corrective action does not remove the contamination");
  }

  if (!is_flow && site_id) {
    if (const EvidentialUnit* u = next.find_unit(*site_id)) effects["units"] = Json::array({to_json(*u)});
    if (const Route* r = next.find_route(*site_id)) effects["routes"] = Json::array({to_json(*r)});
  }

  event.risks_introduced = req.risks_introduced;
  event.corrective_action = req.action;
  event.versioned_update = req.versioned_update;
  event.timestamp = ctx.timestamp;
  Json payload = {{"event_id", event.id}, {"action", to_string(req.action)}, {"record", to_json(event)},
                  {"effects", effects}};
  if (!insight_json.is_null()) payload["insight"] = insight_json;
  return commit(std::move(next), EventKind::contamination_resolved, payload, {event.site, event.reference}, ctx);
}

Result<ProjectBundle> flag_contaminations(const ProjectBundle& b, const EventContext& ctx) {
  auto events = scan_bundle(b);
  if (events.empty()) return make_error("E_NOTHING_TO_FLAG", "/", "the bundle has no unresolved contamination");
  Json list = Json::array();
  std::vector<std::string> affected;
  for (const auto& e : events) {
    list.push_back(to_json(e));
    affected.push_back(e.site);
  }
  std::sort(affected.begin(), affected.end());
  affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
  return commit(b, EventKind::contamination_flagged, {{"events", list}}, affected, ctx);
}

Result<ProjectBundle> add_contract(const ProjectBundle& b, const BoundaryContract& contract, const EventContext& ctx) {
  if (b.find_contract(contract.id)) return make_error("E_DUP_ID", contract.id, "contract " + contract.id + " already declared");
  ProjectBundle next = b;
  next.contracts.push_back(contract);
  return commit(std::move(next), EventKind::declaration_added,
                {{"declaration", "contract"}, {"value", to_json(contract)}, {"op", "add"}},
                {contract.origin_layer, contract.destination_layer}, ctx);
}

Result<ProjectBundle> record_flow(const ProjectBundle& b, const FlowEvent& flow, const EventContext& ctx) {
  if (std::any_of(b.flows.begin(), b.flows.end(), [&](const FlowEvent& f) { return f.id == flow.id; }))
    return make_error("E_DUP_ID", flow.id, "flow " + flow.id + " already recorded");
  if (flow.quarantined) return make_error("E_BAD_DECLARATION", flow.id, "a new flow cannot start quarantined");
  ProjectBundle next = b;
  next.flows.push_back(flow);
  return commit(std::move(next), EventKind::flow_recorded, {{"flow", to_json(flow)}},
                {flow.source_layer, flow.dest_layer}, ctx);
}

}  // namespace recap
