#include "recap/commands.hpp"

#include <functional>
#include <map>

#include "recap/bundle_format.hpp"
#include "recap/contamination.hpp"
#include "recap/layer_registry.hpp"
#include "recap/reporting.hpp"
#include "recap/routing.hpp"
#include "recap/tiering.hpp"

namespace recap {

namespace {

Diagnostic usage(const std::string& where, const std::string& message) {
  return make_error("E_USAGE", where, message);
}

// Thin argument accessors; each throws a Diagnostic on failure so handlers
// stay linear.
struct Args {
  const Json& j;
  std::string op;

  const Json& at(const char* key) const {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw usage(op, std::string("missing argument '") + key + "'");
    return *it;
  }

  std::string text(const char* key) const {
    const Json& v = at(key);
    if (!v.is_string()) throw usage(op, std::string("argument '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string text_or(const char* key, std::string def) const {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return def;
    if (!it->is_string()) throw usage(op, std::string("argument '") + key + "' must be a string");
    return it->get<std::string>();
  }

  Identifier id(const char* key) const {
    auto s = text(key);
    auto parsed = Identifier::parse(s);
    if (!parsed) throw usage(op, std::string("argument '") + key + "' is not a qualified identifier: " + s);
    return *parsed;
  }

  bool has(const char* key) const { return j.contains(key) && !j[key].is_null(); }
};

template <class T>
T unwrap(Result<T> r) {
  if (!r) throw r.diagnostics();
  return std::move(r).value();
}

using Handler = std::function<Result<ProjectBundle>(const ProjectBundle&, const Args&, const EventContext&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> kHandlers = {
      {"declare_unit",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return declare_unit(b, unwrap(unit_from_json(a.at("unit"), "/unit")), ctx);
       }},
      {"declare_tier",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) -> Result<ProjectBundle> {
         auto tier = enum_from_string<Tier>(a.text("tier"));
         if (!tier) return usage(a.op, "unknown tier '" + a.text("tier") + "'");
         return declare_tier(b, a.id("unit"), *tier, a.text_or("justification", ""), ctx);
       }},
      {"update_assessment",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         auto interps = unwrap(assessments_from_json(a.at("interpretations"), "/interpretations"));
         std::vector<DeclaredAssumption> assumptions;
         if (a.has("assumptions")) assumptions = unwrap(declared_assumptions_from_json(a.at("assumptions"), "/assumptions"));
         return update_assessment(b, a.id("unit"), interps, assumptions, ctx);
       }},
      {"retier",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         ReTierRequest req;
         req.event = unwrap(retier_from_json(a.at("event"), "/event"));
         if (a.has("interpretations"))
           req.interpretations = unwrap(assessments_from_json(a.at("interpretations"), "/interpretations"));
         if (a.has("assumptions"))
           req.assumptions = unwrap(declared_assumptions_from_json(a.at("assumptions"), "/assumptions"));
         return apply_retier(b, a.id("unit"), req, ctx);
       }},
      {"split_unit",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) -> Result<ProjectBundle> {
         const Json& names = a.at("names");
         if (!names.is_array()) return usage(a.op, "names must be an array");
         std::vector<std::string> out;
         for (const auto& n : names) {
           if (!n.is_string()) return usage(a.op, "names must be strings");
           out.push_back(n.get<std::string>());
         }
         return split_unit(b, a.id("unit"), out, ctx);
       }},
      {"declare_route",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return declare_route(b, unwrap(route_from_json(a.at("route"), "/route")), ctx);
       }},
      {"edit_route",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return edit_route(b, a.id("route"), unwrap(route_body_from_json(a.at("body"), "/body")), ctx);
       }},
      {"freeze_route",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) { return freeze_route(b, a.id("project"), ctx); }},
      {"revise_route",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return revise_route(b, a.id("project"), unwrap(revision_from_json(a.at("revision"), "/revision")),
                             unwrap(route_body_from_json(a.at("body"), "/body")), ctx);
       }},
      {"assign_role",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) -> Result<ProjectBundle> {
         const Json& aj = a.at("assignment");
         Args inner{aj, a.op};
         auto role = enum_from_string<EvidenceRole>(inner.text("role"));
         if (!role) return usage(a.op, "unknown role '" + inner.text("role") + "'");
         EvidenceRoleAssignment assignment{inner.id("route_ref"), *role, inner.text_or("route_sketch", "")};
         return assign_role(b, a.id("unit"), assignment, ctx);
       }},
      {"record_flow",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return record_flow(b, unwrap(flow_from_json(a.at("flow"), "/flow")), ctx);
       }},
      {"add_contract",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return add_contract(b, unwrap(contract_from_json(a.at("contract"), "/contract")), ctx);
       }},
      {"flag_contaminations",
       [](const ProjectBundle& b, const Args&, const EventContext& ctx) { return flag_contaminations(b, ctx); }},
      {"resolve_contamination",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) -> Result<ProjectBundle> {
         ResolutionRequest req;
         req.event_id = a.text("event_id");
         auto action = a.text("action");
         if (action == "quarantine" || action == "quarantined") req.action = CorrectiveAction::quarantined;
         else if (action == "reverse" || action == "reversed") req.action = CorrectiveAction::reversed;
         else if (action == "extract_insight" || action == "insight_extracted") req.action = CorrectiveAction::insight_extracted;
         else return usage(a.op, "unknown action '" + action + "'");
         req.risks_introduced = a.text_or("risks_introduced", "");
         req.versioned_update = a.text_or("versioned_update", "");
         if (a.has("insight")) {
           Args in{a.at("insight"), a.op};
           auto p = make_insight(in.text_or("id", "insight"), in.text("origin_layer"), in.text("target_layer"),
                                 in.text("statement"));
           if (in.has("appends")) p.appends = in.id("appends");
           if (in.has("modifies")) {
             for (const auto& m : in.at("modifies")) {
               auto id = m.is_string() ? Identifier::parse(m.get<std::string>()) : std::nullopt;
               if (!id) return usage(a.op, "modifies must list qualified identifiers");
               p.modifies.push_back(*id);
             }
           }
           req.insight = p;
         }
         return resolve_contamination(b, req, ctx);
       }},
      {"bump_version",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         auto entry = unwrap(changelog_from_json(a.at("changelog")));
         return bump_version(b, entry, unwrap(laws_from_json(a.at("laws"), "/laws")), ctx);
       }},
      {"add_reviewer_block",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return add_reviewer_block(b, unwrap(reviewer_block_from_json(a.at("block"), "/block")), ctx);
       }},
      {"add_memo",
       [](const ProjectBundle& b, const Args& a, const EventContext& ctx) {
         return add_memo(b, unwrap(memo_from_json(a.at("memo"), "/memo")), ctx);
       }},
  };
  return kHandlers;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : handlers()) out.push_back(name);
    return out;
  }();
  return kNames;
}

Result<ProjectBundle> execute(const ProjectBundle& bundle, const Json& command) {
  if (!command.is_object()) return usage("command", "a command must be a JSON object");
  auto op = command.value("op", std::string());
  auto it = handlers().find(op);
  if (it == handlers().end()) return usage("command", "unknown op '" + op + "'");
  Args args{command, op};
  try {
    EventContext ctx{args.text("at"), args.text_or("actor", "")};
    return it->second(bundle, args, ctx);
  } catch (const Diagnostic& d) {
    return d;
  } catch (const Diagnostics& d) {
    return d;
  } catch (const nlohmann::json::exception& e) {
    return usage(op, e.what());
  }
}

}  // namespace recap
