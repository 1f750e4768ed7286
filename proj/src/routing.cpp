#include "recap/routing.hpp"

#include <map>

#include "op_support.hpp"
#include "recap/audit_log.hpp"
#include "recap/bundle_format.hpp"
#include "recap/tiering.hpp"

namespace recap {

using detail::blank;

std::string objective_label(const std::string& objective) {
  static const std::map<std::string, std::string> kLabels = {
      {"associational", "Associational"},
      {"measurement-evaluation", "Measurement evaluation"},
      {"comparative", "Comparative"},
      {"prognostic", "Prognostic"},
      {"descriptive", "Descriptive"},
      {"stability-mapping", "Stability mapping"},
      {"predictive", "Predictive"},
  };
  auto it = kLabels.find(objective);
  return it == kLabels.end() ? objective : it->second;
}

std::string role_label(EvidenceRole role) {
  switch (role) {
    case EvidenceRole::primary_inference: return "Primary inference";
    case EvidenceRole::sensitivity: return "Sensitivity";
    case EvidenceRole::boundary: return "Boundary";
    case EvidenceRole::contextual: return "Contextual";
    case EvidenceRole::measurement_evaluation: return "Measurement evaluation";
  }
  return "";
}

std::string evidence_type(const ProjectBundle& b, const EvidentialUnit& u) {
  if (!u.assignment) return "";
  if (u.assignment->role == EvidenceRole::primary_inference) {
    if (const Route* r = b.find_route(u.assignment->route_ref)) return objective_label(r->body.objective);
  }
  return role_label(u.assignment->role);
}

Diagnostics validate_route_body(const RouteBody& body, const std::string& loc) {
  Diagnostics d;
  if (blank(body.objective)) d.push_back(make_error("E_MISSING_FIELD", loc + "/objective", "route objective is empty"));
  if (body.construct_ref.empty())
    d.push_back(make_error("E_MISSING_FIELD", loc + "/construct_ref", "route names no target construct"));
  bool any_model = false;
  for (const auto& m : body.disconfirming_models) any_model = any_model || !blank(m);
  if (!any_model)
    d.push_back(make_error("E_NO_DISCONFIRMING", loc + "/disconfirming_models",
                           "a route needs at least one disconfirming model"));
  if (body.assumptions.empty())
    d.push_back(make_error("E_NO_ASSUMPTIONS", loc + "/assumptions", "a route needs at least one assumption"));
  for (std::size_t i = 0; i < body.assumptions.size(); ++i) {
    const auto& a = body.assumptions[i];
    if (blank(a.text) || blank(a.plausibility) || blank(a.failure_modes) || blank(a.consequences_for_inference)) {
      d.push_back(make_error("E_ASSUMPTION_INCOMPLETE", loc + "/assumptions/" + std::to_string(i),
                             "assumption " + a.id.str() +
                                 " needs text, plausibility, failure modes and consequences for inference"));
    }
  }
  return d;
}

Diagnostics check_route_coherence(const ProjectBundle& b, const Identifier& project) {
  Diagnostics d;
  const Route* route = b.committed_route(project);
  if (!route) {
    d.push_back(make_error("E_NO_COMMITTED_ROUTE", project.str(), project.str() + " has no committed route"));
    return d;
  }
  for (std::size_t i = 0; i < b.units.size(); ++i) {
    const auto& u = b.units[i];
    if (!u.active() || u.project_ref != project) continue;
    auto tier = current_tier(u);
    if (!tier) continue;
    auto loc = detail::unit_path(i) + "/assignment";
    const auto& a = u.assignment;
    switch (*tier) {
      case Tier::core:
        if (!a || a->route_ref != route->id || a->role != EvidenceRole::primary_inference) {
          d.push_back(make_error("E_CORE_OFF_ROUTE", loc,
                                 "core unit " + u.study_id.str() + " must serve primary inference on " +
                                     route->id.str()));
        }
        for (const auto& c : u.contradicts_assumptions) {
          bool on_route = std::any_of(route->body.assumptions.begin(), route->body.assumptions.end(),
                                      [&](const RouteAssumption& x) { return x.id == c; });
          if (on_route)
            d.push_back(make_error("E_ASSUMPTION_CONTRADICTED", detail::unit_path(i) + "/contradicts_assumptions",
                                   "core unit " + u.study_id.str() + " contradicts route assumption " + c.str()));
        }
        break;
      case Tier::supplement:
        if (!a)
          d.push_back(make_error("E_SUPPLEMENT_UNASSIGNED", loc,
                                 "supplement unit " + u.study_id.str() + " has no declared role"));
        else if (a->role == EvidenceRole::primary_inference)
          d.push_back(make_error("E_SUPPLEMENT_PRIMARY", loc,
                                 "supplement unit " + u.study_id.str() + " cannot serve primary inference"));
        break;
      case Tier::excluded:
        if (a)
          d.push_back(make_error("E_EXCLUDED_ASSIGNED", loc,
                                 "excluded unit " + u.study_id.str() + " cannot hold a role"));
        break;
    }
  }
  auto ri = detail::route_index(b, route->id);
  for (std::size_t k = 0; k < route->body.assumptions.size(); ++k) {
    const auto& a = route->body.assumptions[k];
    if (a.untestable_by_evidence) continue;
    bool tested = std::any_of(a.tested_by.begin(), a.tested_by.end(), [&](const Identifier& id) {
      const EvidentialUnit* u = b.find_unit(id);
      return u && u->active();
    });
    if (!tested)
      d.push_back(make_error("E_ASSUMPTION_UNTESTED", detail::route_path(*ri) + "/assumptions/" + std::to_string(k),
                             "assumption " + a.id.str() + " lists no evidence and is not marked untestable"));
  }
  return d;
}

Diagnostics validate_routing(const ProjectBundle& b) {
  Diagnostics d;
  for (std::size_t i = 0; i < b.routes.size(); ++i) {
    const auto& r = b.routes[i];
    if (r.quarantined) continue;
    auto loc = detail::route_path(i);
    for (auto& x : validate_route_body(r.body, loc)) d.push_back(x);
    if (!r.frozen() && !r.revisions.empty())
      d.push_back(make_error("E_NOT_FROZEN", loc + "/revisions", "revisions recorded on an unfrozen route"));
    for (std::size_t k = 0; k < r.revisions.size(); ++k) {
      const auto& rev = r.revisions[k];
      if (!is_timestamp(rev.timestamp) || blank(rev.justification) || blank(rev.downstream_implications) ||
          blank(rev.change_description))
        d.push_back(make_error("E_SILENT_REVISION", loc + "/revisions/" + std::to_string(k), "revision record is incomplete"));
    }
  }
  for (const auto& p : b.projects) {
    int committed = 0;
    for (const auto& r : b.routes)
      if (r.project_ref == p.id && r.committed()) ++committed;
    if (committed > 1)
      d.push_back(make_error("E_SECOND_ROUTE", p.id.str(), p.id.str() + " has " + std::to_string(committed) +
                                                                " committed routes"));
    if (const Route* r = b.committed_route(p.id); r && !r->frozen())
      d.push_back(make_error("E_ROUTE_NOT_FROZEN", r->id.str(), "committed route " + r->id.str() + " is not frozen"));
    for (auto& x : check_route_coherence(b, p.id)) d.push_back(x);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Mutations
// ---------------------------------------------------------------------------

Result<ProjectBundle> declare_route(const ProjectBundle& b, const Route& route, const EventContext& ctx) {
  if (!b.find_project(route.project_ref)) return detail::unknown_project(route.project_ref);
  if (b.find_route(route.id)) return make_error("E_DUP_ID", route.id.str(), "route " + route.id.str() + " already exists");
  Diagnostics d = validate_route_body(route.body, route.id.str());
  if (route.frozen() || !route.revisions.empty() || route.quarantined)
    d.push_back(make_error("E_BAD_DECLARATION", route.id.str(), "a new route starts unfrozen with no revisions"));
  if (route.status == RouteStatus::committed && b.committed_route(route.project_ref))
    d.push_back(make_error("E_SECOND_ROUTE", route.id.str(),
                           route.project_ref.str() + " already commits to " +
                               b.committed_route(route.project_ref)->id.str()));
  if (!d.empty()) return d;
  ProjectBundle next = b;
  next.routes.push_back(route);
  return commit(std::move(next), EventKind::route_declared, {{"op", "declare"}, {"route", to_json(route)}},
                {route.id.str()}, ctx);
}

Result<ProjectBundle> edit_route(const ProjectBundle& b, const Identifier& id, const RouteBody& body,
                                 const EventContext& ctx) {
  auto idx = detail::route_index(b, id);
  if (!idx || b.routes[*idx].quarantined) return detail::unknown_route(id);
  if (b.routes[*idx].frozen())
    return make_error("E_SILENT_REVISION", id.str(), "route " + id.str() + " is frozen; change it with reviseRoute");
  auto d = validate_route_body(body, id.str());
  if (!d.empty()) return d;
  ProjectBundle next = b;
  next.routes[*idx].body = body;
  return commit(std::move(next), EventKind::route_declared, {{"op", "edit"}, {"route", to_json(next.routes[*idx])}},
                {id.str()}, ctx);
}

Result<ProjectBundle> freeze_route(const ProjectBundle& b, const Identifier& project, const EventContext& ctx) {
  if (!b.find_project(project)) return detail::unknown_project(project);
  const Route* route = b.committed_route(project);
  if (!route) return make_error("E_NO_COMMITTED_ROUTE", project.str(), project.str() + " has no committed route");
  if (route->frozen())
    return make_error("E_ALREADY_FROZEN", route->id.str(), "route " + route->id.str() + " was frozen at " + route->frozen_at);
  if (!is_timestamp(ctx.timestamp))
    return make_error("E_PAYLOAD_SCHEMA", "timestamp", "freezing needs an ISO-8601 UTC timestamp");
  auto coherence = check_route_coherence(b, project);
  if (!coherence.empty()) {
    Diagnostics d{make_error("E_INCOHERENT", route->id.str(), "route " + route->id.str() + " is not coherent with the evidence")};
    for (auto& x : coherence) d.push_back(x);
    return d;
  }
  ProjectBundle next = b;
  auto idx = *detail::route_index(next, route->id);
  next.routes[idx].frozen_at = ctx.timestamp;
  return commit(std::move(next), EventKind::route_frozen,
                {{"route", route->id.str()}, {"frozen_at", ctx.timestamp}}, {route->id.str()}, ctx);
}

Result<ProjectBundle> revise_route(const ProjectBundle& b, const Identifier& project, const RouteRevision& revision,
                                   const RouteBody& body, const EventContext& ctx) {
  if (!b.find_project(project)) return detail::unknown_project(project);
  const Route* route = b.committed_route(project);
  if (!route) return make_error("E_NO_COMMITTED_ROUTE", project.str(), project.str() + " has no committed route");
  if (!route->frozen())
    return make_error("E_NOT_FROZEN", route->id.str(), "route " + route->id.str() + " is not frozen; edit it directly");
  if (!is_timestamp(revision.timestamp) || blank(revision.justification) || blank(revision.downstream_implications) ||
      blank(revision.change_description)) {
    return make_error("E_SILENT_REVISION", route->id.str(),
                      "a revision needs a timestamp, justification, downstream implications and change description");
  }
  auto d = validate_route_body(body, route->id.str());
  if (!d.empty()) return d;
  ProjectBundle next = b;
  auto idx = *detail::route_index(next, route->id);
  next.routes[idx].body = body;
  next.routes[idx].revisions.push_back(revision);
  auto coherence = check_route_coherence(next, project);
  if (!coherence.empty()) {
    Diagnostics out{make_error("E_INCOHERENT", route->id.str(), "revised route is not coherent with the evidence")};
    for (auto& x : coherence) out.push_back(x);
    return out;
  }
  return commit(std::move(next), EventKind::route_revised,
                {{"route", route->id.str()}, {"revision", to_json(revision)}, {"body", to_json(body)}},
                {route->id.str()}, ctx);
}

Result<ProjectBundle> assign_role(const ProjectBundle& b, const Identifier& unit,
                                  const EvidenceRoleAssignment& assignment, const EventContext& ctx) {
  auto idx = detail::unit_index(b, unit);
  if (!idx || !b.units[*idx].active()) return detail::unknown_unit(unit);
  const auto& u = b.units[*idx];
  const Route* route = b.find_route(assignment.route_ref);
  if (!route || route->quarantined || route->project_ref != u.project_ref) return detail::unknown_route(assignment.route_ref);
  auto tier = current_tier(u);
  if (!tier) return make_error("E_TIER_UNDECLARED", unit.str(), unit.str() + " must be tiered before it takes a role");
  bool primary = assignment.role == EvidenceRole::primary_inference;
  switch (*tier) {
    case Tier::excluded:
      return make_error("E_EXCLUDED_ASSIGNED", unit.str(), "excluded unit " + unit.str() + " cannot hold a role");
    case Tier::supplement:
      if (primary)
        return make_error("E_SUPPLEMENT_PRIMARY", unit.str(), "supplement unit " + unit.str() + " cannot serve primary inference");
      break;
    case Tier::core:
      if (!primary || !route->committed())
        return make_error("E_CORE_OFF_ROUTE", unit.str(),
                          "core unit " + unit.str() + " serves primary inference on the committed route");
      break;
  }
  ProjectBundle next = b;
  bool replacing = u.assignment.has_value();
  next.units[*idx].assignment = assignment;
  Json value = {{"unit", unit.str()}, {"route_ref", assignment.route_ref.str()}, {"role", to_string(assignment.role)}};
  if (!assignment.route_sketch.empty()) value["route_sketch"] = assignment.route_sketch;
  return commit(std::move(next), EventKind::declaration_added,
                {{"declaration", "assignment"}, {"op", replacing ? "reassign" : "add"}, {"value", value}},
                {unit.str(), assignment.route_ref.str()}, ctx);
}

}  // namespace recap
