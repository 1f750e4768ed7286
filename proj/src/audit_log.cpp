#include "recap/audit_log.hpp"

#include <algorithm>

#include "recap/bundle_format.hpp"
#include "recap/tiering.hpp"

namespace recap {

namespace {

struct PayloadField {
  const char* key;
  Json::value_t type;
};

std::vector<PayloadField> payload_schema(EventKind kind) {
  using T = Json::value_t;
  switch (kind) {
    case EventKind::tier_declared:
      return {{"unit", T::string}, {"tier", T::string}, {"justification", T::string}};
    case EventKind::retier:
      return {{"unit", T::string}, {"old_tier", T::string}, {"new_tier", T::string}, {"event", T::object}};
    case EventKind::route_declared:
      return {{"route", T::object}};
    case EventKind::route_frozen:
      return {{"route", T::string}, {"frozen_at", T::string}};
    case EventKind::route_revised:
      return {{"route", T::string}, {"revision", T::object}, {"body", T::object}};
    case EventKind::flow_recorded:
      return {{"flow", T::object}};
    case EventKind::contamination_flagged:
      return {{"events", T::array}};
    case EventKind::contamination_resolved:
      return {{"event_id", T::string}, {"action", T::string}, {"effects", T::object}};
    case EventKind::version_bumped:
      return {{"from", T::string}, {"to", T::string}, {"changelog", T::object},
              {"laws_before", T::array}, {"laws_after", T::array}};
    case EventKind::unit_split:
      return {{"unit", T::string}, {"units", T::array}};
    case EventKind::declaration_added:
      return {{"declaration", T::string}, {"value", T::object}};
    case EventKind::declaration_quarantined:
      return {{"declaration", T::string}, {"id", T::string}};
  }
  return {};
}

bool type_matches(const Json& v, Json::value_t want) {
  if (want == Json::value_t::object) return v.is_object();
  if (want == Json::value_t::array) return v.is_array();
  if (want == Json::value_t::string) return v.is_string();
  return v.type() == want;
}

const char* type_name(Json::value_t t) {
  switch (t) {
    case Json::value_t::object: return "object";
    case Json::value_t::array: return "array";
    case Json::value_t::string: return "string";
    default: return "value";
  }
}

}  // namespace

Diagnostics validate_payload(EventKind kind, const Json& payload, const std::string& location) {
  Diagnostics d;
  if (!payload.is_object()) {
    d.push_back(make_error("E_PAYLOAD_SCHEMA", location, "payload must be an object"));
    return d;
  }
  auto fields = payload_schema(kind);
  fields.push_back({"engine_version", Json::value_t::string});
  for (const auto& f : fields) {
    auto it = payload.find(f.key);
    if (it == payload.end() || !type_matches(*it, f.type)) {
      d.push_back(make_error("E_PAYLOAD_SCHEMA", location + "/" + f.key,
                             std::string(to_string(kind)) + " payload needs " + type_name(f.type) + " '" +
                                 f.key + "'"));
    }
  }
  return d;
}

Result<ProjectBundle> append_event(const ProjectBundle& bundle, const AuditEvent& event) {
  Diagnostics d;
  auto loc = "/events/" + std::to_string(bundle.events.size());
  long long want = bundle.last_sequence() + 1;
  if (event.sequence != want) {
    d.push_back(make_error("E_SEQUENCE_GAP", loc + "/sequence",
                           "expected sequence " + std::to_string(want) + ", got " + std::to_string(event.sequence)));
  }
  if (!is_timestamp(event.timestamp))
    d.push_back(make_error("E_PAYLOAD_SCHEMA", loc + "/timestamp", "timestamp must be ISO-8601 UTC"));
  else if (!bundle.events.empty() && event.timestamp < bundle.events.back().timestamp)
    d.push_back(make_error("E_TIME_REGRESSION", loc + "/timestamp",
                           "timestamp " + event.timestamp + " precedes the last event (" +
                               bundle.events.back().timestamp + ")"));
  for (auto& x : validate_payload(event.kind, event.payload, loc + "/payload")) d.push_back(x);
  if (!d.empty()) return d;
  ProjectBundle next = bundle;
  next.events.push_back(event);
  return next;
}

Result<ProjectBundle> commit(ProjectBundle next, EventKind kind, Json payload, std::vector<std::string> affected,
                             const EventContext& ctx) {
  auto integrity = check_integrity(next);
  if (has_errors(integrity)) return integrity;
  AuditEvent e;
  e.sequence = next.last_sequence() + 1;
  e.timestamp = ctx.timestamp;
  e.actor = ctx.actor;
  e.kind = kind;
  payload["engine_version"] = kEngineVersion;
  e.payload = std::move(payload);
  e.affected = std::move(affected);
  return append_event(next, e);
}

Diagnostics validate_event_log(const std::vector<AuditEvent>& events) {
  Diagnostics d;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    auto loc = "/events/" + std::to_string(i);
    long long want = static_cast<long long>(i) + 1;
    if (e.sequence != want)
      d.push_back(make_error("E_SEQUENCE_GAP", loc + "/sequence",
                             "expected sequence " + std::to_string(want) + ", got " + std::to_string(e.sequence)));
    if (!is_timestamp(e.timestamp))
      d.push_back(make_error("E_PAYLOAD_SCHEMA", loc + "/timestamp", "timestamp must be ISO-8601 UTC"));
    else if (i > 0 && e.timestamp < events[i - 1].timestamp)
      d.push_back(make_error("E_TIME_REGRESSION", loc + "/timestamp", "events are not in timestamp order"));
    for (auto& x : validate_payload(e.kind, e.payload, loc + "/payload")) d.push_back(x);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Derived state
// ---------------------------------------------------------------------------

namespace {

void put_unit(DerivedState& s, const EvidentialUnit& u) {
  auto key = u.study_id.str();
  s.tiers.erase(key);
  s.assignments.erase(key);
  if (!u.active()) return;
  s.tiers[key] = effective_tier(u);
  if (u.assignment) s.assignments[key] = AssignmentState{u.assignment->route_ref.str(), u.assignment->role};
}

void put_route(DerivedState& s, const Route& r) {
  auto key = r.id.str();
  s.routes.erase(key);
  if (r.quarantined) return;
  s.routes[key] = RouteState{r.status, r.frozen(), r.revisions.size()};
}

void drop(DerivedState& s, const std::string& id) {
  s.tiers.erase(id);
  s.assignments.erase(id);
  s.routes.erase(id);
}

}  // namespace

DerivedState derive_state(const ProjectBundle& b) {
  DerivedState s;
  for (const auto& u : b.units) put_unit(s, u);
  for (const auto& r : b.routes) put_route(s, r);
  for (const auto& e : b.events) {
    if (e.kind == EventKind::contamination_resolved && e.payload.contains("event_id"))
      s.resolved_contaminations.insert(e.payload["event_id"].get<std::string>());
  }
  if (const LayerDecl* g = b.grandparent()) {
    s.version = g->version;
    for (const auto& law : g->laws) s.law_ids.push_back(law.id.str());
  }
  return s;
}

namespace {

Diagnostic divergence(const AuditEvent& e, const std::string& message) {
  return make_error("E_REPLAY_DIVERGENCE", "event " + std::to_string(e.sequence), message);
}

std::optional<Diagnostic> apply_event(DerivedState& s, const AuditEvent& e) {
  const Json& p = e.payload;
  auto str = [&](const char* key) { return p.value(key, std::string()); };
  switch (e.kind) {
    case EventKind::tier_declared: {
      auto unit = str("unit");
      if (!s.tiers.count(unit)) return divergence(e, "tier declared for unknown unit " + unit);
      auto tier = enum_from_string<Tier>(str("tier"));
      if (!tier) return divergence(e, "bad tier");
      s.tiers[unit] = *tier;
      return std::nullopt;
    }
    case EventKind::retier: {
      auto unit = str("unit");
      auto it = s.tiers.find(unit);
      if (it == s.tiers.end()) return divergence(e, "retier of unknown unit " + unit);
      auto old_tier = enum_from_string<Tier>(str("old_tier"));
      auto new_tier = enum_from_string<Tier>(str("new_tier"));
      if (!old_tier || !new_tier) return divergence(e, "bad tier");
      if (it->second != old_tier) return divergence(e, "retier old tier does not match replayed tier for " + unit);
      it->second = *new_tier;
      return std::nullopt;
    }
    case EventKind::route_declared: {
      auto r = route_from_json(p["route"]);
      if (!r) return divergence(e, "undecodable route payload");
      put_route(s, r.value());
      return std::nullopt;
    }
    case EventKind::route_frozen: {
      auto it = s.routes.find(str("route"));
      if (it == s.routes.end()) return divergence(e, "freeze of unknown route");
      if (it->second.frozen) return divergence(e, "route frozen twice");
      it->second.frozen = true;
      return std::nullopt;
    }
    case EventKind::route_revised: {
      auto it = s.routes.find(str("route"));
      if (it == s.routes.end()) return divergence(e, "revision of unknown route");
      if (!it->second.frozen) return divergence(e, "revision of an unfrozen route");
      ++it->second.revisions;
      return std::nullopt;
    }
    case EventKind::flow_recorded:
    case EventKind::contamination_flagged:
      return std::nullopt;
    case EventKind::contamination_resolved: {
      auto id = str("event_id");
      if (!s.resolved_contaminations.insert(id).second) return divergence(e, "contamination resolved twice: " + id);
      const Json& fx = p["effects"];
      for (const auto& key : {"quarantined", "removed"}) {
        if (auto it = fx.find(key); it != fx.end())
          for (const auto& v : *it) drop(s, v.get<std::string>());
      }
      if (auto it = fx.find("units"); it != fx.end()) {
        for (const auto& uj : *it) {
          auto u = unit_from_json(uj);
          if (!u) return divergence(e, "undecodable unit in resolution effects");
          put_unit(s, u.value());
        }
      }
      if (auto it = fx.find("routes"); it != fx.end()) {
        for (const auto& rj : *it) {
          auto r = route_from_json(rj);
          if (!r) return divergence(e, "undecodable route in resolution effects");
          put_route(s, r.value());
        }
      }
      return std::nullopt;
    }
    case EventKind::version_bumped: {
      if (str("from") != s.version) return divergence(e, "version bump from " + str("from") + " but state is at " + s.version);
      s.version = str("to");
      s.law_ids.clear();
      for (const auto& law : p["laws_after"]) s.law_ids.push_back(law.value("id", std::string()));
      return std::nullopt;
    }
    case EventKind::unit_split: {
      auto unit = str("unit");
      if (!s.tiers.count(unit)) return divergence(e, "split of unknown unit " + unit);
      drop(s, unit);
      for (const auto& uj : p["units"]) {
        auto u = unit_from_json(uj);
        if (!u) return divergence(e, "undecodable split unit");
        put_unit(s, u.value());
      }
      return std::nullopt;
    }
    case EventKind::declaration_added: {
      auto kind = str("declaration");
      const Json& v = p["value"];
      if (kind == "unit") {
        auto u = unit_from_json(v);
        if (!u) return divergence(e, "undecodable unit payload");
        put_unit(s, u.value());
      } else if (kind == "assignment") {
        auto unit = v.value("unit", std::string());
        if (!s.tiers.count(unit)) return divergence(e, "assignment for unknown unit " + unit);
        auto role = enum_from_string<EvidenceRole>(v.value("role", std::string()));
        if (!role) return divergence(e, "bad role");
        s.assignments[unit] = AssignmentState{v.value("route_ref", std::string()), *role};
      }
      return std::nullopt;
    }
    case EventKind::declaration_quarantined:
      drop(s, str("id"));
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Result<DerivedState> replay(const std::vector<AuditEvent>& events, const ProjectBundle& initial) {
  DerivedState s = derive_state(initial);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (i > 0 && e.sequence <= events[i - 1].sequence)
      return divergence(e, "events are not in sequence order");
    if (auto problem = apply_event(s, e)) return *problem;
  }
  return s;
}

Diagnostics verify_replay(const ProjectBundle& initial, const ProjectBundle& current) {
  long long base = initial.last_sequence();
  std::vector<AuditEvent> tail;
  for (const auto& e : current.events)
    if (e.sequence > base) tail.push_back(e);
  auto replayed = replay(tail, initial);
  if (!replayed) return replayed.diagnostics();
  if (replayed.value() != derive_state(current)) {
    return {make_error("E_REPLAY_DIVERGENCE", "/events",
                       "replayed state differs from live state: replayed " + to_json(replayed.value()).dump() +
                           " live " + to_json(derive_state(current)).dump())};
  }
  return {};
}

Json to_json(const DerivedState& s) {
  Json tiers = Json::object();
  for (const auto& [k, t] : s.tiers) tiers[k] = t ? Json(to_string(*t)) : Json(nullptr);
  Json assignments = Json::object();
  for (const auto& [k, a] : s.assignments) assignments[k] = {{"route", a.route}, {"role", to_string(a.role)}};
  Json routes = Json::object();
  for (const auto& [k, r] : s.routes)
    routes[k] = {{"status", to_string(r.status)}, {"frozen", r.frozen}, {"revisions", r.revisions}};
  Json resolved = Json::array();
  for (const auto& id : s.resolved_contaminations) resolved.push_back(id);
  Json laws = Json::array();
  for (const auto& id : s.law_ids) laws.push_back(id);
  return {{"tiers", tiers}, {"assignments", assignments}, {"routes", routes},
          {"resolved_contaminations", resolved}, {"version", s.version}, {"law_ids", laws}};
}

}  // namespace recap
