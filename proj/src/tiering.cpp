#include "recap/tiering.hpp"

#include <algorithm>
#include <set>

#include "op_support.hpp"
#include "recap/audit_log.hpp"
#include "recap/bundle_format.hpp"

namespace recap {

using detail::blank;

std::vector<Dimension> sub_core_dimensions(const Assessment& a) {
  std::vector<Dimension> out;
  if (a.construct_alignment == ConstructAlignment::partial) out.push_back(Dimension::construct_alignment);
  if (a.measurement == Measurement::conditional_proxy) out.push_back(Dimension::measurement);
  if (a.design == Design::limited) out.push_back(Dimension::design);
  if (a.reporting == Reporting::ambiguous) out.push_back(Dimension::reporting);
  return out;
}

TierDecision compute_tier(const Assessment& a, const std::vector<DeclaredAssumption>& assumptions) {
  if (a.construct_alignment == ConstructAlignment::mismatch || a.reporting == Reporting::opaque)
    return {Tier::excluded, kRuleStep1Mismatch, {}, {}};
  if (a.speculation_required) return {Tier::excluded, kRuleSpeculation, {}, {}};
  if (a.measurement == Measurement::failed || a.design == Design::incompatible)
    return {Tier::excluded, kRuleStep3Failed, {}, {}};
  auto gaps = sub_core_dimensions(a);
  if (gaps.empty()) return {Tier::core, kRuleCore, {}, {}};
  std::vector<Dimension> uncovered;
  for (auto dim : gaps) {
    bool covered = std::any_of(assumptions.begin(), assumptions.end(), [&](const DeclaredAssumption& x) {
      return std::find(x.covers.begin(), x.covers.end(), dim) != x.covers.end();
    });
    if (!covered) uncovered.push_back(dim);
  }
  if (uncovered.empty()) return {Tier::supplement, kRuleSupplementCovered, {}, {}};
  return {Tier::excluded, kRuleUncoveredAmbiguity, uncovered, {}};
}

Result<TierDecision> tier_unit(const EvidentialUnit& u) {
  if (u.interpretations.empty())
    return make_error("E_MISSING_FIELD", u.study_id.str(), "unit has no interpretation to tier");
  if (u.interpretations.size() == 1) return compute_tier(u.interpretations.front(), u.explicit_assumptions);
  if (u.splittable) {
    return make_error("E_MUST_SPLIT", u.study_id.str(),
                      "unit has " + std::to_string(u.interpretations.size()) +
                          " interpretations and is splittable; split it before tiering");
  }
  TierDecision merged{Tier::core, kRuleConservativeMerge, {}, {}};
  for (const auto& a : u.interpretations) {
    auto d = compute_tier(a, u.explicit_assumptions);
    merged.tier = std::min(merged.tier, d.tier);
    merged.components.push_back(std::move(d));
  }
  return merged;
}

std::optional<Tier> effective_tier(const EvidentialUnit& u) {
  if (!u.declared_tier) return std::nullopt;
  Tier t = *u.declared_tier;
  for (const auto& e : u.retier_events) t = e.new_tier;
  return t;
}

std::optional<Tier> current_tier(const EvidentialUnit& u) {
  if (auto t = effective_tier(u)) return t;
  auto d = tier_unit(u);
  if (!d) return std::nullopt;
  return d.value().tier;
}

Diagnostics check_tier_declaration(const EvidentialUnit& u, const std::string& location) {
  Diagnostics d;
  auto declared = effective_tier(u);
  if (!declared) return d;
  auto loc = location.empty() ? u.study_id.str() : location;
  if (blank(u.tier_justification))
    d.push_back(make_error("E_NO_JUSTIFICATION", loc + "/tier_justification",
                           "tier declared for " + u.study_id.str() + " without a justification"));
  auto computed = tier_unit(u);
  if (!computed) {
    for (const auto& x : computed.diagnostics()) d.push_back(make_error(x.code, loc, x.message));
    return d;
  }
  if (computed.value().tier != *declared) {
    d.push_back(make_error("E_TIER_MISMATCH", loc + "/declared_tier",
                           u.study_id.str() + " declared " + to_string(*declared) + " but assessments give " +
                               to_string(computed.value().tier) + " (" + computed.value().rule + ")"));
  }
  return d;
}

namespace {

bool retier_complete(const ReTierEvent& e) {
  return is_timestamp(e.timestamp) && !blank(e.source_of_information) && !blank(e.justification) &&
         !blank(e.implications_for_route);
}

}  // namespace

Diagnostics validate_tiering(const ProjectBundle& b) {
  Diagnostics d;
  for (std::size_t i = 0; i < b.units.size(); ++i) {
    const auto& u = b.units[i];
    if (!u.active()) continue;
    auto loc = detail::unit_path(i);
    if (!u.declared_tier) {
      auto computed = tier_unit(u);
      if (!computed) {
        for (const auto& x : computed.diagnostics()) d.push_back(make_error(x.code, loc, x.message));
      } else {
        d.push_back(make_error("E_TIER_UNDECLARED", loc + "/declared_tier",
                               u.study_id.str() + " has no declared tier (assessments give " +
                                   to_string(computed.value().tier) + ")"));
      }
      continue;
    }
    for (auto& x : check_tier_declaration(u, loc)) d.push_back(x);
    Tier prior = *u.declared_tier;
    for (std::size_t k = 0; k < u.retier_events.size(); ++k) {
      const auto& e = u.retier_events[k];
      auto eloc = loc + "/retier_events/" + std::to_string(k);
      if (!retier_complete(e))
        d.push_back(make_error("E_SILENT_RETIER", eloc, "re-tier record is incomplete"));
      if (e.old_tier != prior)
        d.push_back(make_error("E_STALE_OLD_TIER", eloc + "/old_tier",
                               std::string("re-tier starts from ") + to_string(e.old_tier) + " but the tier was " +
                                   to_string(prior)));
      if (k > 0 && e.timestamp < u.retier_events[k - 1].timestamp)
        d.push_back(make_error("E_TIME_REGRESSION", eloc + "/timestamp", "re-tier events out of timestamp order"));
      prior = e.new_tier;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Mutations
// ---------------------------------------------------------------------------

Result<ProjectBundle> declare_unit(const ProjectBundle& b, const EvidentialUnit& unit, const EventContext& ctx) {
  Diagnostics d;
  const ProjectDecl* project = b.find_project(unit.project_ref);
  if (!project) return detail::unknown_project(unit.project_ref);
  if (b.find_unit(unit.study_id))
    return make_error("E_DUP_ID", unit.study_id.str(), "unit " + unit.study_id.str() + " already exists");
  if (unit.interpretations.empty())
    d.push_back(make_error("E_MISSING_FIELD", unit.study_id.str() + "/interpretations", "a unit needs an interpretation"));
  if (!unit.retier_events.empty())
    d.push_back(make_error("E_SILENT_RETIER", unit.study_id.str() + "/retier_events",
                           "re-tier history is only written by applyReTier"));
  if (unit.assignment || !unit.superseded_by.empty() || unit.quarantined)
    d.push_back(make_error("E_BAD_DECLARATION", unit.study_id.str(),
                           "new units carry no assignment, supersession, or quarantine flag"));
  for (auto& x : check_tier_declaration(unit)) d.push_back(x);
  if (!d.empty()) return d;
  ProjectBundle next = b;
  next.units.push_back(unit);
  return commit(std::move(next), EventKind::declaration_added,
                {{"declaration", "unit"}, {"op", "add"}, {"value", to_json(unit)}}, {unit.study_id.str()}, ctx);
}

Result<ProjectBundle> declare_tier(const ProjectBundle& b, const Identifier& id, Tier tier,
                                   const std::string& justification, const EventContext& ctx) {
  auto idx = detail::unit_index(b, id);
  if (!idx || !b.units[*idx].active()) return detail::unknown_unit(id);
  const auto& u = b.units[*idx];
  if (u.declared_tier)
    return make_error("E_ALREADY_DECLARED", id.str(), id.str() + " already has a declared tier; use applyReTier");
  EvidentialUnit updated = u;
  updated.declared_tier = tier;
  updated.tier_justification = justification;
  auto d = check_tier_declaration(updated);
  if (!d.empty()) return d;
  ProjectBundle next = b;
  next.units[*idx] = updated;
  auto decision = tier_unit(updated).value();
  return commit(std::move(next), EventKind::tier_declared,
                {{"unit", id.str()}, {"tier", to_string(tier)}, {"justification", justification}, {"rule", decision.rule}},
                {id.str()}, ctx);
}

Result<ProjectBundle> update_assessment(const ProjectBundle& b, const Identifier& id,
                                        const std::vector<Assessment>& interpretations,
                                        const std::vector<DeclaredAssumption>& assumptions, const EventContext& ctx) {
  auto idx = detail::unit_index(b, id);
  if (!idx || !b.units[*idx].active()) return detail::unknown_unit(id);
  EvidentialUnit updated = b.units[*idx];
  updated.interpretations = interpretations;
  updated.explicit_assumptions = assumptions;
  if (interpretations.empty()) return make_error("E_MISSING_FIELD", id.str(), "a unit needs an interpretation");
  if (auto declared = effective_tier(updated)) {
    auto computed = tier_unit(updated);
    if (!computed || computed.value().tier != *declared) {
      std::string now = computed ? to_string(computed.value().tier) : "untierable";
      return make_error("E_SILENT_RETIER", id.str(),
                        "edit would move " + id.str() + " from " + to_string(*declared) + " to " + now +
                            " without a re-tier record");
    }
  }
  ProjectBundle next = b;
  next.units[*idx] = updated;
  return commit(std::move(next), EventKind::declaration_added,
                {{"declaration", "unit"}, {"op", "update"}, {"value", to_json(updated)}}, {id.str()}, ctx);
}

Result<ProjectBundle> apply_retier(const ProjectBundle& b, const Identifier& id, const ReTierRequest& req,
                                   const EventContext& ctx) {
  auto idx = detail::unit_index(b, id);
  if (!idx || !b.units[*idx].active()) return detail::unknown_unit(id);
  const auto& u = b.units[*idx];
  if (!retier_complete(req.event))
    return make_error("E_SILENT_RETIER", id.str(),
                      "a tier change needs a timestamp, source of information, justification and route implications");
  auto current = effective_tier(u);
  if (!current) return make_error("E_TIER_UNDECLARED", id.str(), id.str() + " has no declared tier to revise");
  if (req.event.old_tier != *current) {
    return make_error("E_STALE_OLD_TIER", id.str(),
                      std::string("re-tier claims old tier ") + to_string(req.event.old_tier) + " but " + id.str() +
                          " is " + to_string(*current));
  }
  if (!u.retier_events.empty() && req.event.timestamp < u.retier_events.back().timestamp)
    return make_error("E_TIME_REGRESSION", id.str(), "re-tier timestamp precedes the previous re-tier");
  EvidentialUnit updated = u;
  if (req.interpretations) updated.interpretations = *req.interpretations;
  if (req.assumptions) updated.explicit_assumptions = *req.assumptions;
  auto computed = tier_unit(updated);
  if (!computed) return computed.diagnostics();
  if (computed.value().tier != req.event.new_tier) {
    return make_error("E_TIER_MISMATCH", id.str(),
                      std::string("re-tier to ") + to_string(req.event.new_tier) + " but updated assessments give " +
                          to_string(computed.value().tier) + " (" + computed.value().rule + ")");
  }
  updated.retier_events.push_back(req.event);
  ProjectBundle next = b;
  next.units[*idx] = updated;
  return commit(std::move(next), EventKind::retier,
                {{"unit", id.str()},
                 {"old_tier", to_string(req.event.old_tier)},
                 {"new_tier", to_string(req.event.new_tier)},
                 {"event", to_json(req.event)},
                 {"value", to_json(updated)}},
                {id.str()}, ctx);
}

Result<ProjectBundle> split_unit(const ProjectBundle& b, const Identifier& id, const std::vector<std::string>& names,
                                 const EventContext& ctx) {
  auto idx = detail::unit_index(b, id);
  if (!idx || !b.units[*idx].active()) return detail::unknown_unit(id);
  const auto& u = b.units[*idx];
  if (!u.splittable) return make_error("E_NOT_SPLITTABLE", id.str(), id.str() + " is not declared splittable");
  if (names.size() != u.interpretations.size()) {
    return make_error("E_NAME_ARITY", id.str(),
                      "split needs " + std::to_string(u.interpretations.size()) + " names, got " +
                          std::to_string(names.size()));
  }
  std::vector<Identifier> ids;
  std::set<Identifier> seen;
  for (const auto& name : names) {
    auto nid = Identifier::parse_in(name, Namespace::child, u.study_id.owner);
    if (!nid) return make_error("E_NAME_ARITY", id.str(), "malformed unit name '" + name + "'");
    if (!seen.insert(*nid).second) return make_error("E_NAME_ARITY", id.str(), "duplicate unit name '" + name + "'");
    if (b.find_unit(*nid)) return make_error("E_DUP_ID", nid->str(), "unit " + nid->str() + " already exists");
    ids.push_back(*nid);
  }
  ProjectBundle next = b;
  Json created = Json::array();
  std::vector<std::string> affected{id.str()};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    EvidentialUnit part;
    part.study_id = ids[i];
    part.project_ref = u.project_ref;
    part.design_type = u.design_type;
    part.interpretations = {u.interpretations[i]};
    part.explicit_assumptions = u.explicit_assumptions;
    part.measurement_refs = u.measurement_refs;
    part.split_from = u.study_id;
    created.push_back(to_json(part));
    affected.push_back(part.study_id.str());
    next.units.push_back(std::move(part));
  }
  next.units[*idx].superseded_by = ids;
  return commit(std::move(next), EventKind::unit_split, {{"unit", id.str()}, {"units", created}}, affected, ctx);
}

}  // namespace recap
