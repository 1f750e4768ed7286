#pragma once

// One committed route per project, freeze semantics, and coherence between
// the committed route and the tiered evidence.

#include <string>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

// Display label for an objective tag; unknown tags pass through verbatim.
std::string objective_label(const std::string& objective);
std::string role_label(EvidenceRole role);

// Tier Table "Evidence Type": the route objective for primary inference,
// otherwise the role. Empty when the unit is unassigned.
std::string evidence_type(const ProjectBundle& bundle, const EvidentialUnit& unit);

// E_NO_DISCONFIRMING, E_NO_ASSUMPTIONS, E_ASSUMPTION_INCOMPLETE, E_MISSING_FIELD.
Diagnostics validate_route_body(const RouteBody& body, const std::string& location);

// E_NO_COMMITTED_ROUTE, E_CORE_OFF_ROUTE, E_SUPPLEMENT_PRIMARY,
// E_SUPPLEMENT_UNASSIGNED, E_EXCLUDED_ASSIGNED, E_ASSUMPTION_UNTESTED,
// E_ASSUMPTION_CONTRADICTED.
Diagnostics check_route_coherence(const ProjectBundle& bundle, const Identifier& project);

// Per-project routing checks for the compliance verdict.
Diagnostics validate_routing(const ProjectBundle& bundle);

// --- mutations (each appends one event) ---

// E_SECOND_ROUTE when a second committed route is declared.
Result<ProjectBundle> declare_route(const ProjectBundle& bundle, const Route& route, const EventContext& ctx);

// Direct body edit. Allowed only before freezing (E_SILENT_REVISION after).
Result<ProjectBundle> edit_route(const ProjectBundle& bundle, const Identifier& route, const RouteBody& body,
                                 const EventContext& ctx);

// Freezes the project's committed route at ctx.timestamp. E_ALREADY_FROZEN,
// E_INCOHERENT (with the coherence findings), E_NO_COMMITTED_ROUTE.
Result<ProjectBundle> freeze_route(const ProjectBundle& bundle, const Identifier& project, const EventContext& ctx);

// E_NOT_FROZEN, E_SILENT_REVISION, E_INCOHERENT, plus body invariants.
Result<ProjectBundle> revise_route(const ProjectBundle& bundle, const Identifier& project,
                                   const RouteRevision& revision, const RouteBody& body, const EventContext& ctx);

// Sets (or replaces) a unit's single role assignment.
Result<ProjectBundle> assign_role(const ProjectBundle& bundle, const Identifier& unit,
                                  const EvidenceRoleAssignment& assignment, const EventContext& ctx);

}  // namespace recap
