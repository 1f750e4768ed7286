#pragma once

// Canonical bundle document: UTF-8 JSON with the top-level keys
// recap_version, layers, projects, units, routes, flows, contracts, events,
// reviewer_blocks, memos. Parsing qualifies every identifier, so a parsed
// bundle only ever holds fully qualified references.

#include <optional>
#include <string>
#include <string_view>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

struct ParseOutcome {
  std::optional<ProjectBundle> bundle;
  Diagnostics diagnostics;  // warnings only when `bundle` is set

  bool ok() const { return bundle.has_value(); }
};

// Stable codes: E_SYNTAX, E_UNRESOLVED_REF, E_DUP_ID, E_NO_GRANDPARENT,
// E_NAMESPACE, E_LAYER_KIND. Warnings: W_UNKNOWN_KEY (top level),
// W_UNKNOWN_FIELD (nested records).
ParseOutcome parse_bundle(std::string_view text);
ParseOutcome parse_bundle_json(const Json& doc);

std::string serialize_bundle(const ProjectBundle& bundle);
Json bundle_to_json(const ProjectBundle& bundle);

// Reference integrity of an in-memory bundle: unique declarations, exactly
// one grandparent, every identifier (structural or inside prose) resolving
// to one declaration, namespaces matching their declaring layer. Mutating
// operations run this on their result before accepting it.
Diagnostics check_integrity(const ProjectBundle& bundle);

// Per-type encoders, shared with event payloads and structured reports.
Json to_json(const Law& v);
Json to_json(const Abstraction& v);
Json to_json(const Definition& v);
Json to_json(const LayerDecl& v);
Json to_json(const ProjectDecl& v);
Json to_json(const Assessment& v);
Json to_json(const ReTierEvent& v);
Json to_json(const EvidentialUnit& v);
Json to_json(const RouteBody& v);
Json to_json(const RouteRevision& v);
Json to_json(const Route& v);
Json to_json(const FlowEvent& v);
Json to_json(const BoundaryContract& v);
Json to_json(const ReviewerBlock& v);
Json to_json(const AnalyticMemo& v);
Json to_json(const AuditEvent& v);
Json to_json(const LawSet& v);

// Per-type decoders for fully qualified JSON (as produced by the encoders).
// Any schema problem yields E_SYNTAX diagnostics located under `path`.
Result<Law> law_from_json(const Json& j, const std::string& path = "");
Result<LawSet> laws_from_json(const Json& j, const std::string& path = "");
Result<EvidentialUnit> unit_from_json(const Json& j, const std::string& path = "");
Result<Route> route_from_json(const Json& j, const std::string& path = "");
Result<RouteBody> route_body_from_json(const Json& j, const std::string& path = "");
Result<RouteRevision> revision_from_json(const Json& j, const std::string& path = "");
Result<ReTierEvent> retier_from_json(const Json& j, const std::string& path = "");
Result<FlowEvent> flow_from_json(const Json& j, const std::string& path = "");
Result<ReviewerBlock> reviewer_block_from_json(const Json& j, const std::string& path = "");
Result<AuditEvent> event_from_json(const Json& j, const std::string& path = "");
Result<Assessment> assessment_from_json(const Json& j, const std::string& path = "");
Result<std::vector<Assessment>> assessments_from_json(const Json& j, const std::string& path = "");
Result<std::vector<DeclaredAssumption>> declared_assumptions_from_json(const Json& j, const std::string& path = "");
Result<BoundaryContract> contract_from_json(const Json& j, const std::string& path = "");
Result<AnalyticMemo> memo_from_json(const Json& j, const std::string& path = "");

}  // namespace recap
