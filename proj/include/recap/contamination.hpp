#pragma once

// Cross-layer information movement: the flow permission matrix, insight
// gating, static contamination scanning, downstream tracing, and resolution.

#include <optional>
#include <string>
#include <vector>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

enum class Direction { upward, downward, horizontal };

enum class RuleViolated {
  R1_upward_content,
  R2_downward_rewrite,
  R3_horizontal_borrowing,
  R4_missing_contract,
  R5_meta_engine_insulation
};

enum class Nature { content, assumption, measurement, structural };

enum class CorrectiveAction { quarantined, reversed, insight_extracted };

const char* to_string(Direction v);
const char* to_string(RuleViolated v);
const char* to_string(Nature v);
const char* to_string(CorrectiveAction v);
FindingRank rank_of(Direction d);

struct FlowVerdict {
  bool allowed = true;
  std::optional<Direction> direction;
  std::optional<RuleViolated> rule;
  std::string reason;
  Diagnostics insight_diagnostics;  // why an upward insight failed validation

  bool operator==(const FlowVerdict&) const = default;
};

// Contract validity: complete and matching the given movement.
bool contract_complete(const BoundaryContract& c, const ProjectBundle& bundle);
bool contract_matches(const BoundaryContract& c, InfoClass info, const std::string& origin,
                      const std::string& destination, const ProjectBundle& bundle);

// E_UNKNOWN_LAYER for unresolvable endpoints.
Result<FlowVerdict> check_flow(const FlowEvent& flow, const ProjectBundle& bundle);

struct InsightProposal {
  std::string id;
  std::string origin_layer;
  std::string target_layer;
  std::string statement;
  std::vector<Identifier> referenced_terms;  // filled from the statement by make_insight
  std::optional<Identifier> appends;         // declaration the insight would add
  std::vector<Identifier> modifies;          // declarations it would edit (must stay empty)

  bool operator==(const InsightProposal&) const = default;
};

InsightProposal make_insight(std::string id, std::string origin, std::string target, std::string statement);

struct InsightVerdict {
  bool passes = false;
  Diagnostics diagnostics;
};

// E_DOMAIN_TERM, E_FOREIGN_VOCAB, E_REWRITE_ATTEMPT, E_INSIGHT_HOP,
// E_UNKNOWN_LAYER.
InsightVerdict validate_insight_transmission(const InsightProposal& proposal, const ProjectBundle& bundle);

// Words ignored by the vocabulary check.
bool is_function_word(std::string_view lowercase_word);

// E_UPWARD_CONTENT for every parent/child identifier in text headed upward
// into the grandparent.
Diagnostics check_upward_text(std::string_view text, const std::string& location);

struct ContaminationEvent {
  std::string id;  // <rule>@<site>-><reference>
  RuleViolated rule = RuleViolated::R1_upward_content;
  Direction direction = Direction::upward;
  Nature nature = Nature::content;
  std::string site;       // declaration id, or flow:<id>
  std::string site_path;  // JSON pointer into the bundle
  std::string reference;  // offending identifier, or the flow's destination layer
  std::string message;
  std::vector<std::string> decisions_affected;
  // Documentation, filled when resolving.
  std::string risks_introduced;
  std::optional<CorrectiveAction> corrective_action;
  std::string versioned_update;
  std::string timestamp;

  bool operator==(const ContaminationEvent&) const = default;
};

Json to_json(const ContaminationEvent& e);

// Unresolved events over all live flows and declarations, sorted by
// direction then id.
std::vector<ContaminationEvent> scan_bundle(const ProjectBundle& bundle);

// Events as compliance findings (code = rule name).
Diagnostics contamination_findings(const ProjectBundle& bundle);

// E_CONTRACT_INCOMPLETE for contracts lacking any required element.
Diagnostics validate_contracts(const ProjectBundle& bundle);

// Derived nodes reachable from a declaration: tier:, study_log:, tier_table:,
// coherence:, assumption:, project:, reviewer_block:.
std::vector<std::string> trace_from(const std::string& declaration, const ProjectBundle& bundle);
std::vector<std::string> trace_downstream(const ContaminationEvent& event, const ProjectBundle& bundle);

struct ResolutionRequest {
  std::string event_id;
  CorrectiveAction action = CorrectiveAction::quarantined;
  std::string risks_introduced;
  std::string versioned_update;
  std::optional<InsightProposal> insight;  // for insight_extracted
};

// E_UNKNOWN_EVENT, E_UNDOCUMENTED, E_INSIGHT_REJECTED, E_ACTION_UNSUPPORTED,
// plus integrity errors when a reversal would break references.
Result<ProjectBundle> resolve_contamination(const ProjectBundle& bundle, const ResolutionRequest& request,
                                            const EventContext& ctx);

// Records the current scan result as one contamination_flagged event.
// E_NOTHING_TO_FLAG on a clean bundle.
Result<ProjectBundle> flag_contaminations(const ProjectBundle& bundle, const EventContext& ctx);

// Declares a boundary contract. Completeness is judged by validate_contracts
// and by every flow or reference that relies on it.
Result<ProjectBundle> add_contract(const ProjectBundle& bundle, const BoundaryContract& contract,
                                   const EventContext& ctx);

// Appends a flow record (legal or not; the scan judges it).
Result<ProjectBundle> record_flow(const ProjectBundle& bundle, const FlowEvent& flow, const EventContext& ctx);

}  // namespace recap
