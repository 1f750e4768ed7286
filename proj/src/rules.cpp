#include "recap/rules.hpp"

#include <algorithm>

namespace recap {

const std::vector<RuleInfo>& rule_catalogue() {
  static const std::vector<RuleInfo> kRules = {
      // bundle format
      {"E_SYNTAX", "bundle-format", "format/schema", "The document is not valid JSON or a field has the wrong type or value."},
      {"E_UNRESOLVED_REF", "bundle-format", "format/resolution", "Every identifier must resolve to exactly one declaration of the expected kind."},
      {"E_DUP_ID", "bundle-format", "format/uniqueness", "Declarations, layers, flows and contracts need unique identifiers."},
      {"E_NO_GRANDPARENT", "bundle-format", "layers/single-root", "A bundle holds exactly one grandparent layer."},
      {"E_NAMESPACE", "bundle-format", "layers/ownership", "An identifier's namespace and owner must match the layer that declares it."},
      {"E_LAYER_KIND", "bundle-format", "layers/tree", "Parents hang under the grandparent and children under a parent; laws, abstractions and definitions live only in their own layer kind."},
      {"W_UNKNOWN_KEY", "bundle-format", "format/forward-compat", "An unknown top-level key was ignored."},
      {"W_UNKNOWN_FIELD", "bundle-format", "format/forward-compat", "An unknown field inside a record was ignored."},
      // layer registry
      {"E_UNKNOWN_LAYER", "layer-registry", "layers/resolution", "The named layer does not exist."},
      {"E_NOT_CHILD", "layer-registry", "layers/resolution", "Constraint resolution starts from a child layer."},
      {"E_LAW_RESCINDED", "layer-registry", "versioning/append-only", "Grandparent laws may be added but never removed."},
      {"E_LAW_REWRITTEN", "layer-registry", "versioning/append-only", "An existing grandparent law keeps its text byte for byte across versions."},
      {"E_CORE_TOUCHED", "layer-registry", "versioning/protected-laws", "The four protected laws can never be altered, removed or unflagged."},
      {"E_CORE_MISSING", "layer-registry", "versioning/protected-laws", "Every grandparent carries the four protected laws."},
      {"E_CORE_FLAG", "layer-registry", "versioning/protected-laws", "Only the four protected laws carry the immutable_core flag."},
      {"E_CHANGELOG_INCOMPLETE", "layer-registry", "versioning/changelog", "A version bump documents the motivating insight, the boundary affected and why it generalizes."},
      {"E_VERSION_ORDER", "layer-registry", "versioning/order", "A bump starts from the current version and moves strictly forward."},
      {"E_VERSION_FORMAT", "layer-registry", "versioning/syntax", "Grandparent versions are written v<major>.<minor>."},
      {"E_VERSION_MISMATCH", "layer-registry", "versioning/syntax", "recap_version must equal the grandparent version."},
      {"E_CORRESPONDENCE", "layer-registry", "layers/correspondence", "Correspondence rules map a measurement class to a construct of the same parent."},
      // tiering
      {"E_MISSING_FIELD", "tiering-engine", "records/required-fields", "A mandatory declared field is empty or absent."},
      {"E_MUST_SPLIT", "tiering-engine", "tiering/split", "A splittable unit with several interpretations must be split before tiering."},
      {"E_TIER_MISMATCH", "tiering-engine", "tiering/decision-table", "The declared tier must equal the tier computed from the declared assessments."},
      {"E_NO_JUSTIFICATION", "tiering-engine", "tiering/justification", "Every declared tier carries a justification."},
      {"E_TIER_UNDECLARED", "tiering-engine", "tiering/declaration", "Every active unit needs a declared tier before it can be routed or reported."},
      {"E_ALREADY_DECLARED", "tiering-engine", "tiering/retier", "A declared tier changes only through a re-tier event."},
      {"E_SILENT_RETIER", "tiering-engine", "tiering/retier", "A tier may only change through a complete, timestamped re-tier event."},
      {"E_STALE_OLD_TIER", "tiering-engine", "tiering/retier", "A re-tier event must start from the unit's current tier."},
      {"E_NOT_SPLITTABLE", "tiering-engine", "tiering/split", "Only units declared splittable can be split."},
      {"E_NAME_ARITY", "tiering-engine", "tiering/split", "A split needs one unique new name per interpretation."},
      {"E_BAD_DECLARATION", "tiering-engine", "records/declaration", "A new declaration may not arrive with history, assignments or quarantine flags already set."},
      {"E_UNKNOWN_UNIT", "tiering-engine", "records/resolution", "The named unit does not exist."},
      {"E_UNKNOWN_PROJECT", "tiering-engine", "records/resolution", "The named project does not exist."},
      // routing
      {"E_SECOND_ROUTE", "routing-engine", "routing/one-route", "A project commits to exactly one inferential route."},
      {"E_NO_DISCONFIRMING", "routing-engine", "routing/disconfirming", "A route names at least one disconfirming model."},
      {"E_NO_ASSUMPTIONS", "routing-engine", "routing/assumptions", "A route states at least one assumption."},
      {"E_ASSUMPTION_INCOMPLETE", "routing-engine", "routing/assumptions", "Each route assumption has text, plausibility, failure modes and consequences for inference."},
      {"E_ALREADY_FROZEN", "routing-engine", "routing/freeze", "A route is frozen once."},
      {"E_INCOHERENT", "routing-engine", "routing/coherence", "A route can only be frozen or revised while coherent with the tiered evidence."},
      {"E_NOT_FROZEN", "routing-engine", "routing/freeze", "Revisions apply to frozen routes; unfrozen routes are edited directly."},
      {"E_SILENT_REVISION", "routing-engine", "routing/freeze", "A frozen route changes only through a complete revision record."},
      {"E_ROUTE_NOT_FROZEN", "routing-engine", "routing/freeze", "The committed route must be frozen before the project's outputs are final."},
      {"E_NO_COMMITTED_ROUTE", "routing-engine", "routing/one-route", "The project has no committed route."},
      {"E_CORE_OFF_ROUTE", "routing-engine", "routing/coherence", "Every core unit serves primary inference on the committed route."},
      {"E_SUPPLEMENT_PRIMARY", "routing-engine", "routing/coherence", "Supplement units never take the primary inference role."},
      {"E_SUPPLEMENT_UNASSIGNED", "routing-engine", "routing/coherence", "Every supplement unit declares its secondary role."},
      {"E_EXCLUDED_ASSIGNED", "routing-engine", "routing/coherence", "Excluded units take no role at all."},
      {"E_ASSUMPTION_UNTESTED", "routing-engine", "routing/coherence", "Each route assumption lists a unit bearing on it or is marked untestable by evidence."},
      {"E_ASSUMPTION_CONTRADICTED", "routing-engine", "routing/coherence", "A core unit contradicts an assumption of the committed route; the route must be revised."},
      {"E_UNKNOWN_ROUTE", "routing-engine", "records/resolution", "The named route does not exist."},
      // contamination
      {"R1_upward_content", "contamination-governor", "contamination/upward", "Content, measurement and assumptions never move upward; no contract can legalize it."},
      {"R2_downward_rewrite", "contamination-governor", "contamination/downward", "A lower layer may not redefine a law or abstraction it inherits."},
      {"R3_horizontal_borrowing", "contamination-governor", "contamination/horizontal", "Sibling layers share nothing without an explicit boundary contract."},
      {"R4_missing_contract", "contamination-governor", "contamination/contracts", "A cited boundary contract must be complete and match the movement it authorizes."},
      {"R5_meta_engine_insulation", "contamination-governor", "contamination/insight", "Only validated methodological insight moves up, one layer at a time."},
      {"E_UPWARD_CONTENT", "contamination-governor", "contamination/upward", "Text bound for the grandparent may not name parent or child declarations."},
      {"E_DOMAIN_TERM", "contamination-governor", "contamination/insight", "An insight may not name domain declarations below its target."},
      {"E_FOREIGN_VOCAB", "contamination-governor", "contamination/insight", "An insight must be expressible in the target layer's vocabulary."},
      {"E_REWRITE_ATTEMPT", "contamination-governor", "contamination/insight", "An insight appends a new declaration and edits nothing."},
      {"E_INSIGHT_HOP", "contamination-governor", "contamination/insight", "An insight targets exactly the layer above its origin."},
      {"E_INSIGHT_REJECTED", "contamination-governor", "contamination/resolution", "The proposed insight failed validation, or targets the grandparent (use a version bump)."},
      {"E_UNDOCUMENTED", "contamination-governor", "contamination/resolution", "Resolving a contamination event documents risks, the versioned update and a timestamp."},
      {"E_UNKNOWN_EVENT", "contamination-governor", "contamination/resolution", "No unresolved contamination event has this id."},
      {"E_ACTION_UNSUPPORTED", "contamination-governor", "contamination/resolution", "The corrective action cannot apply to this site or would leave the bundle invalid."},
      {"E_NOTHING_TO_FLAG", "contamination-governor", "contamination/detection", "The scan found no contamination to record."},
      {"E_CONTRACT_INCOMPLETE", "contamination-governor", "contamination/contracts", "A boundary contract needs a legal justification, a no-reinterpretation clause and a documentation event."},
      // reporting
      {"E_NO_STUDY_LOG", "reporting", "outputs/study-log", "Every project with units keeps a Study Log."},
      {"W_EMPTY_STUDY_LOG", "reporting", "outputs/study-log", "The project has no units, so its Study Log is empty."},
      {"E_BIAS_DIRECTION", "reporting", "outputs/study-log", "Bias considerations state a direction: attenuates, inflates, reverses or nondirectional."},
      {"E_NO_TIER_TABLE", "reporting", "outputs/tier-table", "Projects with core or supplement units keep a Tier Table."},
      {"E_NO_REVIEWER_BLOCK", "reporting", "outputs/reviewer-block", "Every project carries a Reviewer Block."},
      {"E_NO_ANALYTIC_MEMO", "reporting", "outputs/analytic-memo", "Every project carries an Analytic Memo."},
      {"E_MEMO_SECTION", "reporting", "outputs/analytic-memo", "All five Analytic Memo sections are filled."},
      {"E_RB_FINDINGS", "reporting", "outputs/reviewer-block", "The Reviewer Block lists at least two methodological findings."},
      {"E_RB_INSIGHT", "reporting", "outputs/reviewer-block", "The Reviewer Block states a conceptual insight."},
      {"E_RB_CRITIQUE", "reporting", "outputs/reviewer-block", "The Reviewer Block anticipates a critique."},
      {"E_RB_CRITIQUE_UNANCHORED", "reporting", "outputs/reviewer-block", "The critique cites units or routes of this project."},
      {"E_RB_DISCONFIRMING", "reporting", "outputs/reviewer-block", "The Reviewer Block names a disconfirming model."},
      {"E_RB_ASSUMPTIONS", "reporting", "outputs/reviewer-block", "The Reviewer Block lists exactly the committed route's assumptions."},
      {"E_FORMAT_UNSUPPORTED", "reporting", "outputs/rendering", "CSV is only available for the Study Log and the Tier Table."},
      // audit log
      {"E_SEQUENCE_GAP", "audit-log", "audit/append-only", "Event sequence numbers start at 1 and increase by one."},
      {"E_PAYLOAD_SCHEMA", "audit-log", "audit/schema", "Each event payload carries the fields of its kind plus the engine version."},
      {"E_TIME_REGRESSION", "audit-log", "audit/ordering", "Event and history timestamps never go backwards."},
      {"E_REPLAY_DIVERGENCE", "audit-log", "audit/replay", "Replaying the log disagrees with the stored state."},
      // cli
      {"E_USAGE", "cli", "cli/usage", "The command line could not be understood."},
      {"E_IO", "cli", "cli/io", "A file could not be read, written or locked."},
  };
  return kRules;
}

const RuleInfo* find_rule(std::string_view code) {
  const auto& rules = rule_catalogue();
  auto it = std::find_if(rules.begin(), rules.end(), [&](const RuleInfo& r) { return r.code == code; });
  return it == rules.end() ? nullptr : &*it;
}

std::string rule_ref(std::string_view code) {
  const RuleInfo* r = find_rule(code);
  return r ? r->rule : "unknown-rule";
}

}  // namespace recap
