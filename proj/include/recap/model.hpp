#pragma once

// In-memory model of a RECAP project bundle. Every other module consumes
// these types; the bundle format module maps them to and from JSON.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "recap/identifier.hpp"

namespace recap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kEngineVersion = "recap-engine 1.0.0";

// ---------------------------------------------------------------------------
// Layers
// ---------------------------------------------------------------------------

enum class LayerKind { grandparent, parent, child };

struct Law {
  Identifier id;
  std::string text;
  bool immutable_core = false;
  bool quarantined = false;

  bool operator==(const Law&) const = default;
};

using LawSet = std::vector<Law>;

enum class AbstractionKind { construct, measurement_class, design_form, insight };

struct Abstraction {
  Identifier id;
  AbstractionKind kind = AbstractionKind::construct;
  std::string definition;
  // measurement_class id -> construct id, both declared in the same parent
  std::map<Identifier, Identifier> correspondence;
  bool quarantined = false;

  bool operator==(const Abstraction&) const = default;
};

// Project-level declaration held by a child layer (measurement definitions,
// local construct readings, conventions).
struct Definition {
  Identifier id;
  std::string text;
  bool quarantined = false;

  bool operator==(const Definition&) const = default;
};

struct LayerDecl {
  std::string id;
  LayerKind kind = LayerKind::grandparent;
  std::string parent_ref;  // empty for the grandparent
  std::string version;
  LawSet laws;                            // grandparent only
  std::vector<Abstraction> abstractions;  // parent only
  std::vector<Definition> definitions;    // child only
  std::vector<std::string> vocabulary;

  bool operator==(const LayerDecl&) const = default;
};

struct ProjectDecl {
  Identifier id;
  std::string layer;
  std::string question;

  bool operator==(const ProjectDecl&) const = default;
};

// ---------------------------------------------------------------------------
// Tiering
// ---------------------------------------------------------------------------

// Lower value = more conservative.
enum class Tier { excluded = 0, supplement = 1, core = 2 };

enum class ConstructAlignment { aligned, partial, mismatch };
enum class Measurement { adequate, minor_limitation, conditional_proxy, failed };
enum class Design { sufficient, limited, incompatible };
enum class Reporting { transparent, ambiguous, opaque };

enum class Dimension { construct_alignment, measurement, design, reporting };

struct Assessment {
  ConstructAlignment construct_alignment = ConstructAlignment::aligned;
  Measurement measurement = Measurement::adequate;
  Design design = Design::sufficient;
  Reporting reporting = Reporting::transparent;
  bool speculation_required = false;

  bool operator==(const Assessment&) const = default;
};

struct DeclaredAssumption {
  std::string id;
  std::string text;
  std::vector<Dimension> covers;

  bool operator==(const DeclaredAssumption&) const = default;
};

struct ReTierEvent {
  std::string timestamp;
  std::string source_of_information;
  std::string justification;
  std::string implications_for_route;
  Tier old_tier = Tier::excluded;
  Tier new_tier = Tier::excluded;

  bool operator==(const ReTierEvent&) const = default;
};

enum class EvidenceRole {
  primary_inference,
  sensitivity,
  boundary,
  contextual,
  measurement_evaluation
};

struct EvidenceRoleAssignment {
  Identifier route_ref;
  EvidenceRole role = EvidenceRole::primary_inference;
  std::string route_sketch;  // optional free-text auxiliary sketch

  bool operator==(const EvidenceRoleAssignment&) const = default;
};

// Author-declared Study Log narrative for one unit.
struct StudyLogRecord {
  std::string bias_considerations;
  std::string measurement_definition_issues;
  std::string notes;

  bool operator==(const StudyLogRecord&) const = default;
};

// Author-declared Tier Table narrative for one unit.
struct TierTableRecord {
  std::string methods_summary;
  std::string strengths;
  std::string limitations;

  bool operator==(const TierTableRecord&) const = default;
};

struct EvidentialUnit {
  Identifier study_id;
  Identifier project_ref;
  std::string design_type;
  std::vector<Assessment> interpretations;
  bool splittable = false;
  std::optional<Tier> declared_tier;
  std::string tier_justification;
  std::vector<DeclaredAssumption> explicit_assumptions;
  std::vector<ReTierEvent> retier_events;
  std::vector<Identifier> measurement_refs;
  std::vector<Identifier> contradicts_assumptions;  // route assumption ids
  std::optional<EvidenceRoleAssignment> assignment;
  std::optional<StudyLogRecord> study_log;
  std::optional<TierTableRecord> tier_table;
  std::optional<Identifier> split_from;
  std::vector<Identifier> superseded_by;
  bool quarantined = false;

  bool active() const { return !quarantined && superseded_by.empty(); }

  bool operator==(const EvidentialUnit&) const = default;
};

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

enum class RouteStatus { committed, exploratory };

struct RouteAssumption {
  Identifier id;
  std::string text;
  std::string plausibility;
  std::string failure_modes;
  std::string consequences_for_inference;
  std::vector<Identifier> tested_by;  // units bearing on this assumption
  bool untestable_by_evidence = false;

  bool operator==(const RouteAssumption&) const = default;
};

struct RejectedAlternative {
  std::optional<Identifier> route_ref;
  std::string sketch;
  std::string rationale;

  bool operator==(const RejectedAlternative&) const = default;
};

struct RouteRevision {
  std::string timestamp;
  std::string justification;
  std::string downstream_implications;
  std::string change_description;

  bool operator==(const RouteRevision&) const = default;
};

// The mutable part of a route; frozen routes change it only via revisions.
struct RouteBody {
  Identifier construct_ref;
  std::string objective;
  std::vector<RouteAssumption> assumptions;
  std::vector<std::string> disconfirming_models;
  std::vector<RejectedAlternative> rejected_alternatives;

  bool operator==(const RouteBody&) const = default;
};

struct Route {
  Identifier id;
  Identifier project_ref;
  RouteStatus status = RouteStatus::committed;
  RouteBody body;
  std::string frozen_at;  // empty while unfrozen
  std::vector<RouteRevision> revisions;
  bool quarantined = false;

  bool frozen() const { return !frozen_at.empty(); }
  bool committed() const { return status == RouteStatus::committed && !quarantined; }

  bool operator==(const Route&) const = default;
};

// ---------------------------------------------------------------------------
// Contamination
// ---------------------------------------------------------------------------

enum class InfoClass { content, measurement, assumption, methodological_insight };

struct FlowEvent {
  std::string id;
  std::string source_layer;
  std::string dest_layer;
  InfoClass info_class = InfoClass::content;
  std::string payload;
  std::string contract_ref;  // empty when absent
  std::vector<Identifier> modifies;  // declarations an insight would edit
  std::string timestamp;
  bool quarantined = false;

  bool operator==(const FlowEvent&) const = default;
};

struct BoundaryContract {
  std::string id;
  InfoClass info_type = InfoClass::content;
  std::string origin_layer;
  std::string destination_layer;
  std::string legal_justification;
  bool no_reinterpretation_clause = false;
  std::optional<long long> documentation_ref;  // sequence of an audit event

  bool operator==(const BoundaryContract&) const = default;
};

// ---------------------------------------------------------------------------
// Mandatory outputs
// ---------------------------------------------------------------------------

struct AnticipatedCritique {
  std::string text;
  std::vector<Identifier> referenced_decisions;

  bool operator==(const AnticipatedCritique&) const = default;
};

struct ReviewerBlock {
  Identifier project_ref;
  std::vector<std::string> methodological_findings;
  std::string conceptual_insight;
  AnticipatedCritique anticipated_critique;
  std::string disconfirming_model;
  std::vector<Identifier> assumptions_ref;
  bool quarantined = false;

  bool operator==(const ReviewerBlock&) const = default;
};

struct AnalyticMemo {
  Identifier project_ref;
  std::map<std::string, std::string> sections;
  bool quarantined = false;

  bool operator==(const AnalyticMemo&) const = default;
};

// ---------------------------------------------------------------------------
// Audit log
// ---------------------------------------------------------------------------

enum class EventKind {
  tier_declared,
  retier,
  route_declared,
  route_frozen,
  route_revised,
  flow_recorded,
  contamination_flagged,
  contamination_resolved,
  version_bumped,
  unit_split,
  declaration_added,
  declaration_quarantined
};

struct AuditEvent {
  long long sequence = 0;
  std::string timestamp;
  std::string actor;
  EventKind kind = EventKind::declaration_added;
  Json payload = Json::object();
  std::vector<std::string> affected;

  bool operator==(const AuditEvent&) const = default;
};

// ---------------------------------------------------------------------------
// Root document
// ---------------------------------------------------------------------------

struct ProjectBundle {
  std::string recap_version;
  std::vector<LayerDecl> layers;
  std::vector<ProjectDecl> projects;
  std::vector<EvidentialUnit> units;
  std::vector<Route> routes;
  std::vector<FlowEvent> flows;
  std::vector<BoundaryContract> contracts;
  std::vector<AuditEvent> events;
  std::vector<ReviewerBlock> reviewer_blocks;
  std::vector<AnalyticMemo> memos;

  bool operator==(const ProjectBundle&) const = default;

  const LayerDecl* find_layer(const std::string& id) const;
  LayerDecl* find_layer(const std::string& id);
  const LayerDecl* grandparent() const;
  LayerDecl* grandparent();
  const ProjectDecl* find_project(const Identifier& id) const;
  const EvidentialUnit* find_unit(const Identifier& id) const;
  EvidentialUnit* find_unit(const Identifier& id);
  const Route* find_route(const Identifier& id) const;
  Route* find_route(const Identifier& id);
  const Route* committed_route(const Identifier& project) const;
  const BoundaryContract* find_contract(const std::string& id) const;
  const ReviewerBlock* find_reviewer_block(const Identifier& project) const;
  const AnalyticMemo* find_memo(const Identifier& project) const;
  long long last_sequence() const;
};

// Caller-supplied metadata for every mutation; the engine never reads a clock.
struct EventContext {
  std::string timestamp;
  std::string actor;
};

// ---------------------------------------------------------------------------
// Enum spellings (shared by the serializer, reports, and the CLI)
// ---------------------------------------------------------------------------

const char* to_string(LayerKind v);
const char* to_string(AbstractionKind v);
const char* to_string(Tier v);
const char* to_string(ConstructAlignment v);
const char* to_string(Measurement v);
const char* to_string(Design v);
const char* to_string(Reporting v);
const char* to_string(Dimension v);
const char* to_string(EvidenceRole v);
const char* to_string(RouteStatus v);
const char* to_string(InfoClass v);
const char* to_string(EventKind v);

template <class E>
std::optional<E> enum_from_string(std::string_view s);

// "Core", "Supplement", "Excluded"
const char* tier_label(Tier t);

bool is_timestamp(std::string_view s);

}  // namespace recap
