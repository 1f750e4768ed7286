#pragma once

// Append-only event store. Every accepted mutation goes through commit(),
// which re-checks integrity and appends exactly one event; replay() folds the
// events back into the state the live operations produced.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

// Required payload keys per kind. Every payload also carries engine_version.
Diagnostics validate_payload(EventKind kind, const Json& payload, const std::string& location);

// E_SEQUENCE_GAP, E_PAYLOAD_SCHEMA, E_TIME_REGRESSION.
Result<ProjectBundle> append_event(const ProjectBundle& bundle, const AuditEvent& event);

// Builds the next event (sequence, engine_version) and appends it to `next`
// after an integrity check. `next` is the already-mutated bundle.
Result<ProjectBundle> commit(ProjectBundle next, EventKind kind, Json payload,
                             std::vector<std::string> affected, const EventContext& ctx);

// Structural checks over a whole log: contiguous sequence from 1, timestamp
// order, payload schemas.
Diagnostics validate_event_log(const std::vector<AuditEvent>& events);

struct RouteState {
  RouteStatus status = RouteStatus::committed;
  bool frozen = false;
  std::size_t revisions = 0;

  bool operator==(const RouteState&) const = default;
};

struct AssignmentState {
  std::string route;
  EvidenceRole role = EvidenceRole::primary_inference;

  bool operator==(const AssignmentState&) const = default;
};

// What the log must be able to reconstruct.
struct DerivedState {
  std::map<std::string, std::optional<Tier>> tiers;  // active units
  std::map<std::string, AssignmentState> assignments;
  std::map<std::string, RouteState> routes;  // non-quarantined
  std::set<std::string> resolved_contaminations;
  std::string version;
  std::vector<std::string> law_ids;

  bool operator==(const DerivedState&) const = default;
};

DerivedState derive_state(const ProjectBundle& bundle);

// Folds `events` over the state of `initial`. E_REPLAY_DIVERGENCE when an
// event contradicts the state it is applied to.
Result<DerivedState> replay(const std::vector<AuditEvent>& events, const ProjectBundle& initial);

// Replays the events `current` holds beyond `initial` and compares the result
// with derive_state(current).
Diagnostics verify_replay(const ProjectBundle& initial, const ProjectBundle& current);

Json to_json(const DerivedState& state);

}  // namespace recap
