#pragma once

// Grandparent/parent/child hierarchy: downward constraint resolution and the
// append-only evolution of grandparent laws.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

struct Version {
  long major = 0;
  long minor = 0;

  auto operator<=>(const Version&) const = default;
};

// `v<major>.<minor>` for the grandparent; parents may use any single-letter
// prefix (`P1.0`).
std::optional<Version> parse_version(std::string_view text, char prefix = 'v');

// The four protected laws every grandparent carries, with fixed ids and text.
const LawSet& core_laws();
bool is_core_law_id(const Identifier& id);

// A grandparent layer seeded with the core laws plus `extra`.
LayerDecl make_grandparent(const std::string& id, const std::string& version, const LawSet& extra = {},
                           std::vector<std::string> vocabulary = {});

struct EffectiveConstraintSet {
  std::string child;
  std::string parent;
  std::string grandparent;
  std::vector<Law> laws;
  std::vector<Abstraction> abstractions;
  std::vector<std::pair<Identifier, Identifier>> correspondences;  // measurement -> construct

  bool operator==(const EffectiveConstraintSet&) const = default;
};

// E_UNKNOWN_LAYER, E_NOT_CHILD. Quarantined declarations are left out.
Result<EffectiveConstraintSet> resolve_constraints(const ProjectBundle& bundle, const std::string& child_id);

// E_LAW_RESCINDED, E_LAW_REWRITTEN, E_CORE_TOUCHED.
Diagnostics check_law_evolution(const LawSet& old_laws, const LawSet& new_laws);

struct ChangelogEntry {
  std::string from_version;
  std::string to_version;
  std::string motivating_insight;
  std::string boundary_affected;
  std::string generalizability_reasoning;
  std::string timestamp;

  bool operator==(const ChangelogEntry&) const = default;
};

Json to_json(const ChangelogEntry& e);
Result<ChangelogEntry> changelog_from_json(const Json& j);

// E_CHANGELOG_INCOMPLETE, E_VERSION_ORDER, E_UPWARD_CONTENT, plus the law
// evolution codes. Rejected atomically.
Result<ProjectBundle> bump_version(const ProjectBundle& bundle, const ChangelogEntry& entry,
                                   const LawSet& new_laws, const EventContext& ctx);

// Layer-level compliance: core laws present and untouched, immutable flags,
// version syntax, recap_version agreement, recorded law history.
Diagnostics validate_layers(const ProjectBundle& bundle);

}  // namespace recap
