#pragma once

// Tier computation from declared assessments, and the operations that are
// allowed to change a unit's tier.

#include <optional>
#include <string>
#include <vector>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

// Stable rule ids carried by every decision.
inline constexpr const char* kRuleStep1Mismatch = "R_STEP1_MISMATCH";
inline constexpr const char* kRuleSpeculation = "R_SPECULATION";
inline constexpr const char* kRuleStep3Failed = "R_STEP3_FAILED";
inline constexpr const char* kRuleCore = "R_CORE";
inline constexpr const char* kRuleSupplementCovered = "R_SUPPLEMENT_COVERED";
inline constexpr const char* kRuleUncoveredAmbiguity = "R_UNCOVERED_AMBIGUITY";
inline constexpr const char* kRuleConservativeMerge = "R_CONSERVATIVE_MERGE";

struct TierDecision {
  Tier tier = Tier::excluded;
  std::string rule;
  std::vector<Dimension> uncovered;      // sub-core dimensions lacking an assumption
  std::vector<TierDecision> components;  // per-interpretation decisions of a merge

  bool operator==(const TierDecision&) const = default;
};

// Dimensions that sit below the core threshold without being disqualifying.
std::vector<Dimension> sub_core_dimensions(const Assessment& a);

TierDecision compute_tier(const Assessment& a, const std::vector<DeclaredAssumption>& assumptions);

// E_MUST_SPLIT for a splittable unit with several interpretations.
Result<TierDecision> tier_unit(const EvidentialUnit& u);

// declared_tier folded through retier_events; nullopt when undeclared.
std::optional<Tier> effective_tier(const EvidentialUnit& u);

// Effective tier when declared, otherwise the computed tier (if computable).
std::optional<Tier> current_tier(const EvidentialUnit& u);

// E_TIER_MISMATCH, E_NO_JUSTIFICATION. Empty for undeclared units.
Diagnostics check_tier_declaration(const EvidentialUnit& u, const std::string& location = "");

// Whole-bundle tiering checks for the compliance verdict.
Diagnostics validate_tiering(const ProjectBundle& bundle);

// --- mutations (each appends one event) ---

Result<ProjectBundle> declare_unit(const ProjectBundle& bundle, const EvidentialUnit& unit,
                                   const EventContext& ctx);

Result<ProjectBundle> declare_tier(const ProjectBundle& bundle, const Identifier& unit, Tier tier,
                                   const std::string& justification, const EventContext& ctx);

// Direct edit of assessments; refused with E_SILENT_RETIER if it would move
// a declared unit's tier.
Result<ProjectBundle> update_assessment(const ProjectBundle& bundle, const Identifier& unit,
                                        const std::vector<Assessment>& interpretations,
                                        const std::vector<DeclaredAssumption>& assumptions,
                                        const EventContext& ctx);

struct ReTierRequest {
  ReTierEvent event;
  std::optional<std::vector<Assessment>> interpretations;
  std::optional<std::vector<DeclaredAssumption>> assumptions;
};

Result<ProjectBundle> apply_retier(const ProjectBundle& bundle, const Identifier& unit,
                                   const ReTierRequest& request, const EventContext& ctx);

Result<ProjectBundle> split_unit(const ProjectBundle& bundle, const Identifier& unit,
                                 const std::vector<std::string>& names, const EventContext& ctx);

}  // namespace recap
