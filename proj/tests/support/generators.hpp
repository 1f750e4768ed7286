#pragma once

// Case enumerators, independent oracles, and seeded random generators used by
// the property tests and the acceptance binary.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "recap/contamination.hpp"
#include "recap/layer_registry.hpp"
#include "recap/model.hpp"

namespace recap::gen {

using Rng = std::mt19937;

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// ---------------------------------------------------------------------------
// Tiering
// ---------------------------------------------------------------------------

// Every assessment: 3 alignments x 4 measurements x 3 designs x 3 reportings
// x speculation flag = 216.
std::vector<Assessment> all_assessments();

// One assumption covering each listed dimension.
std::vector<DeclaredAssumption> assumptions_covering(const std::vector<Dimension>& dims);

struct TierCase {
  Assessment assessment;
  bool covered = false;  // whether every qualified dimension has an assumption
};

// all_assessments() x {uncovered, covered} = 432.
std::vector<TierCase> tier_cases();

struct OracleTier {
  Tier tier = Tier::excluded;
  std::string rule;
};

// Independent reading of the tiering procedure, driven by per-dimension
// grading tables rather than the engine's branch order.
OracleTier oracle_tier(const Assessment& a, const std::vector<Dimension>& covered);

// Assessments one notch worse than `a` on exactly one dimension (including
// switching speculation on).
std::vector<Assessment> single_step_degradations(const Assessment& a);

// ---------------------------------------------------------------------------
// Flow matrix
// ---------------------------------------------------------------------------

enum class ContractState { absent, matching, mismatched };

struct FlowCase {
  std::string form;  // e.g. "child->grandparent"
  std::string source;
  std::string dest;
  InfoClass info = InfoClass::content;
  ContractState contract = ContractState::absent;
};

struct ExpectedVerdict {
  bool allowed = true;
  std::optional<Direction> direction;
  std::optional<RuleViolated> rule;
};

// Layers G; parents P, Q under G; children C, D under P and E under Q; one
// complete contract per (ordered layer pair, info class) used by the cases.
ProjectBundle flow_matrix_bundle();

// Every form x info class x contract state.
std::vector<FlowCase> flow_cases();

FlowEvent flow_for(const FlowCase& c);

// Hand-written truth table.
ExpectedVerdict flow_truth(const FlowCase& c);

// Methodological statement expressible in every layer's vocabulary.
std::string clean_insight_statement();

// ---------------------------------------------------------------------------
// Contamination fault injection
// ---------------------------------------------------------------------------

struct Injection {
  std::string kind;
  std::string site;  // declaration id, or flow:<id>
  Direction direction = Direction::upward;
  RuleViolated rule = RuleViolated::R1_upward_content;
};

struct FaultBundle {
  ProjectBundle bundle;
  std::vector<Injection> injected;
};

// A clean multi-branch bundle with `k` fresh declarations or flows, each
// carrying exactly one illegal movement.
FaultBundle fault_bundle(Rng& rng, int k);

// ---------------------------------------------------------------------------
// Reporting partition
// ---------------------------------------------------------------------------

// Toy layers with a random population of declared, documented units (some
// merged, some quarantined, some superseded by a split).
ProjectBundle random_tiered_bundle(Rng& rng);

// ---------------------------------------------------------------------------
// Command sequences
// ---------------------------------------------------------------------------

// Toy layers with two projects (child:C:toy, child:C:alt) and no events.
ProjectBundle command_skeleton();

// Emits commands for `execute`, shaped by the current bundle so a useful share
// is accepted. Timestamps increase with `step`.
class CommandGenerator {
 public:
  explicit CommandGenerator(std::uint32_t seed) : rng_(seed) {}

  Json next(const ProjectBundle& current, int step);

 private:
  Rng rng_;
  int counter_ = 0;
};

// ---------------------------------------------------------------------------
// Law evolution
// ---------------------------------------------------------------------------

enum class BumpKind { append, rescind, rewrite, touch_core, upward_text, stale_version, incomplete };

const char* to_string(BumpKind k);

struct BumpAttempt {
  BumpKind kind = BumpKind::append;
  ChangelogEntry entry;
  LawSet laws;
  bool must_reject = false;
};

BumpAttempt random_bump(Rng& rng, const ProjectBundle& current, int step);

}  // namespace recap::gen
