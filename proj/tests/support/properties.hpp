#pragma once

// The acceptance properties as reusable checks. Unit tests run them at small
// sizes; the acceptance binary runs them at full size and times them.

#include <cstdint>
#include <string>

namespace recap::props {

struct Outcome {
  bool ok = true;
  std::size_t cases = 0;
  std::string detail;  // first failure, or a summary when ok

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

// Toy project: tiers and rules, roles, report rows, reviewer block, verdict.
Outcome toy_golden();

// Engine tiering against the independent oracle over all 432 cases.
Outcome tier_oracle();

// Every flow form x info class x contract state against the truth table.
Outcome flow_matrix();

// `bundles` fault-injected bundles with 0..5 injections each.
Outcome fault_injection(std::uint32_t seed, int bundles);

// `sequences` random version-bump sequences of `steps` attempts each.
Outcome law_monotonicity(std::uint32_t seed, int sequences, int steps);

// At least `commands` random commands over several sequences: one committed
// route per project and no frozen route changed without a revision record.
Outcome route_properties(std::uint32_t seed, int commands);

// `sequences` random command sequences: replay equals live state and
// rejected commands leave the stored bytes unchanged.
Outcome replay_equivalence(std::uint32_t seed, int sequences, int length);

// Single-step degradations never raise a tier.
Outcome conservatism();

// `bundles` random tiered bundles: study log = tier table + excluded.
Outcome reporting_partition(std::uint32_t seed, int bundles);

// The fixture corpus through the CLI: exit codes, expected codes, structured
// round trips, rejected mutations leaving files untouched.
Outcome cli_contract();

}  // namespace recap::props
