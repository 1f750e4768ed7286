#pragma once

// Catalogue of every diagnostic code the engine can emit, for `recap explain`
// and for the rule reference printed after each CLI diagnostic.

#include <string>
#include <string_view>
#include <vector>

namespace recap {

struct RuleInfo {
  std::string code;
  std::string module;  // emitting module
  std::string rule;    // short rule reference, e.g. "tiering/step-1"
  std::string text;    // what the rule requires
};

const std::vector<RuleInfo>& rule_catalogue();

// nullptr for unknown codes.
const RuleInfo* find_rule(std::string_view code);

// The rule reference for a code, or "unknown-rule".
std::string rule_ref(std::string_view code);

}  // namespace recap
