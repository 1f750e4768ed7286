#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "recap/rules.hpp"

namespace recap {
namespace {

TEST(Rules, CatalogueIsUnique) {
  std::set<std::string> codes;
  for (const auto& r : rule_catalogue()) {
    EXPECT_TRUE(codes.insert(r.code).second) << r.code;
    EXPECT_FALSE(r.rule.empty()) << r.code;
    EXPECT_FALSE(r.text.empty()) << r.code;
  }
}

TEST(Rules, LookupAndFallback) {
  ASSERT_NE(find_rule("E_TIER_MISMATCH"), nullptr);
  EXPECT_EQ(find_rule("E_TIER_MISMATCH")->module, "tiering-engine");
  EXPECT_EQ(find_rule("nope"), nullptr);
  EXPECT_EQ(rule_ref("nope"), "unknown-rule");
}

// Every code the sources can emit has a catalogue entry.
TEST(Rules, EveryEmittedCodeCatalogued) {
  const std::regex code_re(R"re("((?:E|W)_[A-Z0-9_]+)")re");
  std::size_t seen = 0;
  for (const char* file : {"bundle_format.cpp", "layer_registry.cpp", "tiering.cpp", "routing.cpp",
                           "contamination.cpp", "reporting.cpp", "audit_log.cpp", "commands.cpp", "cli.cpp"}) {
    std::ifstream in(std::string(RECAP_SOURCE_DIR) + "/src/" + file);
    ASSERT_TRUE(in) << file;
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    for (auto it = std::sregex_iterator(text.begin(), text.end(), code_re); it != std::sregex_iterator(); ++it) {
      ++seen;
      EXPECT_NE(find_rule((*it)[1].str()), nullptr) << (*it)[1].str() << " in " << file;
    }
  }
  EXPECT_GT(seen, 50u);
}

}  // namespace
}  // namespace recap
