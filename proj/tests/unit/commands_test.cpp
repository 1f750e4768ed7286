#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "recap/bundle_format.hpp"
#include "recap/commands.hpp"

namespace recap {
namespace {

using namespace fixtures;

TEST(Commands, UnknownOpIsUsageError) {
  auto r = execute(toy_bundle(), Json{{"op", "teleport"}, {"at", ts(100)}});
  EXPECT_TRUE(contains_code(r.diagnostics(), "E_USAGE"));
}

TEST(Commands, MissingTimestampIsUsageError) {
  auto r = execute(toy_bundle(), Json{{"op", "freeze_route"}, {"project", "child:C:toy"}});
  EXPECT_TRUE(contains_code(r.diagnostics(), "E_USAGE"));
}

TEST(Commands, EveryAcceptedCommandAppendsOneEvent) {
  auto b = toy_skeleton();
  Json unit = to_json(toy_s1());
  unit.erase("assignment");
  unit.erase("declared_tier");
  auto r = execute(b, Json{{"op", "declare_unit"}, {"at", ts(0)}, {"actor", "t"}, {"unit", unit}});
  ASSERT_TRUE(r) << describe(r.diagnostics());
  EXPECT_EQ(r.value().events.size(), 1u);
  EXPECT_EQ(r.value().events[0].actor, "t");

  auto tiered = execute(r.value(), Json{{"op", "declare_tier"},
                                       {"at", ts(1)},
                                       {"unit", "child:C:S1"},
                                       {"tier", "core"},
                                       {"justification", "Construct alignment"}});
  ASSERT_TRUE(tiered) << describe(tiered.diagnostics());
  EXPECT_EQ(tiered.value().events.size(), 2u);
  EXPECT_EQ(tiered.value().events.back().kind, EventKind::tier_declared);
}

TEST(Commands, NamesCoverTheOperations) {
  const auto& names = command_names();
  for (const char* op : {"declare_unit", "declare_tier", "update_assessment", "retier", "split_unit",
                         "declare_route", "edit_route", "freeze_route", "revise_route", "assign_role",
                         "record_flow", "add_contract", "resolve_contamination", "flag_contaminations",
                         "bump_version", "add_reviewer_block", "add_memo"})
    EXPECT_NE(std::find(names.begin(), names.end(), op), names.end()) << op;
}

TEST(Commands, RejectionLeavesInputUntouched) {
  const auto b = toy_bundle();
  const auto bytes = serialize_bundle(b);
  auto r = execute(b, Json{{"op", "freeze_route"}, {"at", ts(100)}, {"project", "child:C:toy"}});
  EXPECT_TRUE(contains_code(r.diagnostics(), "E_ALREADY_FROZEN"));
  EXPECT_EQ(serialize_bundle(b), bytes);
}

}  // namespace
}  // namespace recap
