#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "properties.hpp"
#include "recap/routing.hpp"
#include "recap/tiering.hpp"

namespace recap {
namespace {

using namespace fixtures;

ProjectBundle before_freeze() {
  // The toy bundle up to the freeze.
  auto b = toy_skeleton();
  int t = 0;
  for (auto u : {toy_s1(), toy_s2(), toy_s3()}) {
    auto assignment = u.assignment;
    u.assignment.reset();
    b = must(declare_unit(b, u, at(t++)));
  }
  b = must(declare_tier(b, toy_unit("S1"), Tier::core, "Construct alignment", at(t++)));
  b = must(declare_tier(b, toy_unit("S2"), Tier::supplement, "Partial mismatch", at(t++)));
  b = must(declare_tier(b, toy_unit("S3"), Tier::excluded, "Definition opacity", at(t++)));
  for (const auto& r : toy_exploratory_routes()) b = must(declare_route(b, r, at(t++)));
  b = must(declare_route(b, toy_committed_route(), at(t++)));
  b = must(assign_role(b, toy_unit("S1"), {toy_route("R2"), EvidenceRole::primary_inference, ""}, at(t++)));
  b = must(assign_role(b, toy_unit("S2"), {toy_route("R2"), EvidenceRole::measurement_evaluation, "sketch"},
                       at(t++)));
  return b;
}

TEST(Routing, ObjectiveLabels) {
  EXPECT_EQ(objective_label("associational"), "Associational");
  EXPECT_EQ(objective_label("made_up"), "made_up");
}

TEST(Routing, EvidenceTypeFollowsRole) {
  auto b = toy_bundle();
  EXPECT_EQ(evidence_type(b, *b.find_unit(toy_unit("S1"))), "Associational");
  EXPECT_EQ(evidence_type(b, *b.find_unit(toy_unit("S2"))), role_label(EvidenceRole::measurement_evaluation));
  EXPECT_EQ(evidence_type(b, *b.find_unit(toy_unit("S3"))), "");
}

TEST(Routing, RouteBodyNeedsDisconfirmingModelAndAssumptions) {
  auto body = toy_committed_route().body;
  EXPECT_TRUE(validate_route_body(body, "/routes/0").empty());
  auto no_disconfirming = body;
  no_disconfirming.disconfirming_models.clear();
  EXPECT_TRUE(contains_code(validate_route_body(no_disconfirming, ""), "E_NO_DISCONFIRMING"));
  auto no_assumptions = body;
  no_assumptions.assumptions.clear();
  EXPECT_TRUE(contains_code(validate_route_body(no_assumptions, ""), "E_NO_ASSUMPTIONS"));
  auto incomplete = body;
  incomplete.assumptions[0].failure_modes.clear();
  EXPECT_TRUE(contains_code(validate_route_body(incomplete, ""), "E_ASSUMPTION_INCOMPLETE"));
}

TEST(Routing, SecondCommittedRouteRejected) {
  auto b = toy_bundle();
  auto second = toy_committed_route();
  second.id = toy_route("R9");
  auto r = declare_route(b, second, at(300));
  EXPECT_TRUE(contains_code(r.diagnostics(), "E_SECOND_ROUTE"));
}

TEST(Routing, FreezeThenSilentEditRejected) {
  auto b = must(freeze_route(before_freeze(), toy_project(), at(50)));
  EXPECT_TRUE(b.committed_route(toy_project())->frozen());
  EXPECT_TRUE(contains_code(freeze_route(b, toy_project(), at(51)).diagnostics(), "E_ALREADY_FROZEN"));
  auto body = toy_committed_route().body;
  body.objective = "predictive";
  EXPECT_TRUE(contains_code(edit_route(b, toy_route("R2"), body, at(52)).diagnostics(), "E_SILENT_REVISION"));
}

TEST(Routing, RevisionRecordedAfterFreeze) {
  auto b = must(freeze_route(before_freeze(), toy_project(), at(50)));
  auto body = toy_committed_route().body;
  body.disconfirming_models.push_back("B and C share an unmeasured cause");
  RouteRevision rev{ts(60), "Reviewer raised a confounder", "S1 interpretation narrows", "Added a disconfirming model"};
  auto r = revise_route(b, toy_project(), rev, body, at(60));
  ASSERT_TRUE(r) << describe(r.diagnostics());
  const Route* route = r.value().committed_route(toy_project());
  EXPECT_EQ(route->revisions.size(), 1u);
  EXPECT_EQ(route->body, body);
  EXPECT_EQ(route->frozen_at, b.committed_route(toy_project())->frozen_at);
  EXPECT_EQ(r.value().events.back().kind, EventKind::route_revised);

  RouteRevision empty{ts(61), "", "", ""};
  EXPECT_FALSE(revise_route(b, toy_project(), empty, body, at(61)));
}

TEST(Routing, RevisionNeedsFrozenRoute) {
  auto b = before_freeze();
  RouteRevision rev{ts(60), "why", "what follows", "what changed"};
  EXPECT_TRUE(contains_code(revise_route(b, toy_project(), rev, toy_committed_route().body, at(60)).diagnostics(),
                            "E_NOT_FROZEN"));
}

TEST(Routing, CoherenceFindings) {
  auto b = toy_bundle();
  EXPECT_TRUE(check_route_coherence(b, toy_project()).empty());

  auto excluded = b;
  excluded.find_unit(toy_unit("S3"))->assignment = EvidenceRoleAssignment{toy_route("R2"), EvidenceRole::contextual, ""};
  EXPECT_TRUE(contains_code(check_route_coherence(excluded, toy_project()), "E_EXCLUDED_ASSIGNED"));

  auto supplement_primary = b;
  supplement_primary.find_unit(toy_unit("S2"))->assignment->role = EvidenceRole::primary_inference;
  EXPECT_TRUE(contains_code(check_route_coherence(supplement_primary, toy_project()), "E_SUPPLEMENT_PRIMARY"));

  auto off_route = b;
  off_route.find_unit(toy_unit("S1"))->assignment.reset();
  EXPECT_TRUE(contains_code(check_route_coherence(off_route, toy_project()), "E_CORE_OFF_ROUTE"));

  auto contradicted = b;
  contradicted.find_unit(toy_unit("S1"))->contradicts_assumptions = {toy_route("R2_a1")};
  EXPECT_TRUE(contains_code(check_route_coherence(contradicted, toy_project()), "E_ASSUMPTION_CONTRADICTED"));
}

TEST(Routing, FreezeRefusesIncoherentRoute) {
  auto b = before_freeze();
  b.find_unit(toy_unit("S1"))->assignment.reset();
  EXPECT_TRUE(contains_code(freeze_route(b, toy_project(), at(50)).diagnostics(), "E_INCOHERENT"));
}

TEST(Routing, RandomCommandProperties) {
  auto o = props::route_properties(21, 1500);
  EXPECT_TRUE(o.ok) << o.detail;
}

}  // namespace
}  // namespace recap
