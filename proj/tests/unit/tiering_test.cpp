#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "properties.hpp"
#include "recap/tiering.hpp"

namespace recap {
namespace {

using namespace fixtures;

Assessment make(ConstructAlignment c, Measurement m, Design d, Reporting r, bool spec = false) {
  return Assessment{c, m, d, r, spec};
}

TEST(Tiering, StepOneMismatchExcludes) {
  auto d = compute_tier(make(ConstructAlignment::mismatch, Measurement::adequate, Design::sufficient,
                             Reporting::transparent), {});
  EXPECT_EQ(d.tier, Tier::excluded);
  EXPECT_EQ(d.rule, kRuleStep1Mismatch);
  auto opaque = compute_tier(make(ConstructAlignment::aligned, Measurement::adequate, Design::sufficient,
                                  Reporting::opaque), {});
  EXPECT_EQ(opaque.rule, kRuleStep1Mismatch);
}

TEST(Tiering, SpeculationExcludes) {
  auto d = compute_tier(make(ConstructAlignment::aligned, Measurement::adequate, Design::sufficient,
                             Reporting::transparent, true), {});
  EXPECT_EQ(d.tier, Tier::excluded);
  EXPECT_EQ(d.rule, kRuleSpeculation);
}

TEST(Tiering, FailedMeasurementOrIncompatibleDesignExcludes) {
  EXPECT_EQ(compute_tier(make(ConstructAlignment::aligned, Measurement::failed, Design::sufficient,
                              Reporting::transparent), {}).rule, kRuleStep3Failed);
  EXPECT_EQ(compute_tier(make(ConstructAlignment::aligned, Measurement::adequate, Design::incompatible,
                              Reporting::transparent), {}).rule, kRuleStep3Failed);
}

TEST(Tiering, CoreWhenNothingBelowThreshold) {
  auto a = make(ConstructAlignment::aligned, Measurement::minor_limitation, Design::sufficient, Reporting::transparent);
  EXPECT_TRUE(sub_core_dimensions(a).empty());
  auto d = compute_tier(a, {});
  EXPECT_EQ(d.tier, Tier::core);
  EXPECT_EQ(d.rule, kRuleCore);
}

TEST(Tiering, SupplementNeedsEveryGapCovered) {
  auto a = make(ConstructAlignment::partial, Measurement::conditional_proxy, Design::sufficient, Reporting::ambiguous);
  auto gaps = sub_core_dimensions(a);
  EXPECT_EQ(gaps, (std::vector<Dimension>{Dimension::construct_alignment, Dimension::measurement,
                                          Dimension::reporting}));
  auto covered = compute_tier(a, gen::assumptions_covering(gaps));
  EXPECT_EQ(covered.tier, Tier::supplement);
  EXPECT_EQ(covered.rule, kRuleSupplementCovered);

  auto partial = compute_tier(a, gen::assumptions_covering({Dimension::construct_alignment}));
  EXPECT_EQ(partial.tier, Tier::excluded);
  EXPECT_EQ(partial.rule, kRuleUncoveredAmbiguity);
  EXPECT_EQ(partial.uncovered, (std::vector<Dimension>{Dimension::measurement, Dimension::reporting}));
}

TEST(Tiering, SeveralInterpretationsMustSplitOrMerge) {
  EvidentialUnit u = toy_s1();
  u.interpretations.push_back(make(ConstructAlignment::mismatch, Measurement::adequate, Design::sufficient,
                                   Reporting::transparent));
  u.splittable = true;
  EXPECT_TRUE(contains_code(tier_unit(u).diagnostics(), "E_MUST_SPLIT"));

  u.splittable = false;
  auto merged = tier_unit(u);
  ASSERT_TRUE(merged);
  EXPECT_EQ(merged.value().tier, Tier::excluded);
  EXPECT_EQ(merged.value().rule, kRuleConservativeMerge);
  EXPECT_EQ(merged.value().components.size(), 2u);
}

TEST(Tiering, DeclaredTierMustMatchComputed) {
  EvidentialUnit u = toy_s1();
  u.declared_tier = Tier::supplement;
  u.tier_justification = "Looks weaker";
  EXPECT_TRUE(contains_code(check_tier_declaration(u), "E_TIER_MISMATCH"));
  u.declared_tier = Tier::core;
  u.tier_justification.clear();
  EXPECT_TRUE(contains_code(check_tier_declaration(u), "E_NO_JUSTIFICATION"));
}

TEST(Tiering, SilentRetierRefused) {
  auto b = toy_bundle();
  auto worse = toy_s1().interpretations;
  worse[0].reporting = Reporting::opaque;
  auto r = update_assessment(b, toy_unit("S1"), worse, {}, at(200));
  EXPECT_TRUE(contains_code(r.diagnostics(), "E_SILENT_RETIER"));
}

TEST(Tiering, RetierEventMovesTier) {
  auto b = toy_bundle();
  ReTierRequest req;
  req.event = ReTierEvent{ts(200), "Author correspondence", "S2 proxy shown invalid", "R2_a2 loses its test",
                          Tier::supplement, Tier::excluded};
  auto worse = toy_s2().interpretations;
  worse[0].measurement = Measurement::failed;
  req.interpretations = worse;
  auto r = apply_retier(b, toy_unit("S2"), req, at(200));
  // S2 still carries its measurement-evaluation role, so routing coherence
  // may refuse; either way the tier must only move through the event.
  if (r) {
    EXPECT_EQ(effective_tier(*r.value().find_unit(toy_unit("S2"))), Tier::excluded);
    EXPECT_EQ(r.value().events.back().kind, EventKind::retier);
  } else {
    EXPECT_EQ(effective_tier(*b.find_unit(toy_unit("S2"))), Tier::supplement);
  }
}

TEST(Tiering, SplitSupersedesParentUnit) {
  auto b = toy_skeleton();
  EvidentialUnit u = toy_s1();
  u.interpretations.push_back(make(ConstructAlignment::mismatch, Measurement::adequate, Design::sufficient,
                                   Reporting::transparent));
  u.splittable = true;
  u.assignment.reset();
  b = must(declare_unit(b, u, at(0)));
  auto split = split_unit(b, toy_unit("S1"), {"S1a", "S1b"}, at(1));
  ASSERT_TRUE(split) << describe(split.diagnostics());
  const auto& next = split.value();
  EXPECT_FALSE(next.find_unit(toy_unit("S1"))->active());
  ASSERT_NE(next.find_unit(toy_unit("S1a")), nullptr);
  EXPECT_EQ(next.find_unit(toy_unit("S1a"))->interpretations.size(), 1u);
  EXPECT_EQ(next.find_unit(toy_unit("S1b"))->split_from, toy_unit("S1"));
  EXPECT_EQ(next.events.back().kind, EventKind::unit_split);
}

TEST(Tiering, OracleAgreesOnAll432) {
  auto o = props::tier_oracle();
  EXPECT_TRUE(o.ok) << o.detail;
  EXPECT_EQ(o.cases, 432u);
}

TEST(Tiering, DegradationNeverRaisesTier) {
  auto o = props::conservatism();
  EXPECT_TRUE(o.ok) << o.detail;
}

}  // namespace
}  // namespace recap
