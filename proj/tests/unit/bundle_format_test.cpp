#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "generators.hpp"
#include "recap/bundle_format.hpp"

namespace recap {
namespace {

using namespace fixtures;

TEST(BundleFormat, ToyRoundTripsByteForByte) {
  auto b = toy_bundle();
  std::string text = serialize_bundle(b);
  auto parsed = parse_bundle(text);
  ASSERT_TRUE(parsed.ok()) << describe(parsed.diagnostics);
  EXPECT_TRUE(parsed.diagnostics.empty());
  EXPECT_EQ(*parsed.bundle, b);
  EXPECT_EQ(serialize_bundle(*parsed.bundle), text);
}

TEST(BundleFormat, RandomBundlesRoundTrip) {
  gen::Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    auto b = gen::random_tiered_bundle(rng);
    auto parsed = parse_bundle(serialize_bundle(b));
    ASSERT_TRUE(parsed.ok()) << describe(parsed.diagnostics);
    EXPECT_EQ(*parsed.bundle, b);
  }
}

TEST(BundleFormat, TopLevelKeysInCanonicalOrder) {
  auto j = bundle_to_json(toy_skeleton());
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"recap_version", "layers", "projects", "units", "routes", "flows",
                                            "contracts", "events", "reviewer_blocks", "memos"}));
}

TEST(BundleFormat, SyntaxErrorCarriesLine) {
  auto parsed = parse_bundle("{\n  \"recap_version\": \"v1.0\",\n  \"layers\": [\n}");
  ASSERT_FALSE(parsed.ok());
  ASSERT_TRUE(contains_code(parsed.diagnostics, "E_SYNTAX"));
  EXPECT_EQ(parsed.diagnostics.front().location.rfind("line ", 0), 0u);
}

TEST(BundleFormat, UnknownTopLevelKeyWarns) {
  Json doc = bundle_to_json(toy_skeleton());
  doc["extra_notes"] = "kept aside";
  auto parsed = parse_bundle_json(doc);
  ASSERT_TRUE(parsed.ok());
  EXPECT_TRUE(contains_code(parsed.diagnostics, "W_UNKNOWN_KEY"));
  EXPECT_FALSE(has_errors(parsed.diagnostics));
}

TEST(BundleFormat, DanglingReferenceRejected) {
  Json doc = bundle_to_json(toy_skeleton());
  doc["layers"][2]["definitions"][0]["text"] = "cites parent:P:nowhere";
  auto parsed = parse_bundle_json(doc);
  ASSERT_FALSE(parsed.ok());
  EXPECT_TRUE(contains_code(parsed.diagnostics, "E_UNRESOLVED_REF"));
}

TEST(BundleFormat, DuplicateDeclarationRejected) {
  Json doc = bundle_to_json(toy_skeleton());
  doc["layers"][2]["definitions"].push_back(doc["layers"][2]["definitions"][0]);
  auto parsed = parse_bundle_json(doc);
  ASSERT_FALSE(parsed.ok());
  EXPECT_TRUE(contains_code(parsed.diagnostics, "E_DUP_ID"));
}

TEST(BundleFormat, GrandparentRequired) {
  Json doc = bundle_to_json(toy_skeleton());
  doc["layers"].erase(0);
  auto parsed = parse_bundle_json(doc);
  ASSERT_FALSE(parsed.ok());
  EXPECT_TRUE(contains_code(parsed.diagnostics, "E_NO_GRANDPARENT"));
}

TEST(BundleFormat, WrongNamespaceRejected) {
  Json doc = bundle_to_json(toy_skeleton());
  doc["layers"][2]["definitions"][0]["id"] = "parent:P:S1_m1";
  auto parsed = parse_bundle_json(doc);
  ASSERT_FALSE(parsed.ok());
  EXPECT_TRUE(contains_code(parsed.diagnostics, "E_NAMESPACE"));
}

TEST(BundleFormat, BareNamesQualifiedOnParse) {
  Json doc = bundle_to_json(toy_skeleton());
  doc["layers"][2]["definitions"][0]["id"] = "S1_m1";
  auto parsed = parse_bundle_json(doc);
  ASSERT_TRUE(parsed.ok()) << describe(parsed.diagnostics);
  EXPECT_EQ(parsed.bundle->layers[2].definitions[0].id.str(), "child:C:S1_m1");
}

TEST(BundleFormat, DecodersInvertEncoders) {
  auto b = toy_bundle();
  for (const auto& u : b.units) {
    auto back = unit_from_json(to_json(u));
    ASSERT_TRUE(back) << describe(back.diagnostics());
    EXPECT_EQ(back.value(), u);
  }
  for (const auto& r : b.routes) {
    auto back = route_from_json(to_json(r));
    ASSERT_TRUE(back) << describe(back.diagnostics());
    EXPECT_EQ(back.value(), r);
  }
  for (const auto& e : b.events) {
    auto back = event_from_json(to_json(e));
    ASSERT_TRUE(back) << describe(back.diagnostics());
    EXPECT_EQ(back.value(), e);
  }
  auto rb = reviewer_block_from_json(to_json(*b.find_reviewer_block(toy_project())));
  ASSERT_TRUE(rb);
  EXPECT_EQ(rb.value(), *b.find_reviewer_block(toy_project()));
}

TEST(BundleFormat, CheckIntegrityCleanOnToy) {
  EXPECT_TRUE(check_integrity(toy_bundle()).empty());
}

TEST(BundleFormat, OnDiskToyFixtureParses) {
  std::ifstream in(fixture_path("toy.json"));
  std::stringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_bundle(ss.str());
  ASSERT_TRUE(parsed.ok()) << describe(parsed.diagnostics);
  EXPECT_EQ(*parsed.bundle, toy_bundle());
}

}  // namespace
}  // namespace recap
