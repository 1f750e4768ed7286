#pragma once

// The worked toy project (layers G/P/C, studies S1-S3, routes R1-R4) and the
// on-disk fixture corpus derived from it.

#include <string>
#include <vector>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap::fixtures {

// Deterministic timestamps: base time plus `minutes`.
std::string ts(int minutes);
EventContext at(int minutes, const std::string& actor = "fixture");

// Unwraps an accepted result, throwing std::runtime_error with the
// diagnostics otherwise.
ProjectBundle must(Result<ProjectBundle> r);
std::string describe(const Diagnostics& d);

Identifier gp(const std::string& name);
Identifier par(const std::string& owner, const std::string& name);
Identifier chi(const std::string& owner, const std::string& name);

// Toy identifiers.
Identifier toy_project();
Identifier toy_unit(const std::string& name);   // child:C:<name>
Identifier toy_route(const std::string& name);  // child:C:<name>

// Layers and project only, no events.
ProjectBundle toy_skeleton();

// Toy declarations as the author writes them (before any operation).
EvidentialUnit toy_s1();
EvidentialUnit toy_s2();
EvidentialUnit toy_s3();
Route toy_committed_route();
std::vector<Route> toy_exploratory_routes();
ReviewerBlock toy_reviewer_block();
AnalyticMemo toy_memo();

// The complete, compliant toy bundle, built through the public operations
// (15 events).
ProjectBundle toy_bundle();

struct CorpusEntry {
  std::string name;          // file name under tests/fixtures
  std::string text;          // document bytes
  int validate_exit = 0;     // expected `recap validate` exit code
  std::string expect_code;   // a code the validator must report ("" for none)
};

// The CLI fixture corpus: compliant, one bundle per violation class, and
// malformed documents.
std::vector<CorpusEntry> corpus();

// Absolute path of a file in the on-disk fixture directory.
std::string fixture_path(const std::string& name);

}  // namespace recap::fixtures
