#pragma once

// Declaration sites and the identifier references they carry. Shared by the
// integrity check, the contamination scanner, and downstream tracing.

#include <map>
#include <string>
#include <vector>

#include "recap/model.hpp"

namespace recap {

enum class SiteKind {
  law,
  abstraction,
  definition,
  project,
  unit,
  route,
  route_assumption,
  reviewer_block,
  memo,
  flow
};

const char* to_string(SiteKind k);

struct Site {
  SiteKind kind = SiteKind::law;
  std::string id;     // rendered identifier, or a synthetic key for blocks/memos/flows
  std::string layer;  // declaring layer id
  std::string path;   // JSON pointer of the declaration
  bool quarantined = false;
  Json json;
};

// Every declaration that can carry references, in document order. Route
// assumptions are indexed but not listed as separate sites (they live in
// their route's JSON).
std::vector<Site> enumerate_sites(const ProjectBundle& bundle, bool include_quarantined);

struct FoundReference {
  Identifier id;
  std::string path;
};

// Qualified identifiers inside a declaration's JSON, skipping the keys that
// declare (`id`, `study_id`) rather than reference.
std::vector<FoundReference> collect_references(const Json& decl, const std::string& base_path);

struct DeclInfo {
  SiteKind kind = SiteKind::law;
  std::string layer;
  std::string path;
  bool quarantined = false;
};

using DeclIndex = std::map<std::string, DeclInfo>;

// All namespaced declarations keyed by rendered identifier. Duplicates keep
// the first occurrence; check_integrity reports the rest.
DeclIndex build_decl_index(const ProjectBundle& bundle);

// Layer that owns an identifier (the grandparent's id for `gp:` names).
std::string owning_layer(const Identifier& id, const ProjectBundle& bundle);

// Synthetic site keys for per-project blocks.
std::string reviewer_block_key(const Identifier& project);
std::string memo_key(const Identifier& project);

}  // namespace recap
