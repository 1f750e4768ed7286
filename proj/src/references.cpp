#include "recap/references.hpp"

#include "recap/bundle_format.hpp"

namespace recap {

const char* to_string(SiteKind k) {
  switch (k) {
    case SiteKind::law: return "law";
    case SiteKind::abstraction: return "abstraction";
    case SiteKind::definition: return "definition";
    case SiteKind::project: return "project";
    case SiteKind::unit: return "unit";
    case SiteKind::route: return "route";
    case SiteKind::route_assumption: return "route assumption";
    case SiteKind::reviewer_block: return "reviewer block";
    case SiteKind::memo: return "memo";
    case SiteKind::flow: return "flow";
  }
  return "declaration";
}

std::string reviewer_block_key(const Identifier& project) { return "reviewer_block:" + project.str(); }
std::string memo_key(const Identifier& project) { return "memo:" + project.str(); }

namespace {

std::string project_layer(const ProjectBundle& b, const Identifier& project) {
  const ProjectDecl* p = b.find_project(project);
  return p ? p->layer : project.owner;
}

std::string idx(const char* list, std::size_t i) { return std::string("/") + list + "/" + std::to_string(i); }

}  // namespace

std::vector<Site> enumerate_sites(const ProjectBundle& b, bool include_quarantined) {
  std::vector<Site> out;
  auto add = [&](SiteKind kind, std::string id, std::string layer, std::string path, bool quarantined, Json json) {
    if (quarantined && !include_quarantined) return;
    out.push_back(Site{kind, std::move(id), std::move(layer), std::move(path), quarantined, std::move(json)});
  };
  for (std::size_t i = 0; i < b.layers.size(); ++i) {
    const auto& l = b.layers[i];
    auto base = idx("layers", i);
    for (std::size_t k = 0; k < l.laws.size(); ++k)
      add(SiteKind::law, l.laws[k].id.str(), l.id, base + "/laws/" + std::to_string(k), l.laws[k].quarantined,
          to_json(l.laws[k]));
    for (std::size_t k = 0; k < l.abstractions.size(); ++k)
      add(SiteKind::abstraction, l.abstractions[k].id.str(), l.id, base + "/abstractions/" + std::to_string(k),
          l.abstractions[k].quarantined, to_json(l.abstractions[k]));
    for (std::size_t k = 0; k < l.definitions.size(); ++k)
      add(SiteKind::definition, l.definitions[k].id.str(), l.id, base + "/definitions/" + std::to_string(k),
          l.definitions[k].quarantined, to_json(l.definitions[k]));
  }
  for (std::size_t i = 0; i < b.projects.size(); ++i)
    add(SiteKind::project, b.projects[i].id.str(), b.projects[i].layer, idx("projects", i), false, to_json(b.projects[i]));
  for (std::size_t i = 0; i < b.units.size(); ++i) {
    const auto& u = b.units[i];
    add(SiteKind::unit, u.study_id.str(), project_layer(b, u.project_ref), idx("units", i), u.quarantined, to_json(u));
  }
  for (std::size_t i = 0; i < b.routes.size(); ++i) {
    const auto& r = b.routes[i];
    add(SiteKind::route, r.id.str(), project_layer(b, r.project_ref), idx("routes", i), r.quarantined, to_json(r));
  }
  for (std::size_t i = 0; i < b.reviewer_blocks.size(); ++i) {
    const auto& rb = b.reviewer_blocks[i];
    add(SiteKind::reviewer_block, reviewer_block_key(rb.project_ref), project_layer(b, rb.project_ref),
        idx("reviewer_blocks", i), rb.quarantined, to_json(rb));
  }
  for (std::size_t i = 0; i < b.memos.size(); ++i) {
    const auto& m = b.memos[i];
    add(SiteKind::memo, memo_key(m.project_ref), project_layer(b, m.project_ref), idx("memos", i), m.quarantined,
        to_json(m));
  }
  for (std::size_t i = 0; i < b.flows.size(); ++i) {
    const auto& f = b.flows[i];
    add(SiteKind::flow, f.id, f.source_layer, idx("flows", i), f.quarantined, to_json(f));
  }
  return out;
}

namespace {

void walk(const Json& j, const std::string& path, std::vector<FoundReference>& out) {
  if (j.is_string()) {
    for (const auto& ref : extract_references(j.get_ref<const std::string&>())) out.push_back({ref.id, path});
    return;
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], path + "/" + std::to_string(i), out);
    return;
  }
  if (!j.is_object()) return;
  for (const auto& [key, val] : j.items()) {
    if (key == "id" || key == "study_id") continue;
    auto p = path + "/" + key;
    // Object keys can be identifiers too (correspondence maps).
    if (auto id = Identifier::parse(key)) out.push_back({*id, p});
    walk(val, p, out);
  }
}

}  // namespace

std::vector<FoundReference> collect_references(const Json& decl, const std::string& base_path) {
  std::vector<FoundReference> out;
  walk(decl, base_path, out);
  return out;
}

DeclIndex build_decl_index(const ProjectBundle& b) {
  DeclIndex index;
  auto add = [&](const Identifier& id, SiteKind kind, const std::string& layer, const std::string& path, bool q) {
    index.emplace(id.str(), DeclInfo{kind, layer, path, q});
  };
  for (std::size_t i = 0; i < b.layers.size(); ++i) {
    const auto& l = b.layers[i];
    auto base = idx("layers", i);
    for (std::size_t k = 0; k < l.laws.size(); ++k)
      add(l.laws[k].id, SiteKind::law, l.id, base + "/laws/" + std::to_string(k), l.laws[k].quarantined);
    for (std::size_t k = 0; k < l.abstractions.size(); ++k)
      add(l.abstractions[k].id, SiteKind::abstraction, l.id, base + "/abstractions/" + std::to_string(k),
          l.abstractions[k].quarantined);
    for (std::size_t k = 0; k < l.definitions.size(); ++k)
      add(l.definitions[k].id, SiteKind::definition, l.id, base + "/definitions/" + std::to_string(k),
          l.definitions[k].quarantined);
  }
  for (std::size_t i = 0; i < b.projects.size(); ++i)
    add(b.projects[i].id, SiteKind::project, b.projects[i].layer, idx("projects", i), false);
  for (std::size_t i = 0; i < b.units.size(); ++i)
    add(b.units[i].study_id, SiteKind::unit, project_layer(b, b.units[i].project_ref), idx("units", i),
        b.units[i].quarantined);
  for (std::size_t i = 0; i < b.routes.size(); ++i) {
    const auto& r = b.routes[i];
    auto layer = project_layer(b, r.project_ref);
    add(r.id, SiteKind::route, layer, idx("routes", i), r.quarantined);
    for (std::size_t k = 0; k < r.body.assumptions.size(); ++k)
      add(r.body.assumptions[k].id, SiteKind::route_assumption, layer,
          idx("routes", i) + "/assumptions/" + std::to_string(k), r.quarantined);
  }
  return index;
}

std::string owning_layer(const Identifier& id, const ProjectBundle& b) {
  if (id.ns == Namespace::gp) {
    const LayerDecl* g = b.grandparent();
    return g ? g->id : std::string();
  }
  return id.owner;
}

}  // namespace recap
