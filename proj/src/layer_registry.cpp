#include "recap/layer_registry.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "op_support.hpp"
#include "recap/audit_log.hpp"
#include "recap/bundle_format.hpp"
#include "recap/contamination.hpp"

namespace recap {

using detail::blank;

std::optional<Version> parse_version(std::string_view text, char prefix) {
  if (text.size() < 4 || text.front() != prefix) return std::nullopt;
  text.remove_prefix(1);
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) return std::nullopt;
  auto number = [](std::string_view s, long& out) {
    if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  Version v;
  if (!number(text.substr(0, dot), v.major) || !number(text.substr(dot + 1), v.minor)) return std::nullopt;
  return v;
}

const LawSet& core_laws() {
  static const LawSet kCore = [] {
    auto law = [](const char* name, const char* text) {
      return Law{Identifier{Namespace::gp, "", name}, text, true, false};
    };
    return LawSet{
        law("anti_reification",
            "A construct is an inference target. No measure, proxy, or dataset that approximates it may stand in "
            "for its definition."),
        law("one_route",
            "A project commits to one declared inferential route. Other candidate routes are recorded as rejected "
            "alternatives and are never pursued as parallel inference."),
        law("construct_measurement_separation",
            "Construct definitions and measurement definitions live in separate declarations, and neither may be "
            "rewritten through the other."),
        law("downward_insulation",
            "Grandparent laws cannot be changed from below. Lower layers may only propose validated methodological "
            "insight, which is appended through a versioned changelog."),
    };
  }();
  return kCore;
}

bool is_core_law_id(const Identifier& id) {
  const auto& core = core_laws();
  return std::any_of(core.begin(), core.end(), [&](const Law& l) { return l.id == id; });
}

LayerDecl make_grandparent(const std::string& id, const std::string& version, const LawSet& extra,
                           std::vector<std::string> vocabulary) {
  LayerDecl g;
  g.id = id;
  g.kind = LayerKind::grandparent;
  g.version = version;
  g.laws = core_laws();
  for (const auto& law : extra)
    if (!is_core_law_id(law.id)) g.laws.push_back(law);
  g.vocabulary = std::move(vocabulary);
  return g;
}

Result<EffectiveConstraintSet> resolve_constraints(const ProjectBundle& b, const std::string& child_id) {
  const LayerDecl* child = b.find_layer(child_id);
  if (!child) return make_error("E_UNKNOWN_LAYER", child_id, "no layer named '" + child_id + "'");
  if (child->kind != LayerKind::child)
    return make_error("E_NOT_CHILD", child_id, "'" + child_id + "' is a " + to_string(child->kind) + " layer");
  const LayerDecl* parent = b.find_layer(child->parent_ref);
  if (!parent) return make_error("E_UNKNOWN_LAYER", child->parent_ref, "no layer named '" + child->parent_ref + "'");
  const LayerDecl* grandparent = b.find_layer(parent->parent_ref);
  if (!grandparent)
    return make_error("E_UNKNOWN_LAYER", parent->parent_ref, "no layer named '" + parent->parent_ref + "'");

  EffectiveConstraintSet out;
  out.child = child->id;
  out.parent = parent->id;
  out.grandparent = grandparent->id;
  for (const auto& law : grandparent->laws)
    if (!law.quarantined) out.laws.push_back(law);
  std::map<Identifier, bool> live;
  for (const auto& a : parent->abstractions) {
    live[a.id] = !a.quarantined;
    if (!a.quarantined) out.abstractions.push_back(a);
  }
  for (const auto& a : out.abstractions) {
    for (const auto& [m, c] : a.correspondence)
      if (live[m] && live[c]) out.correspondences.emplace_back(m, c);
  }
  return out;
}

Diagnostics check_law_evolution(const LawSet& old_laws, const LawSet& new_laws) {
  Diagnostics d;
  std::map<Identifier, const Law*> now;
  for (const auto& law : new_laws) now.emplace(law.id, &law);
  for (const auto& law : old_laws) {
    auto it = now.find(law.id);
    bool core = law.immutable_core || is_core_law_id(law.id);
    if (it == now.end()) {
      d.push_back(make_error("E_LAW_RESCINDED", law.id.str(), "law " + law.id.str() + " was removed"));
      if (core) d.push_back(make_error("E_CORE_TOUCHED", law.id.str(), "protected law " + law.id.str() + " was removed"));
      continue;
    }
    const Law& next = *it->second;
    if (next.text != law.text)
      d.push_back(make_error("E_LAW_REWRITTEN", law.id.str(), "text of law " + law.id.str() + " changed"));
    if (core && (next.text != law.text || next.immutable_core != law.immutable_core))
      d.push_back(make_error("E_CORE_TOUCHED", law.id.str(), "protected law " + law.id.str() + " was altered"));
  }
  return d;
}

Json to_json(const ChangelogEntry& e) {
  return {{"from_version", e.from_version},
          {"to_version", e.to_version},
          {"motivating_insight", e.motivating_insight},
          {"boundary_affected", e.boundary_affected},
          {"generalizability_reasoning", e.generalizability_reasoning},
          {"timestamp", e.timestamp}};
}

Result<ChangelogEntry> changelog_from_json(const Json& j) {
  if (!j.is_object()) return make_error("E_SYNTAX", "changelog", "changelog must be an object");
  Diagnostics d;
  ChangelogEntry e;
  auto field = [&](const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return;
    if (!it->is_string()) {
      d.push_back(make_error("E_SYNTAX", std::string("changelog/") + key, std::string(key) + " must be a string"));
      return;
    }
    out = it->get<std::string>();
  };
  field("from_version", e.from_version);
  field("to_version", e.to_version);
  field("motivating_insight", e.motivating_insight);
  field("boundary_affected", e.boundary_affected);
  field("generalizability_reasoning", e.generalizability_reasoning);
  field("timestamp", e.timestamp);
  if (!d.empty()) return d;
  return e;
}

Result<ProjectBundle> bump_version(const ProjectBundle& b, const ChangelogEntry& entry, const LawSet& new_laws,
                                   const EventContext& ctx) {
  const LayerDecl* g = b.grandparent();
  if (!g) return make_error("E_NO_GRANDPARENT", "/layers", "bundle has no grandparent layer");
  Diagnostics d;
  const std::pair<const char*, const std::string*> narrative[] = {
      {"motivating_insight", &entry.motivating_insight},
      {"boundary_affected", &entry.boundary_affected},
      {"generalizability_reasoning", &entry.generalizability_reasoning}};
  for (const auto& [name, text] : narrative) {
    if (blank(*text))
      d.push_back(make_error("E_CHANGELOG_INCOMPLETE", std::string("changelog/") + name,
                             std::string("changelog field '") + name + "' is empty"));
  }
  auto from = parse_version(entry.from_version);
  auto to = parse_version(entry.to_version);
  if (!from || !to) {
    d.push_back(make_error("E_VERSION_ORDER", "changelog", "versions must have the form v<major>.<minor>"));
  } else {
    if (entry.from_version != g->version)
      d.push_back(make_error("E_VERSION_ORDER", "changelog/from_version",
                             "bump starts at " + entry.from_version + " but the grandparent is at " + g->version));
    if (!(*to > *from))
      d.push_back(make_error("E_VERSION_ORDER", "changelog/to_version",
                             entry.to_version + " is not greater than " + entry.from_version));
  }
  for (auto& x : check_upward_text(entry.motivating_insight, "changelog/motivating_insight")) d.push_back(x);
  for (auto& x : check_upward_text(entry.boundary_affected, "changelog/boundary_affected")) d.push_back(x);
  for (auto& x : check_upward_text(entry.generalizability_reasoning, "changelog/generalizability_reasoning"))
    d.push_back(x);
  for (std::size_t i = 0; i < new_laws.size(); ++i) {
    const auto& law = new_laws[i];
    auto loc = "laws/" + std::to_string(i);
    if (law.id.ns != Namespace::gp)
      d.push_back(make_error("E_NAMESPACE", loc, "law " + law.id.str() + " must live in the gp namespace"));
    if (law.immutable_core && !is_core_law_id(law.id))
      d.push_back(make_error("E_CORE_FLAG", loc, "only the four protected laws carry immutable_core"));
    for (auto& x : check_upward_text(law.text, loc + "/text")) d.push_back(x);
  }
  for (auto& x : check_law_evolution(g->laws, new_laws)) d.push_back(x);
  if (!d.empty()) return d;

  ProjectBundle next = b;
  LayerDecl* ng = next.grandparent();
  LawSet before = ng->laws;
  ng->laws = new_laws;
  ng->version = entry.to_version;
  next.recap_version = entry.to_version;
  ChangelogEntry logged = entry;
  if (logged.timestamp.empty()) logged.timestamp = ctx.timestamp;
  return commit(std::move(next), EventKind::version_bumped,
                {{"from", entry.from_version},
                 {"to", entry.to_version},
                 {"changelog", to_json(logged)},
                 {"laws_before", to_json(before)},
                 {"laws_after", to_json(new_laws)}},
                {g->id}, ctx);
}

Diagnostics validate_layers(const ProjectBundle& b) {
  Diagnostics d;
  for (std::size_t i = 0; i < b.layers.size(); ++i) {
    const auto& l = b.layers[i];
    auto path = "/layers/" + std::to_string(i);
    if (l.kind == LayerKind::grandparent) {
      if (!parse_version(l.version))
        d.push_back(make_error("E_VERSION_FORMAT", path + "/version", "grandparent version must be v<major>.<minor>"));
      if (l.version != b.recap_version)
        d.push_back(make_error("E_VERSION_MISMATCH", "/recap_version",
                               "recap_version " + b.recap_version + " differs from the grandparent version " +
                                   l.version));
      for (const auto& core : core_laws()) {
        auto it = std::find_if(l.laws.begin(), l.laws.end(), [&](const Law& x) { return x.id == core.id; });
        if (it == l.laws.end()) {
          d.push_back(make_error("E_CORE_MISSING", path + "/laws", "protected law " + core.id.str() + " is missing"));
          continue;
        }
        auto lp = path + "/laws/" + std::to_string(it - l.laws.begin());
        if (it->text != core.text || !it->immutable_core || it->quarantined)
          d.push_back(make_error("E_CORE_TOUCHED", lp, "protected law " + core.id.str() + " differs from its canonical form"));
      }
      for (std::size_t k = 0; k < l.laws.size(); ++k) {
        if (l.laws[k].immutable_core && !is_core_law_id(l.laws[k].id))
          d.push_back(make_error("E_CORE_FLAG", path + "/laws/" + std::to_string(k),
                                 "only the four protected laws carry immutable_core"));
      }
    } else if (!l.version.empty()) {
      bool ok = !l.version.empty() && std::isalpha(static_cast<unsigned char>(l.version.front())) &&
                parse_version(l.version, l.version.front());
      if (!ok)
        d.push_back(make_error("E_VERSION_FORMAT", path + "/version", "layer version must look like P1.0"));
    }
    if (l.kind == LayerKind::parent) {
      std::map<Identifier, AbstractionKind> kinds;
      for (const auto& a : l.abstractions) kinds[a.id] = a.kind;
      for (std::size_t k = 0; k < l.abstractions.size(); ++k) {
        for (const auto& [m, c] : l.abstractions[k].correspondence) {
          auto ap = path + "/abstractions/" + std::to_string(k) + "/correspondence";
          auto mk = kinds.find(m);
          auto ck = kinds.find(c);
          if (mk == kinds.end() || mk->second != AbstractionKind::measurement_class || ck == kinds.end() ||
              ck->second != AbstractionKind::construct) {
            d.push_back(make_error("E_CORRESPONDENCE", ap,
                                   m.str() + " -> " + c.str() +
                                       " must map a measurement class to a construct of the same parent"));
          }
        }
      }
    }
  }

  // Recorded law history must itself be a legal evolution ending at the
  // current law set.
  const LayerDecl* g = b.grandparent();
  std::optional<LawSet> last;
  std::string last_to;
  for (std::size_t i = 0; i < b.events.size(); ++i) {
    const auto& e = b.events[i];
    if (e.kind != EventKind::version_bumped) continue;
    auto loc = "/events/" + std::to_string(i) + "/payload";
    auto before = laws_from_json(e.payload.value("laws_before", Json::array()));
    auto after = laws_from_json(e.payload.value("laws_after", Json::array()));
    if (!before || !after) {
      d.push_back(make_error("E_PAYLOAD_SCHEMA", loc, "version bump payload carries malformed law sets"));
      continue;
    }
    if (last) {
      for (auto& x : check_law_evolution(*last, before.value())) d.push_back(make_error(x.code, loc + "/laws_before", x.message));
    }
    for (auto& x : check_law_evolution(before.value(), after.value())) d.push_back(make_error(x.code, loc + "/laws_after", x.message));
    last = after.value();
    last_to = e.payload.value("to", std::string());
  }
  if (g && last) {
    for (auto& x : check_law_evolution(*last, g->laws)) d.push_back(make_error(x.code, "/layers", x.message));
    if (last_to != g->version)
      d.push_back(make_error("E_VERSION_MISMATCH", "/layers",
                             "grandparent version " + g->version + " does not match the last recorded bump to " + last_to));
  }
  return d;
}

}  // namespace recap
