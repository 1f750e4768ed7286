#include "recap/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace recap {

namespace {

template <class E>
struct EnumNames;

#define RECAP_ENUM_NAMES(E, ...)                                  \
  template <>                                                     \
  struct EnumNames<E> {                                           \
    static constexpr std::array kNames = {__VA_ARGS__};           \
  };                                                              \
  const char* name_of(E v) { return EnumNames<E>::kNames[static_cast<std::size_t>(v)]; }

RECAP_ENUM_NAMES(LayerKind, "grandparent", "parent", "child")
RECAP_ENUM_NAMES(AbstractionKind, "construct", "measurement_class", "design_form", "insight")
RECAP_ENUM_NAMES(Tier, "excluded", "supplement", "core")
RECAP_ENUM_NAMES(ConstructAlignment, "aligned", "partial", "mismatch")
RECAP_ENUM_NAMES(Measurement, "adequate", "minor_limitation", "conditional_proxy", "failed")
RECAP_ENUM_NAMES(Design, "sufficient", "limited", "incompatible")
RECAP_ENUM_NAMES(Reporting, "transparent", "ambiguous", "opaque")
RECAP_ENUM_NAMES(Dimension, "construct_alignment", "measurement", "design", "reporting")
RECAP_ENUM_NAMES(EvidenceRole, "primary_inference", "sensitivity", "boundary", "contextual",
                 "measurement_evaluation")
RECAP_ENUM_NAMES(RouteStatus, "committed", "exploratory")
RECAP_ENUM_NAMES(InfoClass, "content", "measurement", "assumption", "methodological_insight")
RECAP_ENUM_NAMES(EventKind, "tier_declared", "retier", "route_declared", "route_frozen",
                 "route_revised", "flow_recorded", "contamination_flagged",
                 "contamination_resolved", "version_bumped", "unit_split", "declaration_added",
                 "declaration_quarantined")

#undef RECAP_ENUM_NAMES

}  // namespace

const char* to_string(LayerKind v) { return name_of(v); }
const char* to_string(AbstractionKind v) { return name_of(v); }
const char* to_string(Tier v) { return name_of(v); }
const char* to_string(ConstructAlignment v) { return name_of(v); }
const char* to_string(Measurement v) { return name_of(v); }
const char* to_string(Design v) { return name_of(v); }
const char* to_string(Reporting v) { return name_of(v); }
const char* to_string(Dimension v) { return name_of(v); }
const char* to_string(EvidenceRole v) { return name_of(v); }
const char* to_string(RouteStatus v) { return name_of(v); }
const char* to_string(InfoClass v) { return name_of(v); }
const char* to_string(EventKind v) { return name_of(v); }

template <class E>
std::optional<E> enum_from_string(std::string_view s) {
  const auto& names = EnumNames<E>::kNames;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (s == names[i]) return static_cast<E>(i);
  return std::nullopt;
}

template std::optional<LayerKind> enum_from_string<LayerKind>(std::string_view);
template std::optional<AbstractionKind> enum_from_string<AbstractionKind>(std::string_view);
template std::optional<Tier> enum_from_string<Tier>(std::string_view);
template std::optional<ConstructAlignment> enum_from_string<ConstructAlignment>(std::string_view);
template std::optional<Measurement> enum_from_string<Measurement>(std::string_view);
template std::optional<Design> enum_from_string<Design>(std::string_view);
template std::optional<Reporting> enum_from_string<Reporting>(std::string_view);
template std::optional<Dimension> enum_from_string<Dimension>(std::string_view);
template std::optional<EvidenceRole> enum_from_string<EvidenceRole>(std::string_view);
template std::optional<RouteStatus> enum_from_string<RouteStatus>(std::string_view);
template std::optional<InfoClass> enum_from_string<InfoClass>(std::string_view);
template std::optional<EventKind> enum_from_string<EventKind>(std::string_view);

const char* tier_label(Tier t) {
  switch (t) {
    case Tier::core: return "Core";
    case Tier::supplement: return "Supplement";
    case Tier::excluded: return "Excluded";
  }
  return "Excluded";
}

// YYYY-MM-DDTHH:MM:SS[.fff]Z
bool is_timestamp(std::string_view s) {
  static constexpr std::string_view kShape = "dddd-dd-ddTdd:dd:dd";
  if (s.size() < kShape.size() + 1 || s.back() != 'Z') return false;
  for (std::size_t i = 0; i < kShape.size(); ++i) {
    char want = kShape[i];
    if (want == 'd' ? !std::isdigit(static_cast<unsigned char>(s[i])) : s[i] != want) return false;
  }
  auto rest = s.substr(kShape.size(), s.size() - kShape.size() - 1);
  if (rest.empty()) return true;
  if (rest.front() != '.' || rest.size() < 2) return false;
  return std::all_of(rest.begin() + 1, rest.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// ---------------------------------------------------------------------------
// ProjectBundle lookups
// ---------------------------------------------------------------------------

namespace {

template <class Range, class Pred>
auto find_ptr(Range& r, Pred pred) -> decltype(&*r.begin()) {
  auto it = std::find_if(r.begin(), r.end(), pred);
  return it == r.end() ? nullptr : &*it;
}

}  // namespace

const LayerDecl* ProjectBundle::find_layer(const std::string& id) const {
  return find_ptr(layers, [&](const LayerDecl& l) { return l.id == id; });
}
LayerDecl* ProjectBundle::find_layer(const std::string& id) {
  return find_ptr(layers, [&](const LayerDecl& l) { return l.id == id; });
}
const LayerDecl* ProjectBundle::grandparent() const {
  return find_ptr(layers, [](const LayerDecl& l) { return l.kind == LayerKind::grandparent; });
}
LayerDecl* ProjectBundle::grandparent() {
  return find_ptr(layers, [](const LayerDecl& l) { return l.kind == LayerKind::grandparent; });
}
const ProjectDecl* ProjectBundle::find_project(const Identifier& id) const {
  return find_ptr(projects, [&](const ProjectDecl& p) { return p.id == id; });
}
const EvidentialUnit* ProjectBundle::find_unit(const Identifier& id) const {
  return find_ptr(units, [&](const EvidentialUnit& u) { return u.study_id == id; });
}
EvidentialUnit* ProjectBundle::find_unit(const Identifier& id) {
  return find_ptr(units, [&](const EvidentialUnit& u) { return u.study_id == id; });
}
const Route* ProjectBundle::find_route(const Identifier& id) const {
  return find_ptr(routes, [&](const Route& r) { return r.id == id; });
}
Route* ProjectBundle::find_route(const Identifier& id) {
  return find_ptr(routes, [&](const Route& r) { return r.id == id; });
}
const Route* ProjectBundle::committed_route(const Identifier& project) const {
  return find_ptr(routes,
                  [&](const Route& r) { return r.project_ref == project && r.committed(); });
}
const BoundaryContract* ProjectBundle::find_contract(const std::string& id) const {
  return find_ptr(contracts, [&](const BoundaryContract& c) { return c.id == id; });
}
const ReviewerBlock* ProjectBundle::find_reviewer_block(const Identifier& project) const {
  return find_ptr(reviewer_blocks, [&](const ReviewerBlock& b) {
    return b.project_ref == project && !b.quarantined;
  });
}
const AnalyticMemo* ProjectBundle::find_memo(const Identifier& project) const {
  return find_ptr(memos,
                  [&](const AnalyticMemo& m) { return m.project_ref == project && !m.quarantined; });
}
long long ProjectBundle::last_sequence() const { return events.empty() ? 0 : events.back().sequence; }

}  // namespace recap
