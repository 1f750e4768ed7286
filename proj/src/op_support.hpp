#pragma once

// Helpers shared by the mutating operations.

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap::detail {

template <class Range, class Pred>
std::optional<std::size_t> index_where(const Range& r, Pred pred) {
  auto it = std::find_if(r.begin(), r.end(), pred);
  if (it == r.end()) return std::nullopt;
  return static_cast<std::size_t>(it - r.begin());
}

inline std::optional<std::size_t> unit_index(const ProjectBundle& b, const Identifier& id) {
  return index_where(b.units, [&](const EvidentialUnit& u) { return u.study_id == id; });
}

inline std::optional<std::size_t> route_index(const ProjectBundle& b, const Identifier& id) {
  return index_where(b.routes, [&](const Route& r) { return r.id == id; });
}

inline std::string unit_path(std::size_t i) { return "/units/" + std::to_string(i); }
inline std::string route_path(std::size_t i) { return "/routes/" + std::to_string(i); }

inline Diagnostic unknown_unit(const Identifier& id) {
  return make_error("E_UNKNOWN_UNIT", id.str(), "no unit named '" + id.str() + "'");
}

inline Diagnostic unknown_route(const Identifier& id) {
  return make_error("E_UNKNOWN_ROUTE", id.str(), "no route named '" + id.str() + "'");
}

inline Diagnostic unknown_project(const Identifier& id) {
  return make_error("E_UNKNOWN_PROJECT", id.str(), "no project named '" + id.str() + "'");
}

inline bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace recap::detail
