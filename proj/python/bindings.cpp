// Python bindings. Bundles and commands cross the boundary as JSON text; the
// package wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "recap/bundle_format.hpp"
#include "recap/commands.hpp"
#include "recap/contamination.hpp"
#include "recap/reporting.hpp"
#include "recap/tiering.hpp"

namespace py = pybind11;

namespace {

using recap::Json;

Json diagnostics_json(const recap::Diagnostics& ds) {
  Json arr = Json::array();
  for (const auto& d : ds)
    arr.push_back({{"code", d.code}, {"severity", recap::to_string(d.severity)}, {"location", d.location},
                   {"message", d.message}});
  return arr;
}

// Parses or raises ValueError carrying the diagnostics.
recap::ProjectBundle parse_or_throw(const std::string& text) {
  auto parsed = recap::parse_bundle(text);
  if (!parsed.ok()) throw py::value_error(diagnostics_json(parsed.diagnostics).dump());
  return std::move(*parsed.bundle);
}

std::string py_parse(const std::string& text) {
  auto parsed = recap::parse_bundle(text);
  Json out = {{"ok", parsed.ok()}, {"diagnostics", diagnostics_json(parsed.diagnostics)}};
  if (parsed.ok()) out["bundle"] = recap::bundle_to_json(*parsed.bundle);
  return out.dump();
}

std::string py_canonicalize(const std::string& text) { return recap::serialize_bundle(parse_or_throw(text)); }

std::string py_validate(const std::string& text) { return recap::to_json(recap::compliance_verdict(text)).dump(); }

std::string py_tier(const std::string& text) {
  auto b = parse_or_throw(text);
  Json rows = Json::array();
  for (const auto& u : b.units) {
    if (!u.active()) continue;
    Json row = {{"unit", u.study_id.str()}};
    auto d = recap::tier_unit(u);
    if (d) {
      row["tier"] = recap::to_string(d.value().tier);
      row["rule"] = d.value().rule;
    } else {
      row["error"] = d.diagnostics().front().code;
    }
    rows.push_back(row);
  }
  return rows.dump();
}

std::string py_scan(const std::string& text) {
  Json arr = Json::array();
  for (const auto& e : recap::scan_bundle(parse_or_throw(text))) arr.push_back(recap::to_json(e));
  return arr.dump();
}

std::string py_execute(const std::string& text, const std::string& command) {
  auto b = parse_or_throw(text);
  Json cmd = Json::parse(command, nullptr, false);
  if (cmd.is_discarded()) throw py::value_error("command is not valid JSON");
  auto next = recap::execute(b, cmd);
  Json out = {{"ok", next.ok()}, {"diagnostics", diagnostics_json(next.diagnostics())}};
  if (next) out["bundle"] = recap::serialize_bundle(next.value());
  return out.dump();
}

std::string py_render(const std::string& text, const std::string& artifact, const std::string& format,
                   const std::string& project) {
  auto b = parse_or_throw(text);
  auto fmt = recap::format_from_string(format);
  if (!fmt) throw py::value_error("unknown format '" + format + "'");
  recap::Result<std::string> rendered = std::string();
  if (artifact == "compliance") {
    rendered = recap::render(recap::compliance_verdict(b), *fmt);
  } else {
    auto id = recap::Identifier::parse(project);
    if (!id && b.projects.size() == 1) id = b.projects.front().id;
    if (!id) throw py::value_error("choose a project");
    if (artifact == "study-log") {
      auto log = recap::build_study_log(b, *id);
      rendered = log ? recap::render(log.value(), *fmt) : recap::Result<std::string>(log.diagnostics());
    } else if (artifact == "tier-table") {
      auto table = recap::build_tier_table(b, *id);
      rendered = table ? recap::render(table.value(), *fmt) : recap::Result<std::string>(table.diagnostics());
    } else if (artifact == "reviewer-block") {
      const auto* block = b.find_reviewer_block(*id);
      if (!block) throw py::value_error("no reviewer block for " + id->str());
      rendered = recap::render(*block, *fmt);
    } else {
      throw py::value_error("unknown artifact '" + artifact + "'");
    }
  }
  if (!rendered) throw py::value_error(diagnostics_json(rendered.diagnostics()).dump());
  return rendered.value();
}

}  // namespace

PYBIND11_MODULE(_recap_engine, m) {
  m.doc() = "Native core of recap_engine";
  m.attr("ENGINE_VERSION") = recap::kEngineVersion;
  m.def("parse", &py_parse, py::arg("text"));
  m.def("canonicalize", &py_canonicalize, py::arg("text"));
  m.def("validate", &py_validate, py::arg("text"));
  m.def("tier", &py_tier, py::arg("text"));
  m.def("scan", &py_scan, py::arg("text"));
  m.def("execute", &py_execute, py::arg("text"), py::arg("command"));
  m.def("render", &py_render, py::arg("text"), py::arg("artifact"), py::arg("format") = "md", py::arg("project") = "");
  m.def("command_names", &recap::command_names);
}
