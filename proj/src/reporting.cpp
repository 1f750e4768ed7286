#include "recap/reporting.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "op_support.hpp"
#include "recap/audit_log.hpp"
#include "recap/bundle_format.hpp"
#include "recap/contamination.hpp"
#include "recap/layer_registry.hpp"
#include "recap/references.hpp"
#include "recap/routing.hpp"
#include "recap/tiering.hpp"

namespace recap {

using detail::blank;

std::vector<const EvidentialUnit*> report_units(const ProjectBundle& b, const Identifier& project) {
  std::vector<const EvidentialUnit*> out;
  for (const auto& u : b.units)
    if (u.active() && u.project_ref == project) out.push_back(&u);
  std::stable_sort(out.begin(), out.end(), [](const EvidentialUnit* x, const EvidentialUnit* y) {
    return x->study_id.local_name < y->study_id.local_name;
  });
  return out;
}

bool has_direction_tag(std::string_view text) {
  static const std::set<std::string> kTags = {"attenuates", "inflates", "reverses", "nondirectional"};
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string word;
    while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j])))
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[j++]))));
    if (kTags.count(word)) return true;
    i = j;
  }
  return false;
}

namespace {

std::string unit_location(const ProjectBundle& b, const EvidentialUnit* u) {
  return "/units/" + std::to_string(u - b.units.data());
}

std::string reviewer_block_location(const ReviewerBlock& block, const ProjectBundle& b) {
  for (std::size_t i = 0; i < b.reviewer_blocks.size(); ++i)
    if (&b.reviewer_blocks[i] == &block) return "/reviewer_blocks/" + std::to_string(i);
  return reviewer_block_key(block.project_ref);
}

Diagnostics study_log_fields(const ProjectBundle& b, const EvidentialUnit* u, bool require_record = true) {
  Diagnostics d;
  auto loc = unit_location(b, u);
  auto missing = [&](const std::string& field, const std::string& what) {
    d.push_back(make_error("E_MISSING_FIELD", loc + "/" + field, u->study_id.str() + " has no " + what));
  };
  if (blank(u->design_type)) missing("design_type", "design type");
  if (!u->declared_tier) missing("declared_tier", "declared tier");
  if (blank(u->tier_justification)) missing("tier_justification", "tiering justification");
  if (require_record && !u->study_log) missing("study_log", "study log record");
  return d;
}

}  // namespace

Result<StudyLog> build_study_log(const ProjectBundle& b, const Identifier& project) {
  if (!b.find_project(project)) return detail::unknown_project(project);
  StudyLog log{project, {}};
  Diagnostics d;
  for (const auto* u : report_units(b, project)) {
    auto problems = study_log_fields(b, u);
    if (!problems.empty()) {
      d.insert(d.end(), problems.begin(), problems.end());
      continue;
    }
    StudyLogEntry e;
    e.study_id = u->study_id.local_name;
    e.design_type = u->design_type;
    e.tier_assignment = *effective_tier(*u);
    e.reasons_for_tiering = u->tier_justification;
    e.bias_considerations = u->study_log->bias_considerations;
    e.measurement_definition_issues = u->study_log->measurement_definition_issues;
    e.notes = u->study_log->notes;
    log.entries.push_back(std::move(e));
  }
  if (!d.empty()) return d;
  return log;
}

Result<TierTable> build_tier_table(const ProjectBundle& b, const Identifier& project) {
  if (!b.find_project(project)) return detail::unknown_project(project);
  TierTable table{project, {}};
  for (const auto* u : report_units(b, project)) {
    auto tier = current_tier(*u);
    if (!tier || *tier == Tier::excluded) continue;
    TierTableRow row;
    row.study_id = u->study_id.local_name;
    row.evidence_type = evidence_type(b, *u);
    if (u->tier_table) {
      row.methods_summary = u->tier_table->methods_summary;
      row.strengths = u->tier_table->strengths;
      row.limitations = u->tier_table->limitations;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Diagnostics check_study_log(const ProjectBundle& b, const Identifier& project) {
  Diagnostics d;
  auto units = report_units(b, project);
  if (units.empty()) {
    d.push_back(make_warning("W_EMPTY_STUDY_LOG", project.str(), project.str() + " has no evidential units"));
    return d;
  }
  bool any_record = std::any_of(units.begin(), units.end(), [](const EvidentialUnit* u) { return u->study_log; });
  if (!any_record) {
    d.push_back(make_error("E_NO_STUDY_LOG", project.str(), project.str() + " declares no study log records"));
  }
  for (const auto* u : units) {
    auto fields = study_log_fields(b, u, any_record);
    d.insert(d.end(), fields.begin(), fields.end());
    if (u->study_log) {
      auto loc = unit_location(b, u) + "/study_log";
      if (blank(u->study_log->bias_considerations))
        d.push_back(make_error("E_MISSING_FIELD", loc + "/bias_considerations",
                               u->study_id.str() + " has no bias considerations"));
      else if (!has_direction_tag(u->study_log->bias_considerations))
        d.push_back(make_error("E_BIAS_DIRECTION", loc + "/bias_considerations",
                               u->study_id.str() +
                                   " bias statement needs a direction: attenuates, inflates, reverses or nondirectional"));
    }
  }
  return d;
}

Diagnostics check_tier_table(const ProjectBundle& b, const Identifier& project) {
  Diagnostics d;
  std::vector<const EvidentialUnit*> participating;
  for (const auto* u : report_units(b, project)) {
    auto tier = current_tier(*u);
    if (tier && *tier != Tier::excluded) participating.push_back(u);
  }
  if (participating.empty()) return d;
  bool any_record =
      std::any_of(participating.begin(), participating.end(), [](const EvidentialUnit* u) { return u->tier_table; });
  if (!any_record) {
    d.push_back(make_error("E_NO_TIER_TABLE", project.str(), project.str() + " declares no tier table records"));
    return d;
  }
  for (const auto* u : participating) {
    auto loc = unit_location(b, u) + "/tier_table";
    if (!u->tier_table) {
      d.push_back(make_error("E_MISSING_FIELD", loc, u->study_id.str() + " has no tier table record"));
      continue;
    }
    if (blank(u->tier_table->methods_summary))
      d.push_back(make_error("E_MISSING_FIELD", loc + "/methods_summary", u->study_id.str() + " has no methods summary"));
    if (!u->assignment)
      d.push_back(make_error("E_MISSING_FIELD", unit_location(b, u) + "/assignment",
                             u->study_id.str() + " has no evidence role, so its evidence type is unknown"));
  }
  return d;
}

Diagnostics validate_reviewer_block(const ReviewerBlock& block, const ProjectBundle& b) {
  Diagnostics d;
  auto loc = reviewer_block_location(block, b);
  std::size_t findings = std::count_if(block.methodological_findings.begin(), block.methodological_findings.end(),
                                       [](const std::string& f) { return !blank(f); });
  if (findings < 2)
    d.push_back(make_error("E_RB_FINDINGS", loc + "/methodological_findings",
                           "reviewer block needs two methodological findings, has " + std::to_string(findings)));
  if (blank(block.conceptual_insight))
    d.push_back(make_error("E_RB_INSIGHT", loc + "/conceptual_insight", "reviewer block has no conceptual insight"));
  if (blank(block.anticipated_critique.text))
    d.push_back(make_error("E_RB_CRITIQUE", loc + "/anticipated_critique/text", "reviewer block has no anticipated critique"));

  bool anchored = !block.anticipated_critique.referenced_decisions.empty();
  for (const auto& ref : block.anticipated_critique.referenced_decisions) {
    const EvidentialUnit* u = b.find_unit(ref);
    const Route* r = b.find_route(ref);
    bool ok = (u && u->project_ref == block.project_ref) || (r && r->project_ref == block.project_ref);
    anchored = anchored && ok;
  }
  if (!anchored)
    d.push_back(make_error("E_RB_CRITIQUE_UNANCHORED", loc + "/anticipated_critique/referenced_decisions",
                           "the critique must cite tiering or routing decisions of " + block.project_ref.str()));
  if (blank(block.disconfirming_model))
    d.push_back(make_error("E_RB_DISCONFIRMING", loc + "/disconfirming_model", "reviewer block has no disconfirming model"));

  const Route* route = b.committed_route(block.project_ref);
  std::set<Identifier> expected;
  if (route)
    for (const auto& a : route->body.assumptions) expected.insert(a.id);
  std::set<Identifier> given(block.assumptions_ref.begin(), block.assumptions_ref.end());
  if (given.empty() || given != expected)
    d.push_back(make_error("E_RB_ASSUMPTIONS", loc + "/assumptions_ref",
                           "the block must list exactly the committed route's assumptions"));
  return d;
}

const std::vector<std::string>& memo_sections() {
  static const std::vector<std::string> kSections = {"interpretation_under_assumptions", "uncertainty",
                                                     "boundary_evaluation", "supplement_roles",
                                                     "inheritance_compliance"};
  return kSections;
}

Diagnostics validate_memo(const AnalyticMemo& memo) {
  Diagnostics d;
  for (const auto& key : memo_sections()) {
    auto it = memo.sections.find(key);
    if (it == memo.sections.end() || blank(it->second))
      d.push_back(make_error("E_MEMO_SECTION", "memo:" + memo.project_ref.str() + "/sections/" + key,
                             "analytic memo section '" + key + "' is missing"));
  }
  return d;
}

Diagnostics validate_outputs(const ProjectBundle& b) {
  Diagnostics d;
  auto append = [&](Diagnostics more) { d.insert(d.end(), more.begin(), more.end()); };
  for (const auto& p : b.projects) {
    append(check_study_log(b, p.id));
    append(check_tier_table(b, p.id));
    const ReviewerBlock* block = b.find_reviewer_block(p.id);
    if (!block || block->quarantined)
      d.push_back(make_error("E_NO_REVIEWER_BLOCK", p.id.str(), p.id.str() + " has no reviewer block"));
    else
      append(validate_reviewer_block(*block, b));
    const AnalyticMemo* memo = b.find_memo(p.id);
    if (!memo || memo->quarantined)
      d.push_back(make_error("E_NO_ANALYTIC_MEMO", p.id.str(), p.id.str() + " has no analytic memo"));
    else
      append(validate_memo(*memo));
  }
  return d;
}

ComplianceReport compliance_verdict(const ProjectBundle& b) {
  ComplianceReport report;
  auto& d = report.findings;
  auto append = [&](Diagnostics more) { d.insert(d.end(), more.begin(), more.end()); };
  append(check_integrity(b));
  append(validate_layers(b));
  append(validate_event_log(b.events));
  append(validate_tiering(b));
  append(validate_routing(b));
  append(contamination_findings(b));
  append(validate_contracts(b));
  append(validate_outputs(b));
  sort_diagnostics(d);
  d.erase(std::unique(d.begin(), d.end()), d.end());
  report.compliant = !has_errors(d);
  return report;
}

ComplianceReport compliance_verdict(std::string_view text) {
  auto parsed = parse_bundle(text);
  if (!parsed.ok()) {
    ComplianceReport report;
    report.findings = parsed.diagnostics;
    sort_diagnostics(report.findings);
    report.compliant = false;
    return report;
  }
  auto report = compliance_verdict(*parsed.bundle);
  report.findings.insert(report.findings.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
  sort_diagnostics(report.findings);
  return report;
}

Result<ProjectBundle> add_reviewer_block(const ProjectBundle& b, const ReviewerBlock& block, const EventContext& ctx) {
  if (!b.find_project(block.project_ref)) return detail::unknown_project(block.project_ref);
  if (block.quarantined) return make_error("E_BAD_DECLARATION", block.project_ref.str(), "a new reviewer block cannot start quarantined");
  ProjectBundle next = b;
  auto it = std::find_if(next.reviewer_blocks.begin(), next.reviewer_blocks.end(),
                         [&](const ReviewerBlock& r) { return r.project_ref == block.project_ref; });
  const char* op = it == next.reviewer_blocks.end() ? "add" : "update";
  if (it == next.reviewer_blocks.end()) next.reviewer_blocks.push_back(block);
  else *it = block;
  return commit(std::move(next), EventKind::declaration_added,
                {{"declaration", "reviewer_block"}, {"value", to_json(block)}, {"op", op}},
                {reviewer_block_key(block.project_ref)}, ctx);
}

Result<ProjectBundle> add_memo(const ProjectBundle& b, const AnalyticMemo& memo, const EventContext& ctx) {
  if (!b.find_project(memo.project_ref)) return detail::unknown_project(memo.project_ref);
  if (memo.quarantined) return make_error("E_BAD_DECLARATION", memo.project_ref.str(), "a new memo cannot start quarantined");
  ProjectBundle next = b;
  auto it = std::find_if(next.memos.begin(), next.memos.end(),
                         [&](const AnalyticMemo& m) { return m.project_ref == memo.project_ref; });
  const char* op = it == next.memos.end() ? "add" : "update";
  if (it == next.memos.end()) next.memos.push_back(memo);
  else *it = memo;
  return commit(std::move(next), EventKind::declaration_added,
                {{"declaration", "memo"}, {"value", to_json(memo)}, {"op", op}}, {memo_key(memo.project_ref)}, ctx);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::optional<Format> format_from_string(std::string_view s) {
  if (s == "md" || s == "markdown") return Format::markdown;
  if (s == "csv") return Format::csv;
  if (s == "structured" || s == "json") return Format::structured;
  return std::nullopt;
}

namespace {

const std::vector<std::string> kStudyLogHeader = {"Study_ID",          "Design_Type",         "Tier_Assignment",
                                                  "Reasons_for_Tiering", "Bias_Considerations",
                                                  "Measurement_Definition_Issues", "Notes"};
const std::vector<std::string> kTierTableHeader = {"Study_ID", "Methods_Summary", "Evidence_Type", "Strengths",
                                                   "Limitations"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += "<br>";
    else if (c != '\r') out += c;
  }
  return out;
}

using Rows = std::vector<std::vector<std::string>>;

std::string csv_table(const std::vector<std::string>& header, const Rows& rows) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string md_table(const std::vector<std::string>& header, const Rows& rows) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    out << "|";
    for (const auto& c : cells) out << " " << md_cell(c) << " |";
    out << "\n";
  };
  line(header);
  out << "|";
  for (std::size_t i = 0; i < header.size(); ++i) out << " --- |";
  out << "\n";
  for (const auto& r : rows) line(r);
  return out.str();
}

Rows study_log_rows(const StudyLog& log) {
  Rows rows;
  for (const auto& e : log.entries)
    rows.push_back({e.study_id, e.design_type, tier_label(e.tier_assignment), e.reasons_for_tiering,
                    e.bias_considerations, e.measurement_definition_issues, e.notes});
  return rows;
}

Rows tier_table_rows(const TierTable& t) {
  Rows rows;
  for (const auto& r : t.rows) rows.push_back({r.study_id, r.methods_summary, r.evidence_type, r.strengths, r.limitations});
  return rows;
}

Diagnostic unsupported(const char* artifact) {
  return make_error("E_FORMAT_UNSUPPORTED", artifact, std::string("csv output is only available for tabular artifacts, not ") + artifact);
}

const char* rank_name(FindingRank r) {
  switch (r) {
    case FindingRank::upward: return "upward";
    case FindingRank::downward: return "downward";
    case FindingRank::horizontal: return "horizontal";
    case FindingRank::other: return "other";
  }
  return "other";
}

}  // namespace

Json to_json(const StudyLog& log) {
  Json entries = Json::array();
  for (const auto& e : log.entries)
    entries.push_back({{"study_id", e.study_id},
                       {"design_type", e.design_type},
                       {"tier_assignment", to_string(e.tier_assignment)},
                       {"reasons_for_tiering", e.reasons_for_tiering},
                       {"bias_considerations", e.bias_considerations},
                       {"measurement_definition_issues", e.measurement_definition_issues},
                       {"notes", e.notes}});
  return {{"artifact", "study_log"}, {"project", log.project.str()}, {"entries", entries}};
}

Json to_json(const TierTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"study_id", r.study_id},
                    {"methods_summary", r.methods_summary},
                    {"evidence_type", r.evidence_type},
                    {"strengths", r.strengths},
                    {"limitations", r.limitations}});
  return {{"artifact", "tier_table"}, {"project", t.project.str()}, {"rows", rows}};
}

Json to_json(const ComplianceReport& report) {
  Json findings = Json::array();
  for (const auto& f : report.findings)
    findings.push_back({{"code", f.code},
                        {"severity", to_string(f.severity)},
                        {"location", f.location},
                        {"message", f.message},
                        {"rank", rank_name(f.rank)}});
  return {{"artifact", "compliance_report"},
          {"verdict", report.compliant ? "compliant" : "non_compliant"},
          {"findings", findings}};
}

Result<std::string> render(const StudyLog& log, Format format) {
  switch (format) {
    case Format::markdown:
      return "## Study Log: " + log.project.str() + "\n\n" + md_table(kStudyLogHeader, study_log_rows(log));
    case Format::csv: return csv_table(kStudyLogHeader, study_log_rows(log));
    case Format::structured: return to_json(log).dump(2) + "\n";
  }
  return std::string();
}

Result<std::string> render(const TierTable& t, Format format) {
  switch (format) {
    case Format::markdown:
      return "## Tier Table: " + t.project.str() + "\n\n" + md_table(kTierTableHeader, tier_table_rows(t));
    case Format::csv: return csv_table(kTierTableHeader, tier_table_rows(t));
    case Format::structured: return to_json(t).dump(2) + "\n";
  }
  return std::string();
}

Result<std::string> render(const ReviewerBlock& block, Format format) {
  if (format == Format::csv) return unsupported("reviewer_block");
  if (format == Format::structured)
    return Json{{"artifact", "reviewer_block"}, {"block", to_json(block)}}.dump(2) + "\n";
  std::ostringstream out;
  out << "## Reviewer Block: " << block.project_ref.str() << "\n\n### Methodological findings\n\n";
  for (std::size_t i = 0; i < block.methodological_findings.size(); ++i)
    out << i + 1 << ". " << block.methodological_findings[i] << "\n";
  out << "\n### Conceptual insight\n\n" << block.conceptual_insight << "\n";
  out << "\n### Anticipated critique\n\n" << block.anticipated_critique.text << "\n";
  if (!block.anticipated_critique.referenced_decisions.empty()) {
    out << "\nDecisions cited:";
    for (const auto& r : block.anticipated_critique.referenced_decisions) out << " `" << r.str() << "`";
    out << "\n";
  }
  out << "\n### Disconfirming model\n\n" << block.disconfirming_model << "\n";
  out << "\n### Route assumptions\n\n";
  for (const auto& a : block.assumptions_ref) out << "- `" << a.str() << "`\n";
  return out.str();
}

Result<std::string> render(const ComplianceReport& report, Format format) {
  if (format == Format::csv) return unsupported("compliance_report");
  if (format == Format::structured) return to_json(report).dump(2) + "\n";
  std::ostringstream out;
  out << "## Compliance verdict: " << (report.compliant ? "compliant" : "non_compliant") << "\n";
  if (!report.findings.empty()) {
    Rows rows;
    for (const auto& f : report.findings) rows.push_back({f.code, to_string(f.severity), f.location, f.message});
    out << "\n" << md_table({"Code", "Severity", "Location", "Message"}, rows);
  }
  return out.str();
}

namespace {

Result<std::string> text_field(const Json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    return make_error("E_SYNTAX", path + "/" + key, std::string("expected string field '") + key + "'");
  return it->get<std::string>();
}

template <class T>
Diagnostics collect(T& out, const Json& j, const char* key, const std::string& path) {
  auto v = text_field(j, key, path);
  if (!v) return v.diagnostics();
  out = v.value();
  return {};
}

Result<Identifier> project_field(const Json& j) {
  auto v = text_field(j, "project", "");
  if (!v) return v.diagnostics();
  auto id = Identifier::parse(v.value());
  if (!id) return make_error("E_SYNTAX", "/project", "project is not a qualified identifier");
  return *id;
}

Result<Artifact> parse_study_log(const Json& j) {
  auto project = project_field(j);
  if (!project) return project.diagnostics();
  StudyLog log{project.value(), {}};
  Diagnostics d;
  const Json& entries = j.contains("entries") ? j["entries"] : Json();
  if (!entries.is_array()) return make_error("E_SYNTAX", "/entries", "expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Json& e = entries[i];
    auto path = "/entries/" + std::to_string(i);
    if (!e.is_object()) {
      d.push_back(make_error("E_SYNTAX", path, "expected an object"));
      continue;
    }
    StudyLogEntry entry;
    std::string tier;
    for (auto [field, key] : std::initializer_list<std::pair<std::string*, const char*>>{
             {&entry.study_id, "study_id"},
             {&entry.design_type, "design_type"},
             {&tier, "tier_assignment"},
             {&entry.reasons_for_tiering, "reasons_for_tiering"},
             {&entry.bias_considerations, "bias_considerations"},
             {&entry.measurement_definition_issues, "measurement_definition_issues"},
             {&entry.notes, "notes"}}) {
      auto problems = collect(*field, e, key, path);
      d.insert(d.end(), problems.begin(), problems.end());
    }
    if (auto t = enum_from_string<Tier>(tier)) entry.tier_assignment = *t;
    else d.push_back(make_error("E_SYNTAX", path + "/tier_assignment", "unknown tier '" + tier + "'"));
    log.entries.push_back(std::move(entry));
  }
  if (!d.empty()) return d;
  return Artifact{std::move(log)};
}

Result<Artifact> parse_tier_table(const Json& j) {
  auto project = project_field(j);
  if (!project) return project.diagnostics();
  TierTable table{project.value(), {}};
  Diagnostics d;
  const Json& rows = j.contains("rows") ? j["rows"] : Json();
  if (!rows.is_array()) return make_error("E_SYNTAX", "/rows", "expected an array");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto path = "/rows/" + std::to_string(i);
    if (!rows[i].is_object()) {
      d.push_back(make_error("E_SYNTAX", path, "expected an object"));
      continue;
    }
    TierTableRow row;
    for (auto [field, key] : std::initializer_list<std::pair<std::string*, const char*>>{
             {&row.study_id, "study_id"},
             {&row.methods_summary, "methods_summary"},
             {&row.evidence_type, "evidence_type"},
             {&row.strengths, "strengths"},
             {&row.limitations, "limitations"}}) {
      auto problems = collect(*field, rows[i], key, path);
      d.insert(d.end(), problems.begin(), problems.end());
    }
    table.rows.push_back(std::move(row));
  }
  if (!d.empty()) return d;
  return Artifact{std::move(table)};
}

Result<Artifact> parse_compliance(const Json& j) {
  ComplianceReport report;
  auto verdict = text_field(j, "verdict", "");
  if (!verdict) return verdict.diagnostics();
  if (verdict.value() != "compliant" && verdict.value() != "non_compliant")
    return make_error("E_SYNTAX", "/verdict", "unknown verdict '" + verdict.value() + "'");
  report.compliant = verdict.value() == "compliant";
  const Json& findings = j.contains("findings") ? j["findings"] : Json();
  if (!findings.is_array()) return make_error("E_SYNTAX", "/findings", "expected an array");
  Diagnostics d;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    auto path = "/findings/" + std::to_string(i);
    if (!findings[i].is_object()) {
      d.push_back(make_error("E_SYNTAX", path, "expected an object"));
      continue;
    }
    Diagnostic f;
    std::string severity, rank;
    for (auto [field, key] : std::initializer_list<std::pair<std::string*, const char*>>{
             {&f.code, "code"}, {&severity, "severity"}, {&f.location, "location"}, {&f.message, "message"},
             {&rank, "rank"}}) {
      auto problems = collect(*field, findings[i], key, path);
      d.insert(d.end(), problems.begin(), problems.end());
    }
    bool sev_ok = false;
    for (auto s : {Severity::error, Severity::warning, Severity::info})
      if (severity == to_string(s)) f.severity = s, sev_ok = true;
    bool rank_ok = false;
    for (auto r : {FindingRank::upward, FindingRank::downward, FindingRank::horizontal, FindingRank::other})
      if (rank == rank_name(r)) f.rank = r, rank_ok = true;
    if (!sev_ok || !rank_ok) d.push_back(make_error("E_SYNTAX", path, "unknown severity or rank"));
    report.findings.push_back(std::move(f));
  }
  if (!d.empty()) return d;
  return Artifact{std::move(report)};
}

}  // namespace

Result<Artifact> parse_artifact(std::string_view text) {
  Json j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return make_error("E_SYNTAX", "line 1", "structured report is not a JSON object");
  auto kind = j.value("artifact", std::string());
  if (kind == "study_log") return parse_study_log(j);
  if (kind == "tier_table") return parse_tier_table(j);
  if (kind == "compliance_report") return parse_compliance(j);
  if (kind == "reviewer_block") {
    if (!j.contains("block")) return make_error("E_SYNTAX", "/block", "missing reviewer block");
    auto block = reviewer_block_from_json(j["block"], "/block");
    if (!block) return block.diagnostics();
    return Artifact{std::move(block).value()};
  }
  return make_error("E_SYNTAX", "/artifact", "unknown artifact kind '" + kind + "'");
}

}  // namespace recap
