#pragma once

// The three mandatory study-level outputs (Study Log, Tier Table, Reviewer
// Block with its Analytic Memo), their validators, the overall compliance
// verdict, and deterministic rendering.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

struct StudyLogEntry {
  std::string study_id;
  std::string design_type;
  Tier tier_assignment = Tier::excluded;
  std::string reasons_for_tiering;
  std::string bias_considerations;
  std::string measurement_definition_issues;
  std::string notes;

  bool operator==(const StudyLogEntry&) const = default;
};

struct StudyLog {
  Identifier project;
  std::vector<StudyLogEntry> entries;

  bool operator==(const StudyLog&) const = default;
};

struct TierTableRow {
  std::string study_id;
  std::string methods_summary;
  std::string evidence_type;
  std::string strengths;
  std::string limitations;

  bool operator==(const TierTableRow&) const = default;
};

struct TierTable {
  Identifier project;
  std::vector<TierTableRow> rows;

  bool operator==(const TierTable&) const = default;
};

struct ComplianceReport {
  bool compliant = true;
  Diagnostics findings;

  bool operator==(const ComplianceReport&) const = default;
};

// Units that belong in a project's reports: active (not quarantined, not
// superseded by a split), ordered by study id.
std::vector<const EvidentialUnit*> report_units(const ProjectBundle& bundle, const Identifier& project);

// Directional tag found in a bias statement, if any.
bool has_direction_tag(std::string_view text);

// E_UNKNOWN_PROJECT, E_MISSING_FIELD (design type, declared tier,
// justification, or the unit's study log record).
Result<StudyLog> build_study_log(const ProjectBundle& bundle, const Identifier& project);

// Core and supplement units only; narrative fields come from each unit's
// tier table record.
Result<TierTable> build_tier_table(const ProjectBundle& bundle, const Identifier& project);

// E_NO_STUDY_LOG, E_MISSING_FIELD, E_BIAS_DIRECTION; W_EMPTY_STUDY_LOG.
Diagnostics check_study_log(const ProjectBundle& bundle, const Identifier& project);

// E_NO_TIER_TABLE, E_MISSING_FIELD.
Diagnostics check_tier_table(const ProjectBundle& bundle, const Identifier& project);

// E_RB_FINDINGS, E_RB_INSIGHT, E_RB_CRITIQUE, E_RB_CRITIQUE_UNANCHORED,
// E_RB_DISCONFIRMING, E_RB_ASSUMPTIONS.
Diagnostics validate_reviewer_block(const ReviewerBlock& block, const ProjectBundle& bundle);

// Keys every Analytic Memo must fill.
const std::vector<std::string>& memo_sections();

// E_MEMO_SECTION per missing or empty section.
Diagnostics validate_memo(const AnalyticMemo& memo);

// Per-project output checks, including E_NO_REVIEWER_BLOCK and
// E_NO_ANALYTIC_MEMO.
Diagnostics validate_outputs(const ProjectBundle& bundle);

// Every module validator over a parsed bundle, sorted.
ComplianceReport compliance_verdict(const ProjectBundle& bundle);

// Same, starting from document text; parse errors become findings.
ComplianceReport compliance_verdict(std::string_view text);

enum class Format { markdown, csv, structured };

std::optional<Format> format_from_string(std::string_view s);

// E_FORMAT_UNSUPPORTED for csv on non-tabular artifacts.
Result<std::string> render(const StudyLog& log, Format format);
Result<std::string> render(const TierTable& table, Format format);
Result<std::string> render(const ReviewerBlock& block, Format format);
Result<std::string> render(const ComplianceReport& report, Format format);

using Artifact = std::variant<StudyLog, TierTable, ReviewerBlock, ComplianceReport>;

// Parses a structured rendering back into its artifact. E_SYNTAX on failure.
Result<Artifact> parse_artifact(std::string_view text);

// --- mutations (each appends one declaration_added event) ---

// Adds or replaces the project's Reviewer Block. Content is judged by
// validate_reviewer_block, not here.
Result<ProjectBundle> add_reviewer_block(const ProjectBundle& bundle, const ReviewerBlock& block,
                                         const EventContext& ctx);
Result<ProjectBundle> add_memo(const ProjectBundle& bundle, const AnalyticMemo& memo, const EventContext& ctx);

Json to_json(const StudyLog& log);
Json to_json(const TierTable& table);
Json to_json(const ComplianceReport& report);

}  // namespace recap
