#include "recap/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "recap/bundle_format.hpp"
#include "recap/commands.hpp"
#include "recap/contamination.hpp"
#include "recap/layer_registry.hpp"
#include "recap/reporting.hpp"
#include "recap/routing.hpp"
#include "recap/rules.hpp"
#include "recap/tiering.hpp"

namespace recap::cli {

namespace {

// Thrown to leave a subcommand with a specific exit code.
struct Exit {
  int code;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Options options;

  void print(const Diagnostic& d) const {
    const char* on = "";
    const char* off = "";
    if (options.color) {
      on = d.severity == Severity::error ? "\033[31m" : "\033[33m";
      off = "\033[0m";
    }
    err << on << d.code << off << " " << (d.location.empty() ? "-" : d.location) << " " << d.message << " ("
        << rule_ref(d.code) << ")\n";
  }

  void print(const Diagnostics& ds) const {
    for (const auto& d : ds) print(d);
  }

  // Prints and exits with 1 when any error is present.
  void report(Diagnostics ds) const {
    sort_diagnostics(ds);
    print(ds);
    if (has_errors(ds)) throw Exit{kExitViolations};
  }

  [[noreturn]] void usage(const std::string& message) const {
    print(make_error("E_USAGE", "-", message));
    throw Exit{kExitUsage};
  }
};

std::string now_utc() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProjectBundle load(const Context& c, const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    c.print(make_error("E_IO", path, "cannot read bundle"));
    throw Exit{kExitUsage};
  }
  auto parsed = parse_bundle(*text);
  c.print(parsed.diagnostics);
  if (!parsed.ok()) throw Exit{kExitUsage};
  return std::move(*parsed.bundle);
}

Json load_json(const Context& c, const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    c.print(make_error("E_IO", path, "cannot read file"));
    throw Exit{kExitUsage};
  }
  Json j = Json::parse(*text, nullptr, false);
  if (j.is_discarded()) {
    c.print(make_error("E_SYNTAX", path, "not valid JSON"));
    throw Exit{kExitUsage};
  }
  return j;
}

// Advisory lock held for a read-modify-write cycle on one bundle file.
class FileLock {
 public:
  explicit FileLock(const std::string& bundle_path) {
    fd_ = ::open((bundle_path + ".lock").c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ >= 0 && ::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;
  bool held() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

// Loads, mutates and atomically rewrites a bundle under the lock.
template <class Fn>
int mutate(const Context& c, const std::string& path, Fn&& fn) {
  FileLock lock(path);
  if (!lock.held()) {
    c.print(make_error("E_IO", path + ".lock", "cannot lock bundle"));
    return kExitUsage;
  }
  ProjectBundle b = load(c, path);
  Result<ProjectBundle> next = fn(b);
  if (!next) {
    Diagnostics d = next.diagnostics();
    sort_diagnostics(d);
    c.print(d);
    bool usage = std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "E_USAGE"; });
    return usage ? kExitUsage : kExitViolations;
  }
  auto problem = write_atomically(path, serialize_bundle(next.value()));
  if (!problem.empty()) {
    c.print(make_error("E_IO", path, problem));
    return kExitUsage;
  }
  const auto& last = next.value().events.back();
  c.out << "appended event " << last.sequence << " (" << to_string(last.kind) << ")\n";
  return kExitOk;
}

Identifier resolve_project(const Context& c, const ProjectBundle& b, const std::string& name) {
  if (name.empty()) {
    if (b.projects.size() == 1) return b.projects.front().id;
    c.usage("the bundle has " + std::to_string(b.projects.size()) + " projects; choose one with --project");
  }
  for (const auto& p : b.projects)
    if (p.id.str() == name || p.id.local_name == name) return p.id;
  c.usage("no project named '" + name + "'");
}

const EvidentialUnit* resolve_unit(const Context& c, const ProjectBundle& b, const std::string& name) {
  const EvidentialUnit* match = nullptr;
  for (const auto& u : b.units) {
    if (u.study_id.str() == name) return &u;
    if (u.study_id.local_name == name) {
      if (match) c.usage("unit name '" + name + "' is ambiguous; use its qualified id");
      match = &u;
    }
  }
  if (!match) c.usage("no unit named '" + name + "'");
  return match;
}

Format parse_format(const Context& c, const std::string& name) {
  auto f = format_from_string(name);
  if (!f) c.usage("unknown format '" + name + "' (use md, csv or structured)");
  return *f;
}

void emit(const Context& c, const Result<std::string>& rendered) {
  if (!rendered) {
    c.print(rendered.diagnostics());
    throw Exit{kExitUsage};
  }
  c.out << rendered.value();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const Context& c, const std::string& path, const std::string& format) {
  auto text = read_file(path);
  if (!text) {
    c.print(make_error("E_IO", path, "cannot read bundle"));
    return kExitUsage;
  }
  auto parsed = parse_bundle(*text);
  if (!parsed.ok()) {
    c.print(parsed.diagnostics);
    return kExitUsage;
  }
  auto report = compliance_verdict(*parsed.bundle);
  report.findings.insert(report.findings.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
  sort_diagnostics(report.findings);
  if (format == "text") {
    c.print(report.findings);
    c.out << (report.compliant ? "compliant" : "non_compliant") << "\n";
  } else {
    c.print(report.findings);
    emit(c, render(report, parse_format(c, format)));
  }
  return report.compliant ? kExitOk : kExitViolations;
}

int cmd_tier(const Context& c, const std::string& path, const std::string& unit_name, bool structured) {
  ProjectBundle b = load(c, path);
  std::vector<const EvidentialUnit*> units;
  if (!unit_name.empty()) units.push_back(resolve_unit(c, b, unit_name));
  else
    for (const auto& u : b.units)
      if (u.active()) units.push_back(&u);

  Diagnostics problems;
  Json rows = Json::array();
  for (const auto* u : units) {
    auto loc = "/units/" + std::to_string(u - b.units.data());
    auto decision = tier_unit(*u);
    Json row = {{"unit", u->study_id.str()}};
    std::string line;
    if (!decision) {
      problems.insert(problems.end(), decision.diagnostics().begin(), decision.diagnostics().end());
      line = "untiered (" + decision.diagnostics().front().code + ")";
      row["error"] = decision.diagnostics().front().code;
    } else {
      line = std::string(to_string(decision.value().tier)) + " (" + decision.value().rule + ")";
      row["tier"] = to_string(decision.value().tier);
      row["rule"] = decision.value().rule;
      if (auto eff = effective_tier(*u)) row["effective_tier"] = to_string(*eff);
      auto d = check_tier_declaration(*u, loc);
      problems.insert(problems.end(), d.begin(), d.end());
    }
    rows.push_back(row);
    if (!structured) {
      if (unit_name.empty()) c.out << u->study_id.str() << " ";
      c.out << line << "\n";
    }
  }
  if (structured) c.out << rows.dump(2) << "\n";
  c.report(problems);
  return kExitOk;
}

int cmd_route(const Context& c, const std::string& path, const std::string& action, const std::string& project,
              const EventContext& ctx) {
  if (action == "check") {
    ProjectBundle b = load(c, path);
    auto id = resolve_project(c, b, project);
    Diagnostics d = check_route_coherence(b, id);
    for (auto& x : validate_routing(b)) d.push_back(x);
    d.erase(std::unique(d.begin(), d.end()), d.end());
    c.report(d);
    c.out << "coherent\n";
    return kExitOk;
  }
  if (action == "freeze") {
    return mutate(c, path, [&](const ProjectBundle& b) { return freeze_route(b, resolve_project(c, b, project), ctx); });
  }
  c.usage("route action must be freeze or check");
}

int cmd_scan(const Context& c, const std::string& path, bool structured) {
  ProjectBundle b = load(c, path);
  auto events = scan_bundle(b);
  if (structured) {
    Json arr = Json::array();
    for (const auto& e : events) arr.push_back(to_json(e));
    c.out << arr.dump(2) << "\n";
  } else {
    for (const auto& e : events) {
      c.out << to_string(e.direction) << " " << to_string(e.rule) << " " << e.site << " -> " << e.reference << ": "
            << e.message;
      if (!e.decisions_affected.empty()) {
        c.out << " [affects:";
        for (const auto& a : e.decisions_affected) c.out << " " << a;
        c.out << "]";
      }
      c.out << "\n";
    }
    if (events.empty()) c.out << "clean\n";
  }
  return events.empty() ? kExitOk : kExitViolations;
}

int cmd_report(const Context& c, const std::string& path, const std::string& artifact, const std::string& format_name,
               const std::string& project) {
  ProjectBundle b = load(c, path);
  Format format = parse_format(c, format_name);
  if (artifact == "compliance") {
    auto report = compliance_verdict(b);
    emit(c, render(report, format));
    return report.compliant ? kExitOk : kExitViolations;
  }
  auto id = resolve_project(c, b, project);
  if (artifact == "study-log") {
    auto log = build_study_log(b, id);
    if (!log) c.report(log.diagnostics());
    emit(c, render(log.value(), format));
    c.report(check_study_log(b, id));
    return kExitOk;
  }
  if (artifact == "tier-table") {
    auto table = build_tier_table(b, id);
    if (!table) c.report(table.diagnostics());
    emit(c, render(table.value(), format));
    c.report(check_tier_table(b, id));
    return kExitOk;
  }
  if (artifact == "reviewer-block") {
    const ReviewerBlock* block = b.find_reviewer_block(id);
    if (!block) c.report({make_error("E_NO_REVIEWER_BLOCK", id.str(), id.str() + " has no reviewer block")});
    emit(c, render(*block, format));
    c.report(validate_reviewer_block(*block, b));
    return kExitOk;
  }
  c.usage("unknown report '" + artifact + "' (use study-log, tier-table, reviewer-block or compliance)");
}

int cmd_version(const Context& c, const std::string& path, const std::string& action, const std::string& changelog_path,
                const EventContext& ctx) {
  if (action != "bump") c.usage("version action must be bump");
  if (changelog_path.empty()) c.usage("version bump needs --changelog <file>");
  Json doc = load_json(c, changelog_path);
  auto entry = changelog_from_json(doc);
  if (!entry) {
    c.print(entry.diagnostics());
    return kExitUsage;
  }
  return mutate(c, path, [&](const ProjectBundle& b) -> Result<ProjectBundle> {
    LawSet laws = b.grandparent() ? b.grandparent()->laws : LawSet{};
    if (doc.contains("laws")) {
      auto full = laws_from_json(doc["laws"], "laws");
      if (!full) return full.diagnostics();
      laws = full.value();
    }
    if (doc.contains("new_laws")) {
      auto added = laws_from_json(doc["new_laws"], "new_laws");
      if (!added) return added.diagnostics();
      laws.insert(laws.end(), added.value().begin(), added.value().end());
    }
    EventContext at = ctx;
    if (!entry.value().timestamp.empty()) at.timestamp = entry.value().timestamp;
    return bump_version(b, entry.value(), laws, at);
  });
}

int cmd_apply(const Context& c, const std::string& path, const std::string& command_path, const EventContext& ctx) {
  Json doc = load_json(c, command_path);
  Json commands = doc.is_array() ? doc : Json::array({doc});
  return mutate(c, path, [&](const ProjectBundle& b) -> Result<ProjectBundle> {
    ProjectBundle cur = b;
    for (auto cmd : commands) {
      if (cmd.is_object()) {
        if (!cmd.contains("at")) cmd["at"] = ctx.timestamp;
        if (!cmd.contains("actor")) cmd["actor"] = ctx.actor;
      }
      auto next = execute(cur, cmd);
      if (!next) return next.diagnostics();
      cur = std::move(next).value();
    }
    if (cur.events.size() == b.events.size()) return make_error("E_USAGE", command_path, "no commands to apply");
    return cur;
  });
}

int cmd_explain(const Context& c, const std::string& code) {
  const RuleInfo* r = find_rule(code);
  if (!r) c.usage("unknown code '" + code + "'");
  c.out << r->code << " [" << r->module << ", " << r->rule << "]\n" << r->text << "\n";
  return kExitOk;
}

}  // namespace

std::string write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::string tmpl = (dir / ("." + target.filename().string() + ".XXXXXX")).string();
  std::vector<char> name(tmpl.begin(), tmpl.end());
  name.push_back('\0');
  int fd = ::mkstemp(name.data());
  if (fd < 0) return "cannot create temporary file";
  const char* p = content.data();
  std::size_t left = content.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n <= 0) {
      ::close(fd);
      ::unlink(name.data());
      return "write failed";
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    ::unlink(name.data());
    return "fsync failed";
  }
  if (std::rename(name.data(), path.c_str()) != 0) {
    ::unlink(name.data());
    return "rename failed";
  }
  int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
  return {};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Options& options) {
  Context c{out, err, options};
  CLI::App app{"recap: governance engine for layered evidence-synthesis project bundles", "recap"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string at, actor = "recap-cli";
  app.add_option("--at", at, "Event timestamp (ISO-8601 UTC); defaults to now")->check([](const std::string& s) {
    return is_timestamp(s) ? std::string() : std::string("expected YYYY-MM-DDTHH:MM:SSZ");
  });
  app.add_option("--actor", actor, "Actor recorded on appended events");

  std::string bundle, format = "text", unit, action, project, artifact, changelog, command_file, code;
  bool structured = false;

  auto* validate = app.add_subcommand("validate", "Full compliance verdict");
  validate->add_option("bundle", bundle)->required();
  validate->add_option("--format", format, "text, md or structured");

  auto* tier = app.add_subcommand("tier", "Tier decisions and the rules that fired");
  tier->add_option("bundle", bundle)->required();
  tier->add_option("--unit", unit, "Only this unit");
  tier->add_flag("--structured", structured, "JSON output");

  auto* route = app.add_subcommand("route", "Route coherence check or freeze");
  route->add_option("bundle", bundle)->required();
  route->add_option("action", action, "freeze or check")->required()->check(CLI::IsMember({"freeze", "check"}));
  route->add_option("--project", project);

  auto* scan = app.add_subcommand("scan", "Contamination events");
  scan->add_option("bundle", bundle)->required();
  scan->add_flag("--structured", structured, "JSON output");

  auto* report = app.add_subcommand("report", "Render a mandatory output");
  report->add_option("bundle", bundle)->required();
  report->add_option("artifact", artifact, "study-log, tier-table, reviewer-block or compliance")
      ->required()
      ->check(CLI::IsMember({"study-log", "tier-table", "reviewer-block", "compliance"}));
  std::string report_format = "md";
  report->add_option("--format", report_format, "md, csv or structured");
  report->add_option("--project", project);

  auto* version = app.add_subcommand("version", "Grandparent law versioning");
  version->add_option("bundle", bundle)->required();
  version->add_option("action", action, "bump")->required()->check(CLI::IsMember({"bump"}));
  version->add_option("--changelog", changelog, "Changelog JSON file");

  auto* apply = app.add_subcommand("apply", "Apply JSON commands to a bundle");
  apply->add_option("bundle", bundle)->required();
  apply->add_option("--command", command_file, "Command JSON file (object or array)")->required();

  auto* explain = app.add_subcommand("explain", "Describe a diagnostic code");
  explain->add_option("code", code)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    c.print(make_error("E_USAGE", "-", e.what()));
    return kExitUsage;
  }

  EventContext ctx{at.empty() ? now_utc() : at, actor};
  try {
    if (*validate) return cmd_validate(c, bundle, format);
    if (*tier) return cmd_tier(c, bundle, unit, structured);
    if (*route) return cmd_route(c, bundle, action, project, ctx);
    if (*scan) return cmd_scan(c, bundle, structured);
    if (*report) return cmd_report(c, bundle, artifact, report_format, project);
    if (*version) return cmd_version(c, bundle, action, changelog, ctx);
    if (*apply) return cmd_apply(c, bundle, command_file, ctx);
    if (*explain) return cmd_explain(c, code);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}

}  // namespace recap::cli
