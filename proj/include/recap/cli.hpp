#pragma once

// `recap` command-line frontend. run() is the whole program minus process
// plumbing, so tests can drive it with in-memory streams.
//
// Exit codes: 0 success or compliant, 1 violations found, 2 usage, I/O or
// parse error.

#include <ostream>
#include <string>
#include <vector>

namespace recap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  bool color = false;  // ANSI color on diagnostics
};

// `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Options& options = {});

// Writes `content` to `path` via a temp file, fsync and rename. Returns an
// error message, or empty on success.
std::string write_atomically(const std::string& path, const std::string& content);

}  // namespace recap::cli
