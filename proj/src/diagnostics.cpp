#include "recap/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace recap {

const char* to_string(Severity s) {
  switch (s) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
  }
  return "error";
}

Diagnostic make_error(std::string code, std::string location, std::string message) {
  return Diagnostic{std::move(code), Severity::error, std::move(location), std::move(message)};
}

Diagnostic make_warning(std::string code, std::string location, std::string message) {
  return Diagnostic{std::move(code), Severity::warning, std::move(location), std::move(message)};
}

bool has_errors(const Diagnostics& d) {
  return std::any_of(d.begin(), d.end(),
                     [](const Diagnostic& x) { return x.severity == Severity::error; });
}

bool contains_code(const Diagnostics& d, const std::string& code) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.code == code; });
}

void sort_diagnostics(Diagnostics& d) {
  std::stable_sort(d.begin(), d.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.severity, a.rank, a.location, a.code, a.message) <
           std::tie(b.severity, b.rank, b.location, b.code, b.message);
  });
}

}  // namespace recap
