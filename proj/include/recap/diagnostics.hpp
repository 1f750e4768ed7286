#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace recap {

enum class Severity { error, warning, info };

const char* to_string(Severity s);

// Contamination findings carry a direction so upward violations sort first.
enum class FindingRank { upward = 0, downward = 1, horizontal = 2, other = 3 };

struct Diagnostic {
  std::string code;
  Severity severity = Severity::error;
  std::string location;  // JSON pointer into the bundle, or "line N"
  std::string message;
  FindingRank rank = FindingRank::other;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

Diagnostic make_error(std::string code, std::string location, std::string message);
Diagnostic make_warning(std::string code, std::string location, std::string message);

bool has_errors(const Diagnostics& d);
bool contains_code(const Diagnostics& d, const std::string& code);

// Severity, then direction rank, then location, then code.
void sort_diagnostics(Diagnostics& d);

// Either a value or a non-empty list of error diagnostics, never both.
template <class T>
class Result {
 public:
  Result(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(Diagnostics errors) : state_(std::move(errors)) {}  // NOLINT(google-explicit-constructor)
  Result(Diagnostic error) : state_(Diagnostics{std::move(error)}) {}  // NOLINT(google-explicit-constructor)

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<T>(state_); }
  T& value() & { return std::get<T>(state_); }
  T&& value() && { return std::get<T>(std::move(state_)); }

  const Diagnostics& diagnostics() const {
    static const Diagnostics kNone;
    return ok() ? kNone : std::get<Diagnostics>(state_);
  }

 private:
  std::variant<T, Diagnostics> state_;
};

}  // namespace recap
