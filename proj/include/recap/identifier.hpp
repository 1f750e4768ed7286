#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace recap {

enum class Namespace { gp, parent, child };

const char* to_string(Namespace ns);

// Namespaced declaration name. Rendered as `gp:<name>`, `parent:<owner>:<name>`
// or `child:<owner>:<name>`; the owner is the declaring layer's id.
struct Identifier {
  Namespace ns = Namespace::gp;
  std::string owner;
  std::string local_name;

  std::string str() const;

  // Parses the fully qualified form only.
  static std::optional<Identifier> parse(std::string_view text);

  // Accepts either a qualified form or a bare local name, which is then
  // qualified with the given default namespace and owner.
  static std::optional<Identifier> parse_in(std::string_view text, Namespace ns,
                                            std::string_view owner);

  bool empty() const { return local_name.empty(); }

  auto operator<=>(const Identifier&) const = default;
  bool operator==(const Identifier&) const = default;
};

bool is_name_char(char c);
bool is_valid_name(std::string_view name);

// A qualified identifier found inside free text, with its byte span.
struct TextReference {
  Identifier id;
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Scans prose for qualified identifiers. Bare names are never treated as
// references; only the prefixed forms carry provenance.
std::vector<TextReference> extract_references(std::string_view text);

// Removes every occurrence of `id` from `text`, collapsing doubled spaces.
std::string erase_reference(std::string_view text, const Identifier& id);

}  // namespace recap
